//! Exact number tower: big rationals, `ℚ(√2)`, integer polynomials in
//! `x = e^{-β}` and outward-rounded rational intervals.

mod interval;
mod poly;
mod quad;

pub use interval::RatInterval;
pub use poly::Poly;
pub use quad::ExactQuad;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::beta::Beta;

/// Default number of fractional bits kept by interval enclosures.
pub const DEFAULT_PREC: u32 = 192;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `2^k` for any integer `k`.
pub fn pow2(k: i32) -> BigRational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Render as `"num/den"` (denominator always present).
pub fn format_fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"num/den"`, an integer, or a plain decimal such as `"-0.90301"`.
pub fn parse_fraction(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(format!("bad number {s:?}"));
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(format!("bad number {s:?}"));
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().unwrap()
    };
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// Direction for decimal rendering of exact values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Decimal string with `digits` fractional digits, rounded in the given direction.
pub fn decimal(r: &BigRational, digits: usize, dir: Rounding) -> String {
    let scale = int(num_traits::pow(BigInt::from(10), digits));
    let scaled = r * &scale;
    let n = match dir {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
    };
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let (w, f) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{w}")
    } else {
        format!("{sign}{w}.{f}")
    }
}

/// Ratio of two polynomials in `x = e^{-β}`, e.g. an event weight over `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRatio {
    pub num: Poly,
    pub den: Poly,
}

impl PolyRatio {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }
    }

    /// Exact value at `x = 0`, taken as the limit `β → ∞`.
    pub fn at_infinity(&self) -> BigRational {
        let v = self.den.valuation().expect("nonzero denominator");
        match self.num.valuation() {
            None => BigRational::zero(),
            Some(u) if u > v => BigRational::zero(),
            Some(u) if u == v => BigRational::new(
                BigInt::from(self.num.coeff(u)),
                BigInt::from(self.den.coeff(v)),
            ),
            Some(_) => panic!("ratio diverges as beta -> infinity"),
        }
    }

    /// Exact value at a rational `x`.
    pub fn at_rational(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_rational(x) / d)
        }
    }

    /// Rigorous enclosure at `β`.
    pub fn eval(&self, beta: &Beta, prec: u32) -> RatInterval {
        match beta {
            Beta::Infinite => RatInterval::point(self.at_infinity()),
            _ => {
                if let Some(x) = beta.weight_exact() {
                    if let Some(v) = self.at_rational(&x) {
                        return RatInterval::point(v);
                    }
                }
                let x = beta.weight(prec + 32);
                let n = self.num.eval_interval_rounded(&x, prec + 32);
                let d = self.den.eval_interval_rounded(&x, prec + 32);
                n.checked_div(&d)
                    .expect("denominator enclosure contains zero")
                    .round_out(prec)
            }
        }
    }

    pub fn eval_f64(&self, beta: &Beta) -> f64 {
        self.eval(beta, 96).mid_f64()
    }

    /// Cross-multiplied polynomial equality.
    pub fn same_value(&self, other: &PolyRatio) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let r = parse_fraction("22/7").unwrap();
        assert_eq!(format_fraction(&r), "22/7");
        assert_eq!(parse_fraction("0.90301").unwrap(), rat(90301, 100000));
        assert_eq!(parse_fraction("-3").unwrap(), rat(-3, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
    }

    #[test]
    fn directed_decimals() {
        let third = rat(1, 3);
        assert_eq!(decimal(&third, 4, Rounding::Down), "0.3333");
        assert_eq!(decimal(&third, 4, Rounding::Up), "0.3334");
        assert_eq!(decimal(&rat(-1, 3), 2, Rounding::Down), "-0.34");
        assert_eq!(decimal(&rat(5, 1), 0, Rounding::Down), "5");
    }

    #[test]
    fn ratio_limit_at_infinity() {
        // (2x^2 + x^3) / (4x^2 + 1x^5) -> 1/2
        let r = PolyRatio::new(
            Poly::from_coeffs(vec![0, 0, 2, 1]),
            Poly::from_coeffs(vec![0, 0, 4, 0, 0, 1]),
        );
        assert_eq!(r.at_infinity(), rat(1, 2));
    }
}
