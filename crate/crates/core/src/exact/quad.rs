//! Exact arithmetic in the quadratic field ℚ(√2).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::interval::RatInterval;
use super::{format_fraction, parse_fraction};

/// A number `a + b·√2` with rational `a`, `b`.
///
/// Ordering and sign are exact: the sign of a mixed-sign pair is decided by
/// comparing `a²` against `2b²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactQuad {
    a: BigRational,
    b: BigRational,
}

impl ExactQuad {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_integer(a: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(a)))
    }

    pub fn sqrt2() -> Self {
        Self {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b√2`.
    pub fn conj(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self {
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (0, s) | (s, 0) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                // mixed signs: |a| vs |b|√2
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(2.into()) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => 0,
                }
            }
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        (self - &ExactQuad::from_rational(r.clone()))
            .signum()
            .cmp(&0)
    }

    /// Rational enclosure with outward rounding to `prec` fractional bits.
    pub fn enclose(&self, prec: u32) -> RatInterval {
        let root = RatInterval::sqrt(&BigRational::from_integer(2.into()), prec + 8);
        let a = RatInterval::point(self.a.clone());
        let b = RatInterval::point(self.b.clone());
        (a + b * root).round_out(prec)
    }

    pub fn to_f64(&self) -> f64 {
        let mid = self.enclose(80).mid();
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for ExactQuad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactQuad {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for ExactQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt(2)",
            format_fraction(&self.a),
            format_fraction(&self.b)
        )
    }
}

impl<'a> Add<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn add(self, rhs: &ExactQuad) -> ExactQuad {
        ExactQuad {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn sub(self, rhs: &ExactQuad) -> ExactQuad {
        ExactQuad {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn mul(self, rhs: &ExactQuad) -> ExactQuad {
        let two = BigRational::from_integer(2.into());
        ExactQuad {
            a: &self.a * &rhs.a + two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl<'a> Div<&'a ExactQuad> for &'a ExactQuad {
    type Output = ExactQuad;
    fn div(self, rhs: &ExactQuad) -> ExactQuad {
        self * &rhs.inv().expect("division by zero in Q(sqrt 2)")
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for ExactQuad {
            type Output = ExactQuad;
            fn $m(self, rhs: ExactQuad) -> ExactQuad {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for ExactQuad {
    type Output = ExactQuad;
    fn neg(self) -> ExactQuad {
        ExactQuad {
            a: -self.a,
            b: -self.b,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    a: String,
    b: String,
}

impl Serialize for ExactQuad {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadRepr {
            a: format_fraction(&self.a),
            b: format_fraction(&self.b),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactQuad {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = QuadRepr::deserialize(d)?;
        let a = parse_fraction(&r.a).map_err(serde::de::Error::custom)?;
        let b = parse_fraction(&r.b).map_err(serde::de::Error::custom)?;
        Ok(ExactQuad { a, b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn sqrt2_squares_to_two() {
        let s = ExactQuad::sqrt2();
        assert_eq!(&s * &s, ExactQuad::from_integer(2));
    }

    #[test]
    fn sign_of_mixed_pairs() {
        // 3 - 2√2 > 0 (9 > 8), 1 - √2 < 0
        assert_eq!(ExactQuad::new(rat(3, 1), rat(-2, 1)).signum(), 1);
        assert_eq!(ExactQuad::new(rat(1, 1), rat(-1, 1)).signum(), -1);
        assert_eq!(ExactQuad::new(rat(-3, 1), rat(2, 1)).signum(), -1);
        assert_eq!(ExactQuad::zero().signum(), 0);
    }

    #[test]
    fn inverse_of_two_plus_sqrt2() {
        let x = ExactQuad::new(rat(2, 1), rat(1, 1));
        // 1/(2+√2) = (2-√2)/2
        assert_eq!(x.inv().unwrap(), ExactQuad::new(rat(1, 1), rat(-1, 2)));
    }

    #[test]
    fn enclosure_contains_value() {
        let x = ExactQuad::new(rat(2, 1), rat(1, 1));
        let e = x.enclose(100);
        assert!((e.mid().to_f64().unwrap() - (2.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!(x.cmp_rational(e.lo()) != Ordering::Less);
        assert!(x.cmp_rational(e.hi()) != Ordering::Greater);
    }

    fn small_quad() -> impl Strategy<Value = ExactQuad> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
            .prop_map(|(an, ad, bn, bd)| ExactQuad::new(rat(an, ad), rat(bn, bd)))
    }

    proptest! {
        #[test]
        fn sign_matches_float(x in small_quad()) {
            let f = x.a().to_f64().unwrap() + x.b().to_f64().unwrap() * 2f64.sqrt();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum() as f64, f.signum());
            }
        }

        #[test]
        fn field_inverse(x in small_quad()) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inv().unwrap(), ExactQuad::one());
        }
    }
}
