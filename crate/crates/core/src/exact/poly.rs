//! Integer polynomials in the Boltzmann weight `x = e^{-β}`.
//!
//! Every finite-volume probability in this crate is a ratio of two such
//! polynomials, so identities can be checked coefficientwise and evaluated
//! at any β through rational enclosures of `x`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::RatInterval;

/// Polynomial with `i128` coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(Vec<i128>);

fn checked(v: Option<i128>) -> i128 {
    v.expect("polynomial coefficient overflow")
}

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: i128) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c · x^k`.
    pub fn monomial(c: i128, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn x() -> Self {
        Poly::monomial(1, 1)
    }

    pub fn from_coeffs(mut c: Vec<i128>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }

    /// `Σ_k counts[k] x^k`, e.g. an energy histogram.
    pub fn from_histogram(counts: &[u64]) -> Self {
        Poly::from_coeffs(counts.iter().map(|&c| c as i128).collect())
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> i128 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }

    /// Divide by `x^k`; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(
            self.0.iter().take(k).all(|&c| c == 0),
            "shift_down drops nonzero terms"
        );
        Poly::from_coeffs(self.0.iter().skip(k).copied().collect())
    }

    pub fn scale(&self, c: i128) -> Self {
        Poly::from_coeffs(self.0.iter().map(|&a| checked(a.checked_mul(c))).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True when all coefficients are nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for &c in self.0.iter().rev() {
            acc = acc * x + BigRational::from_integer(BigInt::from(c));
        }
        acc
    }

    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::from_integer(0);
        for &c in self.0.iter().rev() {
            acc = &(&acc * x) + &RatInterval::point(BigRational::from_integer(BigInt::from(c)));
        }
        acc
    }

    /// [`Poly::eval_interval`] in fixed point: endpoints are integers over
    /// `2^prec`, rounded outward after every Horner step.
    pub fn eval_interval_rounded(&self, x: &RatInterval, prec: u32) -> RatInterval {
        let scale = BigRational::from_integer(BigInt::one() << prec);
        let xl = (x.lo() * &scale).floor().to_integer();
        let xh = (x.hi() * &scale).ceil().to_integer();
        let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
        for &c in self.0.iter().rev() {
            let prods = [&lo * &xl, &lo * &xh, &hi * &xl, &hi * &xh];
            let mn = prods.iter().min().unwrap();
            let mx = prods.iter().max().unwrap();
            let c = BigInt::from(c) << prec;
            // >> rounds toward −∞
            lo = (mn >> prec) + &c;
            hi = -((-mx) >> prec) + &c;
        }
        let den = BigInt::one() << prec;
        RatInterval::new(BigRational::new(lo, den.clone()), BigRational::new(hi, den))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::from_coeffs(
            (0..n)
                .map(|k| checked(self.coeff(k).checked_add(rhs.coeff(k))))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::from_coeffs(
            (0..n)
                .map(|k| checked(self.coeff(k).checked_sub(rhs.coeff(k))))
                .collect(),
        )
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0i128; self.0.len() + rhs.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                out[i + j] = checked(out[i + j].checked_add(checked(a.checked_mul(b))));
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1)
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| &a + &b)
    }
}
