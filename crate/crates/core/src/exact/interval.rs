//! Closed intervals with rational endpoints and outward dyadic rounding.
//!
//! Transcendental quantities such as `e^{-β}` enter the exact pipeline only
//! through enclosures built here, so every derived bound stays rigorous.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{pow2, rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::point(rat(v, 1))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / rat(2, 1)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// True when every point of `self` is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Widen the endpoints to multiples of `2^-prec`.
    pub fn round_out(&self, prec: u32) -> Self {
        let scale = pow2(prec as i32);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Self { lo, hi }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// `1/self`, or `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Self {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            })
        } else {
            None
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn powu(&self, exp: u32) -> Self {
        let mut acc = Self::from_integer(1);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Enclosure of `√r` for `r ≥ 0` with endpoints on the `2^-prec` grid.
    pub fn sqrt(r: &BigRational, prec: u32) -> Self {
        assert!(!r.is_negative(), "square root of a negative number");
        let scaled = r * pow2(2 * prec as i32);
        let floor = scaled.floor().to_integer();
        let ceil = scaled.ceil().to_integer();
        let lo_int = floor.sqrt();
        let mut hi_int = ceil.sqrt();
        if &hi_int * &hi_int < ceil {
            hi_int += 1;
        }
        let den = BigInt::one() << prec;
        Self {
            lo: BigRational::new(lo_int, den.clone()),
            hi: BigRational::new(hi_int, den),
        }
    }

    /// Enclosure of the square root of every point of a nonnegative interval.
    pub fn sqrt_of(&self, prec: u32) -> Self {
        let lo = Self::sqrt(&self.lo.clone().max(BigRational::zero()), prec).lo;
        let hi = Self::sqrt(&self.hi, prec).hi;
        Self { lo, hi }
    }

    /// Enclosure of `e^{-b}` for rational `b ≥ 0`.
    ///
    /// Reduces the argument by halving until it is at most `1/2`, sums the
    /// alternating Taylor series (consecutive partial sums bracket the value),
    /// then squares back up with outward rounding at every step.
    pub fn exp_neg(b: &BigRational, prec: u32) -> Self {
        assert!(!b.is_negative(), "exp_neg expects a nonnegative argument");
        if b.is_zero() {
            return Self::from_integer(1);
        }
        let half = rat(1, 2);
        let mut t = b.clone();
        let mut k = 0u32;
        while t > half {
            t /= rat(2, 1);
            k += 1;
        }
        let guard = prec + 16 + 2 * k;
        let eps = pow2(-(guard as i32));
        let mut term = BigRational::one();
        let mut sum = BigRational::one();
        let mut n = 0i64;
        let (lo, hi) = loop {
            n += 1;
            term = &term * &t / rat(n, 1);
            let next = if n % 2 == 1 {
                &sum - &term
            } else {
                &sum + &term
            };
            if term < eps {
                break if next < sum { (next, sum) } else { (sum, next) };
            }
            sum = next;
            if n % 8 == 0 {
                // keep denominators bounded; widening by eps keeps the bracket valid
                let scale = pow2(guard as i32 + 8);
                sum = (&sum * &scale).round() / &scale;
            }
        };
        // slack for the intermediate rounding of partial sums
        let slack = &eps * rat(n, 1);
        let mut iv = Self {
            lo: lo - &slack,
            hi: hi + &slack,
        }
        .round_out(guard);
        for _ in 0..k {
            iv = (&iv * &iv).round_out(guard);
        }
        let iv = iv.round_out(prec);
        Self {
            lo: iv.lo.max(BigRational::zero()),
            hi: iv.hi,
        }
    }

    /// Enclosure of `e^{s}` for any rational `s`.
    pub fn exp(s: &BigRational, prec: u32) -> Self {
        if s.is_negative() {
            Self::exp_neg(&-s, prec)
        } else {
            Self::exp_neg(s, prec + 8)
                .recip()
                .expect("exp_neg is positive")
                .round_out(prec)
        }
    }

    /// Enclosure of `e^{self}` (monotone in the argument).
    pub fn exp_of(&self, prec: u32) -> Self {
        Self {
            lo: Self::exp(&self.lo, prec).lo,
            hi: Self::exp(&self.hi, prec).hi,
        }
    }
}

impl<'a> Add<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl<'a> Sub<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl<'a> Mul<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }
}

impl Add for RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: RatInterval) -> RatInterval {
        &self + &rhs
    }
}

impl Sub for RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: RatInterval) -> RatInterval {
        &self - &rhs
    }
}

impl Mul for RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: RatInterval) -> RatInterval {
        &self * &rhs
    }
}

impl Neg for RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_two_brackets() {
        let s = RatInterval::sqrt(&rat(2, 1), 64);
        assert!(s.lo() * s.lo() <= rat(2, 1));
        assert!(s.hi() * s.hi() >= rat(2, 1));
        assert!(s.width() <= pow2(-63));
    }

    #[test]
    fn exp_neg_one_is_tight() {
        let e = RatInterval::exp_neg(&rat(1, 1), 160);
        assert!((e.mid_f64() - (-1f64).exp()).abs() < 1e-16);
        assert!(e.width() < pow2(-150));
    }

    #[test]
    fn exp_neg_ln2_contains_half() {
        // ln 2 is not rational, but e^{-b} for b bracketing ln 2 must bracket 1/2
        let below = RatInterval::exp_neg(&rat(693147180559945, 1_000_000_000_000_000), 128);
        let above = RatInterval::exp_neg(&rat(693147180559946, 1_000_000_000_000_000), 128);
        assert!(below.lo() > &rat(1, 2));
        assert!(above.hi() < &rat(1, 2));
    }

    #[test]
    fn exp_of_large_argument() {
        let e = RatInterval::exp_neg(&rat(40, 1), 200);
        let want = (-40f64).exp();
        assert!((e.mid_f64() / want - 1.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn exp_neg_matches_float(num in 0i64..4000, den in 1i64..200) {
            let b = rat(num, den);
            let e = RatInterval::exp_neg(&b, 128);
            let f = (-(num as f64) / den as f64).exp();
            prop_assert!(e.lo_f64() <= f * (1.0 + 1e-12) + 1e-300);
            prop_assert!(e.hi_f64() >= f * (1.0 - 1e-12));
            prop_assert!(e.width() <= pow2(-120));
        }

        #[test]
        fn exp_is_multiplicative(a in 0i64..500, b in 0i64..500) {
            let ea = RatInterval::exp_neg(&rat(a, 100), 128);
            let eb = RatInterval::exp_neg(&rat(b, 100), 128);
            let eab = RatInterval::exp_neg(&rat(a + b, 100), 128);
            prop_assert!((&ea * &eb).overlaps(&eab));
        }
    }
}
