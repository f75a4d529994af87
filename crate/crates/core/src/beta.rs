//! Inverse temperature, including the zero-temperature limit.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{format_fraction, parse_fraction, RatInterval};
use crate::Error;

/// `β ∈ [0, ∞]`.
///
/// `Weight(x)` fixes the Boltzmann factor `x = e^{-β}` exactly, which makes
/// values such as `β = ln 2` representable without rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Beta {
    Infinite,
    Finite(BigRational),
    Weight(BigRational),
}

impl Beta {
    pub fn finite(b: BigRational) -> Result<Self, Error> {
        if b.is_negative() {
            return Err(Error::InvalidInput(format!("negative beta {b}")));
        }
        Ok(Beta::Finite(b))
    }

    /// `β = -ln x` for `0 < x ≤ 1`.
    pub fn from_weight(x: BigRational) -> Result<Self, Error> {
        if !x.is_positive() || x > BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "Boltzmann weight {x} outside (0,1]"
            )));
        }
        Ok(Beta::Weight(x))
    }

    pub fn from_f64(b: f64) -> Result<Self, Error> {
        if b.is_infinite() && b > 0.0 {
            return Ok(Beta::Infinite);
        }
        let r =
            BigRational::from_float(b).ok_or_else(|| Error::InvalidInput(format!("beta {b}")))?;
        Beta::finite(r)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Beta::Infinite)
    }

    /// `e^{-β}` when it is exactly rational.
    pub fn weight_exact(&self) -> Option<BigRational> {
        match self {
            Beta::Infinite => Some(BigRational::zero()),
            Beta::Finite(b) if b.is_zero() => Some(BigRational::one()),
            Beta::Finite(_) => None,
            Beta::Weight(x) => Some(x.clone()),
        }
    }

    /// Enclosure of `e^{-β}`.
    pub fn weight(&self, prec: u32) -> RatInterval {
        match self {
            Beta::Finite(b) => RatInterval::exp_neg(b, prec),
            _ => RatInterval::point(self.weight_exact().unwrap()),
        }
    }

    /// Enclosure of `β` itself; `None` at infinity.
    pub fn value(&self, prec: u32) -> Option<RatInterval> {
        match self {
            Beta::Infinite => None,
            Beta::Finite(b) => Some(RatInterval::point(b.clone())),
            Beta::Weight(x) => Some(ln_recip(x, prec)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Beta::Infinite => f64::INFINITY,
            Beta::Finite(b) => b.to_f64().unwrap_or(f64::NAN),
            Beta::Weight(x) => -x.to_f64().unwrap_or(f64::NAN).ln(),
        }
    }

    /// `e^{-β}` as a float (0 at infinity).
    pub fn weight_f64(&self) -> f64 {
        match self {
            Beta::Infinite => 0.0,
            Beta::Finite(b) => (-b.to_f64().unwrap_or(f64::NAN)).exp(),
            Beta::Weight(x) => x.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Enclosure of `ln(1/x)` for rational `0 < x ≤ 1`, by bisection on `exp_neg`.
fn ln_recip(x: &BigRational, prec: u32) -> RatInterval {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    while RatInterval::exp_neg(&hi, prec + 8).hi() > x {
        hi = &hi * BigRational::from_integer(2.into());
    }
    let eps = crate::exact::pow2(-(prec as i32));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        let e = RatInterval::exp_neg(&mid, prec + 8);
        if e.lo() > x {
            lo = mid;
        } else if e.hi() < x {
            hi = mid;
        } else {
            break;
        }
    }
    RatInterval::new(lo, hi)
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Infinite => write!(f, "inf"),
            Beta::Finite(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Beta::Finite(b) => write!(f, "{}", format_fraction(b)),
            Beta::Weight(x) => write!(f, "x={}", format_fraction(x)),
        }
    }
}

impl FromStr for Beta {
    type Err = Error;

    /// Accepts `inf`, a decimal or `num/den`, `ln2`-style `ln<n>` for `β = ln n`,
    /// and `x=<fraction>` to give `e^{-β}` directly.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(Beta::Infinite),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("x=") {
            let x = parse_fraction(rest).map_err(Error::InvalidInput)?;
            return Beta::from_weight(x);
        }
        if let Some(rest) = t.strip_prefix("ln") {
            let n = parse_fraction(rest).map_err(Error::InvalidInput)?;
            if n < BigRational::one() {
                return Err(Error::InvalidInput(format!("ln of {rest} is negative")));
            }
            return Beta::from_weight(n.recip());
        }
        Beta::finite(parse_fraction(t).map_err(Error::InvalidInput)?)
    }
}

impl Serialize for Beta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Number(v) => Beta::from_f64(v).map_err(serde::de::Error::custom),
        }
    }
}
