//! Peierls sums over honeycomb circuits surrounding a site, evaluated exactly.
//!
//! Conventions: a bound's `total` is half of the Peierls estimate for the
//! probability that the site is not in the majority colour, so the reported
//! magnetization is `1 − 2·total`. Prefix sums use the exact `q_L`; lengths
//! beyond the table use `q_L ≤ (L²/36)(2+√2)^{(L−2)/2}`, whose sum has a
//! closed form in `ℚ[√2]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::exact::{
    decimal, format_fraction, int, pow2, ExactQuad, Poly, PolyRatio, RatInterval, Rounding,
    DEFAULT_PREC,
};
use crate::series_io::PolygonTable;
use crate::{Beta, Error, Result};

/// `2^139 · Σ_{L≤140} q_L 2^{−L}` for the published honeycomb polygon series.
pub const WEAK_PREFIX_TO_140_NUMERATOR: &str = "22074233899340881133583692519761872405249";
pub const WEAK_PREFIX_TO_140_EXPONENT: i32 = 139;

/// The published weak prefix sum to `L = 140`.
pub fn published_weak_prefix_140() -> BigRational {
    BigRational::from_integer(WEAK_PREFIX_TO_140_NUMERATOR.parse::<BigInt>().unwrap())
        * pow2(-WEAK_PREFIX_TO_140_EXPONENT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// `Σ q_L 2^{−L}`
    Weak,
    /// `Σ q_L 2^{−L} / (1 + 2^{1−L})`
    Strong,
}

impl std::str::FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Form::Weak),
            "strong" => Ok(Form::Strong),
            _ => Err(Error::InvalidInput(format!(
                "unknown form `{s}` (weak|strong)"
            ))),
        }
    }
}

/// `p_β = (1+x+x²)/(2+x³)` with `x = e^{−β}`.
pub fn p_ratio() -> PolyRatio {
    PolyRatio::new(
        Poly::from_coeffs(vec![1, 1, 1]),
        Poly::from_coeffs(vec![2, 0, 0, 1]),
    )
}

/// `q_β = 9x²(2+x³)/(1+x+x²)³`.
pub fn q_ratio() -> PolyRatio {
    PolyRatio::new(
        Poly::from_coeffs(vec![0, 0, 18, 0, 0, 9]),
        Poly::from_coeffs(vec![1, 1, 1]).pow(3),
    )
}

#[derive(Clone, Debug)]
pub struct ContourWeights {
    pub beta: Beta,
    pub p: RatInterval,
    pub q: RatInterval,
}

impl ContourWeights {
    pub fn to_json(&self) -> Value {
        json!({
            "beta": self.beta.to_string(),
            "p": interval_json(&self.p),
            "q": interval_json(&self.q),
        })
    }
}

pub fn contour_weights(beta: &Beta) -> ContourWeights {
    ContourWeights {
        beta: beta.clone(),
        p: p_ratio().eval(beta, DEFAULT_PREC),
        q: q_ratio().eval(beta, DEFAULT_PREC),
    }
}

fn term(form: Form, l: u32, q: &BigRational) -> BigRational {
    match form {
        Form::Weak => q * pow2(-(l as i32)),
        Form::Strong => q / (pow2(l as i32) + int(2)),
    }
}

/// Exact prefix sum over every entry of the table.
pub fn prefix_sum(table: &PolygonTable, form: Form) -> BigRational {
    table
        .q()
        .iter()
        .map(|(&l, v)| term(form, l, &BigRational::from_integer(v.clone().into())))
        .sum()
}

/// `Σ_{m≥M} m² y^m = y^M [M² − (2M²−2M−1) y + (M−1)² y²] / (1−y)³`.
fn moment_tail(m: u32, y: &ExactQuad) -> ExactQuad {
    let mq = |v: i64| ExactQuad::from_integer(v);
    let m = m as i64;
    let one = ExactQuad::one();
    let numer =
        mq(m * m) - mq(2 * m * m - 2 * m - 1) * y.clone() + mq((m - 1) * (m - 1)) * y.pow(2);
    let denom = (one - y.clone()).pow(3);
    y.pow(m as u32) * numer / denom
}

/// `Σ_{even L ≥ l_start} (L²/36)(2+√2)^{(L−2)/2} p^L` in closed form.
pub fn tail_with_weight(l_start: u32, p: &BigRational) -> Result<ExactQuad> {
    if l_start % 2 == 1 || l_start < 6 {
        return Err(Error::InvalidInput(format!(
            "tail must start at an even L >= 6, got {l_start}"
        )));
    }
    let base = ExactQuad::from_integer(2) + ExactQuad::sqrt2();
    // L = 2m: (4m²/36)(2+√2)^{m−1} p^{2m} = (1/9)(2+√2)^{−1} m² y^m
    let y = base.clone() * ExactQuad::from_rational(p * p);
    if y.cmp_rational(&BigRational::one()) != std::cmp::Ordering::Less {
        return Err(Error::NonConvergent(format!(
            "(2+√2)p² = {:.6}",
            y.to_f64()
        )));
    }
    let pre = ExactQuad::from_rational(BigRational::new(1.into(), 9.into())) / base;
    Ok(pre * moment_tail(l_start / 2, &y))
}

/// Zero-temperature tail `Σ_{even L ≥ l_start} (L²/36)(2+√2)^{(L−2)/2} 2^{−L}`.
pub fn tail_bound(l_start: u32) -> Result<ExactQuad> {
    tail_with_weight(l_start, &BigRational::new(1.into(), 2.into()))
}

/// Constants of the `T ≥ 1` estimate `N(L,T) ≤ (L^T/T!)² C^{T+1} α^L`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constants {
    pub c: BigRational,
    pub alpha: ExactQuad,
}

impl Default for Constants {
    /// `C = 100` and `α = 37/20 ≥ √(2+√2)`; neither value is derived from a proof.
    fn default() -> Self {
        Constants {
            c: int(100),
            alpha: ExactQuad::from_rational(BigRational::new(37.into(), 20.into())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub form: Form,
    pub beta: Beta,
    /// Largest `L` summed exactly.
    pub l_cut: u32,
    pub tail_from: u32,
    pub prefix: RatInterval,
    /// Tail at the upper end of `p_β` (exactly `p = ½` at zero temperature).
    pub tail: ExactQuad,
    /// Bound on contours with triple points; absent at zero temperature.
    pub higher_order: Option<RatInterval>,
    pub constants: Option<Constants>,
    pub total: RatInterval,
    /// `1 − 2·total.hi`.
    pub magnetization_lower: BigRational,
    /// Where the prefix came from.
    pub prefix_source: String,
}

impl BoundReport {
    pub fn magnetization_lower_clamped(&self) -> BigRational {
        self.magnetization_lower.clone().max(BigRational::zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "form": self.form,
            "beta": self.beta.to_string(),
            "l_cut": self.l_cut,
            "tail_from": self.tail_from,
            "prefix_source": self.prefix_source,
            "prefix": interval_json(&self.prefix),
            "tail": self.tail,
            "tail_decimal_up": decimal(self.tail.enclose(DEFAULT_PREC).hi(), 10, Rounding::Up),
            "higher_order": self.higher_order.as_ref().map(interval_json),
            "constants": self.constants.as_ref().map(|c| json!({"C": format_fraction(&c.c), "alpha": c.alpha})),
            "total": interval_json(&self.total),
            "magnetization_lower": format_fraction(&self.magnetization_lower),
            "magnetization_lower_decimal_down": decimal(&self.magnetization_lower, 10, Rounding::Down),
        })
    }
}

pub fn interval_json(i: &RatInterval) -> Value {
    if i.is_point() {
        json!({ "value": format_fraction(i.lo()), "decimal": decimal(i.lo(), 10, Rounding::Down) })
    } else {
        json!({
            "lo": format_fraction(i.lo()),
            "hi": format_fraction(i.hi()),
            "lo_decimal_down": decimal(i.lo(), 10, Rounding::Down),
            "hi_decimal_up": decimal(i.hi(), 10, Rounding::Up),
        })
    }
}

fn check_ranges(table: &PolygonTable, tail_from: u32) -> Result<u32> {
    let max = table
        .max_l()
        .ok_or_else(|| Error::InvalidInput("empty polygon table".into()))?;
    if tail_from <= max {
        return Err(Error::InvalidInput(format!(
            "tail from {tail_from} overlaps the table (max L = {max})"
        )));
    }
    // every length below the tail must be summed exactly
    table.q_prefix(tail_from - 2)?;
    Ok(tail_from - 2)
}

fn assemble(
    form: Form,
    beta: Beta,
    l_cut: u32,
    tail_from: u32,
    prefix: RatInterval,
    tail: ExactQuad,
    tail_lo: ExactQuad,
    higher_order: Option<RatInterval>,
    constants: Option<Constants>,
    prefix_source: String,
) -> BoundReport {
    let t = RatInterval::new(
        tail_lo.enclose(DEFAULT_PREC).lo().clone(),
        tail.enclose(DEFAULT_PREC).hi().clone(),
    );
    let mut total = &prefix + &t;
    if let Some(h) = &higher_order {
        total = &total + h;
    }
    let magnetization_lower = BigRational::one() - int(2) * total.hi();
    BoundReport {
        form,
        beta,
        l_cut,
        tail_from,
        prefix,
        tail,
        higher_order,
        constants,
        total,
        magnetization_lower,
        prefix_source,
    }
}

/// Zero-temperature bound from an exact table and the closed-form tail.
pub fn zero_temp_bound(table: &PolygonTable, form: Form, tail_from: u32) -> Result<BoundReport> {
    let l_cut = check_ranges(table, tail_from)?;
    let prefix = RatInterval::point(prefix_sum(table, form));
    let tail = tail_bound(tail_from)?;
    Ok(assemble(
        form,
        Beta::Infinite,
        l_cut,
        tail_from,
        prefix,
        tail.clone(),
        tail,
        None,
        None,
        "table".into(),
    ))
}

/// Upper bound on the strong prefix to `l_cut` given the exact weak prefix
/// to `l_cut` and exact `q_L` for part of that range: each length drops by
/// `q_L(2^{−L} − 2^{−L}/(1+2^{1−L})) ≥ 0`, and only the known ones are removed.
pub fn strong_prefix_upper(
    weak_prefix: &BigRational,
    known: &PolygonTable,
    l_cut: u32,
) -> BigRational {
    let mut s = weak_prefix.clone();
    for (&l, v) in known.q().range(..=l_cut) {
        let q = BigRational::from_integer(v.clone().into());
        s -= term(Form::Weak, l, &q) - term(Form::Strong, l, &q);
    }
    s
}

/// Zero-temperature bound from a given prefix sum to `tail_from − 2`.
pub fn zero_temp_bound_from_prefix(
    prefix: BigRational,
    form: Form,
    tail_from: u32,
    source: &str,
) -> Result<BoundReport> {
    let tail = tail_bound(tail_from)?;
    Ok(assemble(
        form,
        Beta::Infinite,
        tail_from - 2,
        tail_from,
        RatInterval::point(prefix),
        tail.clone(),
        tail,
        None,
        None,
        source.into(),
    ))
}

/// `Σ_{L≥3} L² r^L = r(1+r)/(1−r)³ − r − 4r²` for `0 ≤ r < 1`.
fn l2_series_from_three(r: &BigRational) -> BigRational {
    let one = BigRational::one();
    let d = &one - r;
    r * (&one + r) / (&d * &d * &d) - r - int(4) * r * r
}

/// Positive-temperature bound: exact circuits weighted by `p_β`, closed-form
/// tail with `p_β`, and `8C² q_β Σ_{L≥3} L² (α p_β e^{√(8C q_β)})^L` for
/// contours with triple points. Every term carries half the per-contour
/// weight `2^{T+1}p^L q^T`, since the magnetization is `1 − 2·total`.
pub fn positive_temp_bound(
    table: &PolygonTable,
    beta: &Beta,
    tail_from: u32,
    constants: &Constants,
) -> Result<BoundReport> {
    let l_cut = check_ranges(table, tail_from)?;
    let w = contour_weights(beta);
    if !constants.c.is_positive() || constants.alpha.signum() <= 0 {
        return Err(Error::InvalidInput("C and alpha must be positive".into()));
    }
    // p ↦ p^L / (1 + 2p^L) is increasing, so the endpoints of p bound the prefix
    let f = |p: &BigRational| -> BigRational {
        table
            .q()
            .iter()
            .map(|(&l, v)| {
                let pl = num_traits::pow(p.clone(), l as usize);
                BigRational::from_integer(v.clone().into()) * &pl
                    / (BigRational::one() + int(2) * &pl)
            })
            .sum()
    };
    let prefix = if w.p.is_point() {
        RatInterval::point(f(w.p.lo()))
    } else {
        RatInterval::new(f(w.p.lo()), f(w.p.hi()))
    };
    let tail = tail_with_weight(tail_from, w.p.hi())?;
    let tail_lo = tail_with_weight(tail_from, w.p.lo())?;

    let higher_order = if w.q.hi().is_zero() {
        None
    } else {
        let c = RatInterval::point(constants.c.clone());
        let s = (&(&c * &RatInterval::point(int(8))) * &w.q).sqrt_of(DEFAULT_PREC);
        let r = &(&constants.alpha.enclose(DEFAULT_PREC) * &w.p) * &s.exp_of(DEFAULT_PREC);
        if r.hi() >= &BigRational::one() {
            return Err(Error::NonConvergent(format!(
                "alpha * p_beta * exp(sqrt(8 C q_beta)) = {} at beta = {beta}",
                decimal(r.hi(), 10, Rounding::Up)
            )));
        }
        let k = int(8) * &constants.c * &constants.c;
        let lo = &k * w.q.lo() * l2_series_from_three(r.lo());
        let hi = &k * w.q.hi() * l2_series_from_three(r.hi());
        Some(RatInterval::new(lo, hi))
    };
    Ok(assemble(
        Form::Strong,
        beta.clone(),
        l_cut,
        tail_from,
        prefix,
        tail,
        tail_lo,
        higher_order,
        Some(constants.clone()),
        "table".into(),
    ))
}

/// Upper bound on `μ(σ_{v₁} = 1)` for `v₁ ∈ V₁`: the bad neighbourhoods
/// (two or three neighbours not coloured 1) have probability at most
/// `(3/2)(1 − m₀)`, the good ones force `σ_{v₁} = 1` with conditional
/// probability at most `e^{−2β}`.
pub fn v1_upper_bound(m0_lower: &BigRational, beta: &Beta) -> Result<BigRational> {
    if m0_lower.is_negative() || m0_lower > &BigRational::one() {
        return Err(Error::InvalidInput(format!(
            "magnetization {m0_lower} outside [0,1]"
        )));
    }
    let x = beta.weight(DEFAULT_PREC);
    let v =
        BigRational::new(3.into(), 2.into()) * (BigRational::one() - m0_lower) + x.hi() * x.hi();
    Ok(v.min(BigRational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_fraction, rat};
    use crate::series_io::{parse_polygon_table, Format};

    fn table(text: &str) -> PolygonTable {
        parse_polygon_table(text, Format::Canonical).unwrap()
    }

    #[test]
    fn weights_at_endpoints() {
        let w0 = contour_weights(&Beta::Finite(int(0)));
        assert_eq!((w0.p.lo(), w0.q.lo()), (&int(1), &int(1)));
        let wi = contour_weights(&Beta::Infinite);
        assert_eq!((wi.p.lo(), wi.q.lo()), (&rat(1, 2), &int(0)));
        let wl = contour_weights(&"ln2".parse().unwrap());
        assert!(wl.p.is_point());
        assert_eq!(wl.p.lo(), &rat(14, 17));
    }

    #[test]
    fn single_term_prefix() {
        assert_eq!(prefix_sum(&table("6,1\n"), Form::Weak), rat(1, 64));
        assert_eq!(prefix_sum(&table("6,1\n"), Form::Strong), rat(1, 66));
    }

    #[test]
    fn tail_at_142_matches_closed_form() {
        let t = tail_bound(142).unwrap();
        let base = ExactQuad::from_integer(2) + ExactQuad::sqrt2();
        let want = base.pow(70)
            * ExactQuad::new(int(2907), int(1531))
            * ExactQuad::from_rational(BigRational::one() / (int(9) * pow2(139)));
        assert_eq!(t, want);
        assert_eq!(t.cmp_rational(&rat(1731, 100000)), std::cmp::Ordering::Less);
        assert_eq!(t.cmp_rational(&rat(17, 1000)), std::cmp::Ordering::Greater);
    }

    #[test]
    fn tail_agrees_with_partial_sums() {
        // partial sum to L+200 plus the closed form from L+202 reproduces the tail
        let start = 24;
        let base = ExactQuad::from_integer(2) + ExactQuad::sqrt2();
        let mut s = ExactQuad::zero();
        for l in (start..start + 202).step_by(2) {
            s = s + base.pow((l - 2) / 2)
                * ExactQuad::from_rational(
                    BigRational::new((l * l).into(), 36.into()) * pow2(-(l as i32)),
                );
        }
        assert_eq!(
            s + tail_bound(start + 202).unwrap(),
            tail_bound(start).unwrap()
        );
        assert!(tail_bound(start + 2).unwrap() < tail_bound(start).unwrap());
        assert!(tail_bound(7).is_err());
    }

    #[test]
    fn published_prefix_below_stated_decimal() {
        assert!(published_weak_prefix_140() < rat(3168, 100000));
        let r =
            zero_temp_bound_from_prefix(published_weak_prefix_140(), Form::Weak, 142, "published")
                .unwrap();
        assert!(r.magnetization_lower > rat(90202, 100000));
    }

    #[test]
    fn overlapping_tail_rejected() {
        let t = table("6,1\n10,6\n12,6\n");
        assert!(zero_temp_bound(&t, Form::Weak, 12).is_err());
        assert!(zero_temp_bound(&t, Form::Weak, 16).is_err());
        let r = zero_temp_bound(&t, Form::Weak, 14).unwrap();
        assert_eq!(r.l_cut, 12);
        assert!(r.total.lo() <= r.total.hi());
    }

    #[test]
    fn infinite_beta_matches_strong_zero_temperature() {
        let t = table("6,1\n10,6\n12,6\n14,39\n");
        let a = positive_temp_bound(&t, &Beta::Infinite, 16, &Constants::default()).unwrap();
        let b = zero_temp_bound(&t, Form::Strong, 16).unwrap();
        assert_eq!(a.total, b.total);
        assert_eq!(a.magnetization_lower, b.magnetization_lower);
    }

    #[test]
    fn default_constants_diverge_at_moderate_beta() {
        let t = table("6,1\n10,6\n");
        let r = positive_temp_bound(&t, &Beta::Finite(int(5)), 12, &Constants::default());
        assert!(matches!(r, Err(Error::NonConvergent(_))));
        assert!(positive_temp_bound(&t, &Beta::Finite(int(9)), 12, &Constants::default()).is_ok());
    }

    #[test]
    fn v1_bound_values() {
        let m = parse_fraction("0.90301").unwrap();
        assert_eq!(
            v1_upper_bound(&m, &Beta::Infinite).unwrap(),
            parse_fraction("0.145485").unwrap()
        );
        assert_eq!(v1_upper_bound(&int(1), &Beta::Infinite).unwrap(), int(0));
        assert_eq!(v1_upper_bound(&rat(1, 3), &Beta::Infinite).unwrap(), int(1));
        assert!(v1_upper_bound(&int(2), &Beta::Infinite).is_err());
    }
}
