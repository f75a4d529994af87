use afpotts::exact::{int, parse_fraction, rat};
use afpotts::par::Execution;
use afpotts::peierls::{
    contour_weights, positive_temp_bound, prefix_sum, published_weak_prefix_140,
    strong_prefix_upper, tail_bound, v1_upper_bound, zero_temp_bound, zero_temp_bound_from_prefix,
    Constants, Form,
};
use afpotts::sap::enumerate_q;
use afpotts::Beta;
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn strong_bound_from_published_prefix() {
    let known = enumerate_q(22, Execution::Parallel).unwrap();
    let strong = strong_prefix_upper(&published_weak_prefix_140(), &known, 140);
    assert!(strong < rat(3119, 100000));
    let r =
        zero_temp_bound_from_prefix(strong, Form::Strong, 142, "published weak prefix").unwrap();
    assert!(r.magnetization_lower >= parse_fraction("0.90301").unwrap());
    let v1 = v1_upper_bound(&r.magnetization_lower, &Beta::Infinite).unwrap();
    assert!(v1 <= parse_fraction("0.14549").unwrap());
}

#[test]
fn enumerated_prefix_bound_is_vacuous_but_consistent() {
    let t = enumerate_q(22, Execution::Parallel).unwrap();
    let weak = zero_temp_bound(&t, Form::Weak, 24).unwrap();
    let strong = zero_temp_bound(&t, Form::Strong, 24).unwrap();
    // the growth-bound tail from L = 24 is about 11.9, so the bound is vacuous
    let tail = tail_bound(24).unwrap().to_f64();
    assert!((11.0..13.0).contains(&tail), "{tail}");
    assert!(weak.magnetization_lower < int(0));
    assert_eq!(weak.magnetization_lower_clamped(), int(0));
    assert!(strong.magnetization_lower >= weak.magnetization_lower);
    assert!(weak.total.lo() <= weak.total.hi());
    assert!(prefix_sum(&t, Form::Strong) <= prefix_sum(&t, Form::Weak));
    // a longer exact prefix never hurts
    let short = zero_temp_bound(&t.truncated(16), Form::Weak, 18).unwrap();
    assert!(weak.magnetization_lower >= short.magnetization_lower);
}

fn small_c() -> Constants {
    Constants {
        c: rat(1, 1000),
        ..Constants::default()
    }
}

#[test]
fn magnetization_nonincreasing_as_beta_drops() {
    let t = enumerate_q(22, Execution::Parallel).unwrap();
    let grid: Vec<Beta> = ["inf", "5", "4", "3"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let m: Vec<BigRational> = grid
        .iter()
        .map(|b| {
            positive_temp_bound(&t, b, 24, &small_c())
                .unwrap()
                .magnetization_lower
        })
        .collect();
    for w in m.windows(2) {
        assert!(w[1] <= w[0]);
    }
}

#[test]
fn distance_to_zero_temperature_decays_like_exp_minus_beta() {
    let t = enumerate_q(22, Execution::Parallel).unwrap();
    let base = positive_temp_bound(&t, &Beta::Infinite, 24, &small_c()).unwrap();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for b in 5..=12 {
        let r = positive_temp_bound(&t, &Beta::Finite(int(b)), 24, &small_c()).unwrap();
        let diff = &base.magnetization_lower - &r.magnetization_lower;
        let d: f64 = num_traits::ToPrimitive::to_f64(&diff).unwrap();
        assert!(d >= 0.0);
        xs.push(b as f64);
        ys.push(d.ln());
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!(slope <= -0.9, "slope {slope}");
}

#[test]
fn weights_monotone_on_grid() {
    let grid: Vec<Beta> = (0..20).map(|i| Beta::Finite(rat(i, 2))).collect();
    let w: Vec<_> = grid.iter().map(contour_weights).collect();
    for pair in w.windows(2) {
        assert!(pair[1].p.hi() <= pair[0].p.lo());
        assert!(pair[1].q.hi() <= pair[0].q.lo());
    }
    for c in &w {
        assert!(c.p.lo() >= &rat(1, 2) && c.p.hi() <= &int(1));
        assert!(c.q.lo() >= &int(0) && c.q.hi() <= &int(1));
    }
}

proptest! {
    #[test]
    fn tails_strictly_decrease(h in 3u32..120) {
        prop_assert!(tail_bound(2 * h + 2).unwrap() < tail_bound(2 * h).unwrap());
    }
}
