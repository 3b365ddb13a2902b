use super::*;
use crate::certify::{certify, Request};
use crate::problems::{problem_by_name, Schedule};
use crate::solver::{run, ExhaustiveOracle};
use crate::spaces::{metric_as_gauge, power_norm_gauge, SpaceKind};
use proptest::prelude::*;

fn p3() -> Problem {
    problem_by_name("P3").unwrap()
}

fn single(center: Point, gauge: GaugeFunction) -> PerturbationSeries {
    PerturbationSeries::new(vec![center], vec![1.0], Tail::None, gauge).unwrap()
}

#[test]
fn geometric_series_on_one_center() {
    let pr = p3();
    // δ_i = 2^-i on p2, remaining weight 1 after δ_0
    let s = PerturbationSeries::new(vec![2], vec![1.0], Tail::Known { center: 2, weight: 1.0 }, metric_as_gauge())
        .unwrap();
    assert_eq!(s.eval_g(&pr.space, 0).value, ExtReal::finite(4.0));
    assert_eq!(s.eval_g(&pr.space, 2).value, ExtReal::ZERO);
}

#[test]
fn truncated_tail_brackets_the_closed_form() {
    let pr = p3();
    for k in [1usize, 3, 10] {
        let weights: Vec<f64> = (0..k).map(|i| 0.5f64.powi(i as i32)).collect();
        let rest = 0.5f64.powi(k as i32 - 1);
        let s = PerturbationSeries::new(vec![2; k], weights, Tail::Unknown { weight: rest }, metric_as_gauge())
            .unwrap();
        let v = s.eval_g(&pr.space, 0);
        let exact = 4.0;
        assert!(v.value.value() <= exact + 1e-15);
        assert!(exact - v.value.value() <= v.tail_bound + 1e-15, "k={k}: {v:?}");
    }
}

#[test]
fn constant_weights_diverge() {
    let pr = p3();
    let s = PerturbationSeries::new(
        vec![0, 1],
        vec![1.0, 1.0],
        Tail::Unknown { weight: f64::INFINITY },
        metric_as_gauge(),
    )
    .unwrap();
    assert!(s.eval_g(&pr.space, 2).value.is_infinite());
}

#[test]
fn weights_must_start_at_one() {
    let r = PerturbationSeries::new(vec![0], vec![0.5], Tail::None, metric_as_gauge());
    assert!(matches!(r, Err(Error::InvalidParameter(_))));
}

#[test]
fn nonlocal_slope_examples() {
    let pr = p3();
    let at_min = nonlocal_slope(&pr, &single(2, metric_as_gauge()), 2).unwrap();
    assert_eq!(at_min.value, 0.0);
    let at_x0 = nonlocal_slope(&pr, &single(0, metric_as_gauge()), 0).unwrap();
    assert!((at_x0.value - 0.8).abs() < 1e-15);
    assert_eq!(at_x0.argmax, Some(1));
    assert!(at_x0.anomalies.is_empty());

    let flat = Problem::new("flat", pr.space.clone(), vec![ExtReal::finite(3.0); 3], 0, 1.0).unwrap();
    for x in 0..3 {
        assert_eq!(nonlocal_slope(&flat, &single(1, metric_as_gauge()), x).unwrap().value, 0.0);
    }
}

#[test]
fn undefined_slope_when_g_is_infinite() {
    let pr = p3();
    let s = PerturbationSeries::new(vec![0], vec![1.0], Tail::Unknown { weight: f64::INFINITY }, metric_as_gauge())
        .unwrap();
    assert!(matches!(nonlocal_slope(&pr, &s, 1), Err(Error::UndefinedSlope { point: 1 })));
}

fn line_abs_at(x: f64) -> (Problem, Point) {
    let pr = problem_by_name("LINE-ABS").unwrap();
    let p = pr.space.as_grid().unwrap().nearest(&[x]);
    (pr, p)
}

#[test]
fn local_slope_approaches_the_calculus_value() {
    let (pr, x) = line_abs_at(0.5);
    let (_, c) = line_abs_at(0.3);
    let s = single(c, power_norm_gauge(2.0).unwrap());
    let est = local_slope(&pr, &s, x, &[0.1, 0.01, 0.001]).unwrap();
    // descent side u = 0.5 - h: ratio h / (0.4 h - h^2) = 1 / (0.4 - h)
    for (e, h) in est.iter().zip([0.1, 0.01, 0.001]) {
        assert!((e - 1.0 / (0.4 - h)).abs() < 1e-6, "{e} vs h = {h}");
    }
    assert!(est.windows(2).all(|w| w[0] >= w[1]));
    assert!((est[2] - 2.5).abs() < 0.01);
}

#[test]
fn local_slope_at_a_strict_minimum_is_zero() {
    let (pr, x) = line_abs_at(0.0);
    let s = single(x, power_norm_gauge(2.0).unwrap());
    assert_eq!(local_slope(&pr, &s, x, &[0.5, 0.01]).unwrap(), vec![0.0, 0.0]);
}

#[test]
fn radius_below_the_step_is_rejected() {
    let (pr, x) = line_abs_at(0.0);
    let s = single(x, metric_as_gauge());
    assert!(matches!(local_slope(&pr, &s, x, &[1e-4]), Err(Error::EmptyNeighborhood { .. })));
    assert!(local_slope(&p3(), &s, 0, &[1.0]).is_err());
}

#[test]
fn slope_bound_on_p3_ekeland_run() {
    let pr = p3();
    let sch = Schedule::standard(2.0, 0.5, crate::problems::Horizon::Finite(1), SpaceKind::Finite).unwrap();
    let g = metric_as_gauge();
    let r = run(&pr, &g, &sch, &mut ExhaustiveOracle).unwrap();
    let e = slope_bound_check(&r, &pr, &g, &sch, 4.0).unwrap();
    assert!(e.holds);
    assert_eq!(e.margin, 0.5);
    let c = certify(&r, &pr, &g, &sch, &Request { lambda: Some(4.0), ..Request::default() }).unwrap();
    assert!(c.get("slope-pointwise").unwrap().holds);
    // not normalized for lambda = 1
    let skipped = slope_bound_check(&r, &pr, &g, &sch, 1.0).unwrap();
    assert_eq!(skipped.status, crate::certify::EntryStatus::Skipped);
}

proptest! {
    #[test]
    fn slope_ignores_vertical_shifts(shift in -50.0f64..50.0, center in 0usize..3, x in 0usize..3) {
        let pr = p3();
        let shifted: Vec<ExtReal> = pr.values().iter().map(|v| ExtReal::finite(v.value() + shift)).collect();
        let moved = Problem::new("shifted", pr.space.clone(), shifted, pr.x0, pr.epsilon).unwrap();
        let s = single(center, metric_as_gauge());
        let a = nonlocal_slope(&pr, &s, x).unwrap().value;
        let b = nonlocal_slope(&moved, &s, x).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
}
