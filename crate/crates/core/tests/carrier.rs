use piecewise_attractor::carrier::{
    bifurcation_scan, detect_period, iterate_carrier, lyapunov_exponent, CarrierConfig,
    DetectionSettings, RegimeKind,
};
use proptest::prelude::*;

fn defaults() -> DetectionSettings {
    DetectionSettings::default()
}

#[test]
fn worksheet_iterlog_prefix() {
    let seq = iterate_carrier(&CarrierConfig {
        lambda: 3.5,
        x0: 0.5,
        niter: 8,
    })
    .unwrap();
    let printed = [5.0, 8.75, 3.828, 8.269, 5.009, 8.75, 3.828, 8.269, 5.009];
    assert_eq!(seq.radii.len(), 9);
    for (got, want) in seq.radii.iter().zip(printed) {
        assert!((got - want).abs() < 5e-4, "{got} vs {want}");
    }
}

#[test]
fn regimes_of_the_paired_lambdas() {
    let cases = [
        (3.30, Some(2)),
        (3.50, Some(4)),
        (3.55, Some(8)),
        (3.70, None),
    ];
    for (lambda, period) in cases {
        let r = detect_period(lambda, 0.5, &defaults()).unwrap();
        match period {
            Some(p) => assert_eq!(r.period(), Some(p), "lambda = {lambda}: {r:?}"),
            None => assert!(r.is_chaotic(), "lambda = {lambda}: {r:?}"),
        }
    }
}

#[test]
fn period_four_cycle_values() {
    let r = detect_period(3.5, 0.5, &defaults()).unwrap();
    let cycle = r.cycle().unwrap();
    assert_eq!(cycle.len(), 4);
    // Direct iteration from x0 = 0.5 reaches the worksheet values at once.
    let mut x: f64 = 0.5;
    let mut direct = Vec::new();
    for _ in 0..4 {
        x = 3.5 * x * (1.0 - x);
        direct.push(x);
    }
    assert_eq!(direct[0], 0.875);
    assert_eq!(direct[1], 0.3828125);
    let mut sorted_cycle = cycle.to_vec();
    sorted_cycle.sort_by(f64::total_cmp);
    direct.sort_by(f64::total_cmp);
    for (a, b) in sorted_cycle.iter().zip(&direct) {
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
    }
    let mut expected = [0.875, 0.3828125, 0.826940, 0.500884];
    expected.sort_by(f64::total_cmp);
    for (a, b) in sorted_cycle.iter().zip(expected) {
        assert!((a - b).abs() < 1e-5, "{a} vs {b}");
    }
}

#[test]
fn chaotic_sequence_never_repeats() {
    let seq = iterate_carrier(&CarrierConfig {
        lambda: 3.7,
        x0: 0.5,
        niter: 100,
    })
    .unwrap();
    let xs = &seq.xs;
    // Brute-force cycle search: does any period p make the tail repeat?
    for p in 1..=50 {
        let tail = &xs[xs.len() - 2 * p..];
        let repeats = (0..p).all(|k| (tail[k + p] - tail[k]).abs() < 1e-9);
        assert!(!repeats, "spurious cycle of length {p}");
    }
}

#[test]
fn lyapunov_at_full_chaos_is_ln2() {
    // Independent mean of ln|4(1−2x)|.
    let mut x: f64 = 0.3;
    for _ in 0..1000 {
        x = 4.0 * x * (1.0 - x);
    }
    let n = 200_000;
    let mut sum = 0.0;
    for _ in 0..n {
        sum += (4.0 * (1.0 - 2.0 * x)).abs().ln();
        x = 4.0 * x * (1.0 - x);
    }
    let brute = sum / n as f64;
    let est = lyapunov_exponent(4.0, 0.3, 1000, n).unwrap();
    assert!((est - brute).abs() < 1e-9);
    assert!((est - std::f64::consts::LN_2).abs() < 0.01, "{est}");
}

#[test]
fn lyapunov_sign_tracks_regime() {
    let periodic = detect_period(3.5, 0.5, &defaults()).unwrap();
    assert!(periodic.lyapunov_estimate.unwrap() < 0.0);
    let chaotic = detect_period(3.7, 0.5, &defaults()).unwrap();
    assert!(chaotic.lyapunov_estimate.unwrap() > 0.0);
}

#[test]
fn period_doubling_cascade() {
    let scan = bifurcation_scan(3.0, 3.56995, 100, 0.5, &defaults()).unwrap();
    assert_eq!(scan.len(), 100);
    let periods: Vec<usize> = scan.iter().filter_map(|p| p.result.period()).collect();
    assert!(
        periods.len() >= 80,
        "only {} periodic points",
        periods.len()
    );
    for p in &periods {
        assert!(p.is_power_of_two(), "period {p}");
    }
    for w in periods.windows(2) {
        assert!(w[1] >= w[0], "period dropped from {} to {}", w[0], w[1]);
    }
    // λ = 3.0 is the first flip point itself, so period 1 never appears.
    for p in [2, 4, 8] {
        assert!(periods.contains(&p), "cascade misses period {p}");
    }
    for w in scan.windows(2) {
        assert!(w[1].lambda > w[0].lambda);
    }
}

#[test]
fn degenerate_and_subcritical_scans() {
    let scan = bifurcation_scan(3.30, 3.30, 2, 0.5, &defaults()).unwrap();
    assert!(scan.iter().all(|p| p.result.period() == Some(2)));

    let scan = bifurcation_scan(0.5, 0.9, 5, 0.5, &defaults()).unwrap();
    for point in scan {
        match &point.result.kind {
            RegimeKind::Periodic { period: 1, cycle } => assert!(cycle[0].abs() < 1e-12),
            other => panic!("lambda = {}: {other:?}", point.lambda),
        }
    }
}

#[test]
fn invalid_inputs() {
    assert!(detect_period(4.5, 0.5, &defaults()).is_err());
    assert!(detect_period(3.5, 1.5, &defaults()).is_err());
    assert!(bifurcation_scan(3.0, 4.2, 10, 0.5, &defaults()).is_err());
}

proptest! {
    #[test]
    fn iterates_stay_in_unit_interval(lambda in 0.0f64..=4.0, x0 in 0.0f64..=1.0) {
        let seq = iterate_carrier(&CarrierConfig { lambda, x0, niter: 300 }).unwrap();
        prop_assert!(seq.xs.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert_eq!(seq.radii.len(), 301);
    }

    #[test]
    fn iteration_is_deterministic(lambda in 0.0f64..=4.0, x0 in 0.0f64..=1.0, niter in 1usize..200) {
        let cfg = CarrierConfig { lambda, x0, niter };
        let a = iterate_carrier(&cfg).unwrap();
        let b = iterate_carrier(&cfg).unwrap();
        prop_assert!(a.xs.iter().zip(&b.xs).all(|(p, q)| p.to_bits() == q.to_bits()));
        prop_assert!(a.radii.iter().zip(&a.xs).all(|(r, x)| *r == 10.0 * x));
    }

    #[test]
    fn detected_cycles_have_distinct_values(lambda in 2.9f64..3.56) {
        let r = detect_period(lambda, 0.5, &defaults()).unwrap();
        if let Some(cycle) = r.cycle() {
            for i in 0..cycle.len() {
                for j in i + 1..cycle.len() {
                    prop_assert!((cycle[i] - cycle[j]).abs() > 1e-9);
                }
            }
        }
    }
}
