use eta_embed::zeros::{bisect_zero, count_strip_zeros, locate_zeros, winding_number, Rect};
use eta_embed::EvalConfig;

#[test]
fn counts_match_located_zeros_per_window() {
    let cfg = EvalConfig::default();
    for (lo, hi) in [(10.0, 20.0), (20.0, 30.0), (30.0, 45.0), (45.0, 60.0)] {
        let zeros = locate_zeros(lo, hi, 0.05, &cfg).unwrap();
        let count = count_strip_zeros(lo, hi, &cfg).unwrap();
        assert_eq!(count.nontrivial, zeros.len() as i64, "window [{lo}, {hi}]: {zeros:?}");
    }
}

#[test]
fn located_zeros_lie_on_the_line_and_agree_with_bisection() {
    let cfg = EvalConfig::default();
    let zeros = locate_zeros(10.0, 60.0, 0.05, &cfg).unwrap();
    assert_eq!(zeros.len(), 13);
    for z in &zeros {
        assert!((z.sigma - 0.5).abs() < 1e-6, "{z:?}");
        assert!(z.residual < 1e-9);
        let b = bisect_zero(z.t - 0.02, z.t + 0.02, &cfg).unwrap();
        assert!((b.t - z.t).abs() < 1e-6, "{z:?} vs {b:?}");
    }
}

#[test]
fn windings_are_near_integers() {
    let cfg = EvalConfig::default();
    let boxes = [
        Rect::new(-0.5, 1.5, 10.0, 30.0).unwrap(),
        Rect::new(-0.5, 1.5, 1.0, 10.0).unwrap(),
        Rect::new(0.2, 0.8, 14.0, 14.3).unwrap(),
        Rect::new(2.0, 4.0, 5.0, 50.0).unwrap(),
        Rect::new(-5.0, -3.0, -1.0, 1.0).unwrap(),
        Rect::new(-7.0, -0.5, -2.0, 2.0).unwrap(),
    ];
    let want = [5.0, 1.0, 1.0, 0.0, 1.0, 3.0];
    for (r, w) in boxes.iter().zip(want) {
        let got = winding_number(r, &cfg).unwrap();
        assert!((got - w).abs() < 0.05, "{r:?}: {got}");
    }
}
