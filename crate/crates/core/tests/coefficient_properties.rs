use eta_embed::audit::strip_points;
use eta_embed::coefficients::{expansion_eval, inversion_eval, CoeffTable, DEFAULT_ORDER, DEFAULT_SERIES_TOL};
use eta_embed::{eta, eta_embedding, EmbeddingParams, EvalConfig};
use proptest::prelude::*;

#[test]
fn expansion_and_inversion_on_strip_grid() {
    let cfg = EvalConfig::default();
    let mut worst_exp: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    for kappa in [1.5, 2.0, 5.0, 10.0] {
        let table = CoeffTable::build(kappa, DEFAULT_ORDER, DEFAULT_SERIES_TOL).unwrap();
        for nu in [0.6, 1.0, 2.0] {
            let p = EmbeddingParams::new(kappa, nu).unwrap();
            for s in strip_points() {
                let direct = eta_embedding(s, &p, &cfg).unwrap().value;
                let expanded = expansion_eval(s, &table, nu, &cfg).unwrap().value;
                worst_exp = worst_exp.max((direct - expanded).norm());
                let back = inversion_eval(s, &table, nu, &cfg).unwrap().value;
                worst_inv = worst_inv.max((back - eta(s, &cfg).unwrap().value).norm());
            }
        }
    }
    assert!(worst_exp < 1e-9, "expansion {worst_exp:e}");
    assert!(worst_inv < 1e-8, "inversion {worst_inv:e}");
}

#[test]
fn tables_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<CoeffTable>();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convolution_inverse_holds(kappa in 1.0f64..50.0, order in 1usize..40) {
        let t = CoeffTable::build(kappa, order, DEFAULT_SERIES_TOL).unwrap();
        prop_assert!((t.a[0] - 1.0).abs() < 1e-14);
        prop_assert_eq!(t.b[0], 1.0);
        prop_assert!(t.convolution_residual() < 1e-12);
    }

    #[test]
    fn coefficients_decay_at_least_like_kappa_power(kappa in 1.2f64..20.0) {
        let t = CoeffTable::build(kappa, 20, DEFAULT_SERIES_TOL).unwrap();
        let scaled: Vec<f64> = (0..=20).map(|n| t.a[n].abs() * kappa.powi(2 * n as i32)).collect();
        let c0 = scaled[..4].iter().cloned().fold(0.0, f64::max);
        prop_assert!(scaled.iter().all(|v| *v <= c0 * (1.0 + 1e-12)));
    }

    #[test]
    fn json_round_trip(kappa in 1.0f64..20.0, order in 0usize..20) {
        let t = CoeffTable::build(kappa, order, DEFAULT_SERIES_TOL).unwrap();
        let back: CoeffTable = serde_json::from_str(&t.to_json()).unwrap();
        prop_assert_eq!(back.a, t.a);
        prop_assert_eq!(back.b, t.b);
        prop_assert_eq!(back.order, t.order);
    }
}
