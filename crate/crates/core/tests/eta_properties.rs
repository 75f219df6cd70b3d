use eta_embed::numkernel::c;
use eta_embed::{eta, EtaError, eta_oracle, functional_residual, EvalConfig};

fn grid(n_sigma: usize, n_t: usize, sigma: (f64, f64), t: (f64, f64)) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..n_sigma {
        let s = sigma.0 + (sigma.1 - sigma.0) * i as f64 / (n_sigma - 1) as f64;
        for j in 0..n_t {
            let tt = t.0 + (t.1 - t.0) * j as f64 / (n_t - 1) as f64;
            out.push((s, tt));
        }
    }
    out
}

#[test]
fn conjugation_symmetry() {
    let cfg = EvalConfig::default();
    for (s, t) in grid(6, 7, (-3.0, 4.0), (0.5, 40.0)) {
        let a = eta(c(s, t), &cfg).unwrap().value;
        let b = eta(c(s, -t), &cfg).unwrap().value;
        assert!((a.conj() - b).norm() <= 1e-14 * a.norm().max(1.0), "{s} {t}");
    }
}

#[test]
fn oracle_agreement_on_grid() {
    let cfg = EvalConfig::default();
    let mut worst: f64 = 0.0;
    for (s, t) in grid(10, 17, (0.5, 5.0), (-40.0, 40.0)) {
        let z = c(s, t);
        let a = eta(z, &cfg).unwrap();
        let b = eta_oracle(z, 64).unwrap();
        let err = (a.value - b).norm();
        worst = worst.max(err);
        assert!(err <= 1e-9, "{z}: {err:e}");
        // est_error bounds the observed discrepancy (oracle error is far smaller)
        assert!(err <= a.est_error + 1e-15, "{z}: err {err:e} est {:e}", a.est_error);
    }
    eprintln!("worst oracle disagreement {worst:e}");
}

#[test]
fn functional_residual_on_audit_grid() {
    let cfg = EvalConfig::default();
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for (s, t) in grid(8, 25, (-3.0, 4.0), (-30.0, 30.0)) {
        let z = c(s, t);
        match functional_residual(z, &cfg) {
            Ok(r) => {
                worst = worst.max(r);
                assert!(r < 1e-8, "{z}: {r:e}");
            }
            Err(EtaError::Singularity(_)) => skipped += 1,
            Err(e) => panic!("{z}: {e}"),
        }
    }
    // s = 0, 1, 3 on the real axis
    assert_eq!(skipped, 3);
    eprintln!("worst functional residual {worst:e}");
}

#[test]
fn envelope_high_t_converges() {
    let cfg = EvalConfig::default();
    for (s, t) in [(0.5, 60.0), (-3.0, 55.0), (2.0, -60.0)] {
        let v = eta(c(s, t), &cfg).unwrap();
        assert!(v.est_error < 1e-6, "{s}+{t}i: {v:?}");
    }
}
