use fractoda::systems::eval_controlled;
use fractoda::{convergence_metrics, integrate, Equilibrium, FemScheme, IntegratorConfig, ParamSet, State5};

#[test]
fn scalar_linear_field_matches_independent_recursion() {
    for lambda in [-1.0, -0.1, 0.2] {
        for q in [0.5, 0.8, 1.0] {
            let scheme = FemScheme::new(0.01, q).unwrap();
            let kappa = 0.01f64.powf(q) / fractoda::gamma(q + 1.0).unwrap();
            let mut x = [1.0];
            let mut oracle = 1.0f64;
            for j in 1..=1000 {
                x = scheme.step(&x, |v| [lambda * v[0]]);
                oracle += kappa * (lambda * oracle);
                assert_eq!(x[0], oracle, "lambda {lambda}, q {q}, step {j}");
                let closed = (1.0 + kappa * lambda).powi(j);
                assert!((x[0] / closed - 1.0).abs() < 1e-11);
            }
        }
    }
}

#[test]
fn unit_order_is_forward_euler() {
    let p = ParamSet::new(-0.45, 1.0, -0.2, -0.15, 1.01, 1.0).unwrap();
    let xe = Equilibrium::new(1.0, 0.6);
    let h = 0.01;
    let cfg = IntegratorConfig::new(h, 1000, 0.01).unwrap();
    let tr = integrate(&p, &xe, &cfg, true).unwrap();

    let mut x = [0.01, 1.01, 0.61, 0.01, 0.01];
    assert_eq!(tr.states[0].into_array(), x);
    for j in 1..tr.len() {
        let f = eval_controlled(&State5::new(x).unwrap(), &p, &xe);
        for i in 0..5 {
            x[i] += h * f[i];
        }
        assert_eq!(tr.states[j].into_array(), x, "step {j}");
    }
}

#[test]
fn runs_are_deterministic() {
    let p = ParamSet::new(-0.9, 0.08, -0.4, -0.22, -0.06, 0.8).unwrap();
    let xe = Equilibrium::on_x3_axis(-1.0);
    let cfg = IntegratorConfig::new(0.01, 2000, 0.01).unwrap();
    let a = integrate(&p, &xe, &cfg, true).unwrap();
    let b = integrate(&p, &xe, &cfg, true).unwrap();
    assert_eq!(a, b);
}

#[test]
fn stabilized_axis_equilibrium_attracts() {
    let p = ParamSet::new(-0.9, 0.08, -0.4, -0.22, -0.06, 0.8).unwrap();
    let xe = Equilibrium::on_x3_axis(-1.0);
    let cfg = IntegratorConfig::new(0.01, 5000, 0.01).unwrap();
    let tr = integrate(&p, &xe, &cfg, true).unwrap();
    let rep = convergence_metrics(&tr, &xe);
    assert!(rep.final_distance() < 5e-3);
    assert!(rep.ratio < 0.05);
    assert!(rep.monotone_tail);
}

#[test]
fn halving_step_changes_final_distance_boundedly() {
    let p = ParamSet::new(-0.9, 0.08, -0.4, -0.22, -0.06, 0.8).unwrap();
    let xe = Equilibrium::on_x3_axis(-1.0);
    let coarse = integrate(&p, &xe, &IntegratorConfig::new(0.01, 5000, 0.01).unwrap(), true).unwrap();
    let fine = integrate(&p, &xe, &IntegratorConfig::new(0.005, 10000, 0.01).unwrap(), true).unwrap();
    let dc = convergence_metrics(&coarse, &xe).final_distance();
    let df = convergence_metrics(&fine, &xe).final_distance();
    let ratio = dc.max(df) / dc.min(df);
    assert!(ratio < 4.0, "ratio {ratio}");
}
