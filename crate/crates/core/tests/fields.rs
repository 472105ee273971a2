mod common;

use common::{finite_difference_jacobian, max_abs_diff, nonzero, random_params, random_state};
use fractoda::systems::{
    eval_controlled, eval_matrix_form, eval_toda_n, eval_uncontrolled, is_equilibrium, jacobian_controlled,
    jacobian_uncontrolled, GenericTodaState,
};
use fractoda::{Equilibrium, State5};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn matrix_form_matches_components_on_small_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = random_params(&mut rng, 2.0);
    for _ in 0..100 {
        let s = random_state(&mut rng, 2.0);
        let a = eval_uncontrolled(&s, &p);
        let b = eval_matrix_form(&s, &p);
        for i in 0..5 {
            assert!((a[i] - b[i]).abs() <= 1e-12);
        }
    }
}

#[test]
fn jacobians_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let p = random_params(&mut rng, 2.0);
        let s = random_state(&mut rng, 10.0);
        let xe = Equilibrium::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));

        let fd = finite_difference_jacobian(|x| eval_uncontrolled(x, &p), &s, 1e-5);
        assert!(max_abs_diff(&fd, &jacobian_uncontrolled(&s, &p)) < 1e-6);

        let fd = finite_difference_jacobian(|x| eval_controlled(x, &p, &xe), &s, 1e-5);
        assert!(max_abs_diff(&fd, &jacobian_controlled(&s, &p, &xe)) < 1e-6);
    }
}

#[test]
fn three_particle_lattice_reproduces_five_dimensional_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let p = random_params(&mut rng, 2.0);
        let s = random_state(&mut rng, 5.0);
        let [x1, x2, x3, x4, x5] = *s.as_array();
        let lattice = GenericTodaState::new(vec![x1, x2, x3], vec![x4, x5]).unwrap();
        let d = eval_toda_n(&lattice).unwrap();
        let assembled = [d.x[0] + p.a * x1, d.x[1], d.x[2], d.y[0], d.y[1] + p.b * x5];
        let direct = eval_uncontrolled(&s, &p);
        for i in 0..5 {
            assert!((assembled[i] - direct[i]).abs() <= 1e-12, "component {i}");
        }
    }
}

#[test]
fn equilibrium_family_at_zero_tolerance() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let p = random_params(&mut rng, 2.0);
        let xe = Equilibrium::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        assert!(is_equilibrium(&xe.to_state(), &p, 0.0));
        assert_eq!(eval_controlled(&xe.to_state(), &p, &xe), [0.0; 5]);
    }
}

#[test]
fn off_family_points_are_not_equilibria() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let p = random_params(&mut rng, 2.0);
    for coord in [0, 3, 4] {
        let mut v = [0.0, 1.0, 2.0, 0.0, 0.0];
        v[coord] = nonzero(&mut rng, 1.0).signum() * 0.5;
        assert!(
            !is_equilibrium(&State5::new(v).unwrap(), &p, 1e-12),
            "coordinate {coord}"
        );
    }
}

proptest! {
    #[test]
    fn matrix_form_equivalence(
        v in prop::array::uniform5(-10.0f64..10.0),
        a in -2.0f64..2.0, b in -2.0f64..2.0,
    ) {
        prop_assume!(a != 0.0 && b != 0.0);
        let p = fractoda::ParamSet::new(a, b, 1.0, 1.0, 1.0, 0.5).unwrap();
        let s = State5::new(v).unwrap();
        let lhs = eval_matrix_form(&s, &p);
        let rhs = eval_uncontrolled(&s, &p);
        for i in 0..5 {
            prop_assert!((lhs[i] - rhs[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn feedback_difference_is_exact(
        v in prop::array::uniform5(-10.0f64..10.0),
        gains in prop::array::uniform3(0.01f64..2.0),
        k in -5.0f64..5.0, m in -5.0f64..5.0,
    ) {
        let p = fractoda::ParamSet::new(-1.0, 0.5, gains[0], -gains[1], gains[2], 0.5).unwrap();
        let s = State5::new(v).unwrap();
        let xe = Equilibrium::new(k, m);
        let fc = eval_controlled(&s, &p, &xe);
        let fu = eval_uncontrolled(&s, &p);
        let feedback = [0.0, p.c1 * (v[1] - k), p.c2 * (v[2] - m), p.c3 * v[3], 0.0];
        for i in 0..5 {
            prop_assert_eq!(fc[i], fu[i] + feedback[i]);
        }
    }

    #[test]
    fn to_state_is_injective(k1 in -1e3f64..1e3, m1 in -1e3f64..1e3, k2 in -1e3f64..1e3, m2 in -1e3f64..1e3) {
        let a = Equilibrium::new(k1, m1).to_state();
        let b = Equilibrium::new(k2, m2).to_state();
        prop_assert_eq!(a == b, k1 == k2 && m1 == m2);
    }
}
