#![allow(dead_code)]

use fractoda::systems::Matrix5;
use fractoda::{ParamSet, State5, Vector5};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Uniform draw from `[-bound, bound]` that is never exactly zero.
pub fn nonzero(rng: &mut ChaCha8Rng, bound: f64) -> f64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0.0 {
            return v;
        }
    }
}

pub fn random_params(rng: &mut ChaCha8Rng, bound: f64) -> ParamSet {
    let q = rng.gen_range(0.05..0.95);
    ParamSet::new(
        nonzero(rng, bound),
        nonzero(rng, bound),
        nonzero(rng, bound),
        nonzero(rng, bound),
        nonzero(rng, bound),
        q,
    )
    .unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng, bound: f64) -> State5 {
    let mut v = [0.0; 5];
    for x in v.iter_mut() {
        *x = rng.gen_range(-bound..=bound);
    }
    State5::new(v).unwrap()
}

/// Central-difference Jacobian of `field` at `s`.
pub fn finite_difference_jacobian<F>(field: F, s: &State5, step: f64) -> Matrix5
where
    F: Fn(&State5) -> Vector5,
{
    let mut jac = [[0.0; 5]; 5];
    for col in 0..5 {
        let mut plus = *s.as_array();
        let mut minus = *s.as_array();
        plus[col] += step;
        minus[col] -= step;
        let fp = field(&State5::new(plus).unwrap());
        let fm = field(&State5::new(minus).unwrap());
        for row in 0..5 {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * step);
        }
    }
    jac
}

pub fn max_abs_diff(a: &Matrix5, b: &Matrix5) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}
