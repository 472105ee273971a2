//! Memoryless fractional Euler scheme.
//!
//! Each step advances `x_{j+1} = x_j + kappa * f(x_j)` with
//! `kappa = h^q / Gamma(q + 1)`. At `q = 1` this is forward Euler. The
//! Caputo history term is not carried, so the scheme is cheap (O(N)) but not
//! order-consistent in `q`.

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::systems::{eval_controlled, eval_uncontrolled};
use crate::types::{Equilibrium, IntegratorConfig, ParamSet, State5};

/// Integration stops once any coordinate exceeds this magnitude.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Step size and order, with the scheme coefficient precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FemScheme {
    h: f64,
    q: f64,
    coefficient: f64,
}

impl FemScheme {
    pub fn new(h: f64, q: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidConfig(format!("step size h = {h} must be positive")));
        }
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::OrderOutOfRange(q));
        }
        let coefficient = h.powf(q) / gamma(q + 1.0)?;
        Ok(FemScheme { h, q, coefficient })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `h^q / Gamma(q + 1)`
    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    /// One step on an arbitrary fixed-size state.
    pub fn step<const N: usize, F>(&self, x: &[f64; N], field: F) -> [f64; N]
    where
        F: Fn(&[f64; N]) -> [f64; N],
    {
        let f = field(x);
        let mut out = *x;
        for (o, fi) in out.iter_mut().zip(f) {
            *o += self.coefficient * fi;
        }
        out
    }
}

/// A single fractional Euler step; builds the coefficient from `h` and `q`.
///
/// Prefer [`FemScheme`] in loops so the coefficient is computed once.
pub fn fem_step<const N: usize, F>(x: &[f64; N], field: F, h: f64, q: f64) -> Result<[f64; N]>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let next = FemScheme::new(h, q)?.step(x, field);
    if next.iter().all(|v| v.is_finite()) {
        Ok(next)
    } else {
        Err(Error::NonFiniteState { step: Some(1) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    /// The state at `step` exceeded [`DIVERGENCE_THRESHOLD`]; it is not
    /// recorded, so the trajectory holds steps `0..step`.
    Diverged {
        step: usize,
    },
}

/// Recorded run: `times[j] = j * h` and the matching states.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State5>,
    pub params: ParamSet,
    pub config: IntegratorConfig,
    pub target: Equilibrium,
    pub controlled: bool,
    pub coefficient: f64,
    pub status: RunStatus,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&State5> {
        self.states.last()
    }

    pub fn diverged(&self) -> bool {
        matches!(self.status, RunStatus::Diverged { .. })
    }
}

/// Runs the scheme from `xe` plus the configured offset.
///
/// Uses the feedback field towards `xe` when `controlled` is set, the bare
/// field otherwise.
pub fn integrate(p: &ParamSet, xe: &Equilibrium, cfg: &IntegratorConfig, controlled: bool) -> Result<Trajectory> {
    p.validate()?;
    let scheme = FemScheme::new(cfg.h(), p.q)?;
    let field = |x: &[f64; 5]| {
        // states reaching the field are always finite
        let s = State5::new(*x).expect("finite state");
        if controlled {
            eval_controlled(&s, p, xe)
        } else {
            eval_uncontrolled(&s, p)
        }
    };

    let mut x = *xe.to_state().as_array();
    for (xi, d) in x.iter_mut().zip(cfg.offset()) {
        *xi += d;
    }
    let n = cfg.n_steps();
    let mut states = Vec::with_capacity(n + 1);
    states.push(State5::new(x).map_err(|_| Error::NonFiniteState { step: Some(0) })?);
    let mut status = RunStatus::Completed;

    for j in 1..=n {
        x = scheme.step(&x, field);
        let s = State5::new(x).map_err(|_| Error::NonFiniteState { step: Some(j) })?;
        if s.max_abs() > DIVERGENCE_THRESHOLD {
            status = RunStatus::Diverged { step: j };
            break;
        }
        states.push(s);
    }

    let times = (0..states.len()).map(|j| j as f64 * cfg.h()).collect();
    Ok(Trajectory {
        times,
        states,
        params: *p,
        config: *cfg,
        target: *xe,
        controlled,
        coefficient: scheme.coefficient(),
        status,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// Euclidean distance of each state to the target.
    pub distances: Vec<f64>,
    /// `d_N / d_0`, or 0 when the run starts on the target.
    pub ratio: f64,
    /// Distances are nonincreasing over the last half of the run.
    pub monotone_tail: bool,
}

impl ConvergenceReport {
    pub fn final_distance(&self) -> f64 {
        *self.distances.last().expect("nonempty trajectory")
    }
}

pub fn convergence_metrics(tr: &Trajectory, xe: &Equilibrium) -> ConvergenceReport {
    assert!(!tr.is_empty(), "trajectory must be nonempty");
    let target = xe.to_state();
    let distances: Vec<f64> = tr.states.iter().map(|s| s.distance(&target)).collect();
    let first = distances[0];
    let last = *distances.last().unwrap();
    let ratio = if first == 0.0 { 0.0 } else { last / first };
    let tail = &distances[distances.len() / 2..];
    let monotone_tail = tail.windows(2).all(|w| w[1] <= w[0]);
    ConvergenceReport {
        distances,
        ratio,
        monotone_tail,
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn classical_coefficient() {
        let s = FemScheme::new(0.01, 1.0).unwrap();
        assert_eq!(s.coefficient(), 0.01);
    }

    #[test]
    fn scalar_decay_step() {
        // 1 - 0.01^0.8 / Gamma(1.8), evaluated with 40-digit arithmetic
        let x1 = fem_step(&[1.0], |x| [-x[0]], 0.01, 0.8).unwrap();
        assert!((x1[0] - 0.97303059694860343049).abs() < 1e-14);
        let kappa = FemScheme::new(0.01, 0.8).unwrap().coefficient();
        assert!((kappa - 0.026969403051396569511).abs() < 1e-15);
    }

    #[test]
    fn zero_field_is_fixed() {
        for (h, q) in [(0.01, 0.3), (0.5, 1.0), (1e-4, 0.9)] {
            let x = [1.5, -2.0, 3.25];
            assert_eq!(fem_step(&x, |_| [0.0; 3], h, q).unwrap(), x);
        }
    }

    #[test]
    fn step_rejects_bad_inputs() {
        assert!(fem_step(&[1.0], |x| [-x[0]], 0.0, 0.5).is_err());
        assert!(fem_step(&[1.0], |x| [-x[0]], 0.1, 0.0).is_err());
        assert!(matches!(
            fem_step(&[1.0], |_| [f64::INFINITY], 0.1, 0.5),
            Err(Error::NonFiniteState { step: Some(1) })
        ));
    }

    #[test]
    fn zero_epsilon_stays_on_equilibrium() {
        let p = ParamSet::new(-0.45, 1.0, -0.2, -0.15, 1.01, 0.8).unwrap();
        let xe = Equilibrium::new(1.0, 0.6);
        let cfg = IntegratorConfig::new(0.01, 50, 0.0).unwrap();
        for controlled in [true, false] {
            let tr = integrate(&p, &xe, &cfg, controlled).unwrap();
            assert_eq!(tr.len(), 51);
            assert!(tr.states.iter().all(|s| *s == xe.to_state()));
            let rep = convergence_metrics(&tr, &xe);
            assert!(rep.distances.iter().all(|d| *d == 0.0));
            assert_eq!(rep.ratio, 0.0);
            assert!(rep.monotone_tail);
        }
    }

    #[test]
    fn initial_state_and_times() {
        let p = ParamSet::new(-0.45, 1.0, -0.2, -0.15, 1.01, 0.8).unwrap();
        let xe = Equilibrium::new(1.0, 0.6);
        let cfg = IntegratorConfig::new(0.01, 100, 0.01).unwrap();
        let tr = integrate(&p, &xe, &cfg, true).unwrap();
        assert_eq!(tr.len(), 101);
        assert_eq!(tr.times.len(), 101);
        assert_eq!(tr.times[100], 100.0 * 0.01);
        assert_eq!(tr.states[0].into_array(), [0.01, 1.0 + 0.01, 0.6 + 0.01, 0.01, 0.01]);
        assert_eq!(tr.status, RunStatus::Completed);
    }

    #[test]
    fn custom_perturbation() {
        let p = ParamSet::new(-1.0, -1.0, -1.0, -1.0, -1.0, 0.5).unwrap();
        let cfg = IntegratorConfig::new(0.01, 3, 0.5)
            .unwrap()
            .with_perturbation([0.0, 0.0, 0.1, 0.0, 0.0])
            .unwrap();
        let tr = integrate(&p, &Equilibrium::ORIGIN, &cfg, true).unwrap();
        assert_eq!(tr.states[0].into_array(), [0.0, 0.0, 0.1, 0.0, 0.0]);
    }

    #[test]
    fn divergence_stops_early() {
        // a > 0 drives x1 away exponentially
        let p = ParamSet::new(2.0, -1.0, -1.0, -1.0, -1.0, 0.8).unwrap();
        let cfg = IntegratorConfig::new(0.01, 5000, 0.01).unwrap();
        let tr = integrate(&p, &Equilibrium::ORIGIN, &cfg, true).unwrap();
        let RunStatus::Diverged { step } = tr.status else {
            panic!("expected divergence, got {:?}", tr.status);
        };
        assert_eq!(tr.len(), step);
        assert!(tr.states.iter().all(|s| s.max_abs() <= DIVERGENCE_THRESHOLD));
        let rep = convergence_metrics(&tr, &Equilibrium::ORIGIN);
        assert!(rep.final_distance() > 1.0);
    }

    #[test]
    fn escape_from_unstable_origin_settles_nearby() {
        // with b > 0 the origin is unstable, but the orbit is captured by a
        // stable member of the x3-axis family instead of growing without bound
        let p = ParamSet::new(-0.8, 0.2, -0.03, -0.02, -0.001, 0.8).unwrap();
        let cfg = IntegratorConfig::new(0.01, 2000, 0.01).unwrap();
        let tr = integrate(&p, &Equilibrium::ORIGIN, &cfg, true).unwrap();
        let rep = convergence_metrics(&tr, &Equilibrium::ORIGIN);
        assert!(rep.ratio > 10.0);
        assert!(rep.final_distance() < 1.0);
        assert!(tr.last().unwrap().x3() < -0.2);
    }
}
