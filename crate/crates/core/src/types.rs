//! Value types shared across the crate.
//!
//! Every type here is an immutable, `Copy` (or cheaply clonable) value; the
//! constructors enforce the invariants so downstream code can assume them.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Raw five-component vector, used for derivatives and perturbations.
pub type Vector5 = [f64; 5];

/// A point `(x1, x2, x3, x4, x5)` of the five-dimensional phase space.
///
/// `x4` and `x5` are the two lattice bond variables of the three-particle
/// chain. All components are finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State5([f64; 5]);

impl State5 {
    pub const ORIGIN: State5 = State5([0.0; 5]);

    pub fn new(coords: Vector5) -> Result<Self> {
        if coords.iter().all(|c| c.is_finite()) {
            Ok(State5(coords))
        } else {
            Err(Error::NonFiniteState { step: None })
        }
    }

    pub fn as_array(&self) -> &Vector5 {
        &self.0
    }

    pub fn into_array(self) -> Vector5 {
        self.0
    }

    pub fn x1(&self) -> f64 {
        self.0[0]
    }
    pub fn x2(&self) -> f64 {
        self.0[1]
    }
    pub fn x3(&self) -> f64 {
        self.0[2]
    }
    pub fn x4(&self) -> f64 {
        self.0[3]
    }
    pub fn x5(&self) -> f64 {
        self.0[4]
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &State5) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }
}

impl TryFrom<Vector5> for State5 {
    type Error = Error;

    fn try_from(v: Vector5) -> Result<Self> {
        State5::new(v)
    }
}

/// System parameters `a`, `b`, feedback gains `c1..c3` and fractional order `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub q: f64,
}

impl ParamSet {
    /// Builds and validates a parameter set.
    pub fn new(a: f64, b: f64, c1: f64, c2: f64, c3: f64, q: f64) -> Result<Self> {
        let p = ParamSet { a, b, c1, c2, c3, q };
        p.validate()?;
        Ok(p)
    }

    /// Checks that the five coefficients are finite and nonzero and that
    /// `0 < q <= 1`.
    ///
    /// Zero is tested with exact comparison: parameters are user input, not
    /// the result of a computation.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.named_coefficients() {
            if !value.is_finite() {
                return Err(Error::NonFiniteParameter(name));
            }
            if value == 0.0 {
                return Err(Error::ZeroParameter(name));
            }
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::OrderOutOfRange(self.q));
        }
        Ok(())
    }

    pub fn named_coefficients(&self) -> [(&'static str, f64); 5] {
        [
            ("a", self.a),
            ("b", self.b),
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
        ]
    }

    pub fn with_q(self, q: f64) -> Result<Self> {
        let p = ParamSet { q, ..self };
        p.validate()?;
        Ok(p)
    }
}

/// Free-function form of [`ParamSet::validate`].
pub fn validate_params(p: &ParamSet) -> Result<()> {
    p.validate()
}

/// An equilibrium `(0, k, m, 0, 0)` of the uncontrolled lattice.
///
/// `k = m = 0` is the origin; `m = 0` gives the `x2`-axis family, `k = 0`
/// the `x3`-axis family and `k = m` the diagonal family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub k: f64,
    pub m: f64,
}

impl Equilibrium {
    pub const ORIGIN: Equilibrium = Equilibrium { k: 0.0, m: 0.0 };

    pub fn new(k: f64, m: f64) -> Self {
        Equilibrium { k, m }
    }

    /// `(0, k, 0, 0, 0)`
    pub fn on_x2_axis(k: f64) -> Self {
        Equilibrium { k, m: 0.0 }
    }

    /// `(0, 0, m, 0, 0)`
    pub fn on_x3_axis(m: f64) -> Self {
        Equilibrium { k: 0.0, m }
    }

    /// `(0, m, m, 0, 0)`
    pub fn diagonal(m: f64) -> Self {
        Equilibrium { k: m, m }
    }

    pub fn is_origin(&self) -> bool {
        self.k == 0.0 && self.m == 0.0
    }

    /// Embeds the equilibrium into phase space.
    ///
    /// Panics if `k` or `m` is not finite.
    pub fn to_state(&self) -> State5 {
        State5::new([0.0, self.k, self.m, 0.0, 0.0]).expect("equilibrium coordinates must be finite")
    }
}

pub fn to_state(e: &Equilibrium) -> State5 {
    e.to_state()
}

/// Critical fractional order of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalOrder {
    /// `(2/pi) * min |arg lambda|`, in `[0, 2]`.
    Value(f64),
    /// At least one eigenvalue is zero (within tolerance).
    ZeroEigenvalue,
}

impl fmt::Display for CriticalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriticalOrder::Value(v) => write!(f, "{v}"),
            CriticalOrder::ZeroEigenvalue => f.write_str("zero-eigenvalue"),
        }
    }
}

/// Absolute tolerance under which an eigenvalue counts as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;

/// The five eigenvalues of a linearization together with their critical order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSet {
    lambdas: [Complex64; 5],
    q_tilde: CriticalOrder,
}

impl EigenSet {
    pub fn new(lambdas: [Complex64; 5]) -> Self {
        let q_tilde = critical_order_of(&lambdas);
        EigenSet { lambdas, q_tilde }
    }

    pub fn from_real(values: [f64; 5]) -> Self {
        Self::new(values.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn lambdas(&self) -> &[Complex64; 5] {
        &self.lambdas
    }

    pub fn q_tilde(&self) -> CriticalOrder {
        self.q_tilde
    }

    pub fn has_zero(&self) -> bool {
        self.lambdas.iter().any(|l| l.norm() <= ZERO_EIGENVALUE_TOL)
    }
}

pub(crate) fn critical_order_of(lambdas: &[Complex64]) -> CriticalOrder {
    if lambdas.iter().any(|l| l.norm() <= ZERO_EIGENVALUE_TOL) {
        return CriticalOrder::ZeroEigenvalue;
    }
    let min_arg = lambdas
        .iter()
        .map(|l| l.arg().abs())
        .fold(std::f64::consts::PI, f64::min);
    let q = (2.0 / std::f64::consts::PI) * min_arg;
    CriticalOrder::Value(q.clamp(0.0, 2.0))
}

/// Outcome of a stability classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    AsymptoticallyStable,
    CriticallyStable,
    Unstable,
    UnstableZeroEigenvalue,
    /// No closed-form clause covers the parameter combination.
    Undetermined,
}

impl VerdictKind {
    /// Numeric code used in sweep output.
    pub fn code(self) -> u8 {
        match self {
            VerdictKind::AsymptoticallyStable => 0,
            VerdictKind::CriticallyStable => 1,
            VerdictKind::Unstable => 2,
            VerdictKind::UnstableZeroEigenvalue => 3,
            VerdictKind::Undetermined => 4,
        }
    }

    pub fn is_unstable(self) -> bool {
        matches!(self, VerdictKind::Unstable | VerdictKind::UnstableZeroEigenvalue)
    }

    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::AsymptoticallyStable => "AsymptoticallyStable",
            VerdictKind::CriticallyStable => "CriticallyStable",
            VerdictKind::Unstable => "Unstable",
            VerdictKind::UnstableZeroEigenvalue => "UnstableZeroEigenvalue",
            VerdictKind::Undetermined => "Undetermined",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A verdict plus the eigenvalue that decided it, when there is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    pub witness: Option<Complex64>,
}

impl StabilityVerdict {
    pub fn new(kind: VerdictKind, witness: Option<Complex64>) -> Self {
        StabilityVerdict { kind, witness }
    }
}

/// Step size, step count and initial perturbation for an integration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    h: f64,
    n_steps: usize,
    epsilon: f64,
    perturbation: Option<Vector5>,
}

impl IntegratorConfig {
    pub fn new(h: f64, n_steps: usize, epsilon: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidConfig(format!("step size h = {h} must be positive")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidConfig("step count N must be at least 1".into()));
        }
        if !epsilon.is_finite() {
            return Err(Error::InvalidConfig("epsilon must be finite".into()));
        }
        Ok(IntegratorConfig {
            h,
            n_steps,
            epsilon,
            perturbation: None,
        })
    }

    /// Replaces the uniform `epsilon` offset with an explicit vector.
    pub fn with_perturbation(mut self, v: Vector5) -> Result<Self> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidConfig("perturbation must be finite".into()));
        }
        self.perturbation = Some(v);
        Ok(self)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `N * h`
    pub fn horizon(&self) -> f64 {
        self.n_steps as f64 * self.h
    }

    /// Offset added to the equilibrium to form the initial state.
    pub fn offset(&self) -> Vector5 {
        self.perturbation.unwrap_or([self.epsilon; 5])
    }
}
