//! Vector fields and Jacobians of the fractional Toda lattice.
//!
//! The five-dimensional system is the three-particle lattice in Flaschka
//! coordinates with the bond variables renamed `y1 = x4`, `y2 = x5`, plus two
//! linear terms `a * x1` and `b * x5`:
//!
//! ```text
//! D^q x1 = 2 x4^2 + a x1
//! D^q x2 = 2 (x5^2 - x4^2)
//! D^q x3 = -2 x5^2
//! D^q x4 = x4 (x2 - x1)
//! D^q x5 = x5 (x3 - x2) + b x5
//! ```
//!
//! The controlled variant adds feedback `c1 (x2 - k)`, `c2 (x3 - m)` and
//! `c3 x4` towards an equilibrium `(0, k, m, 0, 0)`.

use crate::error::{Error, Result};
use crate::types::{Equilibrium, ParamSet, State5, Vector5};

pub type Matrix5 = [[f64; 5]; 5];

/// Coefficient matrix of the `x4`-weighted quadratic part.
pub const A1: Matrix5 = [
    [0.0, 0.0, 0.0, 2.0, 0.0],
    [0.0, 0.0, 0.0, -2.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [-1.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
];

/// Coefficient matrix of the `x5`-weighted quadratic part.
pub const A2: Matrix5 = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 2.0],
    [0.0, 0.0, 0.0, 0.0, -2.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 1.0, 0.0, 0.0],
];

/// Linear part: `a` at (1,1), `b` at (5,5).
pub fn a3(p: &ParamSet) -> Matrix5 {
    let mut m = [[0.0; 5]; 5];
    m[0][0] = p.a;
    m[4][4] = p.b;
    m
}

pub fn mat_vec(m: &Matrix5, v: &Vector5) -> Vector5 {
    let mut out = [0.0; 5];
    for (o, row) in out.iter_mut().zip(m.iter()) {
        *o = row.iter().zip(v.iter()).map(|(r, x)| r * x).sum();
    }
    out
}

pub fn frobenius_norm(m: &Matrix5) -> f64 {
    m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// State of the `n`-particle lattice: positions-like `x` (length `n`) and
/// bonds `y` (length `n - 1`). The boundary bonds `y0`, `yn` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericTodaState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl GenericTodaState {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let s = GenericTodaState { x, y };
        s.check()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.x.len();
        if n < 2 {
            return Err(Error::DimensionMismatch(format!("lattice needs n >= 2, got {n}")));
        }
        if self.y.len() != n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} bond variables for n = {n}, got {}",
                n - 1,
                self.y.len()
            )));
        }
        Ok(())
    }
}

/// Right-hand side of the unperturbed `n`-particle lattice.
pub fn eval_toda_n(s: &GenericTodaState) -> Result<GenericTodaState> {
    s.check()?;
    let n = s.n();
    // bond j in 0..=n, with the two boundary bonds pinned to zero
    let bond = |j: usize| if j == 0 || j == n { 0.0 } else { s.y[j - 1] };
    let dx = (1..=n)
        .map(|i| 2.0 * (bond(i) * bond(i) - bond(i - 1) * bond(i - 1)))
        .collect();
    let dy = (1..n).map(|j| s.y[j - 1] * (s.x[j] - s.x[j - 1])).collect();
    Ok(GenericTodaState { x: dx, y: dy })
}

/// Uncontrolled five-dimensional field, componentwise.
pub fn eval_uncontrolled(s: &State5, p: &ParamSet) -> Vector5 {
    let [x1, x2, x3, x4, x5] = *s.as_array();
    [
        2.0 * x4 * x4 + p.a * x1,
        2.0 * (x5 * x5 - x4 * x4),
        -2.0 * x5 * x5,
        x4 * (x2 - x1),
        x5 * (x3 - x2) + p.b * x5,
    ]
}

/// Same field assembled as `x4 A1 x + x5 A2 x + A3 x`.
pub fn eval_matrix_form(s: &State5, p: &ParamSet) -> Vector5 {
    let x = s.as_array();
    let q1 = mat_vec(&A1, x);
    let q2 = mat_vec(&A2, x);
    let lin = mat_vec(&a3(p), x);
    let mut out = [0.0; 5];
    for i in 0..5 {
        out[i] = x[3] * q1[i] + x[4] * q2[i] + lin[i];
    }
    out
}

/// Field with linear feedback towards `xe` on the `x2`, `x3`, `x4` axes.
pub fn eval_controlled(s: &State5, p: &ParamSet, xe: &Equilibrium) -> Vector5 {
    let mut f = eval_uncontrolled(s, p);
    f[1] += p.c1 * (s.x2() - xe.k);
    f[2] += p.c2 * (s.x3() - xe.m);
    f[3] += p.c3 * s.x4();
    f
}

pub fn jacobian_uncontrolled(s: &State5, p: &ParamSet) -> Matrix5 {
    let [x1, x2, x3, x4, x5] = *s.as_array();
    [
        [p.a, 0.0, 0.0, 4.0 * x4, 0.0],
        [0.0, 0.0, 0.0, -4.0 * x4, 4.0 * x5],
        [0.0, 0.0, 0.0, 0.0, -4.0 * x5],
        [-x4, x4, 0.0, x2 - x1, 0.0],
        [0.0, -x5, x5, 0.0, x3 - x2 + p.b],
    ]
}

/// The equilibrium only shifts the field by a constant, so it does not
/// appear in the Jacobian; it is accepted for symmetry with
/// [`eval_controlled`].
pub fn jacobian_controlled(s: &State5, p: &ParamSet, _xe: &Equilibrium) -> Matrix5 {
    let mut j = jacobian_uncontrolled(s, p);
    j[1][1] += p.c1;
    j[2][2] += p.c2;
    j[3][3] += p.c3;
    j
}

/// `true` when every component of the uncontrolled field is within `tol`
/// of zero.
pub fn is_equilibrium(s: &State5, p: &ParamSet, tol: f64) -> bool {
    eval_uncontrolled(s, p).iter().all(|f| f.abs() <= tol)
}

/// Lipschitz constant of the uncontrolled field on the box of radius
/// `delta` around an initial state of norm `x0_norm`:
/// `2 sqrt(10) + sqrt(a^2 + b^2) + 3 (x0_norm + delta)`.
///
/// `2 sqrt(10)` is the sum of the Frobenius norms of `A1` and `A2`.
pub fn lipschitz_bound(x0_norm: f64, delta: f64, p: &ParamSet) -> f64 {
    debug_assert!(delta > 0.0 && x0_norm >= 0.0);
    frobenius_norm(&A1) + frobenius_norm(&A2) + p.a.hypot(p.b) + 3.0 * (x0_norm + delta)
}
