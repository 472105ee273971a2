//! Matignon stability classification and closed-form region rules.
//!
//! An equilibrium of a commensurate fractional system of order `q` is
//! locally asymptotically stable when every eigenvalue of the Jacobian at
//! that point satisfies `|arg lambda| > q pi / 2`. Two routes produce a
//! verdict here:
//!
//! * the eigenvalue route: [`eigvals_equilibrium`] (closed form) or
//!   [`eigvals_general`](crate::eigen::eigvals_general) followed by
//!   [`matignon`];
//! * the closed-form route: [`classify_closed_form`], which evaluates the
//!   sign and interval conditions of a [`RegionRule`] literally.
//!
//! [`cross_check`] runs both and reports disagreement rather than hiding it.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{
    critical_order_of, CriticalOrder, EigenSet, Equilibrium, ParamSet, StabilityVerdict, VerdictKind,
    ZERO_EIGENVALUE_TOL,
};

pub use crate::eigen::eigvals_general;

/// Half-width of the band around `q pi / 2` in which an eigenvalue argument
/// is treated as critical.
pub const ARG_TOL: f64 = 1e-9;

/// Eigenvalues of the Jacobian at `(0, k, m, 0, 0)`, which is diagonal.
///
/// Controlled: `(a, c1, c2, c3 + k, b - k + m)`.
/// Uncontrolled: `(a, 0, 0, k, m - k + b)`.
pub fn eigvals_equilibrium(xe: &Equilibrium, p: &ParamSet, controlled: bool) -> EigenSet {
    let (k, m) = (xe.k, xe.m);
    if controlled {
        EigenSet::from_real([p.a, p.c1, p.c2, p.c3 + k, p.b - k + m])
    } else {
        EigenSet::from_real([p.a, 0.0, 0.0, k, m - k + p.b])
    }
}

fn check_order(q: f64) -> Result<()> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::OrderOutOfRange(q));
    }
    if q == 1.0 {
        log::warn!("stability test applied at the integer-order boundary q = 1");
    }
    Ok(())
}

/// Classifies a spectrum at fractional order `q`.
///
/// Any eigenvalue with modulus at most [`ZERO_EIGENVALUE_TOL`] yields
/// `UnstableZeroEigenvalue`. Otherwise the eigenvalue with the smallest
/// `|arg|` decides: below the critical band it is `Unstable`, inside it
/// `CriticallyStable` (when that eigenvalue is simple), above it
/// `AsymptoticallyStable`.
pub fn matignon(e: &EigenSet, q: f64) -> Result<StabilityVerdict> {
    check_order(q)?;
    let lambdas = e.lambdas();
    if let Some(z) = lambdas.iter().find(|l| l.norm() <= ZERO_EIGENVALUE_TOL) {
        return Ok(StabilityVerdict::new(VerdictKind::UnstableZeroEigenvalue, Some(*z)));
    }
    let threshold = q * FRAC_PI_2;
    let witness = *lambdas
        .iter()
        .min_by(|a, b| a.arg().abs().total_cmp(&b.arg().abs()))
        .expect("five eigenvalues");
    let gap = witness.arg().abs() - threshold;
    let kind = if gap < -ARG_TOL {
        VerdictKind::Unstable
    } else if gap <= ARG_TOL {
        // geometric multiplicity is judged by distinctness among the five
        let repeats = lambdas
            .iter()
            .filter(|l| (**l - witness).norm() <= ZERO_EIGENVALUE_TOL)
            .count();
        if repeats == 1 {
            VerdictKind::CriticallyStable
        } else {
            VerdictKind::Unstable
        }
    } else {
        VerdictKind::AsymptoticallyStable
    };
    Ok(StabilityVerdict::new(kind, Some(witness)))
}

/// `(2/pi) * min |arg lambda|` over the spectrum, or the zero marker.
pub fn critical_order(e: &EigenSet) -> CriticalOrder {
    critical_order_of(e.lambdas())
}

/// Closed-form stability rules for the controlled lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionRule {
    /// The origin.
    P31,
    /// A general equilibrium `(0, k, m, 0, 0)` other than the origin.
    P32,
    /// `(0, k, 0, 0, 0)`, `k != 0`.
    C31,
    /// `(0, 0, m, 0, 0)`, `m != 0`.
    C32,
    /// `(0, m, m, 0, 0)`, `m != 0`.
    C33,
}

impl RegionRule {
    pub const ALL: [RegionRule; 5] = [
        RegionRule::P31,
        RegionRule::P32,
        RegionRule::C31,
        RegionRule::C32,
        RegionRule::C33,
    ];

    pub fn id(self) -> &'static str {
        match self {
            RegionRule::P31 => "P31",
            RegionRule::P32 => "P32",
            RegionRule::C31 => "C31",
            RegionRule::C32 => "C32",
            RegionRule::C33 => "C33",
        }
    }

    /// Human-readable description of the stable set.
    pub fn quantifier(self) -> &'static str {
        match self {
            RegionRule::P31 => "origin: stable iff a, b, c1, c2, c3 < 0",
            RegionRule::P32 => "(0,k,m,0,0): a, c1, c2 < 0 and k < -c3 and m < k - b",
            RegionRule::C31 => "(0,k,0,0,0): a, c1, c2 < 0, b < -c3, k in (b, -c3)",
            RegionRule::C32 => "(0,0,m,0,0): a, c1, c2, c3 < 0, m < -b",
            RegionRule::C33 => "(0,m,m,0,0): a, c1, c2, b < 0, m < -c3",
        }
    }

    /// Most specific rule whose family contains `xe`.
    pub fn for_equilibrium(xe: &Equilibrium) -> RegionRule {
        let (k, m) = (xe.k, xe.m);
        if k == 0.0 && m == 0.0 {
            RegionRule::P31
        } else if m == 0.0 {
            RegionRule::C31
        } else if k == 0.0 {
            RegionRule::C32
        } else if k == m {
            RegionRule::C33
        } else {
            RegionRule::P32
        }
    }

    pub fn applies_to(self, xe: &Equilibrium) -> bool {
        let (k, m) = (xe.k, xe.m);
        match self {
            RegionRule::P31 => k == 0.0 && m == 0.0,
            RegionRule::P32 => k != 0.0 || m != 0.0,
            RegionRule::C31 => m == 0.0 && k != 0.0,
            RegionRule::C32 => k == 0.0 && m != 0.0,
            RegionRule::C33 => k == m && m != 0.0,
        }
    }
}

impl fmt::Display for RegionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn real(v: f64) -> Option<Complex64> {
    Some(Complex64::new(v, 0.0))
}

fn stable() -> StabilityVerdict {
    StabilityVerdict::new(VerdictKind::AsymptoticallyStable, None)
}

fn unstable(witness: f64) -> StabilityVerdict {
    StabilityVerdict::new(VerdictKind::Unstable, real(witness))
}

fn undetermined() -> StabilityVerdict {
    StabilityVerdict::new(VerdictKind::Undetermined, None)
}

/// First strictly positive value among the candidates, as an unstable verdict.
fn first_positive(candidates: &[f64]) -> Option<StabilityVerdict> {
    candidates.iter().find(|v| **v > 0.0).map(|v| unstable(*v))
}

/// Evaluates the sign and interval clauses of `rule` at `xe` literally.
///
/// Every clause carries a strict inequality, so boundary cases that no
/// clause covers come back as `Undetermined`. The witness of an unstable
/// verdict is the positive eigenvalue the clause relies on.
pub fn classify_closed_form(rule: RegionRule, xe: &Equilibrium, p: &ParamSet) -> Result<StabilityVerdict> {
    if !rule.applies_to(xe) {
        return Err(Error::RuleFamilyMismatch {
            rule: rule.id(),
            k: xe.k,
            m: xe.m,
        });
    }
    let ParamSet { a, b, c1, c2, c3, .. } = *p;
    let (k, m) = (xe.k, xe.m);

    // case 2: a > 0 is unstable for every rule
    if a > 0.0 {
        return Ok(unstable(a));
    }
    // case 1(iii): a positive gain on x2 or x3
    if let Some(v) = first_positive(&[c1, c2]) {
        return Ok(v);
    }

    // from here a < 0, c1 < 0, c2 < 0
    let verdict = match rule {
        RegionRule::P31 => {
            if b < 0.0 && c3 < 0.0 {
                stable()
            } else {
                first_positive(&[b, c3]).unwrap_or_else(undetermined)
            }
        }
        RegionRule::P32 => {
            if k < -c3 && m < k - b {
                stable()
            } else if k > -c3 {
                unstable(c3 + k)
            } else if m > k - b {
                unstable(b - k + m)
            } else {
                undetermined()
            }
        }
        RegionRule::C31 => {
            if b < -c3 && k > b && k < -c3 {
                stable()
            } else if b > -c3 && k > -c3 {
                unstable(c3 + k)
            } else if b > -c3 && k < b {
                unstable(b - k)
            } else {
                undetermined()
            }
        }
        RegionRule::C32 => {
            if c3 < 0.0 && m < -b {
                stable()
            } else if c3 > 0.0 {
                unstable(c3)
            } else if m > -b {
                unstable(b + m)
            } else {
                undetermined()
            }
        }
        RegionRule::C33 => {
            if b < 0.0 && m < -c3 {
                stable()
            } else if b > 0.0 {
                unstable(b)
            } else if m > -c3 {
                unstable(c3 + m)
            } else {
                undetermined()
            }
        }
    };
    Ok(verdict)
}

/// Both verdicts for one controlled equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    pub rule: RegionRule,
    pub closed_form: StabilityVerdict,
    pub eigen_route: StabilityVerdict,
    pub eigenvalues: EigenSet,
    /// `None` when the closed form is `Undetermined`.
    pub agree: Option<bool>,
}

/// Whether two verdicts fall in the same stability class.
///
/// The two unstable kinds are one class: a closed-form clause cannot tell
/// a positive eigenvalue from a vanishing one on its boundary.
pub fn verdicts_agree(a: VerdictKind, b: VerdictKind) -> Option<bool> {
    if a == VerdictKind::Undetermined || b == VerdictKind::Undetermined {
        return None;
    }
    Some(a == b || (a.is_unstable() && b.is_unstable()))
}

/// Runs the closed-form rule for `xe` and the Matignon test on the
/// closed-form eigenvalues of the controlled Jacobian.
pub fn cross_check(xe: &Equilibrium, p: &ParamSet, q: f64) -> Result<CrossCheck> {
    let rule = RegionRule::for_equilibrium(xe);
    cross_check_with(rule, xe, p, q)
}

/// As [`cross_check`] with an explicit rule.
pub fn cross_check_with(rule: RegionRule, xe: &Equilibrium, p: &ParamSet, q: f64) -> Result<CrossCheck> {
    let closed_form = classify_closed_form(rule, xe, p)?;
    let eigenvalues = eigvals_equilibrium(xe, p, true);
    let eigen_route = matignon(&eigenvalues, q)?;
    Ok(CrossCheck {
        rule,
        closed_form,
        eigen_route,
        agree: verdicts_agree(closed_form.kind, eigen_route.kind),
        eigenvalues,
    })
}
