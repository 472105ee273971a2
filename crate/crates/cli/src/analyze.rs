//! `analyze`: eigenvalues, critical order and verdicts at one equilibrium.

use std::fmt;

use fractoda::eigen::spectrum_distance;
use fractoda::stability::{cross_check, eigvals_equilibrium, eigvals_general, matignon, CrossCheck};
use fractoda::systems::{jacobian_controlled, jacobian_uncontrolled};
use fractoda::{CriticalOrder, EigenSet, Equilibrium, ParamSet, StabilityVerdict};
use num_complex::Complex64;

use crate::error::Result;

/// Two eigenvalue routes must agree to this absolute tolerance.
pub const ROUTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct AnalyzeReport {
    pub params: ParamSet,
    pub equilibrium: Equilibrium,
    pub controlled: bool,
    pub closed_form: EigenSet,
    pub general: EigenSet,
    /// Largest gap between matched eigenvalues of the two routes.
    pub route_gap: f64,
    pub q_tilde: CriticalOrder,
    pub verdict: StabilityVerdict,
    /// Closed-form rule comparison; only defined for the controlled system.
    pub cross_check: Option<CrossCheck>,
}

impl AnalyzeReport {
    pub fn routes_agree(&self) -> bool {
        self.route_gap <= ROUTE_TOL
    }
}

/// Analyzes `xe` at order `p.q`.
pub fn cmd_analyze(p: &ParamSet, xe: &Equilibrium, controlled: bool) -> Result<AnalyzeReport> {
    p.validate()?;
    let state = xe.to_state();
    let closed_form = eigvals_equilibrium(xe, p, controlled);
    let jac = if controlled {
        jacobian_controlled(&state, p, xe)
    } else {
        jacobian_uncontrolled(&state, p)
    };
    let general = eigvals_general(&jac)?;
    let route_gap = spectrum_distance(closed_form.lambdas(), general.lambdas());
    let verdict = matignon(&closed_form, p.q)?;
    let cross_check = if controlled {
        Some(cross_check(xe, p, p.q)?)
    } else {
        None
    };
    Ok(AnalyzeReport {
        params: *p,
        equilibrium: *xe,
        controlled,
        q_tilde: closed_form.q_tilde(),
        closed_form,
        general,
        route_gap,
        verdict,
        cross_check,
    })
}

fn fmt_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn fmt_spectrum(e: &EigenSet) -> String {
    e.lambdas().iter().map(fmt_complex).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for AnalyzeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(
            f,
            "parameters: a = {}, b = {}, c1 = {}, c2 = {}, c3 = {}, q = {}",
            p.a, p.b, p.c1, p.c2, p.c3, p.q
        )?;
        writeln!(
            f,
            "equilibrium: (0, {}, {}, 0, 0), {} system",
            self.equilibrium.k,
            self.equilibrium.m,
            if self.controlled { "controlled" } else { "uncontrolled" }
        )?;
        writeln!(f, "eigenvalues (closed form): {}", fmt_spectrum(&self.closed_form))?;
        writeln!(f, "eigenvalues (QR):          {}", fmt_spectrum(&self.general))?;
        writeln!(
            f,
            "route agreement: {} (max gap {:e})",
            if self.routes_agree() { "yes" } else { "NO" },
            self.route_gap
        )?;
        writeln!(f, "critical order: {}", self.q_tilde)?;
        write!(f, "verdict at q = {}: {}", p.q, self.verdict.kind)?;
        if let Some(w) = self.verdict.witness {
            write!(f, " (witness {})", fmt_complex(&w))?;
        }
        writeln!(f)?;
        match &self.cross_check {
            Some(cc) => {
                writeln!(f, "closed-form rule {}: {}", cc.rule, cc.closed_form.kind)?;
                let flag = match cc.agree {
                    Some(true) => "agree",
                    Some(false) => "DISAGREE",
                    None => "undetermined",
                };
                writeln!(f, "cross-check: {flag}")?;
            }
            None => writeln!(f, "closed-form rule: not applicable to the uncontrolled system")?,
        }
        Ok(())
    }
}
