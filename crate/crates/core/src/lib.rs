//! Fractional-order Toda lattice with two feedback controls.
//!
//! The crate covers the three-particle lattice written as a five-dimensional
//! Caputo system of order `q`:
//!
//! * [`systems`]: vector fields (component and matrix forms), the generic
//!   `n`-particle lattice, Jacobians, equilibrium checks and the Lipschitz
//!   bound used for existence and uniqueness;
//! * [`stability`]: closed-form and general eigenvalues, the Matignon test,
//!   critical orders and the closed-form region rules for the controlled
//!   system;
//! * [`integrator`]: the memoryless fractional Euler scheme and convergence
//!   diagnostics;
//! * [`config`]: the flat `key = value` run configuration.
//!
//! ```
//! use fractoda::{stability, Equilibrium, ParamSet, VerdictKind};
//!
//! let p = ParamSet::new(-0.8, -0.2, -0.03, -0.02, -0.001, 0.8)?;
//! let eig = stability::eigvals_equilibrium(&Equilibrium::ORIGIN, &p, true);
//! let verdict = stability::matignon(&eig, p.q)?;
//! assert_eq!(verdict.kind, VerdictKind::AsymptoticallyStable);
//! # Ok::<(), fractoda::Error>(())
//! ```
//!
//! A longer narrative lives in the `book/` directory at the repository root;
//! its code listings are compiled and run as doctests of this crate.

pub mod config;
pub mod eigen;
pub mod error;
pub mod gamma;
pub mod integrator;
pub mod stability;
pub mod systems;
pub mod types;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use gamma::gamma;
pub use integrator::{convergence_metrics, fem_step, integrate, ConvergenceReport, FemScheme, RunStatus, Trajectory};
pub use stability::{
    classify_closed_form, critical_order, cross_check, eigvals_equilibrium, eigvals_general, matignon, CrossCheck,
    RegionRule,
};
pub use types::{
    to_state, validate_params, CriticalOrder, EigenSet, Equilibrium, IntegratorConfig, ParamSet, StabilityVerdict,
    State5, Vector5, VerdictKind,
};

// Book chapters, checked by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/equilibria.md")]
    mod equilibria {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/control.md")]
    mod control {}
    #[doc = include_str!("../../../book/src/integration.md")]
    mod integration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
