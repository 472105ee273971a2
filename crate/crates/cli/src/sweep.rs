//! `sweep`: stability verdicts over a two-dimensional parameter grid.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use fractoda::{eigvals_equilibrium, matignon, CriticalOrder, Equilibrium, ParamSet, RunConfig, VerdictKind};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::format;

/// Verdict code for cells outside the parameter domain.
pub const SKIPPED: u8 = 5;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FRACTODA_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepField {
    A,
    B,
    C1,
    C2,
    C3,
    K,
    M,
    Q,
}

impl SweepField {
    pub const ALL: [SweepField; 8] = [
        SweepField::A,
        SweepField::B,
        SweepField::C1,
        SweepField::C2,
        SweepField::C3,
        SweepField::K,
        SweepField::M,
        SweepField::Q,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepField::A => "a",
            SweepField::B => "b",
            SweepField::C1 => "c1",
            SweepField::C2 => "c2",
            SweepField::C3 => "c3",
            SweepField::K => "k",
            SweepField::M => "m",
            SweepField::Q => "q",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SweepField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepField {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        SweepField::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown sweep field `{s}` (expected one of a, b, c1, c2, c3, k, m, q)"
            ))
        })
    }
}

/// One grid axis, written `field:lo:hi:n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub field: SweepField,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    /// At least two points with `lo < hi`, or a single point with `lo == hi`.
    pub fn new(field: SweepField, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(CliError::Usage(format!("axis `{field}`: bounds must be finite")));
        }
        let ok = match n {
            0 => false,
            1 => lo == hi,
            _ => lo < hi,
        };
        if !ok {
            return Err(CliError::Usage(format!(
                "axis `{field}`: degenerate grid {lo}:{hi}:{n} (need n >= 2 and lo < hi, or n = 1 and lo = hi)"
            )));
        }
        Ok(Axis { field, lo, hi, n })
    }

    /// Evenly spaced values; the endpoints are exact.
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [field, lo, hi, n] = parts.as_slice() else {
            return Err(CliError::Usage(format!("axis `{s}`: expected field:lo:hi:n")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("axis `{s}`: `{t}` is not a number")))
        };
        let n = n
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("axis `{s}`: `{n}` is not a point count")))?;
        Axis::new(field.trim().parse()?, num(lo)?, num(hi)?, n)
    }
}

/// Result of evaluating one grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellOutcome {
    pub code: u8,
    /// `None` for skipped cells.
    pub q_tilde: Option<CriticalOrder>,
}

impl CellOutcome {
    pub const SKIPPED: CellOutcome = CellOutcome {
        code: SKIPPED,
        q_tilde: None,
    };

    pub fn verdict(kind: VerdictKind, q_tilde: CriticalOrder) -> Self {
        CellOutcome {
            code: kind.code(),
            q_tilde: Some(q_tilde),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub v1: f64,
    pub v2: f64,
    pub outcome: CellOutcome,
}

/// Thread count from `FRACTODA_THREADS`; `None` means rayon's default.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV}: `{v}` is not a positive integer"
            ))),
        },
    }
}

/// Evaluates `eval(v1, v2)` over the grid, in parallel, and returns the
/// cells in row-major order (`axis1` outer, `axis2` inner).
pub fn sweep_with<F>(axis1: &Axis, axis2: &Axis, threads: Option<usize>, eval: F) -> Result<Vec<SweepCell>>
where
    F: Fn(f64, f64) -> CellOutcome + Sync,
{
    let xs = axis1.values();
    let ys = axis2.values();
    let points: Vec<(f64, f64)> = xs.iter().flat_map(|x| ys.iter().map(move |y| (*x, *y))).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))?;
    let cells = pool.install(|| {
        points
            .par_iter()
            .map(|(v1, v2)| SweepCell {
                v1: *v1,
                v2: *v2,
                outcome: eval(*v1, *v2),
            })
            .collect()
    });
    Ok(cells)
}

/// Parameter values a sweep starts from before the two axes overwrite theirs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepTemplate {
    /// a, b, c1, c2, c3, k, m, q in [`SweepField`] order.
    pub values: [f64; 8],
    pub controlled: bool,
}

impl SweepTemplate {
    pub fn new(p: &ParamSet, xe: &Equilibrium, controlled: bool) -> Self {
        SweepTemplate {
            values: [p.a, p.b, p.c1, p.c2, p.c3, xe.k, xe.m, p.q],
            controlled,
        }
    }

    /// Matignon verdict at the equilibrium with the two swept values in
    /// place. Cells with a zero coefficient or an order outside `(0, 1]`
    /// are skipped.
    pub fn evaluate(&self, f1: SweepField, v1: f64, f2: SweepField, v2: f64) -> CellOutcome {
        let mut v = self.values;
        v[f1.index()] = v1;
        v[f2.index()] = v2;
        let [a, b, c1, c2, c3, k, m, q] = v;
        let Ok(p) = ParamSet::new(a, b, c1, c2, c3, q) else {
            return CellOutcome::SKIPPED;
        };
        let e = eigvals_equilibrium(&Equilibrium::new(k, m), &p, self.controlled);
        match matignon(&e, q) {
            Ok(verdict) => CellOutcome::verdict(verdict.kind, e.q_tilde()),
            Err(_) => CellOutcome::SKIPPED,
        }
    }
}

pub struct SweepReport {
    pub axis1: Axis,
    pub axis2: Axis,
    pub cells: Vec<SweepCell>,
    pub csv: String,
}

pub fn sweep_csv(axis1: &Axis, axis2: &Axis, cells: &[SweepCell]) -> String {
    let mut s = String::with_capacity(cells.len() * 80);
    let _ = writeln!(s, "{},{},verdict,q_tilde", axis1.field, axis2.field);
    for c in cells {
        let q = c
            .outcome
            .q_tilde
            .as_ref()
            .map(format::critical_order)
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{}",
            format::real(c.v1),
            format::real(c.v2),
            c.outcome.code,
            q
        );
    }
    s
}

/// Sweeps two fields of `cfg` and writes the CSV to `cfg.out` when set.
pub fn cmd_sweep(cfg: &RunConfig, axis1: &Axis, axis2: &Axis) -> Result<SweepReport> {
    if axis1.field == axis2.field {
        return Err(CliError::Usage(format!("both axes sweep `{}`", axis1.field)));
    }
    let template = SweepTemplate::new(&cfg.params, &cfg.equilibrium, cfg.controlled);
    let cells = sweep_with(axis1, axis2, thread_cap()?, |v1, v2| {
        template.evaluate(axis1.field, v1, axis2.field, v2)
    })?;
    let csv = sweep_csv(axis1, axis2, &cells);
    if let Some(out) = &cfg.out {
        crate::simulate::write_file(out, &csv)?;
    }
    Ok(SweepReport {
        axis1: *axis1,
        axis2: *axis2,
        cells,
        csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        let ax: Axis = "k:-2:2:41".parse().unwrap();
        assert_eq!(ax.field, SweepField::K);
        let v = ax.values();
        assert_eq!(v.len(), 41);
        assert_eq!(v[0], -2.0);
        assert_eq!(v[40], 2.0);
        assert!((v[20]).abs() < 1e-15);
        assert_eq!("q:0.5:0.5:1".parse::<Axis>().unwrap().values(), vec![0.5]);
    }

    #[test]
    fn degenerate_axes_are_rejected() {
        for bad in [
            "k:1:1:5",
            "k:2:1:5",
            "k:0:1:1",
            "k:0:1:0",
            "z:0:1:3",
            "k:0:1",
            "k:0:x:3",
            "k:0:inf:3",
        ] {
            assert!(bad.parse::<Axis>().is_err(), "{bad}");
        }
    }

    #[test]
    fn zero_coefficients_are_skipped() {
        let p = ParamSet::new(-1.0, 0.32, -0.25, -0.12, -1.05, 0.8).unwrap();
        let t = SweepTemplate::new(&p, &Equilibrium::ORIGIN, true);
        assert_eq!(t.evaluate(SweepField::A, 0.0, SweepField::K, 0.5), CellOutcome::SKIPPED);
        assert_eq!(t.evaluate(SweepField::Q, 1.5, SweepField::K, 0.5), CellOutcome::SKIPPED);
        assert_eq!(t.evaluate(SweepField::Q, 0.0, SweepField::K, 0.5), CellOutcome::SKIPPED);
        assert_eq!(t.evaluate(SweepField::K, 0.5, SweepField::M, 0.0).code, 0);
    }

    #[test]
    fn row_major_order() {
        let a1 = Axis::new(SweepField::K, 0.0, 1.0, 3).unwrap();
        let a2 = Axis::new(SweepField::M, 0.0, 1.0, 2).unwrap();
        let cells = sweep_with(&a1, &a2, Some(2), |_, _| CellOutcome::SKIPPED).unwrap();
        let order: Vec<(f64, f64)> = cells.iter().map(|c| (c.v1, c.v2)).collect();
        assert_eq!(
            order,
            vec![(0.0, 0.0), (0.0, 1.0), (0.5, 0.0), (0.5, 1.0), (1.0, 0.0), (1.0, 1.0)]
        );
    }
}
