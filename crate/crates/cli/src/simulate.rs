//! `simulate`: integrate a run configuration and write CSV (and SVG) output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fractoda::{convergence_metrics, integrate, RunConfig, RunStatus, Trajectory};

use crate::error::{CliError, Result};
use crate::format::real;
use crate::svg;

pub const CSV_HEADER: &str = "j,t,x1,x2,x3,x4,x5,dist";

pub struct SimulateReport {
    pub trajectory: Trajectory,
    pub csv: String,
    pub svg_paths: Vec<PathBuf>,
}

impl SimulateReport {
    pub fn diverged_at(&self) -> Option<usize> {
        match self.trajectory.status {
            RunStatus::Diverged { step } => Some(step),
            RunStatus::Completed => None,
        }
    }
}

/// One row per recorded state; `dist` is the Euclidean distance to the
/// target equilibrium.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let dist = convergence_metrics(tr, &tr.target).distances;
    let mut s = String::with_capacity(tr.len() * 200);
    s.push_str(CSV_HEADER);
    s.push('\n');
    for (j, ((t, state), d)) in tr.times.iter().zip(&tr.states).zip(dist).enumerate() {
        let _ = write!(s, "{j},{}", real(*t));
        for x in state.as_array() {
            let _ = write!(s, ",{}", real(*x));
        }
        let _ = writeln!(s, ",{}", real(d));
    }
    s
}

/// Paths of the five per-coordinate plots derived from `base`: a trailing
/// `.svg` is dropped and `_x1.svg` .. `_x5.svg` appended.
pub fn orbit_svg_paths(base: &Path) -> [PathBuf; 5] {
    let stem = match base.extension() {
        Some(ext) if ext.eq_ignore_ascii_case("svg") => base.with_extension(""),
        _ => base.to_path_buf(),
    };
    let stem = stem.to_string_lossy().into_owned();
    std::array::from_fn(|i| PathBuf::from(format!("{stem}_x{}.svg", i + 1)))
}

/// Writes one `(j, x^i_j)` plot per coordinate.
pub fn write_orbit_svgs(tr: &Trajectory, base: &Path) -> Result<Vec<PathBuf>> {
    let xs: Vec<f64> = (0..tr.len()).map(|j| j as f64).collect();
    let paths = orbit_svg_paths(base);
    for (i, path) in paths.iter().enumerate() {
        let ys: Vec<f64> = tr.states.iter().map(|s| s.as_array()[i]).collect();
        let name = format!("x{}", i + 1);
        let doc = svg::line_plot(&format!("{name}(n), q = {}", tr.params.q), "n", &name, &xs, &ys);
        write_file(path, &doc)?;
    }
    Ok(paths.to_vec())
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Integrates `cfg`, writes the CSV to `cfg.out` when set and the orbit
/// plots when `svg_base` is given.
///
/// A diverged run is still reported (and its partial CSV written); callers
/// inspect [`SimulateReport::diverged_at`].
pub fn cmd_simulate(cfg: &RunConfig, svg_base: Option<&Path>) -> Result<SimulateReport> {
    let trajectory = integrate(&cfg.params, &cfg.equilibrium, &cfg.integrator, cfg.controlled)?;
    let csv = trajectory_csv(&trajectory);
    if let Some(out) = &cfg.out {
        write_file(out, &csv)?;
    }
    let svg_paths = match svg_base {
        Some(base) => write_orbit_svgs(&trajectory, base)?,
        None => Vec::new(),
    };
    Ok(SimulateReport {
        trajectory,
        csv,
        svg_paths,
    })
}
