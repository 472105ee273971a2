//! Flat `key = value` run configuration.
//!
//! ```text
//! # controlled run towards (0, 1, 0.6, 0, 0)
//! a = -0.45
//! b = 1
//! c1 = -0.2
//! c2 = -0.15
//! c3 = 1.01
//! q = 0.8
//! k = 1
//! m = 0.6
//! h = 0.01
//! N = 100
//! epsilon = 0.01
//! controlled = true
//! out = run.csv
//! ```
//!
//! `a`, `b`, `c1`, `c2`, `c3` and `q` are required. The rest default to
//! `k = m = 0`, `h = 0.01`, `N = 100`, `epsilon = 0.01`,
//! `controlled = true` and no output path. Blank lines and `#` comments are
//! ignored; unknown or repeated keys are errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::{Equilibrium, IntegratorConfig, ParamSet};

/// Keys in serialization order.
pub const KEYS: [&str; 13] = [
    "a",
    "b",
    "c1",
    "c2",
    "c3",
    "q",
    "k",
    "m",
    "h",
    "N",
    "epsilon",
    "controlled",
    "out",
];

/// Ordered raw key/value pairs, before typing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    entries: Vec<(String, String)>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = ConfigMap::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(parse_err(line_no, format!("expected `key = value`, got `{line}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(parse_err(line_no, format!("unknown key `{key}`")));
            }
            if map.get(key).is_some() {
                return Err(parse_err(line_no, format!("duplicate key `{key}`")));
            }
            map.entries.push((key.to_string(), value.to_string()));
        }
        Ok(map)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Inserts or replaces a value; used for command-line overrides.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(parse_err(0, format!("unknown key `{key}`")));
        }
        let value = value.into();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        Ok(())
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| parse_err(0, format!("`{key}`: `{v}` is not a number")))
            })
            .transpose()
    }

    fn required_real(&self, key: &str) -> Result<f64> {
        self.real(key)?
            .ok_or_else(|| parse_err(0, format!("missing required key `{key}`")))
    }
}

fn parse_err(line: usize, message: String) -> Error {
    Error::ConfigParse { line, message }
}

/// A complete simulation or analysis setup.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ParamSet,
    pub equilibrium: Equilibrium,
    pub integrator: IntegratorConfig,
    pub controlled: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        let params = ParamSet::new(
            map.required_real("a")?,
            map.required_real("b")?,
            map.required_real("c1")?,
            map.required_real("c2")?,
            map.required_real("c3")?,
            map.required_real("q")?,
        )?;
        let k = map.real("k")?.unwrap_or(0.0);
        let m = map.real("m")?.unwrap_or(0.0);
        if !(k.is_finite() && m.is_finite()) {
            return Err(parse_err(0, "equilibrium coordinates must be finite".into()));
        }
        let h = map.real("h")?.unwrap_or(0.01);
        let n_steps = match map.get("N") {
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| parse_err(0, format!("`N`: `{v}` is not a positive integer")))?,
            None => 100,
        };
        let epsilon = map.real("epsilon")?.unwrap_or(0.01);
        let controlled = match map.get("controlled") {
            None => true,
            Some("true") | Some("1") | Some("yes") => true,
            Some("false") | Some("0") | Some("no") => false,
            Some(other) => return Err(parse_err(0, format!("`controlled`: `{other}` is not a boolean"))),
        };
        Ok(RunConfig {
            params,
            equilibrium: Equilibrium::new(k, m),
            integrator: IntegratorConfig::new(h, n_steps, epsilon)?,
            controlled,
            out: map.get("out").map(PathBuf::from),
        })
    }

    /// Serializes every key in canonical order using the shortest decimal
    /// text that parses back to the same value.
    pub fn to_config_string(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let reals = [
            ("a", p.a),
            ("b", p.b),
            ("c1", p.c1),
            ("c2", p.c2),
            ("c3", p.c3),
            ("q", p.q),
            ("k", self.equilibrium.k),
            ("m", self.equilibrium.m),
            ("h", self.integrator.h()),
        ];
        for (key, value) in reals {
            let _ = writeln!(s, "{key} = {value}");
        }
        let _ = writeln!(s, "N = {}", self.integrator.n_steps());
        let _ = writeln!(s, "epsilon = {}", self.integrator.epsilon());
        let _ = writeln!(s, "controlled = {}", self.controlled);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        s
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RunConfig::from_map(&ConfigMap::parse(s)?)
    }
}
