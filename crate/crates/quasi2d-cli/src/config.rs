//! Flat `key = value` configuration with strict keys and total error
//! reporting.
//!
//! Every subcommand reads an optional config file plus its flags; flags win.
//! Parsing and validation never stop at the first problem: all violations
//! are collected and reported together, each naming the offending key.

use std::collections::BTreeMap;
use std::fs;

use quasi2d::experiments::geometric_ladder;
use quasi2d::potential::{HardDisc, RadialPotential2D, SoftDisc};
use quasi2d::Potential;

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    /// Invalid configuration (unknown/missing keys, bad values, unreadable
    /// input files): exit code 2, every violation listed.
    Config(Vec<String>),
    /// A solver failed or reported non-convergence: exit code 3.
    Solve(String),
}

/// Map a sweep-runner error: spec rejections are configuration problems,
/// everything else failed inside a solve.
pub fn sweep_failure(err: quasi2d::Error) -> Failure {
    match err {
        quasi2d::Error::InvalidSweep { .. } => Failure::Config(vec![err.to_string()]),
        other => Failure::Solve(other.to_string()),
    }
}

/// Merged view of one subcommand's configuration: file pairs overlaid by
/// flags, with a running violation list.
pub struct Ctx {
    file: BTreeMap<String, String>,
    violations: Vec<String>,
}

impl Ctx {
    /// Load the optional config file, rejecting unknown and duplicate keys.
    /// Lines are `key = value`; `#` starts a comment; blanks are skipped.
    pub fn load(path: Option<&str>, allowed: &[&str]) -> Ctx {
        let mut file = BTreeMap::new();
        let mut violations = Vec::new();
        if let Some(p) = path {
            match fs::read_to_string(p) {
                Err(e) => violations.push(format!("cannot read config `{p}`: {e}")),
                Ok(text) => {
                    for (i, raw) in text.lines().enumerate() {
                        let line = raw.split('#').next().unwrap_or("").trim();
                        if line.is_empty() {
                            continue;
                        }
                        let Some((key, value)) = line.split_once('=') else {
                            violations.push(format!(
                                "config `{p}` line {}: expected `key = value`, got `{line}`",
                                i + 1
                            ));
                            continue;
                        };
                        let key = key.trim().to_string();
                        if !allowed.contains(&key.as_str()) {
                            violations.push(format!(
                                "config `{p}`: unknown key `{key}` (allowed: {})",
                                allowed.join(", ")
                            ));
                        } else if file.insert(key.clone(), value.trim().to_string()).is_some() {
                            violations.push(format!("config `{p}`: duplicate key `{key}`"));
                        }
                    }
                }
            }
        }
        Ctx { file, violations }
    }

    pub fn violation(&mut self, message: String) {
        self.violations.push(message);
    }

    /// Whether a parameter was given at all (flag or config file). Used by
    /// commands whose mode depends on which keys are present.
    pub fn present(&self, key: &str, flag_given: bool) -> bool {
        flag_given || self.file.contains_key(key)
    }

    /// Numeric parameter: the flag wins, else the config value.
    pub fn num(&mut self, key: &str, flag: Option<f64>) -> Option<f64> {
        if flag.is_some() {
            return flag;
        }
        let raw = self.file.get(key).cloned()?;
        match raw.parse::<f64>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.violation(format!("key `{key}`: cannot parse `{raw}` as a number"));
                None
            }
        }
    }

    /// Integer parameter (grid sizes, widths): the flag wins.
    pub fn count(&mut self, key: &str, flag: Option<usize>) -> Option<usize> {
        if flag.is_some() {
            return flag;
        }
        let raw = self.file.get(key).cloned()?;
        match raw.parse::<usize>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.violation(format!("key `{key}`: cannot parse `{raw}` as a count"));
                None
            }
        }
    }

    /// Text parameter: the flag wins.
    pub fn text(&mut self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.file.get(key).cloned())
    }

    /// Ladder parameter: `v1,v2,...` or `geom:first:last:count`.
    pub fn ladder(&mut self, key: &str, flag: Option<String>) -> Option<Vec<f64>> {
        let spec = self.text(key, flag)?;
        match parse_ladder(&spec) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.violation(format!("key `{key}`: {msg}"));
                None
            }
        }
    }

    /// Unwrap a required parameter, recording a violation (and yielding NaN
    /// so later checks stay quiet) when it is missing.
    pub fn require(&mut self, key: &str, value: Option<f64>) -> f64 {
        match value {
            Some(v) => v,
            None => {
                self.violation(format!("missing required key `{key}`"));
                f64::NAN
            }
        }
    }

    /// Required numeric parameter: `require` composed with `num`.
    pub fn require_num(&mut self, key: &str, flag: Option<f64>) -> f64 {
        let value = self.num(key, flag);
        self.require(key, value)
    }

    /// Record a violation unless the value is positive and finite. NaN is
    /// passed through silently: it stands for an already-reported miss.
    pub fn positive(&mut self, key: &str, value: f64) -> f64 {
        if !value.is_nan() && (!(value > 0.0) || !value.is_finite()) {
            self.violation(format!(
                "key `{key}`: must be positive and finite (got {value})"
            ));
        }
        value
    }

    /// Record a violation unless the value is nonnegative and finite.
    pub fn nonnegative(&mut self, key: &str, value: f64) -> f64 {
        if !value.is_nan() && (!(value >= 0.0) || !value.is_finite()) {
            self.violation(format!(
                "key `{key}`: must be nonnegative and finite (got {value})"
            ));
        }
        value
    }

    /// Trap selection with a default: `harmonic` | `power:<p>` |
    /// `box:<width>` | `periodic:<side>`.
    pub fn trap(&mut self, key: &str, flag: Option<String>, default: &str) -> Potential {
        let spec = self
            .text(key, flag)
            .unwrap_or_else(|| default.to_string());
        match parse_trap(&spec) {
            Ok(v) => v,
            Err(msg) => {
                self.violation(format!("key `{key}`: {msg}"));
                Potential::Harmonic
            }
        }
    }

    /// Interaction selection: `square-barrier:<v0>:<R0>` | `hard-core:<R>` |
    /// `tabulated:<path>` | `zero`. `None` when absent.
    pub fn interaction(&mut self, key: &str, flag: Option<String>) -> Option<Potential> {
        let spec = self.text(key, flag)?;
        match parse_interaction(&spec) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.violation(format!("key `{key}`: {msg}"));
                None
            }
        }
    }

    /// 2D radial potential selection: `soft-disc:<strength>:<R>` |
    /// `hard-disc:<R>` | `tabulated:<path>`. `None` when absent.
    pub fn radial2d(&mut self, key: &str, flag: Option<String>) -> Option<W2d> {
        let spec = self.text(key, flag)?;
        match parse_radial2d(&spec) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.violation(format!("key `{key}`: {msg}"));
                None
            }
        }
    }

    /// Finish validation: empty violation list or a config failure carrying
    /// every message.
    pub fn finish(self) -> Result<(), Failure> {
        if self.violations.is_empty() {
            Ok(())
        } else {
            Err(Failure::Config(self.violations))
        }
    }
}

fn parse_ladder(spec: &str) -> Result<Vec<f64>, String> {
    if let Some(rest) = spec.strip_prefix("geom:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!(
                "geometric ladder needs `geom:<first>:<last>:<count>`, got `{spec}`"
            ));
        }
        let first = num_part(parts[0])?;
        let last = num_part(parts[1])?;
        let count = parts[2]
            .parse::<usize>()
            .map_err(|_| format!("cannot parse `{}` as a count", parts[2]))?;
        return geometric_ladder(first, last, count).map_err(|e| e.to_string());
    }
    spec.split(',').map(|p| num_part(p.trim())).collect()
}

fn num_part(part: &str) -> Result<f64, String> {
    part.parse::<f64>()
        .map_err(|_| format!("cannot parse `{part}` as a number"))
}

/// Trap potential spec.
pub fn parse_trap(spec: &str) -> Result<Potential, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match (parts[0], parts.len()) {
        ("harmonic", 1) => Ok(Potential::Harmonic),
        ("power", 2) => Potential::power(num_part(parts[1])?).map_err(|e| e.to_string()),
        ("box", 2) => Potential::hard_box(num_part(parts[1])?).map_err(|e| e.to_string()),
        ("periodic", 2) => Potential::periodic_box(num_part(parts[1])?).map_err(|e| e.to_string()),
        _ => Err(format!(
            "unknown trap `{spec}` (use harmonic | power:<p> | box:<width> | periodic:<side>)"
        )),
    }
}

/// Interaction potential spec for the 3D scattering problem.
pub fn parse_interaction(spec: &str) -> Result<Potential, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match (parts[0], parts.len()) {
        ("zero", 1) => Ok(Potential::Zero),
        ("square-barrier", 3) => {
            Potential::square_barrier(num_part(parts[1])?, num_part(parts[2])?)
                .map_err(|e| e.to_string())
        }
        ("hard-core", 2) => Potential::hard_core(num_part(parts[1])?).map_err(|e| e.to_string()),
        ("tabulated", 2) => read_tabulated(parts[1]),
        _ => Err(format!(
            "unknown interaction `{spec}` (use square-barrier:<v0>:<R0> | hard-core:<R> | \
             tabulated:<path> | zero)"
        )),
    }
}

/// Read a two-column `r v(r)` text file into a tabulated potential: radii
/// strictly increasing, linear interpolation between samples, zero beyond
/// the last radius. `#` comments and blank lines are skipped.
pub fn read_tabulated(path: &str) -> Result<Potential, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read `{path}`: {e}"))?;
    let mut rs = Vec::new();
    let mut vs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(format!(
                "`{path}` line {}: expected two columns `r v`, got `{line}`",
                i + 1
            ));
        }
        rs.push(num_part(cols[0]).map_err(|e| format!("`{path}` line {}: {e}", i + 1))?);
        vs.push(num_part(cols[1]).map_err(|e| format!("`{path}` line {}: {e}", i + 1))?);
    }
    Potential::tabulated(rs, vs).map_err(|e| format!("`{path}`: {e}"))
}

/// A 2D radial potential chosen on the command line.
#[derive(Debug, Clone)]
pub enum W2d {
    Soft(SoftDisc),
    Hard(HardDisc),
    /// Always the `Potential::Tabulated` variant, which already implements
    /// the interpolation policy.
    Tabulated(Potential),
}

impl RadialPotential2D for W2d {
    fn value(&self, r: f64) -> f64 {
        match self {
            W2d::Soft(w) => w.value(r),
            W2d::Hard(w) => w.value(r),
            W2d::Tabulated(p) => p.value(r),
        }
    }

    fn support_radius(&self) -> f64 {
        match self {
            W2d::Soft(w) => w.support_radius(),
            W2d::Hard(w) => w.support_radius(),
            W2d::Tabulated(p) => p.range().unwrap_or(0.0),
        }
    }

    fn core_radius(&self) -> f64 {
        match self {
            W2d::Soft(w) => w.core_radius(),
            W2d::Hard(w) => w.core_radius(),
            W2d::Tabulated(_) => 0.0,
        }
    }
}

fn parse_radial2d(spec: &str) -> Result<W2d, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match (parts[0], parts.len()) {
        ("soft-disc", 3) => SoftDisc::new(num_part(parts[1])?, num_part(parts[2])?)
            .map(W2d::Soft)
            .map_err(|e| e.to_string()),
        ("hard-disc", 2) => HardDisc::new(num_part(parts[1])?)
            .map(W2d::Hard)
            .map_err(|e| e.to_string()),
        ("tabulated", 2) => read_tabulated(parts[1]).map(W2d::Tabulated),
        _ => Err(format!(
            "unknown 2D potential `{spec}` (use soft-disc:<strength>:<R> | hard-disc:<R> | \
             tabulated:<path>)"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_and_unknown_keys_are_rejected_with_all_violations() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "h = 2.0\nbogus = 1\nng = oops\n").unwrap();
        let p = path.to_str().unwrap();

        let mut ctx = Ctx::load(Some(p), &["h", "ng"]);
        assert_eq!(ctx.num("h", Some(0.5)), Some(0.5)); // flag wins
        assert_eq!(ctx.num("ng", None), None); // unparseable, recorded
        let err = ctx.finish().unwrap_err();
        let Failure::Config(msgs) = err else {
            panic!("expected a config failure")
        };
        assert_eq!(msgs.len(), 2);
        assert!(msgs[0].contains("bogus"));
        assert!(msgs[1].contains("ng"));
    }

    #[test]
    fn config_supplies_what_flags_leave_out() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# comment\nh = 0.25 # trailing comment\n").unwrap();
        let mut ctx = Ctx::load(Some(path.to_str().unwrap()), &["h"]);
        assert_eq!(ctx.num("h", None), Some(0.25));
        ctx.finish().unwrap();
    }

    #[test]
    fn ladders_parse_lists_and_geometric_specs() {
        assert_eq!(parse_ladder("1,2,4").unwrap(), vec![1.0, 2.0, 4.0]);
        let geom = parse_ladder("geom:1:100:3").unwrap();
        assert_eq!(geom.len(), 3);
        assert_eq!(geom[0], 1.0);
        assert_eq!(geom[2], 100.0);
        assert!(parse_ladder("geom:1:100").is_err());
        assert!(parse_ladder("1,two,3").is_err());
    }

    #[test]
    fn potential_specs_parse_and_reject() {
        assert_eq!(parse_trap("harmonic").unwrap(), Potential::Harmonic);
        assert!(matches!(
            parse_trap("power:4").unwrap(),
            Potential::Power { .. }
        ));
        assert!(parse_trap("harmonic:1").is_err());
        assert!(parse_trap("spline").is_err());
        assert!(matches!(
            parse_interaction("square-barrier:8:1").unwrap(),
            Potential::SquareBarrier { .. }
        ));
        assert!(parse_interaction("square-barrier:8").is_err());
        assert!(matches!(parse_radial2d("hard-disc:1").unwrap(), W2d::Hard(_)));
        assert!(parse_radial2d("soft-disc:0:1").is_err());
    }

    #[test]
    fn tabulated_files_validate_their_columns() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("v.txt");
        std::fs::write(&good, "# r v\n0.0 8.0\n1.0 8.0\n1.001 0.0\n").unwrap();
        let pot = read_tabulated(good.to_str().unwrap()).unwrap();
        assert_eq!(pot.range(), Some(1.001));

        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "0.0 1.0\n0.0 2.0\n").unwrap();
        let err = read_tabulated(bad.to_str().unwrap()).unwrap_err();
        assert!(err.contains("increasing"), "{err}");

        let ragged = dir.path().join("ragged.txt");
        std::fs::write(&ragged, "0.0 1.0 2.0\n").unwrap();
        let err = read_tabulated(ragged.to_str().unwrap()).unwrap_err();
        assert!(err.contains("two columns"), "{err}");
    }
}
