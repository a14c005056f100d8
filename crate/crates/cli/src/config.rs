//! Run configuration as flat `key = value` text.
//!
//! ```text
//! # comment
//! rng.seed = 7
//! sim.ticks = 100000
//! sim.engine = cubic
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use avoidkit::couplers::InitialOther;
use avoidkit::gen::DEFAULT_REJECTION_BUDGET;
use avoidkit::matching::DEFAULT_CACHE_CAPACITY;
use avoidkit::verify::{DEFAULT_ALPHA, DEFAULT_MIN_DEPARTURES};
use avoidkit::EngineKind;

use crate::error::{CliError, CliResult};

pub const MAX_TICKS: usize = 1_000_000_000;
pub const MAX_WALKERS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub ticks: usize,
    /// `None` means the verdict's preferred engine.
    pub engine: Option<EngineKind>,
    pub walkers: usize,
    pub a0: Option<usize>,
    pub b0: InitialOther,
    pub alpha: f64,
    pub min_departures: u64,
    pub cache_capacity: usize,
    pub rejection_budget: u64,
    pub trajectory_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            ticks: 1000,
            engine: None,
            walkers: 2,
            a0: None,
            b0: InitialOther::Auto,
            alpha: DEFAULT_ALPHA,
            min_departures: DEFAULT_MIN_DEPARTURES,
            cache_capacity: DEFAULT_CACHE_CAPACITY,
            rejection_budget: DEFAULT_REJECTION_BUDGET,
            trajectory_path: None,
            summary_path: None,
            report_path: None,
            csv_path: None,
        }
    }
}

pub fn parse_engine(s: &str) -> CliResult<Option<EngineKind>> {
    if s == "auto" {
        return Ok(None);
    }
    match s.parse::<EngineKind>() {
        Ok(EngineKind::None) | Err(_) => Err(CliError::input(format!(
            "unknown engine '{s}' (expected auto, cubic, regular, squarefree or cycle)"
        ))),
        Ok(e) => Ok(Some(e)),
    }
}

pub fn parse_b0(s: &str) -> CliResult<InitialOther> {
    match s {
        "auto" => Ok(InitialOther::Auto),
        "excluded" => Ok(InitialOther::Excluded),
        v => v
            .parse()
            .map(InitialOther::Vertex)
            .map_err(|_| CliError::input(format!("b0 must be auto, excluded or a vertex, got '{v}'"))),
    }
}

fn b0_text(b0: InitialOther) -> String {
    match b0 {
        InitialOther::Auto => "auto".into(),
        InitialOther::Excluded => "excluded".into(),
        InitialOther::Vertex(v) => v.to_string(),
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::input(format!("{key}: cannot parse '{value}'")))
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::input(format!("{}: {}", path.display(), e.message)))
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::input(format!("line {}: expected 'key = value'", i + 1)))?;
            if !seen.insert(key.to_string()) {
                return Err(CliError::input(format!("line {}: duplicate key '{key}'", i + 1)));
            }
            cfg.set(key, value)
                .map_err(|e| CliError::input(format!("line {}: {}", i + 1, e.message)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match key {
            "rng.seed" => self.seed = number(key, value)?,
            "sim.ticks" => self.ticks = number(key, value)?,
            "sim.engine" => self.engine = parse_engine(value)?,
            "sim.walkers" => self.walkers = number(key, value)?,
            "sim.a0" => self.a0 = Some(number(key, value)?),
            "sim.b0" => self.b0 = parse_b0(value)?,
            "verify.alpha" => self.alpha = number(key, value)?,
            "verify.min_departures" => self.min_departures = number(key, value)?,
            "cache.capacity" => self.cache_capacity = number(key, value)?,
            "gen.rejection_budget" => self.rejection_budget = number(key, value)?,
            "output.trajectory" => self.trajectory_path = Some(value.into()),
            "output.summary" => self.summary_path = Some(value.into()),
            "output.report" => self.report_path = Some(value.into()),
            "output.csv" => self.csv_path = Some(value.into()),
            other => return Err(CliError::input(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::input(msg));
        if self.ticks == 0 || self.ticks > MAX_TICKS {
            return bad(format!("sim.ticks must lie in 1..={MAX_TICKS}, got {}", self.ticks));
        }
        if self.walkers == 0 || self.walkers > MAX_WALKERS {
            return bad(format!("sim.walkers must lie in 1..={MAX_WALKERS}, got {}", self.walkers));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("verify.alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.min_departures == 0 {
            return bad("verify.min_departures must be positive".into());
        }
        if self.cache_capacity == 0 {
            return bad("cache.capacity must be positive".into());
        }
        if self.rejection_budget == 0 {
            return bad("gen.rejection_budget must be positive".into());
        }
        Ok(())
    }

    /// Canonical text form; `parse(to_text())` returns an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("rng.seed", self.seed.to_string());
        put("sim.ticks", self.ticks.to_string());
        put("sim.engine", self.engine.map_or("auto".into(), |e| e.to_string()));
        put("sim.walkers", self.walkers.to_string());
        if let Some(a0) = self.a0 {
            put("sim.a0", a0.to_string());
        }
        put("sim.b0", b0_text(self.b0));
        put("verify.alpha", self.alpha.to_string());
        put("verify.min_departures", self.min_departures.to_string());
        put("cache.capacity", self.cache_capacity.to_string());
        put("gen.rejection_budget", self.rejection_budget.to_string());
        for (k, p) in [
            ("output.trajectory", &self.trajectory_path),
            ("output.summary", &self.summary_path),
            ("output.report", &self.report_path),
            ("output.csv", &self.csv_path),
        ] {
            if let Some(p) = p {
                put(k, p.display().to_string());
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = RunConfig {
            seed: u64::MAX,
            ticks: 12345,
            engine: Some(EngineKind::Regular),
            a0: Some(3),
            b0: InitialOther::Excluded,
            alpha: 0.0123456789,
            trajectory_path: Some("out/traj.txt".into()),
            csv_path: Some("prev.csv".into()),
            ..RunConfig::default()
        };
        let back = RunConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(RunConfig::parse(&RunConfig::default().to_text()).unwrap(), RunConfig::default());
    }

    #[test]
    fn comments_and_partial_files() {
        let cfg = RunConfig::parse("# run\n\nrng.seed = 9\nsim.b0 = 4\n").unwrap();
        assert_eq!((cfg.seed, cfg.b0, cfg.ticks), (9, InitialOther::Vertex(4), 1000));
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "sim.ticks = 0",
            "sim.ticks = many",
            "verify.alpha = 1.5",
            "sim.engine = none",
            "unknown.key = 1",
            "rng.seed = 1\nrng.seed = 2",
            "no equals sign",
        ] {
            let e = RunConfig::parse(text).unwrap_err();
            assert_eq!(e.code, crate::error::EXIT_INPUT, "{text}");
        }
    }
}
