//! Scan configuration. Values come from command-line flags, `PAIRSIM_*`
//! environment variables and an optional `key = value` file, in that order
//! of precedence.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pairsim::verify::{default_level_pairs, linear_grid, log_grid, DEFAULT_GRID_MIN, DEFAULT_GRID_POINTS};
use pairsim::ModelParams;

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Exact,
    Bcs,
    Pbcs,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Exact, Method::Bcs, Method::Pbcs];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Bcs => "bcs",
            Method::Pbcs => "pbcs",
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Method::Exact),
            "bcs" => Ok(Method::Bcs),
            "pbcs" => Ok(Method::Pbcs),
            other => Err(CliError::Config(format!("unknown method `{other}` (expected exact, bcs or pbcs)"))),
        }
    }
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Parses `k:k'[,k:k']`.
pub fn parse_level_pairs(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("level pair `{t}` is not of the form k:k'")))?;
            let num =
                |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::Config(format!("bad level index in `{t}`")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected a boolean, got `{s}`"))),
    }
}

fn parse_num<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse `{s}`")))
}

/// Fully resolved scan settings. Couplings are in units of `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub omega: usize,
    pub pairs: usize,
    pub eps: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub g_points: usize,
    pub g_log: bool,
    pub level_pairs: Vec<(usize, usize)>,
    pub methods: Vec<Method>,
    pub out: PathBuf,
}

impl ScanConfig {
    /// Half filling, all methods and the default grid: `G = 0` plus 60
    /// log-spaced points on `[0.02, 10Ω]`.
    pub fn new(omega: usize) -> Self {
        Self {
            omega,
            pairs: omega / 2,
            eps: 1.0,
            g_min: 0.0,
            g_max: 10.0 * omega as f64,
            g_points: DEFAULT_GRID_POINTS + 1,
            g_log: true,
            level_pairs: default_level_pairs(omega),
            methods: Method::ALL.to_vec(),
            out: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.omega < 2 {
            return bad(format!("omega must be at least 2, got {}", self.omega));
        }
        if self.pairs > self.omega {
            return bad(format!("{} pairs do not fit on {} levels", self.pairs, self.omega));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.g_min >= 0.0 && self.g_max.is_finite()) {
            return bad(format!("g_min must be >= 0, got {}", self.g_min));
        }
        if self.g_points < 2 {
            return bad(format!("g_points must be at least 2, got {}", self.g_points));
        }
        if self.g_max <= self.g_min {
            return bad(format!("g_max ({}) must exceed g_min ({})", self.g_max, self.g_min));
        }
        if self.g_log && self.g_min == 0.0 && self.g_max <= DEFAULT_GRID_MIN {
            return bad(format!("a log grid from 0 needs g_max > {DEFAULT_GRID_MIN}"));
        }
        if self.level_pairs.is_empty() {
            return bad("no level pairs requested".into());
        }
        for (i, &(k, kp)) in self.level_pairs.iter().enumerate() {
            if k == 0 || kp == 0 || k > self.omega || kp > self.omega || k == kp {
                return bad(format!("invalid level pair {k}:{kp} for omega = {}", self.omega));
            }
            if self.level_pairs[..i].iter().any(|&(a, b)| (a, b) == (k, kp) || (a, b) == (kp, k)) {
                return bad(format!("level pair {k}:{kp} requested twice"));
            }
        }
        if self.methods.is_empty() {
            return bad("no methods requested".into());
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return bad(format!("method {} requested twice", m.name()));
            }
        }
        Ok(())
    }

    /// Coupling grid in units of `eps`. A log grid starting at 0 is `G = 0`
    /// followed by `g_points − 1` log-spaced points from 0.02.
    pub fn grid(&self) -> Vec<f64> {
        if !self.g_log {
            return linear_grid(self.g_min, self.g_max, self.g_points);
        }
        if self.g_min == 0.0 {
            let mut g = vec![0.0];
            g.extend(log_grid(DEFAULT_GRID_MIN, self.g_max, self.g_points - 1));
            return g;
        }
        log_grid(self.g_min, self.g_max, self.g_points)
    }

    /// Distinct levels appearing in the requested pairs, ascending.
    pub fn levels(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.level_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn params(&self, g_over_eps: f64) -> Result<ModelParams<f64>> {
        Ok(ModelParams::new(self.omega, self.eps, g_over_eps * self.eps)?.with_pairs(self.pairs)?)
    }

    /// The configuration in the `key = value` file format.
    pub fn to_key_values(&self) -> String {
        let pairs: Vec<String> = self.level_pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        let methods: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        let mut s = String::new();
        let _ = writeln!(s, "omega = {}", self.omega);
        let _ = writeln!(s, "pairs = {}", self.pairs);
        let _ = writeln!(s, "eps = {}", self.eps);
        let _ = writeln!(s, "g_min = {}", self.g_min);
        let _ = writeln!(s, "g_max = {}", self.g_max);
        let _ = writeln!(s, "g_points = {}", self.g_points);
        let _ = writeln!(s, "g_log = {}", self.g_log);
        let _ = writeln!(s, "pairs_of_levels = {}", pairs.join(","));
        let _ = writeln!(s, "methods = {}", methods.join(","));
        s
    }
}

/// Partially specified settings; `None` falls through to the next source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub omega: Option<usize>,
    pub pairs: Option<usize>,
    pub eps: Option<f64>,
    pub g_min: Option<f64>,
    pub g_max: Option<f64>,
    pub g_points: Option<usize>,
    pub g_log: Option<bool>,
    pub level_pairs: Option<Vec<(usize, usize)>>,
    pub methods: Option<Vec<Method>>,
    pub out: Option<PathBuf>,
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment, keys accept `-` or `_`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "omega" => s.omega = Some(parse_num(&key, value)?),
                "pairs" => s.pairs = Some(parse_num(&key, value)?),
                "eps" => s.eps = Some(parse_num(&key, value)?),
                "g_min" => s.g_min = Some(parse_num(&key, value)?),
                "g_max" => s.g_max = Some(parse_num(&key, value)?),
                "g_points" => s.g_points = Some(parse_num(&key, value)?),
                "g_log" => s.g_log = Some(parse_bool(&key, value)?),
                "pairs_of_levels" => s.level_pairs = Some(parse_level_pairs(value)?),
                "methods" => s.methods = Some(parse_methods(value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                _ => return Err(CliError::Config(format!("line {}: unknown key `{key}`", n + 1))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    /// Field-wise merge; values in `self` win.
    pub fn or(self, fallback: Settings) -> Settings {
        Settings {
            omega: self.omega.or(fallback.omega),
            pairs: self.pairs.or(fallback.pairs),
            eps: self.eps.or(fallback.eps),
            g_min: self.g_min.or(fallback.g_min),
            g_max: self.g_max.or(fallback.g_max),
            g_points: self.g_points.or(fallback.g_points),
            g_log: self.g_log.or(fallback.g_log),
            level_pairs: self.level_pairs.or(fallback.level_pairs),
            methods: self.methods.or(fallback.methods),
            out: self.out.or(fallback.out),
        }
    }

    /// Fills the remaining fields from [`ScanConfig::new`] and validates.
    pub fn resolve(self, default_omega: usize) -> Result<ScanConfig> {
        let base = ScanConfig::new(self.omega.unwrap_or(default_omega));
        let cfg = ScanConfig {
            omega: base.omega,
            pairs: self.pairs.unwrap_or(base.pairs),
            eps: self.eps.unwrap_or(base.eps),
            g_min: self.g_min.unwrap_or(base.g_min),
            g_max: self.g_max.unwrap_or(base.g_max),
            g_points: self.g_points.unwrap_or(base.g_points),
            g_log: self.g_log.unwrap_or(base.g_log),
            level_pairs: self.level_pairs.unwrap_or(base.level_pairs),
            methods: self.methods.unwrap_or(base.methods),
            out: self.out.unwrap_or(base.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pairsim::verify::default_coupling_grid;

    #[test]
    fn default_grid_matches_library_grid() {
        let cfg = ScanConfig::new(16);
        assert_eq!(cfg.grid(), default_coupling_grid(16, 1.0));
        assert_eq!(cfg.level_pairs, vec![(8, 9), (1, 16), (7, 10)]);
        assert_eq!(cfg.levels(), vec![1, 7, 8, 9, 10, 16]);
    }

    #[test]
    fn file_values_yield_to_flags() {
        let file = Settings::parse("# scan\nomega = 8\ng-points = 5 # trailing\nmethods = exact,bcs\n").unwrap();
        let flags = Settings { omega: Some(6), ..Settings::default() };
        let cfg = flags.or(file).resolve(16).unwrap();
        assert_eq!(cfg.omega, 6);
        assert_eq!(cfg.g_points, 5);
        assert_eq!(cfg.methods, vec![Method::Exact, Method::Bcs]);
        assert_eq!(cfg.g_max, 60.0);
    }

    #[test]
    fn round_trip_through_key_values() {
        let mut cfg = ScanConfig::new(6);
        cfg.g_log = false;
        cfg.level_pairs = vec![(1, 2), (3, 6)];
        let back = Settings::parse(&cfg.to_key_values()).unwrap().resolve(2).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn invalid_settings_are_rejected() {
        assert!(Settings::parse("omega 4").is_err());
        assert!(Settings::parse("colour = red").is_err());
        assert!(Settings::parse("g_log = maybe").is_err());
        assert!(parse_level_pairs("1-2").is_err());
        assert!(parse_methods("exact,rpa").is_err());
        let reject = |s: Settings| s.resolve(8).is_err();
        assert!(reject(Settings { g_points: Some(1), ..Default::default() }));
        assert!(reject(Settings { g_min: Some(-1.0), ..Default::default() }));
        assert!(reject(Settings { level_pairs: Some(vec![(3, 3)]), ..Default::default() }));
        assert!(reject(Settings { level_pairs: Some(vec![(1, 9)]), ..Default::default() }));
        assert!(reject(Settings { level_pairs: Some(vec![(1, 2), (2, 1)]), ..Default::default() }));
        assert!(reject(Settings { methods: Some(vec![]), ..Default::default() }));
    }

    #[test]
    fn explicit_grids() {
        let mut cfg = ScanConfig::new(4);
        cfg.g_min = 1.0;
        cfg.g_max = 100.0;
        cfg.g_points = 3;
        assert_eq!(cfg.grid(), vec![1.0, 10.000000000000002, 100.0]);
        cfg.g_log = false;
        assert_eq!(cfg.grid(), vec![1.0, 50.5, 100.0]);
    }
}
