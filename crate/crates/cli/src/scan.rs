//! Coupling scans: every requested method at every grid point, written as
//! one CSV file per method.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use pairsim::PairBasis;
use rayon::prelude::*;

use crate::measures::{evaluate, PointMeasures};
use crate::{CliError, Method, Result, ScanConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub config: ScanConfig,
    /// `G / ε` at each row.
    pub grid: Vec<f64>,
    /// Rows per method, in the order the methods were requested.
    pub rows: Vec<(Method, Vec<PointMeasures>)>,
}

impl ScanResult {
    pub fn method(&self, m: Method) -> Option<&[PointMeasures]> {
        self.rows.iter().find(|(x, _)| *x == m).map(|(_, r)| r.as_slice())
    }
}

/// Evaluates the scan; `parallel` spreads the grid points over the rayon
/// pool. The result does not depend on it.
pub fn compute(cfg: &ScanConfig, parallel: bool) -> Result<ScanResult> {
    cfg.validate()?;
    let grid = cfg.grid();
    let basis = Arc::new(PairBasis::new(cfg.omega, cfg.pairs)?);
    let levels = cfg.levels();
    let tasks: Vec<(Method, f64)> = cfg.methods.iter().flat_map(|&m| grid.iter().map(move |&g| (m, g))).collect();
    let one = |&(m, g): &(Method, f64)| -> Result<PointMeasures> {
        evaluate(m, &cfg.params(g)?, &basis, &levels, &cfg.level_pairs)
    };
    let points: Vec<PointMeasures> = if parallel {
        tasks.par_iter().map(one).collect::<Result<_>>()?
    } else {
        tasks.iter().map(one).collect::<Result<_>>()?
    };
    let mut it = points.into_iter();
    let rows = cfg.methods.iter().map(|&m| (m, it.by_ref().take(grid.len()).collect())).collect();
    Ok(ScanResult { config: cfg.clone(), grid, rows })
}

/// Twelve significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.11e}")
    }
}

pub fn header(cfg: &ScanConfig) -> Vec<String> {
    let mut h: Vec<String> =
        ["G/eps [1]", "energy [eps]", "E_over_2Omega [1]", "E_schmidt_scaled [1]", "delta_over_g [1]"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    h.extend(cfg.levels().iter().map(|k| format!("h_f_{k} [bit]")));
    for (k, kp) in &cfg.level_pairs {
        h.push(format!("C_{k}_{kp} [1]"));
        h.push(format!("E_pair_{k}_{kp} [bit]"));
        h.push(format!("I_{k}_{kp} [bit]"));
        h.push(format!("D_{k}_{kp} [bit]"));
    }
    h
}

pub fn record(m: &PointMeasures) -> Vec<String> {
    let mut r = vec![
        format_value(m.g),
        format_value(m.energy),
        format_value(m.e_over_2omega),
        format_value(m.e_schmidt_scaled),
        m.delta_over_g.map(format_value).unwrap_or_default(),
    ];
    r.extend(m.h_f.iter().map(|&(_, h)| format_value(h)));
    for p in &m.pairs {
        r.push(format_value(p.concurrence));
        r.push(format_value(p.e_pair));
        r.push(format_value(p.mutual_information));
        r.push(format_value(p.discord));
    }
    r
}

pub fn csv_path(dir: &Path, m: Method) -> PathBuf {
    dir.join(format!("scan_{}.csv", m.name()))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })
}

/// Writes `scan_<method>.csv` for each method plus `scan.conf`, the resolved
/// configuration. Returns the paths written.
pub fn write_csv(result: &ScanResult, dir: &Path) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    let mut written = Vec::new();
    let conf = dir.join("scan.conf");
    fs::write(&conf, result.config.to_key_values()).map_err(|source| CliError::Io { path: conf.clone(), source })?;
    written.push(conf);
    for (m, rows) in &result.rows {
        let path = csv_path(dir, *m);
        let csv_err = |source| CliError::Csv { path: path.clone(), source };
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(header(&result.config)).map_err(csv_err)?;
        for row in rows {
            w.write_record(record(row)).map_err(csv_err)?;
        }
        w.flush().map_err(|source| CliError::Io { path: path.clone(), source })?;
        written.push(path);
    }
    Ok(written)
}
