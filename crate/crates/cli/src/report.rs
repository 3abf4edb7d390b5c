//! Plain-text tables for the `point`, `limits` and `verify` subcommands.

use std::fmt::Write as _;
use std::sync::Arc;

use pairsim::entanglement::{discord, eof_from_concurrence, mutual_information, strong_coupling_limits};
use pairsim::exact::{four_mode_block, ground_state};
use pairsim::verify::{CriterionReport, Level};
use pairsim::{FourModeEvenBlock, ModelParams, PairBasis};

use crate::measures::{evaluate, PairMeasures, PointMeasures};
use crate::{Result, ScanConfig};

/// Six decimals, switching to scientific notation below 1e-3.
pub fn format_short(x: f64) -> String {
    if x == 0.0 || x.abs() >= 1e-3 {
        format!("{:.6}", if x == 0.0 { 0.0 } else { x })
    } else {
        format!("{x:.6e}")
    }
}

fn table(title: &str, columns: &[String], rows: &[(String, Vec<String>)]) -> String {
    let first = rows.iter().map(|(l, _)| l.len()).chain([8]).max().unwrap_or(8);
    let width = rows.iter().flat_map(|(_, v)| v.iter().map(String::len)).chain(columns.iter().map(String::len)).max();
    let width = width.unwrap_or(10).max(10);
    let mut s = String::new();
    let _ = writeln!(s, "{title}");
    let _ = write!(s, "{:<first$}", "");
    for c in columns {
        let _ = write!(s, "  {c:>width$}");
    }
    s.push('\n');
    for (label, values) in rows {
        let _ = write!(s, "{label:<first$}");
        for v in values {
            let _ = write!(s, "  {v:>width$}");
        }
        s.push('\n');
    }
    s
}

/// Every measure at `G = g·ε` for each configured method.
pub fn point_measures(cfg: &ScanConfig, g: f64) -> Result<Vec<PointMeasures>> {
    cfg.validate()?;
    let params = cfg.params(g)?;
    let basis = Arc::new(PairBasis::new(cfg.omega, cfg.pairs)?);
    let levels = cfg.levels();
    cfg.methods.iter().map(|&m| evaluate(m, &params, &basis, &levels, &cfg.level_pairs)).collect()
}

pub fn point_report(cfg: &ScanConfig, g: f64) -> Result<String> {
    let points = point_measures(cfg, g)?;
    let columns: Vec<String> = points.iter().map(|p| p.method.name().to_string()).collect();
    let row = |label: String, f: &dyn Fn(&PointMeasures) -> Option<f64>| {
        (label, points.iter().map(|p| f(p).map(format_short).unwrap_or_else(|| "-".into())).collect())
    };
    let mut rows = vec![
        row("energy [eps]".into(), &|p| Some(p.energy)),
        row("E/2Omega".into(), &|p| Some(p.e_over_2omega)),
        row("E_schmidt scaled".into(), &|p| Some(p.e_schmidt_scaled)),
        row("Delta/g".into(), &|p| p.delta_over_g),
    ];
    for (i, k) in cfg.levels().into_iter().enumerate() {
        rows.push(row(format!("h(f_{k}) [bit]"), &move |p| Some(p.h_f[i].1)));
    }
    for (i, &(k, kp)) in cfg.level_pairs.iter().enumerate() {
        let pick = move |f: fn(&PairMeasures) -> f64| move |p: &PointMeasures| Some(f(&p.pairs[i]));
        rows.push(row(format!("C({k},{kp})"), &pick(|m| m.concurrence)));
        rows.push(row(format!("E_pair({k},{kp}) [bit]"), &pick(|m| m.e_pair)));
        rows.push(row(format!("I({k},{kp}) [bit]"), &pick(|m| m.mutual_information)));
        rows.push(row(format!("D({k},{kp}) [bit]"), &pick(|m| m.discord)));
    }
    let title = format!("omega = {}, pairs = {}, eps = {}, G/eps = {}", cfg.omega, cfg.pairs, cfg.eps, g);
    Ok(table(&title, &columns, &rows))
}

/// Strong-coupling limits for the pair `(Ω/2, Ω/2+1)` at half filling,
/// optionally beside the exact values at `G = strength·Ωε`.
pub fn limits_report(omega: usize, strength: Option<f64>) -> Result<String> {
    let lim = strong_coupling_limits::<f64>(omega)?;
    let block = FourModeEvenBlock::from_parts(lim.nn, lim.inner, lim.inner, lim.nn, lim.inner);
    let closed = [
        Some(lim.nn),
        Some(lim.inner),
        Some(lim.c),
        Some(eof_from_concurrence(lim.c)?.e_pair),
        Some(mutual_information(&block)),
        Some(block.entropy()),
        Some(discord(&block)),
    ];
    let large = [None, None, None, None, Some(lim.i_approx), Some(lim.s_approx), Some(lim.d_approx)];
    let mut columns = vec!["closed form".to_string(), "large omega".to_string()];
    let exact = match strength {
        Some(x) => {
            let (k, kp) = (omega / 2, omega / 2 + 1);
            let s = ground_state(&ModelParams::new(omega, 1.0, x * omega as f64)?)?;
            let b = four_mode_block(&s, k, kp)?;
            let m = PairMeasures::from_block(k, kp, &b)?;
            columns.push(format!("exact G={x}*omega*eps"));
            Some([b.nn, b.n_tilde, m.concurrence, m.e_pair, m.mutual_information, b.entropy(), m.discord])
        }
        None => None,
    };
    let labels = ["<n n>", "inner entries", "C", "E_pair [bit]", "I [bit]", "S(block) [bit]", "D [bit]"];
    let fmt = |v: Option<f64>| v.map(format_short).unwrap_or_else(|| "-".into());
    let mut rows: Vec<(String, Vec<String>)> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut v = vec![fmt(closed[i]), fmt(large[i])];
            if let Some(e) = &exact {
                v.push(format_short(e[i]));
            }
            (l.to_string(), v)
        })
        .collect();
    let mut inf = vec!["-".to_string(), format_short(lim.d_inf)];
    if exact.is_some() {
        inf.push("-".into());
    }
    rows.push(("D (omega -> inf) [bit]".into(), inf));
    let title = format!("strong-coupling limits, omega = {omega}, levels ({}, {})", omega / 2, omega / 2 + 1);
    Ok(table(&title, &columns, &rows))
}

/// One line per criterion; the full level also lists every check.
pub fn verify_report(reports: &[CriterionReport], level: Level) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(s, "{r}");
        if level == Level::Full {
            for c in &r.checks {
                let _ = writeln!(s, "       {}{c}", if c.passed() { "" } else { "FAILED " });
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(s, "{} criteria, {failed} failed", reports.len());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_format() {
        assert_eq!(format_short(0.5f64.sqrt()), "0.707107");
        assert_eq!(format_short(0.0), "0.000000");
        assert_eq!(format_short(-0.0), "0.000000");
        assert_eq!(format_short(2.5e-5), "2.500000e-5");
    }

    #[test]
    fn limits_table_has_every_row() {
        let t = limits_report(4, None).unwrap();
        assert!(t.contains("C "));
        assert!(t.contains("0.333333"));
        assert_eq!(t.lines().count(), 10);
        assert!(limits_report(5, None).is_err());
    }
}
