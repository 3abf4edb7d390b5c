//! SVG line charts of a scan, one file per figure.

use std::path::{Path, PathBuf};

use plotters::prelude::*;

use crate::measures::PointMeasures;
use crate::scan::ScanResult;
use crate::{CliError, Method, Result};

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(255, 127, 14),
    RGBColor(23, 190, 207),
];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

struct Panel {
    title: String,
    y_label: &'static str,
    series: Vec<Series>,
}

struct Figure {
    name: &'static str,
    panels: Vec<Panel>,
}

fn series(label: String, rows: &[PointMeasures], log_x: bool, y: impl Fn(&PointMeasures) -> Option<f64>) -> Series {
    let points = rows
        .iter()
        .filter(|r| !log_x || r.g > 0.0)
        .filter_map(|r| {
            let x = if log_x { r.g.log10() } else { r.g };
            y(r).filter(|v| v.is_finite()).map(|v| (x, v))
        })
        .collect();
    Series { label, points }
}

fn present<'a>(pairs: &[(Method, Option<&'a [PointMeasures]>)]) -> Vec<(Method, &'a [PointMeasures])> {
    pairs.iter().filter_map(|&(m, r)| r.map(|r| (m, r))).collect()
}

fn level_entropy(r: &PointMeasures, k: usize) -> Option<f64> {
    r.h_f.iter().find(|(l, _)| *l == k).map(|&(_, h)| h)
}

fn figures(result: &ScanResult) -> Vec<Figure> {
    let cfg = &result.config;
    let log_x = cfg.g_log;
    let exact = result.method(Method::Exact);
    let bcs = result.method(Method::Bcs);
    let pbcs = result.method(Method::Pbcs);
    let exact_bcs = present(&[(Method::Exact, exact), (Method::Bcs, bcs)]);
    let exact_pbcs = present(&[(Method::Exact, exact), (Method::Pbcs, pbcs)]);
    let mut figs = Vec::new();

    let mut s = Vec::new();
    for &(m, rows) in &exact_bcs {
        s.push(series(format!("E/2Omega {}", m.name()), rows, log_x, |r| Some(r.e_over_2omega)));
    }
    if let Some(rows) = bcs {
        s.push(series("Delta/g bcs".into(), rows, log_x, |r| r.delta_over_g));
    }
    figs.push(Figure {
        name: "one_body_entropy",
        panels: vec![Panel { title: "One-body entanglement entropy".into(), y_label: "scaled value", series: s }],
    });

    let mut s = Vec::new();
    for k in [cfg.omega / 2, 1] {
        for &(m, rows) in &exact_bcs {
            if rows.first().and_then(|r| level_entropy(r, k)).is_some() {
                s.push(series(format!("h(f_{k}) {}", m.name()), rows, log_x, |r| level_entropy(r, k)));
            }
        }
    }
    figs.push(Figure {
        name: "mode_entropy",
        panels: vec![Panel { title: "Single-mode entropy".into(), y_label: "h(f_k) [bit]", series: s }],
    });

    let mut s = Vec::new();
    if let Some(rows) = exact {
        s.push(series("E/2Omega exact".into(), rows, log_x, |r| Some(r.e_over_2omega)));
        s.push(series("E_schmidt/max exact".into(), rows, log_x, |r| Some(r.e_schmidt_scaled)));
    }
    figs.push(Figure {
        name: "schmidt_entropy",
        panels: vec![Panel { title: "One-body and k|k-bar entropies".into(), y_label: "scaled entropy", series: s }],
    });

    let mut s = Vec::new();
    for (i, &(k, kp)) in cfg.level_pairs.iter().enumerate() {
        for &(m, rows) in &exact_bcs {
            s.push(series(format!("E_{k},{kp} {}", m.name()), rows, log_x, |r| Some(r.pairs[i].e_pair)));
        }
    }
    figs.push(Figure {
        name: "entanglement_of_formation",
        panels: vec![Panel { title: "Pair entanglement of formation".into(), y_label: "E_kk' [bit]", series: s }],
    });

    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for (i, &(k, kp)) in cfg.level_pairs.iter().enumerate().take(2) {
        for &(m, rows) in &exact_bcs {
            top.push(series(format!("I_{k},{kp} {}", m.name()), rows, log_x, |r| Some(r.pairs[i].mutual_information)));
            bottom.push(series(format!("D_{k},{kp} {}", m.name()), rows, log_x, |r| Some(r.pairs[i].discord)));
        }
    }
    figs.push(Figure {
        name: "mutual_information_discord",
        panels: vec![
            Panel { title: "Mutual information".into(), y_label: "I [bit]", series: top },
            Panel { title: "Quantum discord".into(), y_label: "D [bit]", series: bottom },
        ],
    });

    if let (Some(ex), Some(pb)) = (exact, pbcs) {
        let (k, kp) = cfg.level_pairs[0];
        let mut top = Vec::new();
        let mut mid = Vec::new();
        for &(m, rows) in &exact_pbcs {
            top.push(series(format!("E_{k},{kp} {}", m.name()), rows, log_x, |r| Some(r.pairs[0].e_pair)));
            mid.push(series(format!("E/2Omega {}", m.name()), rows, log_x, |r| Some(r.e_over_2omega)));
        }
        let two_omega = 2.0 * cfg.omega as f64;
        let diff: Vec<PointMeasures> = ex
            .iter()
            .zip(pb)
            .map(|(e, p)| PointMeasures { energy: (p.energy - e.energy) / two_omega, ..e.clone() })
            .collect();
        let bottom = vec![series("(E_pbcs - E_exact)/2Omega".into(), &diff, log_x, |r| Some(r.energy))];
        figs.push(Figure {
            name: "projected_bcs",
            panels: vec![
                Panel { title: "Pair entanglement of formation".into(), y_label: "E_kk' [bit]", series: top },
                Panel { title: "One-body entanglement entropy".into(), y_label: "E/2Omega", series: mid },
                Panel { title: "Projected BCS energy error".into(), y_label: "dE/2Omega [eps]", series: bottom },
            ],
        });
    }

    figs.retain(|f| f.panels.iter().any(|p| p.series.iter().any(|s| !s.points.is_empty())));
    figs
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        return None;
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * hi.abs().max(1e-3) };
    Some((lo - pad, hi + pad))
}

fn draw(path: &Path, fig: &Figure, log_x: bool) -> std::result::Result<(), Box<dyn std::error::Error>> {
    let root = SVGBackend::new(path, (900, 420 * fig.panels.len() as u32)).into_drawing_area();
    root.fill(&WHITE)?;
    let areas = root.split_evenly((fig.panels.len(), 1));
    for (area, panel) in areas.iter().zip(&fig.panels) {
        let xs = panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
        let ys = panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
        let (Some((x0, x1)), Some((y0, y1))) = (bounds(xs), bounds(ys)) else {
            continue;
        };
        let mut chart = ChartBuilder::on(area)
            .caption(&panel.title, ("sans-serif", 20))
            .margin(12)
            .x_label_area_size(40)
            .y_label_area_size(60)
            .build_cartesian_2d(x0..x1, y0..y1)?;
        let x_fmt = |v: &f64| if log_x { format!("{:.3}", 10f64.powf(*v)) } else { format!("{v:.3}") };
        chart.configure_mesh().x_desc("G/eps").y_desc(panel.y_label).x_label_formatter(&x_fmt).draw()?;
        for (i, s) in panel.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            chart
                .draw_series(LineSeries::new(s.points.iter().copied(), color.stroke_width(2)))?
                .label(s.label.as_str())
                .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color.stroke_width(2)));
        }
        chart.configure_series_labels().background_style(WHITE.mix(0.85)).border_style(BLACK).draw()?;
    }
    root.present()?;
    Ok(())
}

/// Writes the figures that the scan's methods support into `dir`.
pub fn write_plots(result: &ScanResult, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    for fig in figures(result) {
        let path = dir.join(format!("{}.svg", fig.name));
        draw(&path, &fig, result.config.g_log)
            .map_err(|e| CliError::Plot { path: path.clone(), message: e.to_string() })?;
        written.push(path);
    }
    Ok(written)
}
