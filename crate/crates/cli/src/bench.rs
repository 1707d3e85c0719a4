//! Strategy × size × seed benchmark matrix, CSV rows and a log-log scatter.

use std::fmt::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use depthcut::cutters::{run_strategy, verify_cuts, CutterError, Strategy};
use depthcut::geom::{apply_cuts, int, GeomError};
use depthcut::scenes::{gen_random, gen_random_segments, SceneError};

pub const DEFAULT_SIZES: [usize; 4] = [64, 128, 256, 512];
pub const DEFAULT_SEEDS: u64 = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub strategy: String,
    pub cut_count: usize,
    pub piece_count: usize,
    pub wall_time_ms: f64,
    pub acyclic: bool,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub strategies: Vec<Strategy>,
    /// Random segments instead of random lines.
    pub segments: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Cutter(#[from] CutterError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Runs every (strategy, n, seed) cell, concurrently, and returns the rows
/// sorted by that triple. Seeds drive both the scene and the strategy, so a
/// rerun reproduces every column except the timing.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut cells = Vec::new();
    for strategy in &config.strategies {
        for &n in &config.sizes {
            for &seed in &config.seeds {
                cells.push((strategy, n, seed));
            }
        }
    }
    let mut rows = cells
        .into_par_iter()
        .map(|(strategy, n, seed)| bench_cell(strategy, n, seed, config.segments))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| (&a.strategy, a.n, a.seed).cmp(&(&b.strategy, b.n, b.seed)));
    Ok(rows)
}

fn bench_cell(
    strategy: &Strategy,
    n: usize,
    seed: u64,
    segments: bool,
) -> Result<BenchRow, BenchError> {
    let bound = int(1000);
    let scene = if segments {
        gen_random_segments(n, seed, &bound, None)?
    } else {
        gen_random(n, seed, &bound)?
    };
    let strategy = with_seed(strategy, seed);
    let start = Instant::now();
    let cuts = run_strategy(&scene, &strategy)?;
    let wall_time_ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
    Ok(BenchRow {
        n,
        seed,
        strategy: strategy.name().to_string(),
        cut_count: cuts.len(),
        piece_count: apply_cuts(&scene, &cuts)?.len(),
        wall_time_ms,
        acyclic: verify_cuts(&scene, &cuts)?,
    })
}

fn with_seed(strategy: &Strategy, seed: u64) -> Strategy {
    match strategy {
        Strategy::Partition(p) => {
            Strategy::Partition(depthcut::partition::PartitionParams { seed, ..p.clone() })
        }
        Strategy::SegmentSensitive(p) => {
            Strategy::SegmentSensitive(depthcut::partition::PartitionParams { seed, ..p.clone() })
        }
        s => s.clone(),
    }
}

pub fn rows_to_csv(rows: &[BenchRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Least-squares slope of `ln(cut_count)` against `ln(n)` over the rows of
/// one strategy with at least one cut. `None` without two distinct sizes.
pub fn fit_exponent(rows: &[BenchRow], strategy: &str) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.strategy == strategy && r.cut_count > 0)
        .map(|r| ((r.n as f64).ln(), (r.cut_count as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 1e-12).then(|| sxy / sxx)
}

/// Strategy names in first-seen order.
pub fn strategies_in(rows: &[BenchRow]) -> Vec<&str> {
    let mut names: Vec<&str> = Vec::new();
    for r in rows {
        if !names.contains(&r.strategy.as_str()) {
            names.push(&r.strategy);
        }
    }
    names
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Log-log scatter of cut counts with the reference curves `n(n−1)` and
/// `n^{3/2}`.
pub fn scatter_svg(rows: &[BenchRow]) -> String {
    let (w, h, pad) = (720.0, 480.0, 60.0);
    let n_lo = rows.iter().map(|r| r.n).min().unwrap_or(2).max(2) as f64;
    let n_hi = (rows.iter().map(|r| r.n).max().unwrap_or(4) as f64).max(n_lo * 2.0);
    let y_lo = rows
        .iter()
        .map(|r| r.cut_count.max(1) as f64)
        .fold(n_lo.powf(1.5), f64::min)
        .max(1.0);
    let y_hi = n_hi * (n_hi - 1.0);
    let (lx0, lx1) = (n_lo.log10(), n_hi.log10());
    let (ly0, ly1) = (y_lo.log10() - 0.1, y_hi.log10() + 0.1);
    let px = |n: f64| pad + (n.log10() - lx0) / (lx1 - lx0) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y.log10() - ly0) / (ly1 - ly0) * (h - 2.0 * pad);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<path d="M{pad} {pad} V{} H{}" fill="none" stroke="black"/>"#,
        h - pad,
        w - pad
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#,
        w / 2.0,
        h - 15.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">cuts</text>"#,
        h / 2.0,
        h / 2.0
    )
    .unwrap();
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for n in sizes {
        let x = px(n as f64);
        writeln!(
            svg,
            r#"<text x="{x:.1}" y="{}" text-anchor="middle">{n}</text>"#,
            h - pad + 16.0
        )
        .unwrap();
    }
    let mut decade = 10f64.powf(ly0.ceil());
    while decade.log10() <= ly1 {
        writeln!(
            svg,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{decade:.0}</text>"#,
            pad - 6.0,
            py(decade) + 4.0
        )
        .unwrap();
        decade *= 10.0;
    }

    type Curve = (&'static str, fn(f64) -> f64);
    let curves: [Curve; 2] = [("n(n-1)", |n| n * (n - 1.0)), ("n^1.5", |n| n.powf(1.5))];
    for (k, (label, f)) in curves.iter().enumerate() {
        let mut d = String::new();
        for i in 0..=64 {
            let n = 10f64.powf(lx0 + (lx1 - lx0) * i as f64 / 64.0);
            write!(
                d,
                "{}{:.1} {:.1}",
                if i == 0 { "M" } else { " L" },
                px(n),
                py(f(n))
            )
            .unwrap();
        }
        writeln!(
            svg,
            r#"<path class="reference" d="{d}" fill="none" stroke="gray" stroke-dasharray="{}"/>"#,
            if k == 0 { "6 3" } else { "2 3" }
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{}" y="{:.1}" fill="gray">{label}</text>"#,
            w - pad + 4.0,
            py(f(n_hi)) + 4.0
        )
        .unwrap();
    }

    for (k, name) in strategies_in(rows).into_iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for r in rows.iter().filter(|r| r.strategy == name) {
            writeln!(
                svg,
                r#"<circle class="point" cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                px(r.n as f64),
                py(r.cut_count.max(1) as f64)
            )
            .unwrap();
        }
        let label = match fit_exponent(rows, name) {
            Some(e) => format!("{name} (slope {e:.2})"),
            None => name.to_string(),
        };
        let y = pad + 16.0 * k as f64;
        writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="4" fill="{color}"/>"#,
            pad + 12.0,
            y
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{}" y="{}">{label}</text>"#,
            pad + 22.0,
            y + 4.0
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(strategy: &str, n: usize, cut_count: usize) -> BenchRow {
        BenchRow {
            n,
            seed: 0,
            strategy: strategy.into(),
            cut_count,
            piece_count: n + cut_count,
            wall_time_ms: 0.0,
            acyclic: true,
        }
    }

    #[test]
    fn slope_of_exact_power_law() {
        let rows: Vec<_> = [8usize, 16, 32, 64]
            .iter()
            .map(|&n| row("naive", n, n * n))
            .collect();
        assert!((fit_exponent(&rows, "naive").unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(fit_exponent(&rows, "greedy"), None);
        assert_eq!(fit_exponent(&rows[..1], "naive"), None);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = rows_to_csv(&[row("naive", 4, 12)]).unwrap();
        assert_eq!(csv, "n,seed,strategy,cut_count,piece_count,wall_time_ms,acyclic\n4,0,naive,12,16,0.0,true\n");
    }

    #[test]
    fn scatter_marks_every_row() {
        let rows = vec![
            row("naive", 8, 56),
            row("naive", 16, 240),
            row("partition", 16, 100),
        ];
        let svg = scatter_svg(&rows);
        assert_eq!(svg.matches(r#"class="point""#).count(), 3);
        assert_eq!(svg.matches(r#"class="reference""#).count(), 2);
    }
}
