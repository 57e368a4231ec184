//! Tables, JSON mirrors and the scan plot.

use std::fmt::Write as _;

use frate_core::aep::ScanRow;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Certificate kind of a solver value with a duality or Frank–Wolfe gap.
pub const SOLVER_GAP: &str = "solver-gap";
pub const EXACT: &str = "exact";
pub const ANALYTIC_LOWER: &str = "analytic-lower";

pub const SCAN_HEADER: &str = "n,c,spectral_point,heuristic_value,lower_bound,bracket_lower,bracket_upper,mass";

/// Short human-readable number: six decimals, trailing zeros dropped.
pub fn human(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Three significant digits in scientific notation; zero prints as `0`.
pub fn sci(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

/// Scan row as written to CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCsvRow {
    pub n: usize,
    pub c: f64,
    pub spectral_point: String,
    pub heuristic_value: f64,
    pub lower_bound: f64,
    pub bracket_lower: f64,
    pub bracket_upper: f64,
    pub mass: f64,
}

impl From<&ScanRow> for ScanCsvRow {
    fn from(r: &ScanRow) -> Self {
        ScanCsvRow {
            n: r.n,
            c: r.c,
            spectral_point: r.id.name().into(),
            heuristic_value: r.heuristic_value,
            lower_bound: r.lower_bound,
            bracket_lower: r.bracket_lower,
            bracket_upper: r.bracket_upper,
            mass: r.mass,
        }
    }
}

/// Certificate kinds of the numeric fields of a scan row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCertificates {
    pub heuristic_value: String,
    pub lower_bound: String,
    pub bracket: String,
}

/// Scan row of the JSON mirror.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanJsonRow {
    #[serde(flatten)]
    pub row: ScanCsvRow,
    /// Block length of the bracket.
    pub k: usize,
    pub certificates: ScanCertificates,
}

impl From<&ScanRow> for ScanJsonRow {
    fn from(r: &ScanRow) -> Self {
        ScanJsonRow {
            row: r.into(),
            k: r.k,
            certificates: ScanCertificates {
                heuristic_value: r.kind.name().into(),
                lower_bound: ANALYTIC_LOWER.into(),
                bracket: SOLVER_GAP.into(),
            },
        }
    }
}

fn to_csv<T: Serialize>(rows: &[T], header: &str) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8");
    format!("{header}\n{body}")
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let rows: Vec<ScanCsvRow> = rows.iter().map(ScanCsvRow::from).collect();
    to_csv(&rows, SCAN_HEADER)
}

pub fn parse_scan_csv(text: &str) -> CliResult<Vec<ScanCsvRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| CliError::Input(format!("scan csv: {e}")))?
        .iter()
        .map(String::from)
        .collect();
    if header.join(",") != SCAN_HEADER {
        return Err(CliError::Input("scan csv: unexpected header".into()));
    }
    r.deserialize()
        .collect::<Result<Vec<ScanCsvRow>, _>>()
        .map_err(|e| CliError::Input(format!("scan csv: {e}")))
}

/// One row of the F-rate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrateRow {
    pub k: usize,
    /// `a_k / k`.
    pub upper: f64,
    /// `upper − I(1:2)/k`.
    pub lower: f64,
    pub width: f64,
    /// `H̄ − (H(μ_{1..k}) − a_k) / k`.
    pub rate_lower: f64,
    /// Solver gap of `a_k` (bits, not divided by `k`).
    pub solver_gap: f64,
    pub certificate: String,
}

pub const FRATE_HEADER: &str = "k,upper,lower,width,rate_lower,solver_gap,certificate";

pub fn frate_csv(rows: &[FrateRow]) -> String {
    to_csv(rows, FRATE_HEADER)
}

pub fn parse_frate_csv(text: &str) -> CliResult<Vec<FrateRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<FrateRow>, _>>()
        .map_err(|e| CliError::Input(format!("frate csv: {e}")))
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line plot of `heuristic_value` against `n`, one series per `c`, with the
/// bracket drawn dashed. Depends on the CSV text only.
pub fn scan_svg(csv_text: &str) -> CliResult<String> {
    let rows = parse_scan_csv(csv_text)?;
    let (w, h, m) = (640.0, 400.0, 50.0);
    let mut cs: Vec<f64> = Vec::new();
    for r in &rows {
        if !cs.contains(&r.c) {
            cs.push(r.c);
        }
    }
    let n_lo = rows.iter().map(|r| r.n).min().unwrap_or(1) as f64;
    let n_hi = rows.iter().map(|r| r.n).max().unwrap_or(1) as f64;
    let values = rows
        .iter()
        .flat_map(|r| [r.heuristic_value, r.bracket_lower, r.bracket_upper]);
    let (mut y_lo, mut y_hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (0.0, 1.0);
    }
    if y_hi - y_lo < 1e-9 {
        y_hi = y_lo + 1.0;
    }
    let sx = |n: f64| {
        if n_hi > n_lo {
            m + (n - n_lo) / (n_hi - n_lo) * (w - 2.0 * m)
        } else {
            w / 2.0
        }
    };
    let sy = |v: f64| h - m - (v - y_lo) / (y_hi - y_lo) * (h - 2.0 * m);
    let polyline = |pts: &[(f64, f64)]| {
        pts.iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m},{m} V{} H{}" fill="none" stroke="black"/>"#,
        h - m,
        w - m
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#, w / 2.0, h - 10.0);
    let _ = writeln!(s, r#"<text x="{m}" y="{}" text-anchor="end">{}</text>"#, m - 8.0, human(y_hi));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, m - 4.0, h - m, human(y_lo));

    let bracket_rows: Vec<&ScanCsvRow> = rows.iter().filter(|r| Some(&r.c) == cs.first()).collect();
    for r in &bracket_rows {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            sx(r.n as f64),
            h - m + 16.0,
            r.n
        );
    }
    for (pick, label) in [(0, "bracket lower"), (1, "bracket upper")] {
        let pts: Vec<(f64, f64)> = bracket_rows
            .iter()
            .map(|r| (r.n as f64, if pick == 0 { r.bracket_lower } else { r.bracket_upper }))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="gray" stroke-dasharray="4 3"><title>{label}</title></polyline>"#,
            polyline(&pts)
        );
    }
    for (i, c) in cs.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.c == *c)
            .map(|r| (r.n as f64, r.heuristic_value))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" points="{}" fill="none" stroke="{color}" stroke-width="2"><title>c = {c}</title></polyline>"#,
            polyline(&pts)
        );
        let ly = m + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly:.2}" fill="{color}">c = {c}</text>"#,
            w - m - 60.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
