//! Report schemas and deterministic writers: JSON with sorted keys, CSV with
//! a header row, full round-trip float precision everywhere.

use anyhow::{Context, Result};
use serde::Serialize;
use std::fs;
use std::path::Path;

/// Serialize any report as UTF-8 JSON with alphabetically sorted keys.
/// Routing through `serde_json::Value` sorts object keys (its map is a
/// BTreeMap), which makes byte-identical reruns straightforward.
pub fn write_json<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let value = serde_json::to_value(report).context("serializing report")?;
    let mut text = serde_json::to_string_pretty(&value).context("rendering report")?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Write CSV rows with a header; floats are printed with Rust's
/// shortest-round-trip formatting.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct TableHeader {
    pub tau: f64,
    pub string_length: f64,
    pub translation: [f64; 2],
    /// Fitted coefficients of f as [k, re, im] triples, k >= 0 only; the
    /// negative side follows by conjugate symmetry.
    pub coefficients: Vec<(usize, f64, f64)>,
    pub backend: String,
    pub variant: String,
    pub fit_residual: f64,
    pub projection_defect: f64,
    pub reconstruction_defect: f64,
    pub route_discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiameterReport {
    pub t0: f64,
    pub d: f64,
    pub h: f64,
    pub hddot: f64,
    pub class: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularReport {
    pub t0: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    pub sddot: f64,
    pub class: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub t0: f64,
    pub k1: f64,
    pub k2: f64,
    pub d: f64,
    pub i1: f64,
    pub i2: f64,
    pub trace: f64,
    pub trace_formula: f64,
    pub eigenvalues: [f64; 2],
    pub eigenvalues_real: bool,
    pub class: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub lambda_plus_t2: f64,
    pub lambda_minus_t2: f64,
    pub spliced_max_t: f64,
    pub spliced_min_t: f64,
    pub budget: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub s_route_agreement: f64,
    pub hdot_plus_g_defect: f64,
    pub h_antisymmetry: f64,
    pub tangent_agreement: f64,
    pub inner_width_spread: f64,
    pub checks_passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub table: TableHeader,
    pub diameters: Vec<DiameterReport>,
    pub plateaus: Vec<(f64, f64)>,
    pub full_circle_continuum: bool,
    pub singular_points: Vec<SingularReport>,
    pub min_singular_gap: f64,
    pub spectrum: Vec<SpectrumReport>,
    pub residuals: ResidualReport,
    pub verification: VerificationReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistCornerReport {
    pub x: f64,
    pub kind: String,
    pub second_derivative: f64,
    pub degenerate: bool,
    pub left_slope: f64,
    pub right_slope: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwistSummary {
    pub a: i64,
    pub b: i64,
    pub level: f64,
    pub energy: f64,
    pub corners: Vec<TwistCornerReport>,
    pub energy_drift_100: f64,
    pub curve_invariance_deviation: f64,
    pub checks_passed: bool,
}
