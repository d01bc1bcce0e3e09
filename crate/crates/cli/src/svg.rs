//! Minimal hand-rolled SVG figures: the table with its periodic chords, and
//! the phase cylinder with both branch curves and marked singular points.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use billiard_core::curves::{CurveSample, SingularClass, SingularPoint};
use billiard_core::table::StringTable;

const W: f64 = 800.0;
const H: f64 = 800.0;

fn open_svg(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, width: f64, close: bool) {
    let mut d = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        let _ = write!(d, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, x, y);
    }
    if close {
        d.push('Z');
    }
    let _ = writeln!(
        out,
        "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\"/>"
    );
}

/// The table boundary, the inner unit circle, and every detected 2-periodic
/// chord.
pub fn table_figure(table: &StringTable, path: &Path) -> Result<()> {
    let n = 1024;
    let radius_max = (0..n)
        .map(|j| table.radius(2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .fold(0.0f64, f64::max);
    let scale = 0.45 * W / radius_max;
    let to_px = |p: billiard_core::trig::Point2| (W / 2.0 + scale * p.x, H / 2.0 - scale * p.y);

    let mut svg = open_svg(W, H);
    let boundary: Vec<(f64, f64)> = (0..n)
        .map(|j| to_px(table.boundary(2.0 * std::f64::consts::PI * j as f64 / n as f64)))
        .collect();
    polyline(&mut svg, &boundary, "#1a1a1a", 2.0, true);
    let inner: Vec<(f64, f64)> = (0..n)
        .map(|j| to_px(table.inner_point(2.0 * std::f64::consts::PI * j as f64 / n as f64)))
        .collect();
    polyline(&mut svg, &inner, "#999999", 1.0, true);

    let diam = billiard_core::billiard::find_diameters(table);
    for d in &diam.diameters {
        let a = to_px(table.boundary(d.t0));
        let b = to_px(table.boundary(d.t0 + std::f64::consts::PI));
        let _ = writeln!(
            svg,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#c0392b\" stroke-width=\"1.2\"/>",
            a.0, a.1, b.0, b.1
        );
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// The phase cylinder: both branches over [0, 2 pi), the spliced max-curve,
/// and the singular points.
pub fn phase_figure(
    sample: &CurveSample,
    singular: &[SingularPoint],
    path: &Path,
) -> Result<()> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let margin = 60.0;
    let theta_lo = sample
        .lambda_minus
        .iter()
        .chain(&sample.lambda_plus)
        .fold(f64::INFINITY, |a, &b| a.min(b));
    let theta_hi = sample
        .lambda_minus
        .iter()
        .chain(&sample.lambda_plus)
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let pad = 0.2 * (theta_hi - theta_lo).max(1e-3);
    let (lo, hi) = (theta_lo - pad, theta_hi + pad);
    let to_px = |t: f64, theta: f64| {
        (
            margin + (W - 2.0 * margin) * t / two_pi,
            H - margin - (H - 2.0 * margin) * (theta - lo) / (hi - lo),
        )
    };

    let mut svg = open_svg(W, H);
    // axes
    let _ = writeln!(
        svg,
        "<line x1=\"{m}\" y1=\"{y}\" x2=\"{x}\" y2=\"{y}\" stroke=\"#444\" stroke-width=\"1\"/>",
        m = margin,
        x = W - margin,
        y = H - margin
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{y}\" stroke=\"#444\" stroke-width=\"1\"/>",
        m = margin,
        y = H - margin
    );

    let curve_pts = |values: &[f64]| -> Vec<(f64, f64)> {
        sample
            .grid
            .iter()
            .zip(values)
            .map(|(&t, &theta)| to_px(t, theta))
            .collect()
    };
    polyline(&mut svg, &curve_pts(&sample.lambda_plus), "#2980b9", 1.2, false);
    polyline(&mut svg, &curve_pts(&sample.lambda_minus), "#27ae60", 1.2, false);
    polyline(&mut svg, &curve_pts(&sample.spliced_max), "#8e44ad", 2.0, false);

    for p in singular {
        let (x, y) = to_px(p.t0, std::f64::consts::PI / 2.0);
        let color = match p.class {
            SingularClass::Transversal => "#c0392b",
            SingularClass::Tangential => "#f39c12",
            SingularClass::ContinuumBoundary => "#7f8c8d",
        };
        let _ = writeln!(svg, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{color}\"/>");
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Twist track: the separatrix-level curve in (X, P) with corner markers.
pub fn twist_figure(samples: &[(f64, f64)], corners: &[f64], path: &Path) -> Result<()> {
    let margin = 60.0;
    let p_hi = samples.iter().map(|&(_, p)| p).fold(0.0f64, f64::max).max(1e-6);
    let to_px =
        |x: f64, p: f64| (margin + (W - 2.0 * margin) * x, H - margin - (H - 2.0 * margin) * p / (1.2 * p_hi));
    let mut svg = open_svg(W, H);
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, p)| to_px(x, p)).collect();
    polyline(&mut svg, &pts, "#2980b9", 1.6, false);
    for &x in corners {
        let (px, py) = to_px(x, 0.0);
        let _ = writeln!(svg, "<circle cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"4\" fill=\"#c0392b\"/>");
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
