//! The invariant curves of rotation number 1/2 and their singular points.
//!
//! The two branches come from the pencil of chords through the origin:
//! `lambda_pm(t) = arccos(+- <Gamma, Gamma'> / (|Gamma| |Gamma'|))`. Each is
//! smooth and invariant under the square of the billiard map; the pointwise
//! max and min splices are invariant under the map itself and pick up corners
//! where the branches cross transversally, which happens exactly on the
//! critical set of h. At a crossing the arc-length branch slopes are
//! `-+ (1/|Gamma| - k)`, so the spliced curve's one-sided slopes differ by
//! twice that magnitude, and the crossing is transversal exactly when the
//! second derivative of the string field s is nonzero there.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::billiard::{apply_map, find_diameters, PhasePoint};
use crate::table::StringTable;
use crate::{Error, Result};

/// Closed-form transversality values below this count as zero.
pub const TRANSVERSAL_TOL: f64 = 1e-10;

/// Finite-difference transversality values below this count as zero
/// (second-difference rounding floor).
pub const TRANSVERSAL_TOL_FD: f64 = 1e-6;

/// Which curve the invariance residual tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveBranch {
    /// lambda_+ under T^2.
    Plus,
    /// lambda_- under T^2.
    Minus,
    /// max(lambda_+, lambda_-) under T.
    SplicedMax,
    /// min(lambda_+, lambda_-) under T.
    SplicedMin,
}

/// Branch angles at parameter t: `arccos(+-<Gamma, Gamma'>/(|Gamma||Gamma'|))`.
pub fn lambda_pm(table: &StringTable, t: f64) -> Result<(f64, f64)> {
    let gamma = table.boundary(t);
    let tangent = table.boundary_derivative(t);
    let speed = tangent.norm();
    if speed < 1e-12 {
        return Err(Error::DegenerateTangent { at: t });
    }
    let u = gamma.dot(tangent) / (gamma.norm() * speed);
    let u = u.clamp(-1.0, 1.0);
    Ok((u.acos(), (-u).acos()))
}

/// Dense sampling of both branches with their splices and the crossing set.
#[derive(Debug, Clone)]
pub struct CurveSample {
    pub grid: Vec<f64>,
    pub lambda_plus: Vec<f64>,
    pub lambda_minus: Vec<f64>,
    pub spliced_max: Vec<f64>,
    pub spliced_min: Vec<f64>,
    /// Branch crossing parameters on [0, 2*pi): the diameter feet.
    pub crossings: Vec<f64>,
}

impl CurveSample {
    pub fn sample(table: &StringTable, n: usize) -> Result<CurveSample> {
        let mut grid = Vec::with_capacity(n);
        let mut lambda_plus = Vec::with_capacity(n);
        let mut lambda_minus = Vec::with_capacity(n);
        let mut spliced_max = Vec::with_capacity(n);
        let mut spliced_min = Vec::with_capacity(n);
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let (lp, lm) = lambda_pm(table, t)?;
            grid.push(t);
            lambda_plus.push(lp);
            lambda_minus.push(lm);
            spliced_max.push(lp.max(lm));
            spliced_min.push(lp.min(lm));
        }
        let diam = find_diameters(table);
        let mut crossings = Vec::with_capacity(diam.diameters.len() * 2);
        for d in &diam.diameters {
            crossings.push(d.t0);
            crossings.push(d.t0 + PI);
        }
        crossings.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(CurveSample { grid, lambda_plus, lambda_minus, spliced_max, spliced_min, crossings })
    }
}

/// Periodic 4-point Lagrange interpolation on a uniform grid.
fn interp4(values: &[f64], t: f64) -> f64 {
    let n = values.len();
    let x = crate::trig::wrap_2pi(t) / (2.0 * PI) * n as f64;
    let j = x.floor() as usize % n;
    let u = x - x.floor();
    let p = |i: isize| values[((j as isize + i).rem_euclid(n as isize)) as usize];
    let (pm1, p0, p1, p2) = (p(-1), p(0), p(1), p(2));
    -u * (u - 1.0) * (u - 2.0) / 6.0 * pm1
        + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * p0
        - (u + 1.0) * u * (u - 2.0) / 2.0 * p1
        + (u + 1.0) * u * (u - 1.0) / 6.0 * p2
}

/// Max deviation (in theta) between the mapped curve and the curve itself.
///
/// The smooth branches are tested under T^2 against their own interpolant;
/// the spliced curves are tested under T, interpolating each smooth branch
/// separately and splicing the interpolants, so corners cost no accuracy.
pub fn invariance_residual(table: &StringTable, branch: CurveBranch, n: usize) -> Result<f64> {
    let sample = CurveSample::sample(table, n)?;
    let mut worst = 0.0f64;
    for j in 0..n {
        let t = sample.grid[j];
        let theta = match branch {
            CurveBranch::Plus => sample.lambda_plus[j],
            CurveBranch::Minus => sample.lambda_minus[j],
            CurveBranch::SplicedMax => sample.spliced_max[j],
            CurveBranch::SplicedMin => sample.spliced_min[j],
        };
        let order = match branch {
            CurveBranch::Plus | CurveBranch::Minus => 2,
            _ => 1,
        };
        let image = apply_map(table, PhasePoint::new(t, theta), order)?;
        let expected = match branch {
            CurveBranch::Plus => interp4(&sample.lambda_plus, image.t),
            CurveBranch::Minus => interp4(&sample.lambda_minus, image.t),
            CurveBranch::SplicedMax => interp4(&sample.lambda_plus, image.t)
                .max(interp4(&sample.lambda_minus, image.t)),
            CurveBranch::SplicedMin => interp4(&sample.lambda_plus, image.t)
                .min(interp4(&sample.lambda_minus, image.t)),
        };
        worst = worst.max((image.theta - expected).abs());
    }
    Ok(worst)
}

/// Arc-length slopes of (lambda_+, lambda_-) at a crossing:
/// `-+ (1/|Gamma| - k)`, with the curvature k taken from the
/// finite-difference boundary route.
pub fn one_sided_slopes(table: &StringTable, t0: f64) -> Result<(f64, f64)> {
    let hd = table.fields(t0).hd;
    if hd.abs() > 1e-8 {
        return Err(Error::NotACriticalPoint { at: t0, hdot: hd });
    }
    let r = table.radius(t0);
    let k = table.curvature_of_boundary(t0)?;
    let e = 1.0 / r - k;
    Ok((-e, e))
}

/// How the two branches meet at a critical point of h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularClass {
    /// Distinct one-sided derivatives: a corner of the spliced curve.
    Transversal,
    /// Branches touch with equal derivatives (flat crossing).
    Tangential,
    /// Endpoint or interior of a continuum of 2-periodic directions.
    ContinuumBoundary,
}

/// A classified crossing of the branch curves.
#[derive(Debug, Clone, Copy)]
pub struct SingularPoint {
    pub t0: f64,
    /// One-sided arc-length slopes of the spliced max-curve: (-|E|, +|E|)
    /// with E = 1/|Gamma| - k.
    pub left_slope: f64,
    pub right_slope: f64,
    /// Closed-form transversality indicator: sddot at the crossing.
    pub sddot: f64,
    pub class: SingularClass,
}

/// Classify the crossing at a critical point of h by two routes that must
/// agree: (a) the simplified closed form
/// `sddot = (hdd/2) (1 - 2 hdd / (l + 1 - h))` and (b) the
/// finite-difference second derivative of |Gamma| in arc length.
pub fn transversality(table: &StringTable, t0: f64) -> Result<SingularPoint> {
    let fields = table.fields(t0);
    if fields.hd.abs() > 1e-8 {
        return Err(Error::NotACriticalPoint { at: t0, hdot: fields.hd });
    }
    let ell = table.string_length();
    let sddot = 0.5 * fields.hdd * (1.0 - 2.0 * fields.hdd / (ell + 1.0 - fields.h));

    // route (b): d^2|Gamma|/dxi^2 = r''(t)/sigma^2 at a critical point of r
    let step = crate::table::FD_STEP;
    let rr = |u: f64| table.radius(u);
    let second = |h: f64| (rr(t0 + h) - 2.0 * rr(t0) + rr(t0 - h)) / (h * h);
    let rdd_t = (4.0 * second(0.5 * step) - second(step)) / 3.0;
    let sigma = table.speed(t0);
    let rdd_xi = rdd_t / (sigma * sigma);

    let a_nonzero = sddot.abs() > TRANSVERSAL_TOL;
    let b_nonzero = rdd_xi.abs() > TRANSVERSAL_TOL_FD;
    if a_nonzero != b_nonzero {
        // values near either threshold are genuine borderline; a clean
        // conflict is both routes confident in opposite verdicts
        if sddot.abs() > 100.0 * TRANSVERSAL_TOL || rdd_xi.abs() > 100.0 * TRANSVERSAL_TOL_FD {
            return Err(Error::ClassificationConflict {
                detail: "sddot closed form and |Gamma| second derivative disagree on vanishing",
            });
        }
    }
    // r = l - s, so the measured r'' must carry the opposite sign of sddot
    if a_nonzero && b_nonzero && (rdd_t * sddot > 0.0) {
        return Err(Error::ClassificationConflict {
            detail: "sddot closed form and measured curvature defect disagree in sign",
        });
    }

    let class = if a_nonzero { SingularClass::Transversal } else { SingularClass::Tangential };
    let e = rdd_xi.abs();
    let (left_slope, right_slope) = if a_nonzero { (-e, e) } else { (0.0, 0.0) };
    Ok(SingularPoint { t0: crate::trig::wrap_2pi(t0), left_slope, right_slope, sddot, class })
}

/// The classified singular set of the spliced invariant curves.
#[derive(Debug, Clone, Default)]
pub struct SingularSet {
    /// Classified crossings on [0, 2*pi), sorted by parameter.
    pub points: Vec<SingularPoint>,
    /// Minimum gap between consecutive transversal points (2*pi when fewer
    /// than two exist).
    pub min_gap: f64,
    /// A continuum of 2-periodic directions is present.
    pub has_continuum: bool,
}

/// Locate and classify every crossing on the full circle.
pub fn singular_points(table: &StringTable) -> Result<SingularSet> {
    let diam = find_diameters(table);
    if diam.full_circle {
        return Ok(SingularSet { points: Vec::new(), min_gap: 2.0 * PI, has_continuum: true });
    }
    let mut points = Vec::new();
    for d in &diam.diameters {
        for foot in [d.t0, d.t0 + PI] {
            points.push(transversality(table, foot)?);
        }
    }
    for &(lo, hi) in &diam.plateaus {
        for foot in [lo, hi, lo + PI, hi + PI] {
            points.push(SingularPoint {
                t0: crate::trig::wrap_2pi(foot),
                left_slope: 0.0,
                right_slope: 0.0,
                sddot: 0.0,
                class: SingularClass::ContinuumBoundary,
            });
        }
    }
    points.sort_by(|a, b| a.t0.partial_cmp(&b.t0).unwrap());
    let transversal: Vec<f64> = points
        .iter()
        .filter(|p| p.class == SingularClass::Transversal)
        .map(|p| p.t0)
        .collect();
    let mut min_gap = 2.0 * PI;
    if transversal.len() >= 2 {
        for w in transversal.windows(2) {
            min_gap = min_gap.min(w[1] - w[0]);
        }
        min_gap = min_gap.min(2.0 * PI - transversal.last().unwrap() + transversal[0]);
    }
    Ok(SingularSet { points, min_gap, has_continuum: !diam.plateaus.is_empty() })
}
