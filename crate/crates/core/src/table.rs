//! Constant-width bodies and the string construction around the unit circle.
//!
//! The table boundary is the level set of the summed distances to the unit
//! disk and its perturbed copy, parametrized explicitly as
//! `Gamma(t) = gamma(t) - i s(t) e^{it}` with
//! `s(t) = (l^2 - |gamma|^2) / (2 (l - <gamma, i e^{it}>))`.
//! Everything downstream only needs the scalar fields (g, h) of the
//! perturbation: `s` rewrites as a rational expression in (h, hdot) and the
//! boundary derivatives come out in the rotating frame as
//! `Gamma' = (rho + s) e - sdot ie`, `Gamma'' = (rho' + 2 sdot) e + (rho + s - sddot) ie`.


use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::trig::{unit, Point2, TrigPoly};
use crate::vanishing::PerturbationData;
use crate::{Error, Result};

/// Grid used for positivity/convexity scans and norm estimates.
pub const SCAN_GRID: usize = 8192;

/// Step for the finite-difference boundary derivatives (Richardson-extrapolated).
pub const FD_STEP: f64 = 1e-4;

/// A convex body given by its curvature radius as a function of tangent angle.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    rho: TrigPoly,
    base_point: Point2,
}

impl ConvexBody {
    /// Build a body with boundary `basePoint + int_0^t rho(s) e^{is} ds`.
    ///
    /// Fails when rho dips nonpositive on the scan grid or the closure
    /// coefficient alpha_{-1} is nonzero.
    pub fn new(rho: TrigPoly, base_point: Point2) -> Result<Self> {
        rho.path_integral(0.0)?; // closure condition
        for j in 0..SCAN_GRID {
            let t = 2.0 * PI * j as f64 / SCAN_GRID as f64;
            let v = rho.eval(t);
            if v <= 0.0 {
                return Err(Error::NonpositiveCurvatureRadius { min_value: v, at: t });
            }
        }
        Ok(ConvexBody { rho, base_point })
    }

    pub fn curvature_radius(&self) -> &TrigPoly {
        &self.rho
    }

    /// Boundary point at tangent angle t.
    pub fn point(&self, t: f64) -> Point2 {
        self.base_point + self.rho.path_integral(t).expect("validated at construction")
    }

    /// Distance between the two supporting lines orthogonal to `e^{i theta}`.
    ///
    /// The outward normal at parameter t is `-i e^{it}`, so the supporting
    /// pair for direction theta touches at t = theta + pi/2 and t + pi.
    pub fn width(&self, theta: f64) -> f64 {
        let t = theta + PI / 2.0;
        let chord = self.point(t) - self.point(t + PI);
        let inward = unit(t).perp();
        chord.dot(inward * -1.0)
    }

    /// (min, max) width over `n` directions.
    pub fn width_range(&self, n: usize) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..n {
            let w = self.width(PI * j as f64 / n as f64);
            lo = lo.min(w);
            hi = hi.max(w);
        }
        (lo, hi)
    }

    /// Constant width is equivalent to the curvature radius having only odd
    /// harmonics beyond its mean.
    pub fn constant_width_defect(&self) -> f64 {
        self.rho
            .half_spectrum()
            .iter()
            .enumerate()
            .filter(|(k, _)| *k >= 2 && *k % 2 == 0)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max)
    }
}

/// Scaled field sample on the table: the perturbation fields of the source
/// multiplied by tau, plus third-order data used by the curvature formulas.
#[derive(Debug, Clone, Copy)]
pub struct TableFields {
    pub g: f64,
    pub h: f64,
    pub hd: f64,
    pub hdd: f64,
    pub hddd: f64,
    pub f: f64,
    pub fd: f64,
}

/// A string-constructed table around the unit circle.
#[derive(Debug, Clone)]
pub struct StringTable {
    pd: PerturbationData,
    tau: f64,
    ell: f64,
}

impl StringTable {
    /// The unperturbed table: two concentric unit circles, boundary a circle
    /// of radius (l + 1) / 2.
    pub fn circle(ell: f64) -> Result<Self> {
        StringTable::new(PerturbationData::zero(), 0.0, ell)
    }

    /// String construction with perturbation `tau * f` and string length `ell`.
    ///
    /// Verifies positivity of the curvature radius, positivity of the string
    /// field s, and strict convexity of the boundary (signed area of
    /// consecutive tangents on the scan grid).
    pub fn new(pd: PerturbationData, tau: f64, ell: f64) -> Result<Self> {
        let table = StringTable { pd, tau, ell };
        for j in 0..SCAN_GRID {
            let t = 2.0 * PI * j as f64 / SCAN_GRID as f64;
            let rho = table.curvature_radius(t);
            if rho <= 0.0 {
                return Err(Error::NonpositiveCurvatureRadius { min_value: rho, at: t });
            }
            let fields = table.fields(t);
            if ell + 1.0 - fields.h <= 0.0 {
                return Err(Error::StringTooShort { detail: "level-set denominator vanished" });
            }
            if table.s_of_t(t) <= 0.0 {
                return Err(Error::StringTooShort { detail: "string field s not positive" });
            }
        }
        // turning-tangent convexity: consecutive tangents must rotate
        // counterclockwise everywhere
        let mut prev = table.boundary_derivative(0.0);
        for j in 1..=SCAN_GRID {
            let t = 2.0 * PI * j as f64 / SCAN_GRID as f64;
            let cur = table.boundary_derivative(t);
            if prev.cross(cur) <= 0.0 {
                return Err(Error::StringTooShort { detail: "boundary not strictly convex" });
            }
            prev = cur;
        }
        Ok(table)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn string_length(&self) -> f64 {
        self.ell
    }

    pub fn perturbation(&self) -> &PerturbationData {
        &self.pd
    }

    /// Scaled perturbation fields at t.
    pub fn fields(&self, t: f64) -> TableFields {
        let s = self.pd.fields(t);
        let tau = self.tau;
        TableFields {
            g: tau * s.g,
            h: tau * s.h,
            hd: -tau * s.g,
            hdd: -tau * s.gd,
            hddd: -tau * s.gdd,
            f: tau * self.pd.f_value(t),
            fd: tau * self.pd.fd_value(t),
        }
    }

    pub fn g_of_t(&self, t: f64) -> f64 {
        self.fields(t).g
    }

    pub fn h_of_t(&self, t: f64) -> f64 {
        self.fields(t).h
    }

    /// Curvature radius of the perturbed inner body, `1 + tau f`.
    pub fn curvature_radius(&self, t: f64) -> f64 {
        1.0 + self.fields(t).f
    }

    /// Boundary point of the perturbed inner body,
    /// `gamma(t) = -i e^{it} + p(t)` with `p = g e^{it} + h i e^{it}`.
    pub fn inner_point(&self, t: f64) -> Point2 {
        let e = unit(t);
        let ie = e.perp();
        let fields = self.fields(t);
        ie * (fields.h - 1.0) + e * fields.g
    }

    /// The string field s written in terms of h alone:
    /// `s = (l^2 - 1 + 2h - h^2 - hdot^2) / (2 (l + 1 - h))`.
    pub fn s_of_t(&self, t: f64) -> f64 {
        let f = self.fields(t);
        let num = self.ell * self.ell - 1.0 + 2.0 * f.h - f.h * f.h - f.hd * f.hd;
        0.5 * num / (self.ell + 1.0 - f.h)
    }

    /// The same field from the defining level-set formula
    /// `(l^2 - |gamma|^2) / (2 (l - <gamma, i e^{it}>))`; agreement with
    /// [`StringTable::s_of_t`] is a construction invariant.
    pub fn s_direct(&self, t: f64) -> f64 {
        let gamma = self.inner_point(t);
        let ie = unit(t).perp();
        0.5 * (self.ell * self.ell - gamma.norm_sq()) / (self.ell - gamma.dot(ie))
    }

    fn s_c2(&self, t: f64) -> (f64, f64, f64) {
        let f = self.fields(t);
        let ell = self.ell;
        let n = ell * ell - 1.0 + 2.0 * f.h - f.h * f.h - f.hd * f.hd;
        let d = ell + 1.0 - f.h;
        let nd = 2.0 * f.hd * (1.0 - f.h - f.hdd);
        let dd = -f.hd;
        let ndd = 2.0 * f.hdd * (1.0 - f.h - f.hdd) + 2.0 * f.hd * (-f.hd - f.hddd);
        let ddd = -f.hdd;
        let s = 0.5 * n / d;
        let sd = 0.5 * (nd * d - n * dd) / (d * d);
        let sdd =
            0.5 * ((ndd * d - n * ddd) / (d * d) - 2.0 * dd * (nd * d - n * dd) / (d * d * d));
        (s, sd, sdd)
    }

    pub fn s_derivatives(&self, t: f64) -> (f64, f64, f64) {
        self.s_c2(t)
    }

    /// Boundary point `Gamma(t) = gamma(t) - s(t) i e^{it}`.
    pub fn boundary(&self, t: f64) -> Point2 {
        let e = unit(t);
        let ie = e.perp();
        self.inner_point(t) - ie * self.s_of_t(t)
    }

    /// Analytic `Gamma'(t) = (rho + s) e^{it} - sdot i e^{it}`.
    pub fn boundary_derivative(&self, t: f64) -> Point2 {
        let e = unit(t);
        let ie = e.perp();
        let rho = self.curvature_radius(t);
        let (s, sd, _) = self.s_c2(t);
        e * (rho + s) - ie * sd
    }

    /// Analytic `Gamma''(t) = (rho' + 2 sdot) e^{it} + (rho + s - sddot) i e^{it}`.
    pub fn boundary_second_derivative(&self, t: f64) -> Point2 {
        let e = unit(t);
        let ie = e.perp();
        let fields = self.fields(t);
        let rho = 1.0 + fields.f;
        let (s, sd, sdd) = self.s_c2(t);
        e * (fields.fd + 2.0 * sd) + ie * (rho + s - sdd)
    }

    /// Analytic boundary curvature.
    pub fn curvature_analytic(&self, t: f64) -> f64 {
        let d1 = self.boundary_derivative(t);
        let d2 = self.boundary_second_derivative(t);
        d1.cross(d2) / d1.norm().powi(3)
    }

    /// Boundary curvature from Richardson-extrapolated central differences of
    /// `Gamma` alone, the route independent of the analytic derivative
    /// formulas.
    pub fn curvature_of_boundary(&self, t: f64) -> Result<f64> {
        self.curvature_of_boundary_with_step(t, FD_STEP)
    }

    /// Same with an explicit base step.
    pub fn curvature_of_boundary_with_step(&self, t: f64, step: f64) -> Result<f64> {
        let d1 = richardson_first(|u| self.boundary(u), t, step);
        if d1.norm() < 1e-9 {
            return Err(Error::DegenerateTangent { at: t });
        }
        let d2 = richardson_second(|u| self.boundary(u), t, step);
        Ok(d1.cross(d2) / d1.norm().powi(3))
    }

    /// FD curvature together with a self-estimate of its error, obtained by
    /// halving the base step; boundaries with features sharper than the step
    /// report an honestly wide uncertainty.
    pub fn curvature_of_boundary_estimated(&self, t: f64) -> Result<(f64, f64)> {
        let coarse = self.curvature_of_boundary_with_step(t, FD_STEP)?;
        let fine = self.curvature_of_boundary_with_step(t, 0.5 * FD_STEP)?;
        Ok((fine, (fine - coarse).abs()))
    }

    /// Finite-difference boundary tangent (Richardson-extrapolated).
    pub fn boundary_derivative_fd(&self, t: f64) -> Point2 {
        richardson_first(|u| self.boundary(u), t, FD_STEP)
    }

    /// Distance of the boundary from the origin; equals `l - s(t)`.
    pub fn radius(&self, t: f64) -> f64 {
        self.boundary(t).norm()
    }

    /// Arc-length rate `|Gamma'(t)|`.
    pub fn speed(&self, t: f64) -> f64 {
        self.boundary_derivative(t).norm()
    }

    /// Max deviation between analytic and finite-difference tangents over a
    /// grid; guards against transcription errors in the derivative formulas.
    pub fn derivative_agreement(&self, n: usize) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let d = self.boundary_derivative(t) - self.boundary_derivative_fd(t);
            worst = worst.max(d.norm());
        }
        worst
    }
}

fn richardson_first<F: Fn(f64) -> Point2>(f: F, t: f64, step: f64) -> Point2 {
    let d = |h: f64| (f(t + h) - f(t - h)) * (0.5 / h);
    let coarse = d(step);
    let fine = d(0.5 * step);
    (fine * 4.0 - coarse) * (1.0 / 3.0)
}

fn richardson_second<F: Fn(f64) -> Point2>(f: F, t: f64, step: f64) -> Point2 {
    let center = f(t);
    let d = |h: f64| (f(t + h) - center * 2.0 + f(t - h)) * (1.0 / (h * h));
    let coarse = d(step);
    let fine = d(0.5 * step);
    (fine * 4.0 - coarse) * (1.0 / 3.0)
}

/// Pick a string length comfortably above the transversality threshold:
/// `l = max(10, 4 (1 + ||tau h||_C2))`, then verified (and if necessary
/// enlarged) so that `1 - 2 hdd / (l + 1 - h) > 1/2` holds on the grid.
pub fn choose_string_length(pd: &PerturbationData, tau: f64) -> f64 {
    let n = SCAN_GRID / 4;
    let (mut h_max, mut hd_max, mut hdd_max) = (0.0f64, 0.0f64, 0.0f64);
    for j in 0..n {
        let t = 2.0 * PI * j as f64 / n as f64;
        let s = pd.fields(t);
        h_max = h_max.max((tau * s.h).abs());
        hd_max = hd_max.max((tau * s.g).abs());
        hdd_max = hdd_max.max((tau * s.gd).abs());
    }
    let norm_c2 = h_max + hd_max + hdd_max;
    let mut ell = (4.0 * (1.0 + norm_c2)).max(10.0);
    for _ in 0..32 {
        // factor 1 - 2 hdd / (l + 1 - h) stays above 1/2 iff 4|hdd| < l+1-|h|
        if 4.0 * hdd_max < ell + 1.0 - h_max {
            break;
        }
        ell *= 1.5;
    }
    ell
}

/// Convenience: recovered data plus tau and string length in one call.
pub fn make_string_table(pd: PerturbationData, tau: f64, ell: f64) -> Result<StringTable> {
    StringTable::new(pd, tau, ell)
}

/// Convenience: body from curvature radius and base point.
pub fn make_body(rho: TrigPoly, base_point: Point2) -> Result<ConvexBody> {
    ConvexBody::new(rho, base_point)
}
