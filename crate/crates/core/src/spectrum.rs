//! Hyperbolicity certification of 2-periodic orbits.
//!
//! Three routes are computed per diameter and must agree: the
//! second-derivative criterion (hdd nonzero), the curvature/chord indicators
//! from the closed-form boundary curvatures at the two feet, and the measured
//! trace of the finite-difference derivative of T^2. The closed forms tie
//! together exactly: with `d = 1 + l`,
//! `I1 = k1 k2 d - (k1 + k2) = 4 d hdd^2 / ((d^2 - h^2)(d^2 - (h + 2 hdd)^2))`
//! and `trace dT^2 = 2 + 4 d I1`, so a 2-periodic orbit of a table close to
//! the circle is hyperbolic exactly when hdd is nonzero there.

use alloc::vec::Vec;

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::billiard::{find_diameters, jacobian_fd, trace2, PhasePoint};
use crate::table::StringTable;
use crate::{Error, Result};

/// hdd below this is treated as vanishing (route a).
pub const HDD_TOL: f64 = 1e-10;

/// Margin on |trace| - 2 for the finite-difference route (route c); the
/// bounce solver plus Richardson differencing resolve the trace to about
/// 1e-7.
pub const TRACE_TOL: f64 = 1e-6;

/// Closed-form curvatures must match measured geometry this closely.
pub const CURVATURE_MATCH_TOL: f64 = 1e-6;
pub const CHORD_MATCH_TOL: f64 = 1e-9;

/// Stability type of a 2-periodic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// Full spectrum report for one diameter.
#[derive(Debug, Clone, Copy)]
pub struct DiameterSpectrum {
    /// Representative foot in [0, pi).
    pub t0: f64,
    /// Closed-form curvature `1/(1+l+h) + 1/(1+l+h+2hdd)`; this is the
    /// boundary curvature at the mirror foot t0 + pi.
    pub k1: f64,
    /// Closed-form curvature with (h, hdd) negated; the curvature at t0.
    pub k2: f64,
    /// Chord length d = 1 + l.
    pub chord: f64,
    /// `k1 k2 d - (k1 + k2)`; vanishes exactly on parabolic orbits.
    pub i1: f64,
    /// `d^2 k1 k2 - d (k1 + k2) - 2`.
    pub i2: f64,
    /// Measured trace of the finite-difference dT^2.
    pub trace_fd: f64,
    /// Closed-form trace `2 + 4 d I1`.
    pub trace_formula: f64,
    /// Eigenvalues of dT^2 from the closed-form trace with unit determinant;
    /// real for |trace| >= 2, otherwise (re, +-im) of the conjugate pair.
    pub eigenvalues: (f64, f64),
    pub eigenvalues_real: bool,
    /// Set when the chord length collides with a curvature radius, which
    /// cannot happen for tables close to the circle; signals a
    /// misconfigured table.
    pub degenerate_chord_warning: bool,
    pub class: StabilityClass,
}

impl DiameterSpectrum {
    pub fn max_eigenvalue_modulus(&self) -> f64 {
        if self.eigenvalues_real {
            self.eigenvalues.0.abs().max(self.eigenvalues.1.abs())
        } else {
            1.0
        }
    }
}

/// Closed-form curvatures at the two feet and the chord length,
/// cross-checked against measured geometry.
///
/// Returns (k1, k2, d) with k1 the curvature at the mirror foot `t0 + pi`
/// and k2 the curvature at `t0` (h and hdd flip sign across the half-turn,
/// which swaps the two expressions).
pub fn k_pair(table: &StringTable, t0: f64) -> Result<(f64, f64, f64)> {
    let fields = table.fields(t0);
    if fields.hd.abs() > 1e-8 {
        return Err(Error::NotACriticalPoint { at: t0, hdot: fields.hd });
    }
    let ell = table.string_length();
    let (h, hdd) = (fields.h, fields.hdd);
    let k1 = 1.0 / (1.0 + ell + h) + 1.0 / (1.0 + ell + h + 2.0 * hdd);
    let k2 = 1.0 / (1.0 + ell - h) + 1.0 / (1.0 + ell - h - 2.0 * hdd);
    let d = 1.0 + ell;

    let (measured_here, err_here) = table.curvature_of_boundary_estimated(t0)?;
    let (measured_mirror, err_mirror) = table.curvature_of_boundary_estimated(t0 + PI)?;
    // finite differencing cannot resolve boundary features sharper than its
    // step; widen the gate by the measured FD uncertainty so smooth tables
    // keep the strict tolerance while needle-sharp feet stay checkable
    let tol = CURVATURE_MATCH_TOL + 10.0 * err_here.max(err_mirror);
    let defect = (measured_here - k2).abs().max((measured_mirror - k1).abs());
    if defect > tol {
        return Err(Error::FormulaMismatch { defect });
    }
    let chord_measured = table.radius(t0) + table.radius(t0 + PI);
    if (chord_measured - d).abs() > CHORD_MATCH_TOL {
        return Err(Error::FormulaMismatch { defect: (chord_measured - d).abs() });
    }
    Ok((k1, k2, d))
}

/// The two parabolic indicators of the trace conditions.
pub fn indicators(k1: f64, k2: f64, d: f64) -> (f64, f64) {
    let i1 = k1 * k2 * d - (k1 + k2);
    let i2 = d * d * k1 * k2 - d * (k1 + k2) - 2.0;
    (i1, i2)
}

/// Scale-relative threshold below which an indicator counts as vanishing.
pub fn parabolic_threshold(k1: f64, k2: f64, d: f64) -> f64 {
    1e-12 * (k1 * k2 * d).abs().max(1.0)
}

/// Exact closed form of I1 in terms of (h, hdd, d):
/// `4 d hdd^2 / ((d^2 - h^2)(d^2 - (h + 2 hdd)^2))`.
pub fn indicator_closed_form(h: f64, hdd: f64, d: f64) -> f64 {
    4.0 * d * hdd * hdd / ((d * d - h * h) * (d * d - (h + 2.0 * hdd) * (h + 2.0 * hdd)))
}

/// True when the chord length collides with a curvature radius, which is
/// incompatible with a table close to the circle.
pub fn chord_curvature_guard(k1: f64, k2: f64, d: f64) -> bool {
    (d * k1 - 1.0).abs() < 1e-6 || (d * k2 - 1.0).abs() < 1e-6
}

/// Classify the 2-periodic orbit through the foot t0 by all three routes.
pub fn classify(table: &StringTable, t0: f64) -> Result<DiameterSpectrum> {
    let fields = table.fields(t0);
    let (k1, k2, d) = k_pair(table, t0)?;
    let (i1, i2) = indicators(k1, k2, d);
    let trace_formula = 2.0 + 4.0 * d * i1;
    let jac = jacobian_fd(table, PhasePoint::new(t0, PI / 2.0), 2)?;
    let trace_fd = trace2(&jac);

    let route_a = fields.hdd.abs() > HDD_TOL;
    let thr = parabolic_threshold(k1, k2, d);
    let route_b = i1.abs() > thr && i2.abs() > thr;
    let route_c = (trace_fd.abs() - 2.0) > TRACE_TOL;
    if route_a != route_b || route_b != route_c {
        return Err(Error::ClassificationConflict {
            detail: "hdd, indicator, and trace verdicts disagree",
        });
    }

    let class = if route_a {
        if trace_formula.abs() >= 2.0 {
            StabilityClass::Hyperbolic
        } else {
            StabilityClass::Elliptic
        }
    } else {
        StabilityClass::Parabolic
    };

    let disc = trace_formula * trace_formula - 4.0;
    let (eigenvalues, eigenvalues_real) = if disc >= 0.0 {
        let root = disc.sqrt();
        (((trace_formula + root) / 2.0, (trace_formula - root) / 2.0), true)
    } else {
        ((trace_formula / 2.0, (-disc).sqrt() / 2.0), false)
    };

    Ok(DiameterSpectrum {
        t0: crate::trig::wrap_2pi(t0),
        k1,
        k2,
        chord: d,
        i1,
        i2,
        trace_fd,
        trace_formula,
        eigenvalues,
        eigenvalues_real,
        degenerate_chord_warning: chord_curvature_guard(k1, k2, d),
        class,
    })
}

/// Classify every isolated diameter of the table.
pub fn table_spectrum(table: &StringTable) -> Result<Vec<DiameterSpectrum>> {
    let diam = find_diameters(table);
    diam.diameters.iter().map(|d| classify(table, d.t0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::TrigPoly;
    use crate::vanishing::{recover_perturbation, SymmetricFunction};

    fn sin3_table() -> StringTable {
        let g = SymmetricFunction::from_poly(TrigPoly::sin_harmonic(3, 0.01)).unwrap();
        let pd = recover_perturbation(&g).unwrap();
        StringTable::new(pd, 1.0, 10.0).unwrap()
    }

    #[test]
    fn circle_limit_is_parabolic() {
        let (ell, h, hdd) = (3.0f64, 0.0, 0.0);
        let k = 1.0 / (1.0 + ell + h) + 1.0 / (1.0 + ell + h + 2.0 * hdd);
        let d = 1.0 + ell;
        let (i1, _) = indicators(k, k, d);
        assert!(i1.abs() < 1e-15);
        // the round table: every direction parabolic
        let table = StringTable::circle(3.0).unwrap();
        let spec = classify(&table, 0.7).unwrap();
        assert_eq!(spec.class, StabilityClass::Parabolic);
        assert!((spec.trace_fd - 2.0).abs() < 1e-6);
    }

    #[test]
    fn scenario_curvatures_and_indicator_match_frozen_values() {
        let table = sin3_table();
        let (k1, k2, d) = k_pair(&table, 0.0).unwrap();
        // frozen from the closed forms at h = eps/3, hdd = -3 eps, eps = 0.01
        assert!((k1 - 0.182_261_386_561_433_9).abs() < 1e-12, "k1 = {k1}");
        assert!((k2 - 0.181_379_819_009_478_67).abs() < 1e-12, "k2 = {k2}");
        assert_eq!(d, 11.0);
        let (i1, i2) = indicators(k1, k2, d);
        assert!((i1 - 2.704_805_312_030_685e-6).abs() < 1e-10, "i1 = {i1}");
        assert!((i2 - (d * i1 - 2.0)).abs() < 1e-12);
        // the identity I1 = 4 d hdd^2 / ((d^2-h^2)(d^2-(h+2hdd)^2)); the
        // difference k1 k2 d - (k1 + k2) cancels catastrophically, so the
        // tolerance carries that rounding budget on top of 1e-12 relative
        let cf = indicator_closed_form(0.01 / 3.0, -0.03, 11.0);
        let budget = 1e-12 * cf.abs() + 8.0 * f64::EPSILON * (k1 * k2 * d).abs();
        assert!((i1 - cf).abs() < budget, "identity defect {}", i1 - cf);
    }

    #[test]
    fn mirrored_foot_swaps_curvatures() {
        let table = sin3_table();
        let (k1, k2, _) = k_pair(&table, 0.0).unwrap();
        let (k1m, k2m, _) = k_pair(&table, PI).unwrap();
        assert!((k1 - k2m).abs() < 1e-12);
        assert!((k2 - k1m).abs() < 1e-12);
    }

    #[test]
    fn indicator_identity_on_random_admissible_samples() {
        // deterministic linear-congruential samples; admissibility means the
        // denominators stay positive
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut rand01 = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..16 {
            let d = 4.0 + 20.0 * rand01();
            let h = 0.5 * (rand01() - 0.5);
            let hdd = 1.2 * (rand01() - 0.5);
            let k1 = 1.0 / (d + h) + 1.0 / (d + h + 2.0 * hdd);
            let k2 = 1.0 / (d - h) + 1.0 / (d - h - 2.0 * hdd);
            let (i1, _) = indicators(k1, k2, d);
            let cf = indicator_closed_form(h, hdd, d);
            let budget = 1e-12 * cf.abs() + 8.0 * f64::EPSILON * (k1 * k2 * d).abs();
            assert!((i1 - cf).abs() < budget, "h={h} hdd={hdd} d={d}: {i1} vs {cf}");
        }
    }

    #[test]
    fn sin3_diameters_are_hyperbolic_by_all_routes() {
        let table = sin3_table();
        let spectra = table_spectrum(&table).unwrap();
        assert_eq!(spectra.len(), 3);
        for s in &spectra {
            assert_eq!(s.class, StabilityClass::Hyperbolic);
            assert!(s.eigenvalues_real);
            let product = s.eigenvalues.0 * s.eigenvalues.1;
            assert!((product - 1.0).abs() < 1e-9, "formula eigenvalue product");
            assert!(s.max_eigenvalue_modulus() > 1.0001);
            assert!((s.trace_fd - s.trace_formula).abs() < 1e-6);
            assert!(!s.degenerate_chord_warning);
        }
    }

    #[test]
    fn fd_eigenvalue_product_is_area_preserving() {
        let table = sin3_table();
        let jac = jacobian_fd(&table, PhasePoint::new(0.0, PI / 2.0), 2).unwrap();
        let det = crate::billiard::det2(&jac);
        assert!((det - 1.0).abs() < 1e-4, "det {det}");
    }

    #[test]
    fn guard_fires_on_chord_curvature_collision() {
        assert!(chord_curvature_guard(0.5, 0.3, 2.0));
        assert!(!chord_curvature_guard(0.18, 0.18, 11.0));
    }
}
