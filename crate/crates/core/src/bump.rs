//! Smooth cutoffs and bump profiles with two analytic derivatives.
//!
//! Two shapes are used downstream: the sign-changing bump
//! `psi(t/a) psi(-t/b) arctan(t)` whose only interior zero is a transversal
//! one at the origin, and the sign-definite plateau bump
//! `exp(4 - w/t - w/(w-t))` vanishing to all orders at both gap ends.

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A value together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct C2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl C2 {
    pub const ZERO: C2 = C2 { v: 0.0, d1: 0.0, d2: 0.0 };

    pub fn scale(self, s: f64) -> C2 {
        C2 { v: s * self.v, d1: s * self.d1, d2: s * self.d2 }
    }

    pub fn add(self, o: C2) -> C2 {
        C2 { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }

    /// Evaluate at `-t`: flips the sign of the first derivative.
    pub fn reflect(self) -> C2 {
        C2 { v: self.v, d1: -self.d1, d2: self.d2 }
    }
}

/// Smooth monotone step: 0 on (-inf, -1], 1 on [0, inf),
/// `e1 / (e1 + e2)` with `e1 = exp(-1/(x+1))`, `e2 = exp(1/x)` in between.
pub fn smoothstep(x: f64) -> C2 {
    if x <= -1.0 + 1e-9 {
        return C2::ZERO;
    }
    if x >= -1e-9 {
        return C2 { v: 1.0, d1: 0.0, d2: 0.0 };
    }
    let xp = x + 1.0;
    let e1 = (-1.0 / xp).exp();
    let e2 = (1.0 / x).exp();
    let e1d = e1 / (xp * xp);
    let e2d = -e2 / (x * x);
    let e1dd = e1 * (1.0 / xp.powi(4) - 2.0 / xp.powi(3));
    let e2dd = e2 * (1.0 / x.powi(4) + 2.0 / x.powi(3));
    let den = e1 + e2;
    let v = e1 / den;
    let num1 = e1d * e2 - e1 * e2d;
    let d1 = num1 / (den * den);
    let d2 = ((e1dd * e2 - e1 * e2dd) * den - 2.0 * (e1d + e2d) * num1) / den.powi(3);
    C2 { v, d1, d2 }
}

/// The bump `psi(t/a) psi(-t/b) arctan(t)` without any amplitude prefactor:
/// supported on (-a, b), one transversal zero at t = 0 with unit slope.
pub fn bump_profile(a: f64, b: f64, t: f64) -> C2 {
    if t <= -a || t >= b {
        return C2::ZERO;
    }
    let f = smoothstep(t / a);
    let fv = f.v;
    let fd = f.d1 / a;
    let fdd = f.d2 / (a * a);
    let g = smoothstep(-t / b);
    let gv = g.v;
    let gd = -g.d1 / b;
    let gdd = g.d2 / (b * b);
    let hv = t.atan();
    let hd = 1.0 / (1.0 + t * t);
    let hdd = -2.0 * t * hd * hd;
    C2 {
        v: fv * gv * hv,
        d1: fd * gv * hv + fv * gd * hv + fv * gv * hd,
        d2: fdd * gv * hv
            + fv * gdd * hv
            + fv * gv * hdd
            + 2.0 * (fd * gd * hv + fd * gv * hd + fv * gd * hd),
    }
}

/// The paper-normalized bump `e^{-1/a - 1/b} psi(t/a) psi(-t/b) arctan(t)`.
///
/// Zero exactly on the complement of (-a, b) together with {0}; the
/// derivative at 0 equals the prefactor and is strictly positive.
pub fn bump(a: f64, b: f64, t: f64) -> Result<f64> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::NonpositiveWidth);
    }
    Ok((-1.0 / a - 1.0 / b).exp() * bump_profile(a, b, t).v)
}

/// Sign-definite plateau bump on the open gap (0, w), peaking at 1 in the
/// middle and vanishing to all orders at both ends:
/// `exp(4 - w/t - w/(w - t))`.
pub fn plateau_profile(w: f64, t: f64) -> C2 {
    // exponent underflows past ~1.4e-3 relative depth; clamp before 0 * inf
    let margin = w * 1.5e-3;
    if t <= margin || t >= w - margin {
        return C2::ZERO;
    }
    let u = w - t;
    let q = 4.0 - w / t - w / u;
    let v = q.exp();
    if v == 0.0 {
        return C2::ZERO;
    }
    let qd = w / (t * t) - w / (u * u);
    let qdd = -2.0 * w / (t * t * t) - 2.0 * w / (u * u * u);
    C2 { v, d1: v * qd, d2: v * (qd * qd + qdd) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_boundary_values() {
        assert_eq!(smoothstep(-1.5).v, 0.0);
        assert_eq!(smoothstep(-1.0).v, 0.0);
        assert_eq!(smoothstep(0.0).v, 1.0);
        assert_eq!(smoothstep(2.0).v, 1.0);
        let mid = smoothstep(-0.5);
        assert!((mid.v - 0.5).abs() < 1e-14);
        assert!(mid.d1 > 0.0);
    }

    #[test]
    fn smoothstep_derivatives_match_finite_differences() {
        let h = 1e-6;
        for i in 1..40 {
            let x = -1.0 + i as f64 * 0.024;
            let c = smoothstep(x);
            let fd1 = (smoothstep(x + h).v - smoothstep(x - h).v) / (2.0 * h);
            let fd2 = (smoothstep(x + h).v - 2.0 * c.v + smoothstep(x - h).v) / (h * h);
            assert!((fd1 - c.d1).abs() < 2e-7 * (1.0 + c.d1.abs()), "x={x}");
            assert!((fd2 - c.d2).abs() < 2e-3 * (1.0 + c.d2.abs()), "x={x}");
        }
    }

    #[test]
    fn bump_vanishes_at_origin_and_outside_support() {
        assert_eq!(bump(1.0, 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bump(1.0, 1.0, -2.0).unwrap(), 0.0);
        assert_eq!(bump(1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(bump(0.5, 2.0, -0.5).unwrap(), 0.0);
    }

    #[test]
    fn bump_positive_right_of_origin_with_positive_slope() {
        assert!(bump(1.0, 2.0, 0.5).unwrap() > 0.0);
        let h = 1e-6;
        let slope = (bump(1.0, 2.0, h).unwrap() - bump(1.0, 2.0, -h).unwrap()) / (2.0 * h);
        assert!(slope > 0.0);
        let prefactor = (-1.0f64 - 0.5).exp();
        assert!((slope - prefactor).abs() < 1e-6);
    }

    #[test]
    fn bump_rejects_nonpositive_widths() {
        assert_eq!(bump(0.0, 1.0, 0.3).unwrap_err(), Error::NonpositiveWidth);
        assert_eq!(bump(1.0, -1.0, 0.3).unwrap_err(), Error::NonpositiveWidth);
    }

    #[test]
    fn bump_profile_derivatives_match_finite_differences() {
        let (a, b) = (0.7, 1.3);
        let h = 1e-6;
        for i in 0..60 {
            let t = -a + (a + b) * i as f64 / 60.0 + 0.013;
            let c = bump_profile(a, b, t);
            let fd1 = (bump_profile(a, b, t + h).v - bump_profile(a, b, t - h).v) / (2.0 * h);
            let fd2 =
                (bump_profile(a, b, t + h).v - 2.0 * c.v + bump_profile(a, b, t - h).v) / (h * h);
            assert!((fd1 - c.d1).abs() < 1e-6, "t={t}: {} vs {}", fd1, c.d1);
            assert!((fd2 - c.d2).abs() < 1e-2, "t={t}: {} vs {}", fd2, c.d2);
        }
    }

    #[test]
    fn plateau_is_flat_at_ends_and_peaks_at_one() {
        let w = 0.4;
        assert_eq!(plateau_profile(w, 0.0).v, 0.0);
        assert_eq!(plateau_profile(w, w).v, 0.0);
        let mid = plateau_profile(w, w / 2.0);
        assert!((mid.v - 1.0).abs() < 1e-14);
        assert!(mid.d1.abs() < 1e-12);
        assert!(mid.d2 < 0.0);
        // narrow gaps stay representable
        let tiny = plateau_profile(5e-5, 2.5e-5);
        assert!((tiny.v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn plateau_derivatives_match_finite_differences() {
        let w = 0.4;
        let h = 1e-7;
        for i in 1..40 {
            let t = w * i as f64 / 40.0;
            let c = plateau_profile(w, t);
            let fd1 = (plateau_profile(w, t + h).v - plateau_profile(w, t - h).v) / (2.0 * h);
            assert!(
                (fd1 - c.d1).abs() < 1e-4 * (1.0 + c.d1.abs()),
                "t={t}: {} vs {}",
                fd1,
                c.d1
            );
        }
    }
}
