//! Real-valued trigonometric polynomials by complex coefficients.
//!
//! A polynomial of degree N is `sum_{|k| <= N} alpha_k e^{ikt}` with the
//! conjugate symmetry `alpha_{-k} = conj(alpha_k)`, so only the k >= 0 half is
//! stored and every evaluation is structurally real. The closed-form plane
//! path integral `int_0^t p(s) e^{is} ds` is the workhorse behind the
//! tangent-angle parametrization of convex curves.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub(crate) type C64 = num_complex::Complex<f64>;

/// Tolerance on conjugate-symmetry defects; larger residues are rejected
/// rather than silently symmetrized.
pub const CONJUGATE_SYMMETRY_TOL: f64 = 1e-12;

/// A point (or vector) in the table plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, `self.x * other.y - self.y * other.x`.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Counterclockwise rotation by 90 degrees (multiplication by i).
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Unit vector `e^{it}`.
pub fn unit(t: f64) -> Point2 {
    Point2::new(t.cos(), t.sin())
}

/// Reduce an angle to [0, 2*pi).
pub fn wrap_2pi(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = t % two_pi;
    if r < 0.0 {
        r + two_pi
    } else {
        r
    }
}

/// Real trigonometric polynomial, coefficients stored for k >= 0 only; the
/// negative side is determined by `alpha_{-k} = conj(alpha_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    /// `half[k]` is alpha_k for k = 0..=N; `half[0]` has zero imaginary part.
    half: Vec<C64>,
}

impl TrigPoly {
    /// Zero polynomial.
    pub fn zero() -> Self {
        TrigPoly { half: vec![C64::new(0.0, 0.0)] }
    }

    /// Constant polynomial.
    pub fn constant(value: f64) -> Self {
        TrigPoly { half: vec![C64::new(value, 0.0)] }
    }

    /// `amplitude * cos(k t)`, i.e. alpha_{+-k} = amplitude / 2.
    pub fn cos_harmonic(k: usize, amplitude: f64) -> Self {
        let mut half = vec![C64::new(0.0, 0.0); k + 1];
        if k == 0 {
            half[0] = C64::new(amplitude, 0.0);
        } else {
            half[k] = C64::new(amplitude / 2.0, 0.0);
        }
        TrigPoly { half }
    }

    /// `amplitude * sin(k t)`, i.e. alpha_{+-k} = -+ i * amplitude / 2.
    pub fn sin_harmonic(k: usize, amplitude: f64) -> Self {
        assert!(k >= 1, "sin harmonic needs k >= 1");
        let mut half = vec![C64::new(0.0, 0.0); k + 1];
        half[k] = C64::new(0.0, -amplitude / 2.0);
        TrigPoly { half }
    }

    /// Build from the k >= 0 half-spectrum; the constant term must be real.
    pub fn from_half_spectrum(half: Vec<C64>) -> Result<Self> {
        let mut half = if half.is_empty() { vec![C64::new(0.0, 0.0)] } else { half };
        if half[0].im.abs() > CONJUGATE_SYMMETRY_TOL {
            return Err(Error::AsymmetricCoefficients { index: 0, defect: half[0].im.abs() });
        }
        half[0].im = 0.0;
        Ok(TrigPoly { half })
    }

    /// Build from a full coefficient list `coeffs[j]` = alpha_{j - N} for
    /// j = 0..=2N. Rejects input violating conjugate symmetry instead of
    /// symmetrizing it.
    pub fn from_full_spectrum(coeffs: &[C64]) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InsufficientSamples { got: coeffs.len(), need: coeffs.len() + 1 });
        }
        let n = coeffs.len() / 2;
        for k in 0..=n {
            let defect = (coeffs[n - k] - coeffs[n + k].conj()).norm();
            if defect > CONJUGATE_SYMMETRY_TOL {
                return Err(Error::AsymmetricCoefficients { index: k as isize, defect });
            }
        }
        TrigPoly::from_half_spectrum(coeffs[n..].to_vec())
    }

    /// Degree N (index of the highest stored coefficient).
    pub fn degree(&self) -> usize {
        self.half.len() - 1
    }

    /// Coefficient alpha_k for any integer k (conjugate-mirrored, zero past N).
    pub fn coeff(&self, k: isize) -> C64 {
        let idx = k.unsigned_abs();
        let c = self.half.get(idx).copied().unwrap_or(C64::new(0.0, 0.0));
        if k < 0 {
            c.conj()
        } else {
            c
        }
    }

    /// Borrow the stored k >= 0 half-spectrum.
    pub fn half_spectrum(&self) -> &[C64] {
        &self.half
    }

    /// Evaluate at t; real by construction.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.half[0].re;
        // e^{ikt} built incrementally; the rotation is re-seeded from sin/cos
        // rather than multiplied out to avoid drift at high degree.
        for (k, alpha) in self.half.iter().enumerate().skip(1) {
            let (s, c) = (k as f64 * t).sin_cos();
            acc += 2.0 * (alpha.re * c - alpha.im * s);
        }
        acc
    }

    /// Derivative; coefficients ik * alpha_k, conjugate symmetry preserved.
    pub fn derivative(&self) -> TrigPoly {
        let half = self
            .half
            .iter()
            .enumerate()
            .map(|(k, alpha)| C64::new(0.0, k as f64) * alpha)
            .collect();
        TrigPoly { half }
    }

    /// Multiply all coefficients by a real factor.
    pub fn scale(&self, factor: f64) -> TrigPoly {
        TrigPoly { half: self.half.iter().map(|a| a * factor).collect() }
    }

    /// Closed form of `int_0^t p(s) e^{is} ds` as a plane point, using the
    /// term `alpha_k (e^{i(k+1)t} - 1) / (i(k+1))`.
    ///
    /// Requires the closure condition alpha_{-1} = 0 (equivalently alpha_1 = 0
    /// for real polynomials); the integral over a full period then vanishes.
    pub fn path_integral(&self, t: f64) -> Result<Point2> {
        let closure_defect = self.coeff(-1).norm();
        if closure_defect > CONJUGATE_SYMMETRY_TOL {
            return Err(Error::NonClosedCurve { alpha_minus_one_abs: closure_defect });
        }
        let n = self.degree() as isize;
        let mut acc = C64::new(0.0, 0.0);
        for k in -n..=n {
            if k == -1 {
                continue;
            }
            let alpha = self.coeff(k);
            if alpha.norm_sqr() == 0.0 {
                continue;
            }
            let m = (k + 1) as f64;
            let (s, c) = (m * t).sin_cos();
            let phase = C64::new(c - 1.0, s);
            acc += alpha * phase / C64::new(0.0, m);
        }
        Ok(Point2::new(acc.re, acc.im))
    }

    /// Projection onto the admissible perturbation subspace V: zeroes every
    /// even-index coefficient and the k = +-1 coefficients, leaving odd
    /// harmonics of order >= 3.
    pub fn project_v(&self) -> TrigPoly {
        let half = self
            .half
            .iter()
            .enumerate()
            .map(|(k, alpha)| if k % 2 == 0 || k == 1 { C64::new(0.0, 0.0) } else { *alpha })
            .collect();
        TrigPoly { half }
    }

    /// Largest coefficient magnitude outside V (even harmonics and k = 1).
    pub fn defect_from_v(&self) -> f64 {
        self.half
            .iter()
            .enumerate()
            .filter(|(k, _)| *k % 2 == 0 || *k == 1)
            .map(|(_, a)| a.norm())
            .fold(0.0, f64::max)
    }

    /// Least-squares fit of degree N from equispaced samples over one period.
    ///
    /// Needs at least 2N+1 samples; returns the polynomial together with the
    /// maximum absolute deviation on the sample grid.
    pub fn fit(samples: &[(f64, f64)], degree: usize) -> Result<(TrigPoly, f64)> {
        let m = samples.len();
        if m < 2 * degree + 1 {
            return Err(Error::InsufficientSamples { got: m, need: 2 * degree + 1 });
        }
        let mut half = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            let mut acc = C64::new(0.0, 0.0);
            for &(t, y) in samples {
                let (s, c) = (k as f64 * t).sin_cos();
                acc += C64::new(y * c, -y * s);
            }
            half.push(acc / m as f64);
        }
        half[0].im = 0.0;
        let poly = TrigPoly { half };
        let residual = samples
            .iter()
            .map(|&(t, y)| (poly.eval(t) - y).abs())
            .fold(0.0, f64::max);
        Ok((poly, residual))
    }
}
