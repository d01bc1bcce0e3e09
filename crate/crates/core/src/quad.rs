//! Panel quadrature with seeded breakpoints.
//!
//! The bump-built functions are smooth but carry needle-sharp features whose
//! locations are known exactly (support edges of every bump term). Quadrature
//! here always starts from a breakpoint list containing those edges and then
//! refines adaptively, so narrow features are never stradled blindly.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

/// 16-point Gauss-Legendre abscissae on [-1, 1] (positive half).
const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_440_2,
    0.281_603_550_779_258_913_2,
    0.458_016_777_657_227_386_3,
    0.617_876_244_402_643_748_4,
    0.755_404_408_355_003_033_9,
    0.865_631_202_387_831_743_9,
    0.944_575_023_073_232_576_1,
    0.989_400_934_991_649_932_6,
];

/// Matching Gauss-Legendre weights.
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_496_3,
    0.182_603_415_044_923_588_9,
    0.169_156_519_395_002_538_2,
    0.149_595_988_816_576_732_1,
    0.124_628_971_255_533_872_1,
    0.095_158_511_682_492_784_8,
    0.062_253_523_938_647_892_9,
    0.027_152_459_411_754_094_9,
];

/// 16-point Gauss-Legendre quadrature of `f` over [a, b].
pub fn gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        let dx = half * GL16_X[i];
        acc += GL16_W[i] * (f(mid - dx) + f(mid + dx));
    }
    acc * half
}

/// Adaptive Gauss-Legendre over [a, b] to absolute tolerance `tol`.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = gl16(f, a, m);
        let right = gl16(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= tol {
            left + right
        } else {
            recurse(f, a, m, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, right, 0.5 * tol, depth - 1)
        }
    }
    recurse(f, a, b, gl16(f, a, b), tol, 48)
}

/// Precomputed antiderivative of a smooth function on [lo, hi].
///
/// Built once from seeded breakpoints, refined until each panel integrates to
/// local tolerance; evaluation is then a binary search plus one non-adaptive
/// GL16 on the residual partial panel, which the refinement has already made
/// smooth at quadrature scale.
#[derive(Debug, Clone)]
pub struct PanelAntiderivative {
    breakpoints: Vec<f64>,
    /// prefix[i] = integral of f from breakpoints[0] to breakpoints[i].
    prefix: Vec<f64>,
}

impl PanelAntiderivative {
    /// Integrate `f` over [lo, hi] with mandatory breakpoints `seeds`
    /// (clamped to the domain, deduplicated) and panels no wider than
    /// `max_width`, each refined to absolute tolerance `tol`.
    pub fn build<F: Fn(f64) -> f64>(
        f: &F,
        lo: f64,
        hi: f64,
        seeds: &[f64],
        max_width: f64,
        tol: f64,
    ) -> Self {
        let mut pts: Vec<f64> = seeds.iter().copied().filter(|&x| x > lo && x < hi).collect();
        pts.push(lo);
        pts.push(hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

        // cap panel widths
        let mut coarse = Vec::with_capacity(pts.len() * 2);
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            coarse.push(a);
            let span = b - a;
            let parts = (span / max_width).ceil() as usize;
            for j in 1..parts {
                coarse.push(a + span * j as f64 / parts as f64);
            }
        }
        coarse.push(hi);

        // adaptive refinement, recording the final panel edges
        let mut breakpoints = Vec::with_capacity(coarse.len() * 2);
        let mut values = Vec::with_capacity(coarse.len() * 2);
        breakpoints.push(coarse[0]);
        for w in coarse.windows(2) {
            refine(f, w[0], w[1], gl16(f, w[0], w[1]), tol, 40, &mut breakpoints, &mut values);
        }

        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for v in &values {
            acc += v;
            prefix.push(acc);
        }
        PanelAntiderivative { breakpoints, prefix }
    }

    /// Integral of f from the domain's lower end to `t` (t inside the domain).
    pub fn integral_to<F: Fn(f64) -> f64>(&self, f: &F, t: f64) -> f64 {
        let n = self.breakpoints.len();
        debug_assert!(t >= self.breakpoints[0] - 1e-12 && t <= self.breakpoints[n - 1] + 1e-12);
        let idx = match self
            .breakpoints
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(i) => return self.prefix[i],
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        self.prefix[idx] + gl16(f, self.breakpoints[idx], t)
    }

    /// Integral over the whole domain.
    pub fn total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    edges: &mut Vec<f64>,
    values: &mut Vec<f64>,
) {
    let m = 0.5 * (a + b);
    let left = gl16(f, a, m);
    let right = gl16(f, m, b);
    if depth == 0 || (left + right - whole).abs() <= tol {
        edges.push(m);
        edges.push(b);
        values.push(left);
        values.push(right);
    } else {
        refine(f, a, m, left, 0.5 * tol, depth - 1, edges, values);
        refine(f, m, b, right, 0.5 * tol, depth - 1, edges, values);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn gl16_is_exact_on_low_degree_polynomials() {
        // exact for degree <= 31
        let f = |x: f64| 5.0 * x.powi(9) - 3.0 * x.powi(4) + x - 2.0;
        // int over [0, 2] = 5*2^10/10 - 3*2^5/5 + 2 - 4
        let exact = 512.0 - 96.0 / 5.0 + 2.0 - 4.0;
        assert!((gl16(&f, 0.0, 2.0) - exact).abs() < 1e-11);
    }

    #[test]
    fn adaptive_handles_oscillatory_integrand() {
        let f = |x: f64| (20.0 * x).sin();
        let exact = (1.0 - (20.0 * PI).cos()) / 20.0;
        assert!((adaptive(&f, 0.0, PI, 1e-13) - exact).abs() < 1e-12);
    }

    #[test]
    fn panel_antiderivative_tracks_sine() {
        let f = |x: f64| x.sin();
        let p = PanelAntiderivative::build(&f, 0.0, 2.0 * PI, &[1.0, 4.0], 0.1, 1e-14);
        for i in 0..50 {
            let t = 2.0 * PI * i as f64 / 50.0;
            let exact = 1.0 - t.cos();
            assert!((p.integral_to(&f, t) - exact).abs() < 1e-13, "t={t}");
        }
        assert!(p.total().abs() < 1e-13);
    }

    #[test]
    fn panel_antiderivative_resolves_sharp_feature() {
        // narrow gaussian needle at a seeded location
        let c = 2.0;
        let w = 1e-4;
        let f = move |x: f64| (-((x - c) / w).powi(2)).exp();
        let p = PanelAntiderivative::build(&f, 0.0, 2.0 * PI, &[c - 10.0 * w, c, c + 10.0 * w], 0.5, 1e-15);
        let sqrt_pi = 1.772_453_850_905_516;
        assert!((p.total() - w * sqrt_pi).abs() < 1e-12);
    }
}
