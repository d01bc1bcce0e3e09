//! The billiard map on a string-constructed table.
//!
//! Strict convexity gives the bounce solver a clean sign structure: for a ray
//! leaving the boundary inward, the signed perpendicular offset of `Gamma(u)`
//! from the ray line is negative strictly between departure and arrival and
//! positive on the rest of the circle, so the arrival parameter is found by
//! bracketed bisection over the full period with a Newton polish, no scanning.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::table::StringTable;
use crate::trig::{wrap_2pi, Point2};
use crate::{Error, Result};

/// Guard band keeping shots away from tangency.
pub const THETA_MIN: f64 = 1e-6;

/// Finite-difference step for the phase-space Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-6;

/// Grid for the critical-point scan of hdot.
pub const DIAMETER_SCAN: usize = 65_536;

/// |hdot| below this on 3+ consecutive scan points flags a continuum.
pub const PLATEAU_EPS: f64 = 1e-11;

/// Phase coordinates: boundary parameter t and the angle theta in (0, pi)
/// between the outgoing ray and the boundary tangent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub t: f64,
    pub theta: f64,
}

impl PhasePoint {
    pub fn new(t: f64, theta: f64) -> Self {
        PhasePoint { t: wrap_2pi(t), theta }
    }

    /// Time reversal: same foot, reversed ray.
    pub fn reversed(self) -> PhasePoint {
        PhasePoint { t: self.t, theta: PI - self.theta }
    }
}

/// A 2-periodic chord: orthogonal to the boundary at both feet.
#[derive(Debug, Clone, Copy)]
pub struct Diameter {
    /// Representative foot in [0, pi); the mirror foot sits at t0 + pi.
    pub t0: f64,
    /// Chord length, `|Gamma(t0)| + |Gamma(t0 + pi)|`.
    pub chord: f64,
    /// h(t0).
    pub h: f64,
    /// hddot(t0), the transversality datum.
    pub hdd: f64,
    /// True when hdot only touches zero here without changing sign.
    pub grazing: bool,
}

/// Output of the diameter scan: isolated 2-periodic chords plus any
/// parameter intervals where hdot vanishes identically (continua of
/// 2-periodic orbits).
#[derive(Debug, Clone, Default)]
pub struct DiameterSet {
    pub diameters: Vec<Diameter>,
    /// Sub-intervals of [0, pi) where hdot == 0 to plateau tolerance.
    pub plateaus: Vec<(f64, f64)>,
    /// Every direction is 2-periodic (the round table).
    pub full_circle: bool,
}

/// One step of the billiard map.
pub fn next_bounce(table: &StringTable, p: PhasePoint) -> Result<PhasePoint> {
    if !(THETA_MIN..=PI - THETA_MIN).contains(&p.theta) {
        return Err(Error::TangentialShot { theta: p.theta });
    }
    let start = table.boundary(p.t);
    let tangent = table.boundary_derivative(p.t).normalized();
    let (sin_t, cos_t) = p.theta.sin_cos();
    // inward ray direction: tangent rotated by theta
    let dir = Point2::new(
        tangent.x * cos_t - tangent.y * sin_t,
        tangent.x * sin_t + tangent.y * cos_t,
    );
    let normal = dir.perp();
    let offset = |u: f64| (table.boundary(u) - start).dot(normal);

    // offset < 0 strictly between departure and arrival, > 0 after; the
    // margin scales with theta so grazing chords stay inside the bracket
    let delta = 0.1 * sin_t.min(1.0);
    let mut lo = p.t + delta;
    let mut hi = p.t + 2.0 * PI - delta;
    let f_lo = offset(lo);
    let f_hi = offset(hi);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoConvergence);
    }
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if offset(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut u = 0.5 * (lo + hi);
    for _ in 0..4 {
        let slope = table.boundary_derivative(u).dot(normal);
        if slope.abs() < 1e-14 {
            break;
        }
        let step = offset(u) / slope;
        let next = u - step;
        if next > lo && next < hi {
            u = next;
        } else {
            break;
        }
    }

    let arrival_tangent = table.boundary_derivative(u).normalized();
    // reflected outgoing angle: the chord direction seen from the arrival
    // tangent, conjugated
    let theta_new = f64::atan2(dir.cross(arrival_tangent), dir.dot(arrival_tangent));
    if !(0.0..=PI).contains(&theta_new) {
        return Err(Error::NoConvergence);
    }
    Ok(PhasePoint::new(u, theta_new))
}

/// T (order 1) or T^2 (order 2).
pub fn apply_map(table: &StringTable, p: PhasePoint, order: u8) -> Result<PhasePoint> {
    let mut q = p;
    for _ in 0..order {
        q = next_bounce(table, q)?;
    }
    Ok(q)
}

/// Difference of boundary parameters as the nearest representative.
pub fn t_diff(a: f64, b: f64) -> f64 {
    let d = wrap_2pi(a - b);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// Richardson-extrapolated central-difference Jacobian of T or T^2 in
/// (t, theta) coordinates.
pub fn jacobian_fd(table: &StringTable, p: PhasePoint, order: u8) -> Result<[[f64; 2]; 2]> {
    let column = |j: usize, h: f64| -> Result<[f64; 2]> {
        let mut plus = p;
        let mut minus = p;
        if j == 0 {
            plus.t += h;
            minus.t -= h;
        } else {
            plus.theta += h;
            minus.theta -= h;
        }
        let fp = apply_map(table, plus, order)?;
        let fm = apply_map(table, minus, order)?;
        Ok([t_diff(fp.t, fm.t) / (2.0 * h), (fp.theta - fm.theta) / (2.0 * h)])
    };
    let mut jac = [[0.0; 2]; 2];
    for j in 0..2 {
        let coarse = column(j, JACOBIAN_STEP)?;
        let fine = column(j, 0.5 * JACOBIAN_STEP)?;
        jac[0][j] = (4.0 * fine[0] - coarse[0]) / 3.0;
        jac[1][j] = (4.0 * fine[1] - coarse[1]) / 3.0;
    }
    Ok(jac)
}

pub fn trace2(j: &[[f64; 2]; 2]) -> f64 {
    j[0][0] + j[1][1]
}

pub fn det2(j: &[[f64; 2]; 2]) -> f64 {
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

/// Determinant of the map's derivative in the invariant-measure coordinates
/// (arc length, -cos theta); equals 1 for the exact map.
pub fn area_determinant(table: &StringTable, p: PhasePoint, order: u8) -> Result<f64> {
    let jac = jacobian_fd(table, p, order)?;
    let end = apply_map(table, p, order)?;
    let scale_start = table.speed(p.t) * p.theta.sin();
    let scale_end = table.speed(end.t) * end.theta.sin();
    Ok(det2(&jac) * scale_end / scale_start)
}

/// Locate all 2-periodic chords: zeros of hdot on [0, pi), found by a
/// sign-change scan with bisection and Newton polish, plus plateau detection
/// for continua and a grazing-minimum pass for zeros without sign change.
pub fn find_diameters(table: &StringTable) -> DiameterSet {
    let n = DIAMETER_SCAN;
    let step = PI / n as f64;
    let hdot = |t: f64| table.fields(t).hd;
    let values: Vec<f64> = (0..=n).map(|j| hdot(j as f64 * step)).collect();

    // plateau runs
    let small: Vec<bool> = values.iter().map(|v| v.abs() < PLATEAU_EPS).collect();
    let mut plateaus: Vec<(usize, usize)> = Vec::new();
    let mut run_start = None;
    for (j, &is_small) in small.iter().enumerate() {
        match (is_small, run_start) {
            (true, None) => run_start = Some(j),
            (false, Some(s)) => {
                if j - s >= 3 {
                    plateaus.push((s, j - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        if n + 1 - s >= 3 {
            plateaus.push((s, n));
        }
    }
    if plateaus.len() == 1 && plateaus[0] == (0, n) {
        return DiameterSet { diameters: Vec::new(), plateaus: Vec::new(), full_circle: true };
    }
    let in_plateau = |j: usize| plateaus.iter().any(|&(s, e)| (s..=e).contains(&j));

    let mut roots: Vec<(f64, bool)> = Vec::new();
    // sign changes between consecutive non-plateau samples
    for j in 0..n {
        if in_plateau(j) || in_plateau(j + 1) {
            continue;
        }
        let (va, vb) = (values[j], values[j + 1]);
        if va == 0.0 {
            roots.push((j as f64 * step, false));
        } else if va * vb < 0.0 {
            let (mut a, mut b, mut fa) = (j as f64 * step, (j + 1) as f64 * step, va);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                let fm = hdot(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            let mut r = 0.5 * (a + b);
            for _ in 0..3 {
                let d2 = table.fields(r).hdd;
                if d2.abs() > 1e-14 {
                    let next = r - hdot(r) / d2;
                    if next > a && next < b {
                        r = next;
                    }
                }
            }
            roots.push((r, false));
        }
    }
    // grazing zeros: local minima of |hdot| below tolerance, no sign change
    for j in 1..n {
        if in_plateau(j) || !small[j] {
            continue;
        }
        if values[j].abs() <= values[j - 1].abs() && values[j].abs() <= values[j + 1].abs() {
            let t = j as f64 * step;
            if roots.iter().all(|&(r, _)| (r - t).abs() > 2.0 * step) {
                // golden-section refinement of |hdot|
                let (mut a, mut b) = (t - step, t + step);
                let phi = 0.618_033_988_749_894_9;
                for _ in 0..60 {
                    let c = b - phi * (b - a);
                    let d = a + phi * (b - a);
                    if hdot(c).abs() < hdot(d).abs() {
                        b = d;
                    } else {
                        a = c;
                    }
                }
                roots.push((0.5 * (a + b), true));
            }
        }
    }

    roots.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    roots.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9);
    // a zero at pi is the mirror of the one at 0
    if let Some(&(first, _)) = roots.first() {
        if let Some(&(last, _)) = roots.last() {
            if (last - PI).abs() < 1e-9 && first < 1e-9 {
                roots.pop();
            }
        }
    }

    let diameters = roots
        .into_iter()
        .map(|(t0, grazing)| {
            let fields = table.fields(t0);
            Diameter {
                t0,
                chord: table.radius(t0) + table.radius(t0 + PI),
                h: fields.h,
                hdd: fields.hdd,
                grazing,
            }
        })
        .collect();
    let plateaus = plateaus
        .into_iter()
        .map(|(s, e)| (s as f64 * step, e as f64 * step))
        .collect();
    DiameterSet { diameters, plateaus, full_circle: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direction_set::DirectionSetSpec;
    use crate::table::StringTable;
    use crate::trig::TrigPoly;
    use crate::vanishing::{
        build_g, recover_perturbation, recover_perturbation_with, GVariant, RecoverOptions,
        SymmetricFunction,
    };

    fn sin3_table() -> StringTable {
        let g = SymmetricFunction::from_poly(TrigPoly::sin_harmonic(3, 0.01)).unwrap();
        let pd = recover_perturbation(&g).unwrap();
        StringTable::new(pd, 1.0, 10.0).unwrap()
    }

    #[test]
    fn circle_bounce_matches_closed_form() {
        let table = StringTable::circle(3.0).unwrap();
        for i in 0..8 {
            for k in 1..8 {
                let p = PhasePoint::new(i as f64 * 0.7, k as f64 * PI / 8.0);
                let q = next_bounce(&table, p).unwrap();
                assert!(t_diff(q.t, p.t + 2.0 * p.theta).abs() < 1e-9, "t: {p:?} -> {q:?}");
                assert!((q.theta - p.theta).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tangential_shots_rejected() {
        let table = StringTable::circle(3.0).unwrap();
        match next_bounce(&table, PhasePoint::new(0.0, 1e-9)) {
            Err(Error::TangentialShot { .. }) => {}
            other => panic!("expected TangentialShot, got {other:?}"),
        }
    }

    #[test]
    fn bounce_is_reversible() {
        let table = sin3_table();
        for i in 0..16 {
            let p = PhasePoint::new(i as f64 * 0.4, 0.3 + (0.15 * i as f64) % 2.4);
            let q = next_bounce(&table, p).unwrap();
            let back = next_bounce(&table, q.reversed()).unwrap();
            assert!(t_diff(back.t, p.t).abs() < 1e-9, "{p:?} -> {q:?} -> {back:?}");
            assert!((back.theta - (PI - p.theta)).abs() < 1e-9);
        }
    }

    #[test]
    fn grazing_shot_still_lands_nearby() {
        let table = StringTable::circle(3.0).unwrap();
        let p = PhasePoint::new(1.0, 1e-4);
        let q = next_bounce(&table, p).unwrap();
        assert!(t_diff(q.t, p.t + 2.0 * p.theta).abs() < 1e-9);
    }

    #[test]
    fn diameter_feet_are_two_periodic() {
        let table = sin3_table();
        for k in 0..3 {
            let t0 = k as f64 * PI / 3.0;
            let p = PhasePoint::new(t0, PI / 2.0);
            let q = apply_map(&table, p, 2).unwrap();
            assert!(t_diff(q.t, p.t).abs() < 1e-8, "foot {k}: {q:?}");
            assert!((q.theta - PI / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn circle_jacobian_is_shear() {
        let table = StringTable::circle(3.0).unwrap();
        let j = jacobian_fd(&table, PhasePoint::new(0.7, 1.1), 1).unwrap();
        assert!((j[0][0] - 1.0).abs() < 1e-7, "{j:?}");
        assert!((j[0][1] - 2.0).abs() < 1e-7);
        assert!(j[1][0].abs() < 1e-7);
        assert!((j[1][1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn order_two_map_is_area_preserving() {
        let table = sin3_table();
        for i in 0..12 {
            let p = PhasePoint::new(0.37 + i as f64 * 0.51, 0.4 + (i as f64 * 0.19) % 2.2);
            let det = area_determinant(&table, p, 2).unwrap();
            assert!((det - 1.0).abs() < 1e-4, "{p:?}: det {det}");
        }
    }

    #[test]
    fn trace_at_foot_matches_curvature_formula() {
        let table = sin3_table();
        let j = jacobian_fd(&table, PhasePoint::new(0.0, PI / 2.0), 2).unwrap();
        let (eps, ell) = (0.01, 10.0);
        let (h0, hdd0) = (eps / 3.0, -3.0 * eps);
        let k1 = 1.0 / (1.0 + ell + h0) + 1.0 / (1.0 + ell + h0 + 2.0 * hdd0);
        let k2 = 1.0 / (1.0 + ell - h0) + 1.0 / (1.0 + ell - h0 - 2.0 * hdd0);
        let d = 1.0 + ell;
        let expected = 2.0 + 4.0 * d * (k1 * k2 * d - k1 - k2);
        assert!(trace2(&j) > 2.0);
        assert!((trace2(&j) - expected).abs() < 1e-6, "{} vs {expected}", trace2(&j));
    }

    #[test]
    fn circle_reports_degenerate_continuum() {
        let set = find_diameters(&StringTable::circle(3.0).unwrap());
        assert!(set.full_circle);
        assert!(set.diameters.is_empty());
    }

    #[test]
    fn sin3_table_has_three_representative_diameters() {
        let set = find_diameters(&sin3_table());
        assert!(!set.full_circle);
        assert!(set.plateaus.is_empty());
        assert_eq!(set.diameters.len(), 3);
        for (k, d) in set.diameters.iter().enumerate() {
            assert!((d.t0 - k as f64 * PI / 3.0).abs() < 1e-9, "foot {k} at {}", d.t0);
            assert!((d.chord - 11.0).abs() < 1e-9, "chord {}", d.chord);
            assert!(!d.grazing);
        }
    }

    #[test]
    fn interval_spec_yields_plateau_and_isolated_diameters() {
        let mut spec = DirectionSetSpec::from_interval(0.2, 0.4);
        spec.isolated.push(1.5);
        let g = build_g(&spec, GVariant::Transversal).unwrap();
        let pd = recover_perturbation_with(
            &g,
            RecoverOptions { reconstruction_tol: 1e-2, ..Default::default() },
        )
        .unwrap();
        let table = StringTable::new(pd, 0.5, 10.0).unwrap();
        let set = find_diameters(&table);
        assert!(!set.full_circle);
        assert!(!set.plateaus.is_empty());
        let covers_interval = set.plateaus.iter().any(|&(a, b)| a < 0.21 && b > 0.39);
        assert!(covers_interval, "plateaus: {:?}", set.plateaus);
        assert!(
            set.diameters.iter().any(|d| (d.t0 - 1.5).abs() < 1e-6),
            "isolated diameter missing: {:?}",
            set.diameters.iter().map(|d| d.t0).collect::<Vec<_>>()
        );
    }
}
