//! Periodic potentials whose separatrix-level curves realize prescribed
//! corner sets, and the time-1 map of the traveling-wave Hamiltonian.
//!
//! The Hamiltonian `H(p, x, t) = p^2/2 + V(bx - at)` reduces through
//! `X = bx - at, P = bp - a` to the autonomous `K = P^2/2 + b^2 V(X)`. Every
//! critical point of V is a fixed point of the reduced flow; non-degenerate
//! maxima are hyperbolic and put corners on the positive-momentum level curve
//! `P(X) = sqrt(2(E - b^2 V(X)))` at the common maximum level, while
//! degenerate (quartic-flat) maxima leave the curve C^1.
//!
//! V is built from node profiles that are exactly quadratic caps near each
//! node (`V = -kappa s^2 / 2 + level`), joined across each gap by a plateau
//! compensator whose amplitude solves the zero-mean condition in closed form,
//! which pins every maximum to the same level.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bump::{plateau_profile, smoothstep, C2};
use crate::quad::{adaptive, PanelAntiderivative};
use crate::{Error, Result};

/// Node stiffness: `V''(node) = -kappa` at non-degenerate maxima.
pub const NODE_STIFFNESS: f64 = 1.0;

/// Default integrator step for verification runs.
pub const INTEGRATOR_STEP: f64 = 1e-3;

/// A prescribed maximum of the potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialNode {
    /// Position in [0, 1).
    pub x: f64,
    /// Quartic-flat maximum instead of a quadratic cap.
    pub degenerate: bool,
}

impl PotentialNode {
    pub fn at(x: f64) -> Self {
        PotentialNode { x, degenerate: false }
    }

    pub fn flat(x: f64) -> Self {
        PotentialNode { x, degenerate: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    Maximum,
    Minimum,
}

/// A detected critical point of V.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub x: f64,
    pub kind: CriticalKind,
    pub second_derivative: f64,
    /// |V''| below tolerance.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// `f = -kappa s chi(s/r)` (or `-kappa s^3/r^2 chi(s/r)` when cubic),
    /// s the wrapped distance from the node.
    NodeTail { center: f64, r: f64, cubic: bool },
    /// `f = beta * plateau(w, x - lo)`.
    Compensator { lo: f64, w: f64, beta: f64 },
}

/// Even smooth cutoff: 1 on [-1/2, 1/2], 0 outside (-1, 1).
fn chi(u: f64) -> C2 {
    let a = u.abs();
    if a <= 0.5 {
        return C2 { v: 1.0, d1: 0.0, d2: 0.0 };
    }
    if a >= 1.0 {
        return C2::ZERO;
    }
    let s = smoothstep(1.0 - 2.0 * a);
    let sign = if u < 0.0 { -1.0 } else { 1.0 };
    C2 { v: s.v, d1: -2.0 * sign * s.d1, d2: 4.0 * s.d2 }
}

fn wrap_unit(x: f64) -> f64 {
    let r = x % 1.0;
    if r < 0.0 {
        r + 1.0
    } else {
        r
    }
}

/// Distance representative in [-1/2, 1/2).
fn wrap_half(x: f64) -> f64 {
    let r = wrap_unit(x + 0.5);
    r - 0.5
}

impl Piece {
    fn eval(&self, x: f64) -> C2 {
        match *self {
            Piece::NodeTail { center, r, cubic } => {
                let s = wrap_half(x - center);
                if s.abs() >= r {
                    return C2::ZERO;
                }
                let c = chi(s / r);
                let (cv, cd, cdd) = (c.v, c.d1 / r, c.d2 / (r * r));
                if cubic {
                    let q = s * s * s / (r * r);
                    let qd = 3.0 * s * s / (r * r);
                    let qdd = 6.0 * s / (r * r);
                    C2 {
                        v: -NODE_STIFFNESS * q * cv,
                        d1: -NODE_STIFFNESS * (qd * cv + q * cd),
                        d2: -NODE_STIFFNESS * (qdd * cv + 2.0 * qd * cd + q * cdd),
                    }
                } else {
                    C2 {
                        v: -NODE_STIFFNESS * s * cv,
                        d1: -NODE_STIFFNESS * (cv + s * cd),
                        d2: -NODE_STIFFNESS * (2.0 * cd + s * cdd),
                    }
                }
            }
            Piece::Compensator { lo, w, beta } => {
                let s = wrap_unit(x - lo);
                if s >= w {
                    return C2::ZERO;
                }
                plateau_profile(w, s).scale(beta)
            }
        }
    }
}

enum PotentialBody {
    Built {
        pieces: Vec<Piece>,
        anti: PanelAntiderivative,
        /// V(x) = anti(x) + shift, pinned so the node level is zero.
        shift: f64,
    },
    Analytic {
        v: Box<dyn Fn(f64) -> f64>,
        dv: Box<dyn Fn(f64) -> f64>,
        d2v: Box<dyn Fn(f64) -> f64>,
    },
}

/// A smooth 1-periodic potential with a known critical set.
pub struct PeriodicPotential {
    body: PotentialBody,
    nodes: Vec<PotentialNode>,
    critical: Vec<CriticalPoint>,
    level: f64,
}

impl core::fmt::Debug for PeriodicPotential {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PeriodicPotential")
            .field("nodes", &self.nodes)
            .field("critical", &self.critical)
            .field("level", &self.level)
            .finish()
    }
}

impl PeriodicPotential {
    /// Build V with non-degenerate (or quartic-flat) maxima exactly at the
    /// given nodes, all at level zero.
    pub fn build(nodes: &[PotentialNode]) -> Result<Self> {
        let mut nodes: Vec<PotentialNode> =
            nodes.iter().map(|n| PotentialNode { x: wrap_unit(n.x), ..*n }).collect();
        nodes.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
        if nodes.is_empty() {
            return Ok(PeriodicPotential {
                body: PotentialBody::Analytic {
                    v: Box::new(|_| 0.0),
                    dv: Box::new(|_| 0.0),
                    d2v: Box::new(|_| 0.0),
                },
                nodes,
                critical: Vec::new(),
                level: 0.0,
            });
        }
        let n = nodes.len();
        for i in 0..n {
            let gap = if n == 1 {
                1.0
            } else {
                wrap_unit(nodes[(i + 1) % n].x - nodes[i].x)
            };
            if gap < 1e-4 {
                return Err(Error::SpecOverlap);
            }
        }

        // profile radii: a third of the smaller adjacent gap
        let gap_after = |i: usize| {
            if n == 1 {
                1.0
            } else {
                wrap_unit(nodes[(i + 1) % n].x - nodes[i].x)
            }
        };
        let radii: Vec<f64> = (0..n)
            .map(|i| {
                let before = gap_after((i + n - 1) % n);
                0.3 * before.min(gap_after(i)).min(1.0)
            })
            .collect();

        // universal profile integrals, computed once per build
        let c_lin = adaptive(&|u: f64| u * chi(u).v, 0.0, 1.0, 1e-14);
        let c_cub = adaptive(&|u: f64| u * u * u * chi(u).v, 0.0, 1.0, 1e-14);
        let c_plateau = adaptive(&|u: f64| plateau_profile(1.0, u).v, 0.0, 1.0, 1e-14);

        let mut pieces = Vec::with_capacity(3 * n);
        for (i, node) in nodes.iter().enumerate() {
            pieces.push(Piece::NodeTail { center: node.x, r: radii[i], cubic: node.degenerate });
        }
        for i in 0..n {
            let j = (i + 1) % n;
            let w = gap_after(i);
            // one negative plateau on the first half-gap, one positive on the
            // second, sized so each half integrates to -+D: the potential
            // dips to exactly level - D at mid-gap and returns to the level
            // at the next node, and V' vanishes only at the single flat
            // touch in the middle
            let lobe = |idx: usize| -> f64 {
                let r = radii[idx];
                let c = if nodes[idx].degenerate { c_cub } else { c_lin };
                NODE_STIFFNESS * r * r * c
            };
            let half_mass = 0.5 * w * c_plateau;
            let depth = lobe(i).max(lobe(j)) + 0.1 * NODE_STIFFNESS * w * half_mass;
            let coeff_left = (depth - lobe(i)) / half_mass;
            let coeff_right = (depth - lobe(j)) / half_mass;
            pieces.push(Piece::Compensator { lo: nodes[i].x, w: 0.5 * w, beta: -coeff_left });
            pieces.push(Piece::Compensator {
                lo: wrap_unit(nodes[i].x + 0.5 * w),
                w: 0.5 * w,
                beta: coeff_right,
            });
        }

        let f = |x: f64| pieces.iter().fold(0.0, |acc, p| acc + p.eval(x).v);
        let mut seeds = Vec::with_capacity(4 * n);
        for (i, node) in nodes.iter().enumerate() {
            seeds.push(wrap_unit(node.x - radii[i]));
            seeds.push(node.x);
            seeds.push(wrap_unit(node.x + radii[i]));
        }
        let anti = PanelAntiderivative::build(&f, 0.0, 1.0, &seeds, 1.0 / 256.0, 1e-15);
        let shift = -anti.integral_to(&f, nodes[0].x);

        let mut pot = PeriodicPotential {
            body: PotentialBody::Built { pieces, anti, shift },
            nodes,
            critical: Vec::new(),
            level: 0.0,
        };
        pot.critical = pot.scan_critical_points();
        Ok(pot)
    }

    /// Wrap closed-form callables (value, derivative, second derivative);
    /// `level` is the maximum level carrying the separatrix.
    pub fn from_callables(
        v: Box<dyn Fn(f64) -> f64>,
        dv: Box<dyn Fn(f64) -> f64>,
        d2v: Box<dyn Fn(f64) -> f64>,
        level: f64,
    ) -> Self {
        let mut pot = PeriodicPotential {
            body: PotentialBody::Analytic { v, dv, d2v },
            nodes: Vec::new(),
            critical: Vec::new(),
            level,
        };
        pot.critical = pot.scan_critical_points();
        pot
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.body {
            PotentialBody::Built { pieces, anti, shift } => {
                let f = |u: f64| pieces.iter().fold(0.0, |acc, p| acc + p.eval(u).v);
                anti.integral_to(&f, wrap_unit(x)) + shift
            }
            PotentialBody::Analytic { v, .. } => v(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.body {
            PotentialBody::Built { pieces, .. } => {
                pieces.iter().fold(0.0, |acc, p| acc + p.eval(x).v)
            }
            PotentialBody::Analytic { dv, .. } => dv(x),
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match &self.body {
            PotentialBody::Built { pieces, .. } => {
                pieces.iter().fold(0.0, |acc, p| acc + p.eval(x).d1)
            }
            PotentialBody::Analytic { d2v, .. } => d2v(x),
        }
    }

    /// The common maximum level.
    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn nodes(&self) -> &[PotentialNode] {
        &self.nodes
    }

    pub fn critical_points(&self) -> &[CriticalPoint] {
        &self.critical
    }

    fn scan_critical_points(&self) -> Vec<CriticalPoint> {
        let n = 16_384;
        let f = |x: f64| self.derivative(x);
        let values: Vec<f64> = (0..=n).map(|j| f(j as f64 / n as f64)).collect();

        // V' vanishes identically (to machine precision) on a narrow strip
        // around every flat touch; collapse each zero run to its midpoint
        let mut roots: Vec<f64> = Vec::new();
        let mut j = 0;
        while j < n {
            if values[j] == 0.0 {
                let start = j;
                while j < n && values[j] == 0.0 {
                    j += 1;
                }
                roots.push(0.5 * (start + j - 1) as f64 / n as f64);
            } else {
                if values[j] * values[j + 1] < 0.0 {
                    let (mut lo, mut hi, mut flo) =
                        (j as f64 / n as f64, (j + 1) as f64 / n as f64, values[j]);
                    for _ in 0..60 {
                        let m = 0.5 * (lo + hi);
                        let fm = f(m);
                        if flo * fm <= 0.0 {
                            hi = m;
                        } else {
                            lo = m;
                            flo = fm;
                        }
                    }
                    roots.push(0.5 * (lo + hi));
                }
                j += 1;
            }
        }
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

        roots
            .into_iter()
            .map(|x| {
                let d2 = self.second_derivative(x);
                // classify by neighborhood values, widening past any flat strip
                let here = self.value(x);
                let mut delta = 2.0 / n as f64;
                let kind = loop {
                    let (vl, vr) = (self.value(x - delta), self.value(x + delta));
                    let spread = (vl - here).abs().max((vr - here).abs());
                    if spread > 1e-13 || delta > 0.1 {
                        break if vl <= here && vr <= here {
                            CriticalKind::Maximum
                        } else {
                            CriticalKind::Minimum
                        };
                    }
                    delta *= 2.0;
                };
                CriticalPoint { x, kind, second_derivative: d2, degenerate: d2.abs() < 1e-9 }
            })
            .collect()
    }
}

/// The traveling-wave system `H = p^2/2 + V(bx - at)`.
#[derive(Debug, Clone, Copy)]
pub struct TwistSystem {
    pub a: i64,
    pub b: i64,
}

impl TwistSystem {
    pub fn new(a: i64, b: i64) -> Self {
        assert!(a != 0 && b != 0, "a and b must be nonzero integers");
        TwistSystem { a, b }
    }

    /// The autonomizing change of coordinates `X = bx - at, P = bp - a`.
    pub fn reduce(&self, x: f64, p: f64, t: f64) -> (f64, f64) {
        (self.b as f64 * x - self.a as f64 * t, self.b as f64 * p - self.a as f64)
    }

    /// Reduced energy `K(P, X) = P^2/2 + b^2 V(X)`.
    pub fn reduced_energy(&self, pot: &PeriodicPotential, big_x: f64, big_p: f64) -> f64 {
        let b2 = (self.b * self.b) as f64;
        0.5 * big_p * big_p + b2 * pot.value(big_x)
    }

    /// Fourth-order symplectic step of the reduced autonomous flow.
    pub fn reduced_step(&self, pot: &PeriodicPotential, state: (f64, f64), dt: f64) -> (f64, f64) {
        let b2 = (self.b * self.b) as f64;
        let force = |x: f64| -b2 * pot.derivative(x);
        yoshida4(state, dt, &force)
    }

    /// Flow the reduced system for `time`.
    pub fn flow_reduced(
        &self,
        pot: &PeriodicPotential,
        mut state: (f64, f64),
        time: f64,
        dt: f64,
    ) -> (f64, f64) {
        let steps = (time / dt).round().max(1.0) as usize;
        let dt = time / steps as f64;
        for _ in 0..steps {
            state = self.reduced_step(pot, state, dt);
        }
        state
    }

    /// Time-1 map of the nonautonomous H: kicks evaluate the force at the
    /// instantaneous time, drifts advance both x and t.
    pub fn time_one_map(
        &self,
        pot: &PeriodicPotential,
        x: f64,
        p: f64,
        t0: f64,
        dt: f64,
    ) -> (f64, f64) {
        let steps = (1.0 / dt).round().max(1.0) as usize;
        let dt = 1.0 / steps as f64;
        let bf = self.b as f64;
        let af = self.a as f64;
        let mut state = (x, p, t0);
        for _ in 0..steps {
            state = yoshida4_driven(state, dt, &|x, t| -bf * pot.derivative(bf * x - af * t));
        }
        (state.0, state.1)
    }
}

const YOSHIDA_W1: f64 = 1.351_207_191_959_657_8;
const YOSHIDA_W0: f64 = -1.702_414_383_919_315_3;

fn leapfrog(state: (f64, f64), dt: f64, force: &dyn Fn(f64) -> f64) -> (f64, f64) {
    let (mut x, mut p) = state;
    p += 0.5 * dt * force(x);
    x += dt * p;
    p += 0.5 * dt * force(x);
    (x, p)
}

fn yoshida4(state: (f64, f64), dt: f64, force: &dyn Fn(f64) -> f64) -> (f64, f64) {
    let s = leapfrog(state, YOSHIDA_W1 * dt, force);
    let s = leapfrog(s, YOSHIDA_W0 * dt, force);
    leapfrog(s, YOSHIDA_W1 * dt, force)
}

fn leapfrog_driven(state: (f64, f64, f64), dt: f64, force: &dyn Fn(f64, f64) -> f64) -> (f64, f64, f64) {
    let (mut x, mut p, mut t) = state;
    p += 0.5 * dt * force(x, t);
    x += dt * p;
    t += dt;
    p += 0.5 * dt * force(x, t);
    (x, p, t)
}

fn yoshida4_driven(
    state: (f64, f64, f64),
    dt: f64,
    force: &dyn Fn(f64, f64) -> f64,
) -> (f64, f64, f64) {
    let s = leapfrog_driven(state, YOSHIDA_W1 * dt, force);
    let s = leapfrog_driven(s, YOSHIDA_W0 * dt, force);
    leapfrog_driven(s, YOSHIDA_W1 * dt, force)
}

/// The positive-momentum branch of `{K = E}`.
#[derive(Debug)]
pub struct EnergyCurve<'a> {
    pot: &'a PeriodicPotential,
    pub b: i64,
    pub energy: f64,
}

/// Level curve `P(X) = sqrt(2 (E - b^2 V(X)))` at energy E; intended for the
/// separatrix energy `E = b^2 * level`.
pub fn curve_from_energy(
    pot: &PeriodicPotential,
    b: i64,
    energy: f64,
) -> Result<EnergyCurve<'_>> {
    let b2 = (b * b) as f64;
    let mut worst: f64 = 0.0;
    for j in 0..2048 {
        let x = j as f64 / 2048.0;
        worst = worst.min(energy - b2 * pot.value(x));
    }
    if worst < -1e-12 {
        return Err(Error::NegativeRadicand { at: worst });
    }
    Ok(EnergyCurve { pot, b, energy })
}

impl EnergyCurve<'_> {
    pub fn momentum(&self, x: f64) -> f64 {
        let b2 = (self.b * self.b) as f64;
        (2.0 * (self.energy - b2 * self.pot.value(x))).max(0.0).sqrt()
    }

    pub fn sample(&self, n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|j| {
            let x = j as f64 / n as f64;
            (x, self.momentum(x))
        }).collect()
    }
}

/// One-sided slopes (left, right) of the positive-momentum separatrix branch
/// at a maximum X0 of V: `(-|b| sqrt(|V''|), +|b| sqrt(|V''|))` for a
/// non-degenerate maximum, (0, 0) for a flat one.
pub fn corner_slopes(pot: &PeriodicPotential, b: i64, x0: f64) -> Result<(f64, f64)> {
    let dv = pot.derivative(x0);
    if dv.abs() > 1e-8 {
        return Err(Error::NotCritical { at: x0 });
    }
    let d2 = pot.second_derivative(x0);
    if d2.abs() < 1e-9 {
        return Ok((0.0, 0.0));
    }
    let slope = b.unsigned_abs() as f64 * d2.abs().sqrt();
    Ok((-slope, slope))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_spec_gives_zero_potential() {
        let pot = PeriodicPotential::build(&[]).unwrap();
        for j in 0..16 {
            assert_eq!(pot.value(j as f64 / 16.0), 0.0);
        }
        assert!(pot.critical_points().is_empty());
    }

    #[test]
    fn single_node_is_nondegenerate_maximum_at_level_zero() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.5)]).unwrap();
        assert!(pot.value(0.5).abs() < 1e-12);
        assert!(pot.derivative(0.5).abs() < 1e-13);
        assert!((pot.second_derivative(0.5) + NODE_STIFFNESS).abs() < 1e-12);
        // strictly below level away from the node
        for j in 1..20 {
            let x = 0.5 + j as f64 * 0.02;
            assert!(pot.value(x) < 0.0, "x={x}: {}", pot.value(x));
        }
        let maxima: Vec<_> = pot
            .critical_points()
            .iter()
            .filter(|c| c.kind == CriticalKind::Maximum)
            .collect();
        assert_eq!(maxima.len(), 1);
        assert!((maxima[0].x - 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_nodes_share_the_level() {
        let pot =
            PeriodicPotential::build(&[PotentialNode::at(0.2), PotentialNode::at(0.55)]).unwrap();
        assert!(pot.value(0.2).abs() < 1e-10);
        assert!(pot.value(0.55).abs() < 1e-10, "level defect {}", pot.value(0.55));
        // exactly one minimum per gap, strictly below level
        let minima: Vec<_> = pot
            .critical_points()
            .iter()
            .filter(|c| c.kind == CriticalKind::Minimum)
            .collect();
        assert_eq!(minima.len(), 2);
        for m in minima {
            assert!(pot.value(m.x) < -1e-6);
        }
    }

    #[test]
    fn critical_points_are_exactly_the_detected_set() {
        let pot =
            PeriodicPotential::build(&[PotentialNode::at(0.1), PotentialNode::at(0.7)]).unwrap();
        for c in pot.critical_points() {
            assert!(pot.derivative(c.x).abs() < 1e-10, "V' at {}: {}", c.x, pot.derivative(c.x));
        }
        // nodes appear among the maxima
        for node in pot.nodes() {
            assert!(pot
                .critical_points()
                .iter()
                .any(|c| (c.x - node.x).abs() < 1e-9 && c.kind == CriticalKind::Maximum));
        }
    }

    #[test]
    fn reduction_is_the_affine_map() {
        let sys = TwistSystem::new(1, 1);
        assert_eq!(sys.reduce(0.0, 0.0, 0.0), (0.0, -1.0));
        let sys = TwistSystem::new(2, 3);
        let (bx, bp) = sys.reduce(0.25, 0.5, 0.125);
        assert!((bx - (3.0 * 0.25 - 2.0 * 0.125)).abs() < 1e-15);
        assert!((bp - (3.0 * 0.5 - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn reduced_energy_is_conserved() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.3)]).unwrap();
        let sys = TwistSystem::new(1, 2);
        let start = (0.05, 0.9);
        let e0 = sys.reduced_energy(&pot, start.0, start.1);
        let end = sys.flow_reduced(&pot, start, 100.0, INTEGRATOR_STEP);
        let e1 = sys.reduced_energy(&pot, end.0, end.1);
        assert!((e1 - e0).abs() < 1e-8, "drift {}", e1 - e0);
    }

    #[test]
    fn reduced_energy_is_invariant_under_time_one_map() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.3)]).unwrap();
        let sys = TwistSystem::new(1, 2);
        let (mut x, mut p) = (0.1, 0.75);
        let mut t = 0.0;
        let (bx0, bp0) = sys.reduce(x, p, t);
        let k0 = sys.reduced_energy(&pot, bx0, bp0);
        for _ in 0..100 {
            let next = sys.time_one_map(&pot, x, p, t, INTEGRATOR_STEP);
            x = next.0;
            p = next.1;
            t += 1.0;
        }
        let (bx, bp) = sys.reduce(x, p, t);
        let k1 = sys.reduced_energy(&pot, bx, bp);
        assert!((k1 - k0).abs() < 1e-8, "drift {}", k1 - k0);
    }

    #[test]
    fn critical_orbit_returns_after_b_steps() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.5)]).unwrap();
        let (a, b) = (1i64, 2i64);
        let sys = TwistSystem::new(a, b);
        // fixed point of the reduced flow: X = node, P = 0
        let x0 = 0.5 / b as f64;
        let p0 = a as f64 / b as f64;
        let (mut x, mut p) = (x0, p0);
        let mut t = 0.0;
        for _ in 0..b {
            let next = sys.time_one_map(&pot, x, p, t, INTEGRATOR_STEP);
            x = next.0;
            p = next.1;
            t += 1.0;
        }
        let dx = (x - x0 - (x - x0).round()).abs();
        assert!(dx < 1e-9, "x defect {dx}");
        assert!((p - p0).abs() < 1e-9);
    }

    #[test]
    fn flat_potential_level_curve_is_constant() {
        let pot = PeriodicPotential::build(&[]).unwrap();
        let curve = curve_from_energy(&pot, 1, 0.5).unwrap();
        for j in 0..32 {
            assert!((curve.momentum(j as f64 / 32.0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn corner_slopes_match_taylor_and_finite_differences() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.5)]).unwrap();
        let (l, r) = corner_slopes(&pot, 1, 0.5).unwrap();
        assert!((r - NODE_STIFFNESS.sqrt()).abs() < 1e-10);
        assert!((l + r).abs() < 1e-14);
        // finite differences on the curve itself
        let curve = curve_from_energy(&pot, 1, 0.0).unwrap();
        let hh = 1e-5;
        let fd_right = (curve.momentum(0.5 + hh) - curve.momentum(0.5)) / hh;
        let fd_left = (curve.momentum(0.5) - curve.momentum(0.5 - hh)) / hh;
        assert!((fd_right - r).abs() < 1e-4, "{fd_right} vs {r}");
        assert!((fd_left - l).abs() < 1e-4, "{fd_left} vs {l}");
    }

    #[test]
    fn doubling_b_doubles_slopes() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.5)]).unwrap();
        let (_, r1) = corner_slopes(&pot, 1, 0.5).unwrap();
        let (_, r2) = corner_slopes(&pot, 2, 0.5).unwrap();
        assert!((r2 - 2.0 * r1).abs() < 1e-12);
    }

    #[test]
    fn degenerate_maximum_leaves_curve_c1() {
        let pot = PeriodicPotential::build(&[PotentialNode::flat(0.5)]).unwrap();
        assert!(pot.second_derivative(0.5).abs() < 1e-12);
        let (l, r) = corner_slopes(&pot, 1, 0.5).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        // anchor the energy at the measured node level so the radicand near
        // the corner is a cleanly cancelling quadrature difference
        let curve = curve_from_energy(&pot, 1, pot.value(0.5)).unwrap();
        let hh = 1e-7;
        let fd_right = (curve.momentum(0.5 + hh) - curve.momentum(0.5)) / hh;
        let fd_left = (curve.momentum(0.5) - curve.momentum(0.5 - hh)) / hh;
        assert!(fd_right.abs() < 1e-6 && fd_left.abs() < 1e-6, "({fd_left}, {fd_right})");
    }

    #[test]
    fn analytic_cosine_potential_slopes() {
        // V = -cos(2 pi X) / (2 pi)^2 has V''(1/2) = -1
        let tp = 2.0 * core::f64::consts::PI;
        let pot = PeriodicPotential::from_callables(
            Box::new(move |x| -(tp * x).cos() / (tp * tp)),
            Box::new(move |x| (tp * x).sin() / tp),
            Box::new(move |x| (tp * x).cos()),
            1.0 / (tp * tp),
        );
        let (l, r) = corner_slopes(&pot, 1, 0.5).unwrap();
        assert!((r - 1.0).abs() < 1e-12 && (l + 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_below_level_is_rejected() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.5)]).unwrap();
        match curve_from_energy(&pot, 1, -0.1) {
            Err(Error::NegativeRadicand { .. }) => {}
            other => panic!("expected NegativeRadicand, got {other:?}"),
        }
    }

    #[test]
    fn separatrix_curve_is_invariant_under_time_one_map() {
        let pot = PeriodicPotential::build(&[PotentialNode::at(0.5)]).unwrap();
        let (a, b) = (1i64, 1i64);
        let sys = TwistSystem::new(a, b);
        let curve = curve_from_energy(&pot, b, 0.0).unwrap();
        let mut worst = 0.0f64;
        for j in 0..24 {
            let bx0 = j as f64 / 24.0;
            if (bx0 - 0.5).abs() < 0.02 {
                continue; // skip the corner itself
            }
            let bp0 = curve.momentum(bx0);
            // back to (x, p) at t = 0
            let x = bx0 / b as f64;
            let p = (bp0 + a as f64) / b as f64;
            let (x1, p1) = sys.time_one_map(&pot, x, p, 0.0, INTEGRATOR_STEP);
            let (bx1, bp1) = sys.reduce(x1, p1, 1.0);
            let expected = curve.momentum(wrap_unit(bx1));
            worst = worst.max((bp1 - expected).abs());
        }
        assert!(worst < 1e-6, "vertical deviation {worst}");
    }
}
