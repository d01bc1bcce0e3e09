//! Prescribed direction sets on the projective line and their lift to the
//! circle.
//!
//! A direction set lives on [0, pi) (undirected directions); the lift doubles
//! every component to `u` and `u + pi`, making the set invariant under the
//! half-turn. Accumulation records generate finite geometric point chains
//! converging to a target; the target itself joins the realized set and later
//! acts as a chain boundary for the vanishing-function construction.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Minimum circle separation between distinct components.
pub const MIN_SEPARATION: f64 = 1e-6;

/// Which side a generated point chain approaches its target from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccumulationSide {
    Left,
    Right,
}

/// A truncated geometric sequence of isolated directions converging to
/// `target`: points at `target -+ offset * ratio^k` for k = 0..count.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulation {
    pub target: f64,
    pub side: AccumulationSide,
    pub ratio: f64,
    pub count: usize,
    /// Distance from the target to the outermost generated point.
    pub offset: f64,
}

impl Accumulation {
    pub fn new(target: f64, side: AccumulationSide, ratio: f64, count: usize) -> Self {
        Accumulation { target, side, ratio, count, offset: 0.3 }
    }

    /// Generated points, wrapped into [0, pi), ordered outermost first.
    pub fn points(&self) -> Vec<f64> {
        let sign = match self.side {
            AccumulationSide::Left => -1.0,
            AccumulationSide::Right => 1.0,
        };
        (0..self.count)
            .map(|k| wrap_pi(self.target + sign * self.offset * self.ratio.powi(k as i32)))
            .collect()
    }
}

/// The prescribed closed direction set: disjoint closed intervals, isolated
/// points, and truncated accumulation chains, all on [0, pi).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DirectionSetSpec {
    pub intervals: Vec<(f64, f64)>,
    pub isolated: Vec<f64>,
    pub accumulations: Vec<Accumulation>,
}

/// What a realized component is, which decides how the vanishing function
/// treats it: isolated points become transversal (or flat) zeros, while
/// intervals and accumulation targets bound chains with flat gluing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    IsolatedPoint,
    AccumulationTarget,
    Interval,
}

/// One connected component of the lifted set; points have `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedComponent {
    pub lo: f64,
    pub hi: f64,
    pub kind: ComponentKind,
}

impl LiftedComponent {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// A maximal open interval of the lifted set's complement. `hi` may exceed
/// 2*pi for the gap wrapping through zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub lo: f64,
    pub hi: f64,
    /// Index of the component at the gap's left end.
    pub left: usize,
    /// Index of the component at the gap's right end.
    pub right: usize,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The lift of a direction set to [0, 2*pi), closed under the half-turn.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSet {
    components: Vec<LiftedComponent>,
}

impl CircleSet {
    /// Components sorted by position on [0, 2*pi).
    pub fn components(&self) -> &[LiftedComponent] {
        &self.components
    }

    /// Complement gaps in cyclic order; empty only for interval-covered circles.
    pub fn gaps(&self) -> Vec<Gap> {
        let n = self.components.len();
        let mut gaps = Vec::with_capacity(n);
        for i in 0..n {
            let j = (i + 1) % n;
            let lo = self.components[i].hi;
            let hi = if j == 0 { self.components[j].lo + 2.0 * PI } else { self.components[j].lo };
            if hi - lo > 1e-12 {
                gaps.push(Gap { lo, hi, left: i, right: j });
            }
        }
        gaps
    }

    /// Circle distance from `t` to the set.
    pub fn distance(&self, t: f64) -> f64 {
        let t = crate::trig::wrap_2pi(t);
        let mut best = f64::INFINITY;
        for c in &self.components {
            let d = if c.is_point() {
                circle_dist(t, c.lo)
            } else if (c.lo..=c.hi).contains(&t) {
                0.0
            } else {
                circle_dist(t, c.lo).min(circle_dist(t, c.hi))
            };
            best = best.min(d);
        }
        best
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % (2.0 * PI);
    d.min(2.0 * PI - d)
}

fn wrap_pi(t: f64) -> f64 {
    let r = t % PI;
    if r < 0.0 {
        r + PI
    } else {
        r
    }
}

/// Distance on the projective line [0, pi).
fn proj_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % PI;
    d.min(PI - d)
}

struct BaseComponent {
    lo: f64,
    hi: f64,
    kind: ComponentKind,
}

impl DirectionSetSpec {
    /// Convenience: a finite set of isolated directions.
    pub fn from_isolated(points: &[f64]) -> Self {
        DirectionSetSpec { isolated: points.to_vec(), ..Default::default() }
    }

    /// Convenience: a single closed interval of directions.
    pub fn from_interval(lo: f64, hi: f64) -> Self {
        DirectionSetSpec { intervals: alloc::vec![(lo, hi)], ..Default::default() }
    }

    fn realized(&self) -> Result<Vec<BaseComponent>> {
        let mut comps: Vec<BaseComponent> = Vec::new();
        for &(lo, hi) in &self.intervals {
            if !(0.0..PI).contains(&lo) || !(0.0..PI).contains(&hi) || hi <= lo {
                return Err(Error::OverlappingComponents);
            }
            comps.push(BaseComponent { lo, hi, kind: ComponentKind::Interval });
        }
        for &p in &self.isolated {
            if !p.is_finite() {
                return Err(Error::OverlappingComponents);
            }
            let p = wrap_pi(p);
            comps.push(BaseComponent { lo: p, hi: p, kind: ComponentKind::IsolatedPoint });
        }
        for acc in &self.accumulations {
            if !(0.0..1.0).contains(&acc.ratio)
                || acc.ratio <= 0.0
                || acc.count == 0
                || acc.offset <= 0.0
            {
                return Err(Error::OverlappingComponents);
            }
            let target = wrap_pi(acc.target);
            comps.push(BaseComponent {
                lo: target,
                hi: target,
                kind: ComponentKind::AccumulationTarget,
            });
            for p in acc.points() {
                comps.push(BaseComponent { lo: p, hi: p, kind: ComponentKind::IsolatedPoint });
            }
        }
        if comps.is_empty() {
            return Err(Error::EmptyComplement);
        }
        comps.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        // pairwise disjointness with a minimum separation, cyclic on [0, pi)
        for i in 0..comps.len() {
            let a = &comps[i];
            let b = &comps[(i + 1) % comps.len()];
            let sep = if i + 1 == comps.len() {
                proj_dist(a.hi, b.lo)
            } else {
                b.lo - a.hi
            };
            if comps.len() > 1 && sep < MIN_SEPARATION {
                return Err(Error::OverlappingComponents);
            }
        }
        Ok(comps)
    }

    /// Lift to the circle: every component appears at `u` and `u + pi`.
    pub fn lift(&self) -> Result<CircleSet> {
        let base = self.realized()?;
        let mut components = Vec::with_capacity(base.len() * 2);
        for c in &base {
            components.push(LiftedComponent { lo: c.lo, hi: c.hi, kind: c.kind });
            components.push(LiftedComponent { lo: c.lo + PI, hi: c.hi + PI, kind: c.kind });
        }
        components.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        let set = CircleSet { components };
        if set.gaps().is_empty() {
            return Err(Error::EmptyComplement);
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_of_single_point_doubles() {
        let set = DirectionSetSpec::from_isolated(&[0.0]).lift().unwrap();
        let pts: Vec<f64> = set.components().iter().map(|c| c.lo).collect();
        assert_eq!(pts.len(), 2);
        assert!((pts[0] - 0.0).abs() < 1e-15 && (pts[1] - PI).abs() < 1e-15);
    }

    #[test]
    fn lift_of_interval_mirrors_it() {
        let set = DirectionSetSpec::from_interval(0.2, 0.4).lift().unwrap();
        let comps = set.components();
        assert_eq!(comps.len(), 2);
        assert!((comps[0].lo - 0.2).abs() < 1e-15 && (comps[0].hi - 0.4).abs() < 1e-15);
        assert!((comps[1].lo - (0.2 + PI)).abs() < 1e-15);
        assert!((comps[1].hi - (0.4 + PI)).abs() < 1e-15);
    }

    #[test]
    fn lift_of_three_points_gives_six() {
        let set = DirectionSetSpec::from_isolated(&[0.0, PI / 3.0, 2.0 * PI / 3.0])
            .lift()
            .unwrap();
        let pts: Vec<f64> = set.components().iter().map(|c| c.lo).collect();
        assert_eq!(pts.len(), 6);
        for (k, p) in pts.iter().enumerate() {
            assert!((p - k as f64 * PI / 3.0).abs() < 1e-14, "k={k} p={p}");
        }
    }

    #[test]
    fn lifted_set_is_half_turn_invariant() {
        let mut spec = DirectionSetSpec::from_isolated(&[0.3, 1.1]);
        spec.intervals.push((1.8, 2.2));
        spec.accumulations.push(Accumulation::new(0.9, AccumulationSide::Left, 0.5, 6));
        let set = spec.lift().unwrap();
        for c in set.components() {
            let mirrored = crate::trig::wrap_2pi(c.lo + PI);
            assert!(
                set.components()
                    .iter()
                    .any(|d| (d.lo - mirrored).abs() < 1e-12 || (d.lo - mirrored).abs() > 2.0 * PI - 1e-12),
                "missing mirror of {}",
                c.lo
            );
        }
    }

    #[test]
    fn accumulation_points_shrink_geometrically() {
        let acc = Accumulation::new(1.0, AccumulationSide::Left, 0.5, 12);
        let pts = acc.points();
        assert_eq!(pts.len(), 12);
        for w in pts.windows(2) {
            let near = 1.0 - w[1];
            let far = 1.0 - w[0];
            assert!((near / far - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn overlapping_components_rejected() {
        let mut spec = DirectionSetSpec::from_interval(0.2, 0.4);
        spec.isolated.push(0.3);
        assert_eq!(spec.lift().unwrap_err(), Error::OverlappingComponents);
    }

    #[test]
    fn empty_spec_rejected() {
        assert_eq!(
            DirectionSetSpec::default().lift().unwrap_err(),
            Error::EmptyComplement
        );
    }

    #[test]
    fn gaps_pair_up_with_components() {
        let set = DirectionSetSpec::from_isolated(&[0.0, PI / 3.0, 2.0 * PI / 3.0])
            .lift()
            .unwrap();
        let gaps = set.gaps();
        assert_eq!(gaps.len(), 6);
        for g in &gaps {
            assert!((g.width() - PI / 3.0).abs() < 1e-13);
        }
    }
}
