//! Property-based invariants of the trigonometric layer and the vanishing
//! construction.

use std::f64::consts::PI;

use billiard_core::direction_set::{Accumulation, AccumulationSide, DirectionSetSpec};
use billiard_core::trig::TrigPoly;
use billiard_core::vanishing::{build_g, GVariant};
use num_complex::Complex;
use proptest::prelude::*;

fn arb_poly(max_degree: usize) -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((-0.5f64..0.5, -0.5f64..0.5), 1..=max_degree + 1).prop_map(|pairs| {
        let mut half: Vec<Complex<f64>> =
            pairs.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
        half[0].im = 0.0;
        TrigPoly::from_half_spectrum(half).unwrap()
    })
}

/// Polynomials satisfying the closure condition alpha_1 = 0.
fn arb_closed_poly(max_degree: usize) -> impl Strategy<Value = TrigPoly> {
    arb_poly(max_degree).prop_map(|p| {
        let mut half = p.half_spectrum().to_vec();
        if half.len() > 1 {
            half[1] = Complex::new(0.0, 0.0);
        }
        TrigPoly::from_half_spectrum(half).unwrap()
    })
}

proptest! {
    #[test]
    fn eval_is_two_pi_periodic(p in arb_poly(8), t in -10.0f64..10.0) {
        prop_assert!((p.eval(t) - p.eval(t + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn closed_polys_integrate_to_zero_over_a_period(p in arb_closed_poly(8)) {
        let end = p.path_integral(2.0 * PI).unwrap();
        prop_assert!(end.norm() < 1e-12, "closure defect {}", end.norm());
    }

    #[test]
    fn projection_onto_v_is_idempotent(p in arb_poly(10)) {
        let once = p.project_v();
        let twice = once.project_v();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn members_of_v_are_odd_symmetric(p in arb_poly(10), t in 0.0f64..(2.0 * PI)) {
        let v = p.project_v();
        prop_assert!((v.eval(t) + v.eval(t + PI)).abs() < 1e-12);
    }

    #[test]
    fn built_g_is_odd_symmetric_for_random_point_specs(
        points in prop::collection::vec(0.0f64..PI, 1..6),
        t in 0.0f64..(2.0 * PI),
    ) {
        // keep points separated so the spec validates
        let mut pts = points;
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-2);
        if pts.len() > 1 && (pts[0] + PI - pts[pts.len() - 1]).abs() < 1e-2 {
            pts.pop();
        }
        let spec = DirectionSetSpec::from_isolated(&pts);
        // even pair counts are legitimately rejected for the transversal
        // variant; the flat variant must always work
        if let Ok(g) = build_g(&spec, GVariant::Transversal) {
            prop_assert!((g.value(t) + g.value(t + PI)).abs() < 1e-12);
        }
        let flat = build_g(&spec, GVariant::Flat).unwrap();
        prop_assert!((flat.value(t) + flat.value(t + PI)).abs() < 1e-12);
    }

    #[test]
    fn lifted_sets_are_half_turn_invariant(
        target in 0.2f64..2.8,
        ratio in 0.3f64..0.7,
        count in 2usize..8,
        probe in 0.0f64..(2.0 * PI),
    ) {
        let spec = DirectionSetSpec {
            accumulations: vec![Accumulation { target, side: AccumulationSide::Left, ratio, count, offset: 0.15 }],
            ..Default::default()
        };
        if let Ok(set) = spec.lift() {
            prop_assert!(
                (set.distance(probe) - set.distance(probe + PI)).abs() < 1e-9,
                "distance field must be half-turn symmetric"
            );
        }
    }
}
