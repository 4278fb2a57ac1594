mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::*;
use proptest::prelude::*;
use quadlab_core::geodesic::{
    geodesic_between_sides, geodesic_oracle, truncated_internal_distance, validate_exclusion_delta, DeltaBound,
    ExclusionSpec, GeodesicError,
};
use quadlab_core::geom::{polyline_length, side_set_distance};
use quadlab_core::rectify::sample_polyline;
use quadlab_core::{Containment, MarkedQuadrilateral, SidePair};

fn check_path(q: &MarkedQuadrilateral, pair: SidePair) -> Result<(), TestCaseError> {
    let g = geodesic_between_sides(q, pair);
    prop_assert!((polyline_length(&g.path) - g.length).abs() <= 1e-12 * g.length.max(1.0));
    let (s1, s2) = pair.sides();
    let ends = [q.sides_at(g.endpoint_locations[0]), q.sides_at(g.endpoint_locations[1])];
    prop_assert!(ends[0].contains(&s1) && ends[1].contains(&s2));
    for p in &g.path[1..g.path.len().saturating_sub(1)] {
        prop_assert!(q.polygon().vertices().contains(p));
    }
    for p in sample_polyline(&g.path, g.length.max(1e-9) / 2000.0) {
        if q.contains_point(p) == Containment::Outside {
            prop_assert!(q.polygon().distance_to_boundary(p) <= q.eta(), "{:?} outside", p);
        }
    }
    Ok(())
}

#[test]
fn rectangle_lengths() {
    let q = rect(2.0, 1.0);
    assert_eq!(geodesic_between_sides(&q, SidePair::A).length, 1.0);
    assert_eq!(geodesic_between_sides(&q, SidePair::B).length, 2.0);
}

#[test]
fn u_polygon_path_bends_at_reflex_corners() {
    let g = geodesic_between_sides(&u_polygon(), SidePair::B);
    assert_eq!(g.length, 3.0);
    assert_eq!(g.path, pts(&[(2., 1.5), (2., 0.5), (1., 0.5), (1., 1.5)]));
    let o = geodesic_oracle(&u_polygon(), SidePair::B, 1.0 / 128.0).unwrap();
    assert!((o.smoothed_length - 3.0).abs() <= 0.01 * 3.0, "oracle {}", o.smoothed_length);
    assert!(o.length <= 3.0 * 1.02 + 4.0 / 128.0);
}

#[test]
fn l_polygon_lengths() {
    let q = l_polygon();
    assert_eq!(geodesic_between_sides(&q, SidePair::A).length, 2.0);
    assert_eq!(geodesic_between_sides(&q, SidePair::B).length, 1.0);
    let o = geodesic_oracle(&q, SidePair::A, 1.0 / 64.0).unwrap();
    assert!((o.smoothed_length - 2.0).abs() <= 0.02 * 2.0);
}

#[test]
fn rectangle_oracle() {
    let o = geodesic_oracle(&rect(2.0, 1.0), SidePair::A, 1.0 / 64.0).unwrap();
    assert!((o.smoothed_length - 1.0).abs() <= 0.02);
    assert!(matches!(geodesic_oracle(&rect(2.0, 1.0), SidePair::A, 0.0), Err(GeodesicError::InvalidStep)));
}

#[test]
fn exclusion_bounds_on_rectangle() {
    let q = rect(2.0, 1.0);
    assert!(validate_exclusion_delta(&q, 0.05).valid);
    let d = validate_exclusion_delta(&q, 0.11);
    assert!(!d.valid);
    assert!(d.violations.iter().any(|v| matches!(v, DeltaBound::SideDiameter(_) | DeltaBound::OppositeDistance(_))));
    assert!(!validate_exclusion_delta(&q, 0.1).valid);
    assert!(ExclusionSpec::new(&q, 0.1).is_err());
    let spec = ExclusionSpec::new(&q, 0.05).unwrap();
    assert_eq!(truncated_internal_distance(&q, SidePair::A, &spec).unwrap().length, 1.0);
    assert_eq!(truncated_internal_distance(&q, SidePair::B, &spec).unwrap().length, 2.0);
}

#[test]
fn staircase_endpoint_at_a_mark() {
    let q = quad(&[(0., 0.), (3., 0.), (3., 1.), (2., 1.), (2., 2.), (0., 2.)], [0, 1, 3, 5]);
    let g = geodesic_between_sides(&q, SidePair::A);
    assert_eq!(g.length, 1.0);
    assert!(g.endpoint_locations.iter().any(|l| q.marks().contains(l)));
    let delta = 0.5 * validate_exclusion_delta(&q, 1.0).delta_sup();
    let spec = ExclusionSpec::new(&q, delta).unwrap();
    let t = truncated_internal_distance(&q, SidePair::A, &spec).unwrap();
    assert!(t.length >= g.length && t.length <= g.length + 4.0 * PI * delta);
    for (i, loc) in t.endpoint_locations.iter().enumerate() {
        let p = q.polygon().point_at(*loc);
        for m in q.mark_points() {
            assert!(p.dist(m) >= delta * (1.0 - 1e-12), "endpoint {i} inside an exclusion disk");
        }
    }
}

#[test]
fn conjugate_swaps_on_rectangle() {
    let q = rect(2.0, 1.0).conjugate();
    assert_eq!(geodesic_between_sides(&q, SidePair::A).length, 2.0);
    assert_eq!(geodesic_between_sides(&q, SidePair::B).length, 1.0);
    let mut c = rect(2.0, 1.0);
    for _ in 0..4 {
        c = c.conjugate();
    }
    assert_eq!(c, rect(2.0, 1.0));
}

#[test]
fn slanted_sides() {
    let q = quad(&[(0., 0.), (3., 0.), (4., 3.), (1., 3.)], [0, 1, 2, 3]);
    assert_relative_eq!(geodesic_between_sides(&q, SidePair::A).length, 3.0, max_relative = 1e-15);
    assert_relative_eq!(geodesic_between_sides(&q, SidePair::B).length, 9.0 / 10f64.sqrt(), max_relative = 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn paths_are_valid(q in prop_oneof![histogram_strategy(8, 6), star_strategy()]) {
        check_path(&q, SidePair::A)?;
        check_path(&q, SidePair::B)?;
    }

    #[test]
    fn bounded_below_by_set_distance(q in prop_oneof![histogram_strategy(8, 6), star_strategy()]) {
        use quadlab_core::SideId;
        for pair in [SidePair::A, SidePair::B] {
            let (s1, s2) = pair.sides();
            let d = side_set_distance(&q.side_arc(s1), &q.side_arc(s2));
            prop_assert!(geodesic_between_sides(&q, pair).length >= d * (1.0 - 1e-12));
        }
        let _ = SideId::A1;
    }

    #[test]
    fn conjugate_relabels_exactly(q in prop_oneof![histogram_strategy(8, 6), star_strategy()]) {
        let c = q.conjugate();
        prop_assert_eq!(geodesic_between_sides(&c, SidePair::A).length, geodesic_between_sides(&q, SidePair::B).length);
        prop_assert_eq!(geodesic_between_sides(&c, SidePair::B).length, geodesic_between_sides(&q, SidePair::A).length);
    }

    #[test]
    fn truncation_costs_at_most_four_pi_delta(q in prop_oneof![histogram_strategy(8, 6), star_strategy()], f in 0.05f64..0.95) {
        let delta = f * validate_exclusion_delta(&q, 1.0).delta_sup();
        let spec = ExclusionSpec::new(&q, delta).unwrap();
        for pair in [SidePair::A, SidePair::B] {
            let s = geodesic_between_sides(&q, pair).length;
            let t = truncated_internal_distance(&q, pair, &spec).unwrap().length;
            prop_assert!(t >= s * (1.0 - 1e-12), "{} < {}", t, s);
            prop_assert!(t <= s + 4.0 * PI * delta + 1e-12 * s, "{} > {} + 4 pi {}", t, s, delta);
        }
    }

    #[test]
    fn lengths_scale(q in prop_oneof![histogram_strategy(8, 6), star_strategy()], k in -6i32..7) {
        let lambda = 2f64.powi(k);
        let s = q.scaled(lambda);
        for pair in [SidePair::A, SidePair::B] {
            prop_assert_eq!(geodesic_between_sides(&s, pair).length, lambda * geodesic_between_sides(&q, pair).length);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_sandwich(q in histogram_strategy(6, 5)) {
        let h = 1.0 / 8.0;
        for pair in [SidePair::A, SidePair::B] {
            let s = geodesic_between_sides(&q, pair).length;
            let o = geodesic_oracle(&q, pair, h).unwrap();
            prop_assert!(o.length >= s * (1.0 - 1e-12));
            prop_assert!(o.smoothed_length >= s * (1.0 - 1e-12));
            prop_assert!(o.length <= 1.083 * s + 4.0 * h, "{} vs {}", o.length, s);
        }
    }
}
