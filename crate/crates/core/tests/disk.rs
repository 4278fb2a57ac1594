mod common;

use common::*;
use proptest::prelude::*;
use quadlab_core::disk::{
    arc_frame_from_path, build_arc_frame, check_exits, construct_disk, construct_disk_traced, largest_inscribed_disk,
    split_disk, verify_theorem, ArcFrame, DiskError, Provenance, TheoremMode, TraceEvent,
};
use quadlab_core::geodesic::geodesic_between_sides;
use quadlab_core::geom::point_segment_distance;
use quadlab_core::{MarkedQuadrilateral, Point, SidePair, SimplePolygon};

/// Best node of a fine grid, with its own crossing-number containment and
/// segment distances.
fn grid_radius(poly: &SimplePolygon, n: usize) -> (f64, f64) {
    let v = poly.vertices();
    let inside = |p: Point| {
        let mut c = false;
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x) {
                c = !c;
            }
        }
        c
    };
    let dist = |p: Point| {
        (0..v.len())
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                let d = b - a;
                let t = ((p - a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
                p.dist(a + d * t)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let bb = poly.bbox();
    let h = bb.width().max(bb.height()) / n as f64;
    let mut best = 0.0f64;
    for i in 0..=n {
        for j in 0..=n {
            let p = Point::new(bb.min.x + i as f64 * h, bb.min.y + j as f64 * h);
            if inside(p) {
                best = best.max(dist(p));
            }
        }
    }
    (best, h)
}

fn ratio(q: &MarkedQuadrilateral) -> (f64, f64, f64) {
    let sa = geodesic_between_sides(q, SidePair::A).length;
    let sb = geodesic_between_sides(q, SidePair::B).length;
    (sa, sb, (sa / sb).max(sb / sa))
}

#[test]
fn inscribed_examples() {
    let d = largest_inscribed_disk(rect(2.0, 1.0).polygon());
    assert!((d.radius - 0.5).abs() < 1e-12 && (d.center.y - 0.5).abs() < 1e-12);
    assert!((0.5..=1.5).contains(&d.center.x));
    let s = largest_inscribed_disk(rect(1.0, 1.0).polygon());
    assert!((s.radius - 0.5).abs() < 1e-12 && s.center.dist(Point::new(0.5, 0.5)) < 1e-9);

    let l = l_polygon();
    let d = largest_inscribed_disk(l.polygon());
    let r = 2.0 - 2f64.sqrt();
    assert!((d.radius - r).abs() < 1e-12);
    assert!(d.center.dist(Point::new(r, r)) < 1e-9);
    assert!((d.center.x - r).abs() < 1e-9 && (d.center.y - r).abs() < 1e-9);
    assert!((d.center.dist(Point::new(1.0, 1.0)) - r).abs() < 1e-9);
    for (a, b) in l.polygon().edges() {
        assert!(point_segment_distance(d.center, a, b) >= r - 1e-9);
    }
    assert_eq!(d.provenance, Provenance::GlobalSearch);
}

#[test]
fn rectangle_frame() {
    let f = build_arc_frame(&rect(2.0, 1.0), 2.0).unwrap();
    assert!((f.r - 1.0 / 2000.0).abs() < 1e-18);
    assert!((f.big_r - 1.0 / 200.0).abs() < 1e-17);
    assert!((f.length - 1.0).abs() < 1e-6);
    assert!(f.path.iter().all(|p| (p.x - f.path[0].x).abs() < 1e-6));
    let (lo, hi) = f.further_window();
    assert!((hi - lo - 0.84).abs() < 1e-6, "{}", hi - lo);
    let (flo, fhi) = f.far_window();
    assert!(flo < lo && hi < fhi);
    assert!(f.epsilon < 1e-3 * f.r);
}

#[test]
fn endpoint_at_mark_is_nudged() {
    let q = quad(&[(0., 0.), (3., 0.), (3., 1.), (2., 1.), (2., 2.), (0., 2.)], [0, 1, 3, 5]);
    let g = geodesic_between_sides(&q, SidePair::A);
    assert!(g.endpoint_locations.iter().any(|l| q.marks().contains(l)));
    let f = build_arc_frame(&q, 2.0).unwrap();
    let delta = f.nudge.unwrap();
    assert!(f.length >= g.length && f.length <= g.length + 4.0 * std::f64::consts::PI * delta);
    for p in [f.path[0], *f.path.last().unwrap()] {
        for m in q.mark_points() {
            assert!(p.dist(m) >= delta * (1.0 - 1e-12));
        }
    }
}

#[test]
fn ratio_bound_violated() {
    assert!(matches!(build_arc_frame(&rect(2.0, 1.0), 1.5), Err(DiskError::RatioBoundViolated { .. })));
    assert!(matches!(construct_disk(&rect(2.0, 1.0), 1.9), Err(DiskError::RatioBoundViolated { .. })));
}

#[test]
fn exits_on_straight_arc_and_spiral_control() {
    let f = build_arc_frame(&rect(2.0, 1.0), 2.0).unwrap();
    let e = check_exits(&f, 0.5 * f.length);
    assert!(e.holds());
    // A tight spiral of radius far below R never leaves the disk.
    let r = 0.01;
    let path: Vec<Point> = (0..=2000)
        .map(|k| {
            let t = k as f64 * 0.05;
            Point::from_polar(0.2 * r * (1.0 + 0.01 * t), t)
        })
        .collect();
    let spiral = arc_frame_from_path(path, r, 0.0);
    let e = check_exits(&spiral, 0.5 * spiral.length);
    assert!(!e.holds());
}

#[test]
fn rectangle_split_is_vacuous() {
    let q = rect(2.0, 1.0);
    let f = arc_frame_from_path(vec![Point::new(1.0, 0.0), Point::new(1.0, 1.0)], 1.0 / 2000.0, q.eta());
    let s = split_disk(&q, &f, 0.5).unwrap();
    assert!(s.has_two_components());
    assert!(s.left.pieces.is_empty() && s.right.pieces.is_empty());
    assert!(s.left.is_good() && s.right.is_good());
    assert_eq!((s.w01, s.w02), (Point::new(1.0, 0.495), Point::new(1.0, 0.505)));
    assert!(s.s0 - s.s01 < 15.0 * f.big_r && s.s02 - s.s0 < 15.0 * f.big_r);

    // The computed arc runs along a wall, which then lies on one side only.
    let f = build_arc_frame(&q, 2.0).unwrap();
    let s = split_disk(&q, &f, 0.5 * f.length).unwrap();
    assert!(s.has_two_components());
    assert!(s.left.pieces.is_empty() || s.right.pieces.is_empty());
    assert!(s.good_region().is_good() && s.good_region().pieces.is_empty());
}

#[test]
fn rectangle_construction() {
    let (c, trace) = construct_disk_traced(&rect(2.0, 1.0), 2.0).unwrap();
    assert_eq!(c.provenance, Provenance::SevenArc);
    assert_eq!(c.radius, 1.0 / 2000.0);
    assert!(c.is_contained_in(rect(2.0, 1.0).polygon()));
    assert!(trace.contains(&TraceEvent::SevenCandidates([true; 7])));
}

#[test]
fn u_polygon_construction() {
    let q = u_polygon();
    let (sa, _, l) = ratio(&q);
    let f = build_arc_frame(&q, l).unwrap();
    let s = split_disk(&q, &f, 0.5 * f.length).unwrap();
    assert!(s.has_two_components() && s.good_region().is_good());
    let c = construct_disk(&q, l).unwrap();
    assert_eq!(c.provenance, Provenance::SevenArc);
    assert!(c.radius >= sa / (1000.0 * l));
    assert!(c.is_contained_in(q.polygon()));
}

#[test]
fn theorem_examples() {
    let rep = verify_theorem(&rect(2.0, 1.0), TheoremMode::FromL(2.0)).unwrap();
    assert!(rep.pass && rep.contained);
    assert!((rep.required_radius - 1e-3).abs() < 1e-15);
    assert!(rep.found.radius >= 5e-4);

    let rep = verify_theorem(&rect(1.0, 1.0), TheoremMode::FromK(1.0)).unwrap();
    let lt = rep.l_tilde.unwrap();
    assert!((lt - 425.97).abs() < 0.01);
    assert!((rep.l - 3.0 * lt).abs() < 1e-12);
    assert!((rep.delta - 1.0 / (4000.0 * rep.l)).abs() < 1e-22);
    assert!((rep.required_radius - 1.956e-7).abs() < 5e-11);
    assert!(rep.pass);
    assert!((largest_inscribed_disk(rect(1.0, 1.0).polygon()).radius - 0.5).abs() < 1e-12);
    let m = rep.modulus.unwrap();
    assert!((m - 1.0).abs() < 5e-3);
}

#[test]
fn modulus_out_of_range() {
    let q = rect(16.0, 1.0);
    assert!(matches!(verify_theorem(&q, TheoremMode::FromK(10.0)), Err(DiskError::ModulusOutOfRange { .. })));
}

fn check_arc(q: &MarkedQuadrilateral, f: &ArcFrame) -> Result<(), TestCaseError> {
    for s0 in ArcFrame::sample(f.far_window(), 10) {
        prop_assert!(check_exits(f, s0).holds(), "no exit at {}", s0);
    }
    for s0 in ArcFrame::sample(f.further_window(), 10) {
        let s = split_disk(q, f, s0).map_err(|e| TestCaseError::fail(format!("{e} at {s0}")))?;
        prop_assert!(s.has_two_components());
        prop_assert!(s.good_region().is_good());
        prop_assert!(s.s0 - s.s01 < 15.0 * f.big_r && s.s02 - s.s0 < 15.0 * f.big_r);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn disk_of_radius_r_exists(q in histogram_strategy(8, 6)) {
        let (sa, _, l) = ratio(&q);
        let (c, trace) = construct_disk_traced(&q, l).unwrap();
        prop_assert!(c.radius >= sa / (1000.0 * l));
        prop_assert!(c.is_contained_in(q.polygon()));
        if let Some(TraceEvent::SevenCandidates(v)) = trace.iter().find(|e| matches!(e, TraceEvent::SevenCandidates(_))) {
            prop_assert!(v.iter().any(|&b| b));
        }
        let best = largest_inscribed_disk(q.polygon());
        prop_assert!(best.radius >= c.radius);
        check_arc(&q, &build_arc_frame(&q, l).unwrap())?;
    }

    #[test]
    fn radii_scale_linearly(q in histogram_strategy(8, 6), e in -2i32..3) {
        let k = 2f64.powi(e);
        let s = q.scaled(k);
        let (_, _, l) = ratio(&q);
        let (a, b) = (construct_disk(&q, l).unwrap(), construct_disk(&s, l).unwrap());
        prop_assert!((b.radius - k * a.radius).abs() <= 1e-12 * b.radius);
        let (a, b) = (largest_inscribed_disk(q.polygon()), largest_inscribed_disk(s.polygon()));
        prop_assert!((b.radius - k * a.radius).abs() <= 1e-9 * b.radius);
    }

    #[test]
    fn global_search_matches_grid(q in prop_oneof![histogram_strategy(8, 6), star_strategy()]) {
        let d = largest_inscribed_disk(q.polygon());
        let (g, h) = grid_radius(q.polygon(), 400);
        prop_assert!(d.is_contained_in(q.polygon()));
        prop_assert!(d.radius >= g - 1e-12);
        prop_assert!(d.radius <= g + h);
        prop_assert!((d.radius - g).abs() <= 0.02 * d.radius);
    }
}
