//! Shortest internal paths between opposite sides of a quadrilateral.
//!
//! Paths are computed exactly on a visibility graph whose nodes are the
//! polygon vertices and the endpoints of the admissible side pieces. Sources
//! and targets may also be reached at the perpendicular foot on an edge.

mod oracle;

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use oracle::{geodesic_oracle, OracleResult};

use crate::geom::{
    arc_diameter, on_segment, orient, segments_cross_properly, side_set_distance, Orientation, Point,
};
use crate::polygon::{BoundaryLocation, Containment, SimplePolygon};
use crate::quad::{BoundarySegment, MarkedQuadrilateral, SideId, SidePair};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeodesicError {
    #[error("exclusion radius {delta} violates {bound:?}")]
    InvalidDelta { delta: f64, bound: DeltaBound },
    #[error("no admissible endpoint remains on one of the sides")]
    NoAdmissibleEndpoints,
    #[error("grid too coarse: empty {0} node set")]
    GridTooCoarse(&'static str),
    #[error("grid step must be positive and finite")]
    InvalidStep,
}

/// A shortest path joining the two sides of a pair.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicResult {
    pub path: Vec<Point>,
    pub length: f64,
    pub endpoint_sides: (SideId, SideId),
    pub endpoint_locations: [BoundaryLocation; 2],
}

/// Which inequality an exclusion radius violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaBound {
    NonPositive,
    SideDiameter(SideId),
    OppositeDistance(SidePair),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaDiagnostics {
    pub delta: f64,
    pub valid: bool,
    /// Diameters of A1, B1, A2, B2.
    pub side_diameters: [f64; 4],
    /// Distances between the a-sides and between the b-sides.
    pub opposite_distances: [f64; 2],
    pub violations: Vec<DeltaBound>,
}

impl DeltaDiagnostics {
    /// Supremum of the valid radii (itself not valid).
    pub fn delta_sup(&self) -> f64 {
        let m = self.side_diameters.iter().chain(&self.opposite_distances).fold(f64::INFINITY, |a, &b| a.min(b));
        m / 10.0
    }
}

/// Checks `10 delta` against every side diameter and both opposite-side distances.
pub fn validate_exclusion_delta(q: &MarkedQuadrilateral, delta: f64) -> DeltaDiagnostics {
    let arcs = SideId::ALL.map(|s| q.side_arc(s));
    let side_diameters = [0, 1, 2, 3].map(|i| arc_diameter(&arcs[i]));
    let opposite_distances = [side_set_distance(&arcs[0], &arcs[2]), side_set_distance(&arcs[1], &arcs[3])];
    let mut violations = Vec::new();
    if !(delta > 0.0) {
        violations.push(DeltaBound::NonPositive);
    }
    for (i, s) in SideId::ALL.into_iter().enumerate() {
        if !(10.0 * delta < side_diameters[i]) {
            violations.push(DeltaBound::SideDiameter(s));
        }
    }
    for (i, p) in [SidePair::A, SidePair::B].into_iter().enumerate() {
        if !(10.0 * delta < opposite_distances[i]) {
            violations.push(DeltaBound::OppositeDistance(p));
        }
    }
    DeltaDiagnostics { delta, valid: violations.is_empty(), side_diameters, opposite_distances, violations }
}

/// A validated exclusion radius for the truncated distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExclusionSpec {
    delta: f64,
}

impl ExclusionSpec {
    pub fn new(q: &MarkedQuadrilateral, delta: f64) -> Result<Self, GeodesicError> {
        let d = validate_exclusion_delta(q, delta);
        match d.violations.first() {
            None => Ok(Self { delta }),
            Some(&bound) => Err(GeodesicError::InvalidDelta { delta, bound }),
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

pub fn geodesic_between_sides(q: &MarkedQuadrilateral, pair: SidePair) -> GeodesicResult {
    let (s1, s2) = pair.sides();
    let src = q.side_segments(s1);
    let dst = q.side_segments(s2);
    let route = shortest_route(q.polygon(), q.marks(), &src, &dst)
        .expect("a connected polygon always joins two boundary arcs");
    route.into_result((s1, s2))
}

/// Shortest path whose endpoints stay outside the open `delta`-disks around
/// the marks bounding each side.
pub fn truncated_internal_distance(
    q: &MarkedQuadrilateral,
    pair: SidePair,
    spec: &ExclusionSpec,
) -> Result<GeodesicResult, GeodesicError> {
    let d = validate_exclusion_delta(q, spec.delta);
    if let Some(&bound) = d.violations.first() {
        return Err(GeodesicError::InvalidDelta { delta: spec.delta, bound });
    }
    let (s1, s2) = pair.sides();
    let src = truncated_side(q, s1, spec.delta);
    let dst = truncated_side(q, s2, spec.delta);
    if src.is_empty() || dst.is_empty() {
        return Err(GeodesicError::NoAdmissibleEndpoints);
    }
    let route = shortest_route(q.polygon(), q.marks(), &src, &dst).ok_or(GeodesicError::NoAdmissibleEndpoints)?;
    Ok(route.into_result((s1, s2)))
}

/// Pieces of a side lying outside the open disks around its two marks.
pub fn truncated_side(q: &MarkedQuadrilateral, side: SideId, delta: f64) -> Vec<BoundarySegment> {
    let (i, j) = side.marks();
    let centres = [q.mark_point(i), q.mark_point(j)];
    let poly = q.polygon();
    let mut out = Vec::new();
    for seg in q.side_segments(side) {
        let mut pieces = vec![(seg.t0, seg.t1)];
        let (a, b) = poly.edge(seg.edge);
        for c in centres {
            let mut next = Vec::new();
            for (lo, hi) in pieces {
                match disk_interval(a, b, c, delta) {
                    None => next.push((lo, hi)),
                    Some((r0, r1)) => {
                        if r0 > lo {
                            next.push((lo, hi.min(r0)));
                        }
                        if r1 < hi {
                            next.push((lo.max(r1), hi));
                        }
                    }
                }
            }
            pieces = next;
        }
        for (lo, hi) in pieces {
            if hi > lo {
                out.push(BoundarySegment::new(poly, seg.edge, lo, hi));
            }
        }
    }
    out
}

/// Parameters where the line `a + t (b - a)` is strictly inside `D(c, r)`.
pub(crate) fn disk_interval(a: Point, b: Point, c: Point, r: f64) -> Option<(f64, f64)> {
    let d = b - a;
    let f = a - c;
    let qa = d.norm_sq();
    let qb = 2.0 * f.dot(d);
    let qc = f.norm_sq() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return None;
    }
    let s = libm::sqrt(disc);
    Some(((-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)))
}

#[derive(Clone, Debug)]
pub(crate) struct Route {
    pub path: Vec<Point>,
    pub length: f64,
    pub start: BoundaryLocation,
    pub end: BoundaryLocation,
}

impl Route {
    fn into_result(self, sides: (SideId, SideId)) -> GeodesicResult {
        GeodesicResult {
            path: self.path,
            length: self.length,
            endpoint_sides: sides,
            endpoint_locations: [self.start, self.end],
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    p: Point,
    loc: BoundaryLocation,
    hosts: [usize; 2],
    reflex: bool,
}

/// Visibility tests against one polygon with cheap bounding-box rejection.
pub(crate) struct Visibility<'a> {
    poly: &'a SimplePolygon,
}

impl<'a> Visibility<'a> {
    pub(crate) fn new(poly: &'a SimplePolygon) -> Self {
        Self { poly }
    }

    /// Whether the closed segment `pq` lies in the closed polygon. Edges in
    /// `hosts` carry an endpoint and are exempt from the crossing test.
    pub(crate) fn visible(&self, p: Point, hp: &[usize], q: Point, hq: &[usize]) -> bool {
        if p == q {
            return true;
        }
        let (lo_x, hi_x) = (p.x.min(q.x), p.x.max(q.x));
        let (lo_y, hi_y) = (p.y.min(q.y), p.y.max(q.y));
        let poly = self.poly;
        let mut contacts: Vec<(f64, Point, [usize; 2])> = Vec::new();
        let d = q - p;
        let dd = d.norm_sq();
        for i in 0..poly.len() {
            let (a, b) = poly.edge(i);
            if a.x.max(b.x) < lo_x || a.x.min(b.x) > hi_x || a.y.max(b.y) < lo_y || a.y.min(b.y) > hi_y {
                continue;
            }
            if !hp.contains(&i) && !hq.contains(&i) && segments_cross_properly(p, q, a, b) {
                return false;
            }
            if a != p && a != q && on_segment(a, p, q) {
                contacts.push(((a - p).dot(d) / dd, a, [poly.prev(i), i]));
            }
        }
        const NONE: usize = usize::MAX;
        let host = |h: &[usize]| [h.first().copied().unwrap_or(NONE), h.get(1).copied().unwrap_or(NONE)];
        contacts.push((0.0, p, host(hp)));
        contacts.push((1.0, q, host(hq)));
        contacts.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in contacts.windows(2) {
            let ((t0, p0, h0), (t1, p1, h1)) = (w[0], w[1]);
            if t1 <= t0 || p0 == p1 {
                continue;
            }
            // Pieces along an edge are boundary, whatever the rounded midpoint says.
            let shared = h0.iter().any(|&e| e != NONE && h1.contains(&e));
            let along_edge = shared || poly.edges().any(|(a, b)| on_segment(p0, a, b) && on_segment(p1, a, b));
            if !along_edge && poly.contains(p.lerp(q, 0.5 * (t0 + t1))) == Containment::Outside {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

fn member(poly: &SimplePolygon, loc: BoundaryLocation, segs: &[BoundarySegment]) -> bool {
    segs.iter().any(|s| {
        (s.edge == loc.edge && s.t0 <= loc.t && loc.t <= s.t1)
            || (loc.t == 0.0 && s.edge == poly.prev(loc.edge) && s.t1 == 1.0)
    })
}

/// Interior foot of the perpendicular from `p` onto a boundary piece.
fn foot(poly: &SimplePolygon, p: Point, seg: &BoundarySegment) -> Option<(Point, BoundaryLocation)> {
    let (a, b) = poly.edge(seg.edge);
    if orient(a, b, p) != Orientation::CounterClockwise {
        return None;
    }
    let d = b - a;
    let t = (p - a).dot(d) / d.norm_sq();
    if t > seg.t0 && t < seg.t1 {
        Some((a.lerp(b, t), BoundaryLocation::new(seg.edge, t)))
    } else {
        None
    }
}

/// Lexicographic comparison of candidate routes, treating lengths within
/// `tol` as equal.
fn better(len: f64, locs: (BoundaryLocation, BoundaryLocation), than: f64, than_locs: (BoundaryLocation, BoundaryLocation), tol: f64) -> bool {
    if len < than - tol {
        return true;
    }
    if len > than + tol {
        return false;
    }
    match locs.0.partial_cmp(&than_locs.0) {
        Some(Ordering::Less) => true,
        Some(Ordering::Equal) => locs.1 < than_locs.1 || (locs.1 == than_locs.1 && len < than),
        _ => false,
    }
}

/// Shortest path in `poly` from any point of `source` to any point of `target`.
pub(crate) fn shortest_route(
    poly: &SimplePolygon,
    extra: &[BoundaryLocation],
    source: &[BoundarySegment],
    target: &[BoundarySegment],
) -> Option<Route> {
    let n = poly.len();
    let mut nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            p: poly.vertex(i),
            loc: BoundaryLocation::vertex(i),
            hosts: [poly.prev(i), i],
            reflex: poly.is_reflex(i),
        })
        .collect();
    let mut locs: Vec<BoundaryLocation> = extra.to_vec();
    for s in source.iter().chain(target) {
        locs.push(BoundaryLocation::new(s.edge, s.t0));
        locs.push(BoundaryLocation::new(s.edge, s.t1));
    }
    let mut mids: Vec<BoundaryLocation> = locs
        .into_iter()
        .map(|l| crate::polygon::normalize_location(n, l.edge, l.t))
        .filter(|l| l.t > 0.0)
        .collect();
    mids.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mids.dedup();
    for loc in mids {
        nodes.push(Node { p: poly.point_at(loc), loc, hosts: [loc.edge, loc.edge], reflex: false });
    }

    let vis = Visibility::new(poly);
    let tol = 1e-12 * poly.bbox().diagonal();
    let m = nodes.len();
    let in_source: Vec<bool> = nodes.iter().map(|v| member(poly, v.loc, source)).collect();
    let in_target: Vec<bool> = nodes.iter().map(|v| member(poly, v.loc, target)).collect();

    let mut dist = vec![f64::INFINITY; m];
    let mut start: Vec<(Point, BoundaryLocation)> = nodes.iter().map(|v| (v.p, v.loc)).collect();
    let mut pred: Vec<Option<usize>> = vec![None; m];
    let mut heap = BinaryHeap::new();
    for (i, v) in nodes.iter().enumerate() {
        if in_source[i] {
            dist[i] = 0.0;
        } else {
            for seg in source {
                if let Some((f, floc)) = foot(poly, v.p, seg) {
                    let d = v.p.dist(f);
                    if better(d, (floc, floc), dist[i], (start[i].1, start[i].1), tol)
                        && vis.visible(f, &[seg.edge], v.p, &v.hosts)
                    {
                        dist[i] = d;
                        start[i] = (f, floc);
                    }
                }
            }
        }
        if dist[i].is_finite() {
            heap.push(Key(dist[i], i));
        }
    }

    let relax: Vec<usize> = (0..m).filter(|&i| (nodes[i].reflex || in_target[i]) && !in_source[i]).collect();
    let mut done = vec![false; m];
    while let Some(Key(d, u)) = heap.pop() {
        if done[u] || d != dist[u] {
            continue;
        }
        done[u] = true;
        if in_target[u] {
            continue;
        }
        for &v in &relax {
            if v == u || done[v] {
                continue;
            }
            let nd = d + nodes[u].p.dist(nodes[v].p);
            let su = start[u].1;
            if better(nd, (su, su), dist[v], (start[v].1, start[v].1), tol)
                && vis.visible(nodes[u].p, &nodes[u].hosts, nodes[v].p, &nodes[v].hosts)
            {
                dist[v] = nd;
                start[v] = start[u];
                pred[v] = Some(u);
                heap.push(Key(nd, v));
            }
        }
    }

    let mut best: Option<(f64, usize, Point, BoundaryLocation)> = None;
    let beats = |len: f64, u: usize, end: BoundaryLocation, best: &Option<(f64, usize, Point, BoundaryLocation)>| match best {
        None => true,
        Some((bl, bu, _, be)) => better(len, (start[u].1, end), *bl, (start[*bu].1, *be), tol),
    };
    for u in 0..m {
        if !dist[u].is_finite() {
            continue;
        }
        if in_target[u] {
            if beats(dist[u], u, nodes[u].loc, &best) {
                best = Some((dist[u], u, nodes[u].p, nodes[u].loc));
            }
            continue;
        }
        for seg in target {
            if let Some((f, floc)) = foot(poly, nodes[u].p, seg) {
                let len = dist[u] + nodes[u].p.dist(f);
                if beats(len, u, floc, &best) && vis.visible(nodes[u].p, &nodes[u].hosts, f, &[seg.edge]) {
                    best = Some((len, u, f, floc));
                }
            }
        }
    }
    let (length, last, end_pt, end_loc) = best?;
    let mut chain = vec![last];
    while let Some(p) = pred[*chain.last().unwrap()] {
        chain.push(p);
    }
    chain.reverse();
    let mut path = Vec::with_capacity(chain.len() + 2);
    let (start_pt, start_loc) = start[last];
    path.push(start_pt);
    for &i in &chain {
        if *path.last().unwrap() != nodes[i].p {
            path.push(nodes[i].p);
        }
    }
    if *path.last().unwrap() != end_pt {
        path.push(end_pt);
    }
    if path.len() == 1 {
        path.push(end_pt);
    }
    Some(Route { path, length, start: start_loc, end: end_loc })
}
