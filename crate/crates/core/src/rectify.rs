//! Rectilinear inner approximation of a polygonal quadrilateral on a square grid.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::cells::{boundary_cycle, component, Cell};
use crate::disk::largest_inscribed_disk;
use crate::geodesic::geodesic_between_sides;
use crate::geom::{orient, point_polyline_distance, Orientation, Point};
use crate::polygon::{validate_polygon, Containment, SimplePolygon};
use crate::quad::{mark_quadrilateral, MarkedQuadrilateral, SideId, SidePair};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RectifyError {
    #[error("grid too coarse: {0}")]
    GridTooCoarse(&'static str),
    #[error("tolerance must lie in (0, 1/2], got {0}")]
    InvalidTau(f64),
    #[error("grid side must be positive and finite")]
    InvalidSide,
    #[error("no grid met the tolerance after {halvings} halvings")]
    IterationCap { halvings: u32 },
}

/// Squares `[ox + i s, ox + (i + 1) s] x [oy + j s, oy + (j + 1) s]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub s: f64,
    pub origin: Point,
}

impl GridSpec {
    pub fn corner(&self, i: i64, j: i64) -> Point {
        Point::new(self.origin.x + i as f64 * self.s, self.origin.y + j as f64 * self.s)
    }

    pub fn cell_of(&self, p: Point) -> Cell {
        (
            libm::floor((p.x - self.origin.x) / self.s) as i64,
            libm::floor((p.y - self.origin.y) / self.s) as i64,
        )
    }
}

/// Result of a successful approximation.
#[derive(Clone, Debug, PartialEq)]
pub struct RectifiedQuad {
    pub quad: MarkedQuadrilateral,
    pub grid: GridSpec,
    pub covered_cells: usize,
    pub s_a_original: f64,
    pub s_b_original: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub deviation_a: f64,
    pub deviation_b: f64,
    /// Largest deviation relative to `min(s_a, s_b)` of the original.
    pub achieved_tau: f64,
}

impl RectifiedQuad {
    /// Ratio class `(1 + tau) / (1 - tau)` times the original ratio.
    pub fn ratio_class(&self, tau: f64) -> f64 {
        let r = self.s_a_original / self.s_b_original;
        (1.0 + tau) / (1.0 - tau) * r.max(1.0 / r)
    }
}

fn box_touches_segment(a: Point, b: Point, lo: Point, hi: Point) -> bool {
    if a.x.max(b.x) < lo.x || a.x.min(b.x) > hi.x || a.y.max(b.y) < lo.y || a.y.min(b.y) > hi.y {
        return false;
    }
    let corners = [lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)];
    let o: Vec<Orientation> = corners.iter().map(|&c| orient(a, b, c)).collect();
    !(o.iter().all(|&x| x == Orientation::CounterClockwise) || o.iter().all(|&x| x == Orientation::Clockwise))
}

fn segment_meets_open_box(a: Point, b: Point, lo: Point, hi: Point) -> bool {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-d.x, a.x - lo.x), (d.x, hi.x - a.x), (-d.y, a.y - lo.y), (d.y, hi.y - a.y)] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t1 <= t0 {
        return false;
    }
    let m = a.lerp(b, 0.5 * (t0 + t1));
    m.x > lo.x && m.x < hi.x && m.y > lo.y && m.y < hi.y
}

/// Cells whose closed square meets the boundary and whose open square
/// meets the polygon.
pub fn grid_cover(poly: &SimplePolygon, spec: &GridSpec) -> BTreeSet<Cell> {
    let mut touching: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (e, (a, b)) in poly.edges().enumerate() {
        let lo = spec.cell_of(Point::new(a.x.min(b.x), a.y.min(b.y)));
        let hi = spec.cell_of(Point::new(a.x.max(b.x), a.y.max(b.y)));
        for i in lo.0 - 1..=hi.0 + 1 {
            for j in lo.1 - 1..=hi.1 + 1 {
                if box_touches_segment(a, b, spec.corner(i, j), spec.corner(i + 1, j + 1)) {
                    touching.entry((i, j)).or_default().push(e);
                }
            }
        }
    }
    touching
        .into_iter()
        .filter(|((i, j), edges)| {
            let (lo, hi) = (spec.corner(*i, *j), spec.corner(i + 1, j + 1));
            edges.iter().any(|&e| {
                let (a, b) = poly.edge(e);
                segment_meets_open_box(a, b, lo, hi)
            }) || poly.contains(lo.lerp(hi, 0.5)) == Containment::Inside
        })
        .map(|(c, _)| c)
        .collect()
}

/// Builds the approximation on one grid.
pub fn rectify(q: &MarkedQuadrilateral, spec: &GridSpec) -> Result<RectifiedQuad, RectifyError> {
    if !(spec.s > 0.0 && spec.s.is_finite()) {
        return Err(RectifyError::InvalidSide);
    }
    let pole = largest_inscribed_disk(q.polygon()).center;
    let sa = geodesic_between_sides(q, SidePair::A).length;
    let sb = geodesic_between_sides(q, SidePair::B).length;
    rectify_with(q, spec, pole, sa, sb)
}

fn rectify_with(
    q: &MarkedQuadrilateral,
    spec: &GridSpec,
    pole: Point,
    sa: f64,
    sb: f64,
) -> Result<RectifiedQuad, RectifyError> {
    let poly = q.polygon();
    let covered = grid_cover(poly, spec);
    let seed = spec.cell_of(pole);
    if covered.contains(&seed) || poly.contains(spec.corner(seed.0, seed.1).lerp(spec.corner(seed.0 + 1, seed.1 + 1), 0.5)) != Containment::Inside {
        return Err(RectifyError::GridTooCoarse("pole cell touches the boundary"));
    }
    let bb = poly.bbox();
    let lo = spec.cell_of(bb.min);
    let hi = spec.cell_of(bb.max);
    let cells = component(seed, |c| !covered.contains(&c), (lo.0 - 2, lo.1 - 2), (hi.0 + 2, hi.1 + 2))
        .ok_or(RectifyError::GridTooCoarse("interior component is unbounded"))?;
    let cycle = boundary_cycle(&cells).map_err(|_| RectifyError::GridTooCoarse("interior component is pinched"))?;
    let pts: Vec<Point> = cycle.iter().map(|&(i, j)| spec.corner(i, j)).collect();
    let tau_poly = validate_polygon(&pts).map_err(|_| RectifyError::GridTooCoarse("extracted boundary is not simple"))?;

    let marks = q.mark_points().map(|v| tau_poly.nearest_location(v).0);
    let tq = mark_quadrilateral(tau_poly, marks).map_err(|_| RectifyError::GridTooCoarse("transferred marks are out of order"))?;

    let delta_check = 10.0 * spec.s;
    let allowed = 3.0 * spec.s + 2.0 * delta_check;
    let originals = q.mark_points();
    for side in SideId::ALL {
        let target = q.side_arc(side);
        for p in sample_polyline(&tq.side_arc(side), 0.5 * spec.s) {
            if originals.iter().any(|v| v.dist(p) < 2.0 * delta_check) {
                continue;
            }
            if point_polyline_distance(p, &target) > allowed {
                return Err(RectifyError::GridTooCoarse("sides do not correspond"));
            }
        }
    }
    let boundary: Vec<Point> = tq.polygon().vertices().iter().copied().chain([tq.polygon().vertex(0)]).collect();
    if sample_polyline(&boundary, 0.25 * spec.s).into_iter().any(|p| poly.contains(p) == Containment::Outside) {
        return Err(RectifyError::GridTooCoarse("approximation leaves the polygon"));
    }

    let ta = geodesic_between_sides(&tq, SidePair::A).length;
    let tb = geodesic_between_sides(&tq, SidePair::B).length;
    let (da, db) = ((ta - sa).abs(), (tb - sb).abs());
    Ok(RectifiedQuad {
        quad: tq,
        grid: *spec,
        covered_cells: covered.len(),
        s_a_original: sa,
        s_b_original: sb,
        s_a: ta,
        s_b: tb,
        deviation_a: da,
        deviation_b: db,
        achieved_tau: da.max(db) / sa.min(sb),
    })
}

/// Points along a polyline at spacing at most `step`, including vertices.
pub fn sample_polyline(path: &[Point], step: f64) -> Vec<Point> {
    let mut out = Vec::new();
    if let Some(&p) = path.first() {
        out.push(p);
    }
    for w in path.windows(2) {
        let k = libm::ceil(w[0].dist(w[1]) / step).max(1.0) as usize;
        for i in 1..=k {
            out.push(w[0].lerp(w[1], i as f64 / k as f64));
        }
    }
    out
}

/// Number of halvings tried before giving up.
pub const MAX_HALVINGS: u32 = 20;

/// Halves the grid side, starting from an eighth of the inscribed radius,
/// until both internal distances deviate by at most `tau * min(s_a, s_b)`.
pub fn rectify_to_tolerance(q: &MarkedQuadrilateral, tau: f64) -> Result<RectifiedQuad, RectifyError> {
    if !(tau > 0.0 && tau <= 0.5) {
        return Err(RectifyError::InvalidTau(tau));
    }
    let disk = largest_inscribed_disk(q.polygon());
    let sa = geodesic_between_sides(q, SidePair::A).length;
    let sb = geodesic_between_sides(q, SidePair::B).length;
    let bound = tau * sa.min(sb);
    let min = q.polygon().bbox().min;
    let mut s = disk.radius / 8.0;
    for _ in 0..=MAX_HALVINGS {
        let base = min + Point::new(0.5 * s, 0.5 * s);
        for origin in [base, base + Point::new(s / 3.0, s / 3.0)] {
            if let Ok(r) = rectify_with(q, &GridSpec { s, origin }, disk.center, sa, sb) {
                if r.deviation_a <= bound && r.deviation_b <= bound {
                    return Ok(r);
                }
                break;
            }
        }
        s *= 0.5;
    }
    Err(RectifyError::IterationCap { halvings: MAX_HALVINGS })
}
