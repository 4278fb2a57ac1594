//! Brute-force reference for geodesic lengths.
//!
//! Deliberately shares nothing with the visibility-graph solver: containment
//! and crossing tests here are plain floating point with a small tolerance.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::GeodesicError;
use crate::geom::{closest_on_segment, Point};
use crate::quad::{MarkedQuadrilateral, SidePair};

/// Result of a grid Dijkstra run.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    /// Length of the 8-neighbour grid path, including the exact connections
    /// to both sides. Always an upper bound for the true distance.
    pub length: f64,
    /// Shorter of the shortcut grid path and an any-angle search on the same
    /// grid; still an upper bound.
    pub smoothed_length: f64,
    pub path: Vec<Point>,
    pub grid_nodes: usize,
}

struct Field {
    edges: Vec<(Point, Point)>,
    tol: f64,
    cross_tol: f64,
}

impl Field {
    fn inside_or_on(&self, p: Point) -> bool {
        let mut inside = false;
        for &(a, b) in &self.edges {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside || self.edges.iter().any(|&(a, b)| seg_dist(p, a, b) <= self.tol)
    }

    /// Segment stays in the closed polygon, up to tolerance.
    fn segment_ok(&self, p: Point, q: Point) -> bool {
        let d = q - p;
        let len2 = d.norm_sq();
        let mut cuts = vec![0.0, 1.0];
        for &(a, b) in &self.edges {
            let e = b - a;
            let c1 = e.cross(p - a);
            let c2 = e.cross(q - a);
            let c3 = d.cross(a - p);
            let c4 = d.cross(b - p);
            let t = self.cross_tol;
            if ((c1 > t && c2 < -t) || (c1 < -t && c2 > t)) && ((c3 > t && c4 < -t) || (c3 < -t && c4 > t)) {
                return false;
            }
            if len2 > 0.0 && seg_dist(a, p, q) <= self.tol {
                let s = (a - p).dot(d) / len2;
                if s > 0.0 && s < 1.0 {
                    cuts.push(s);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2).all(|w| self.inside_or_on(p.lerp(q, 0.5 * (w[0] + w[1]))))
    }
}

fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    p.dist(closest_on_segment(p, a, b).0)
}

fn nearest_on(p: Point, side: &[Point]) -> (Point, f64) {
    let mut best = (side[0], p.dist(side[0]));
    for w in side.windows(2) {
        let (c, _) = closest_on_segment(p, w[0], w[1]);
        let d = p.dist(c);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

#[derive(PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

/// 8-neighbour Dijkstra on the grid of step `h` anchored at the bounding-box
/// corner. Grid nodes within `h` of a side connect to it by their exact
/// distance.
pub fn geodesic_oracle(q: &MarkedQuadrilateral, pair: SidePair, h: f64) -> Result<OracleResult, GeodesicError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(GeodesicError::InvalidStep);
    }
    let poly = q.polygon();
    let bb = poly.bbox();
    let diag = bb.diagonal();
    let field = Field { edges: poly.edges().collect(), tol: 1e-9 * diag, cross_tol: 1e-12 * diag * diag };
    let nx = libm::ceil(bb.width() / h) as usize + 1;
    let ny = libm::ceil(bb.height() / h) as usize + 1;
    let at = |i: usize, j: usize| Point::new(bb.min.x + i as f64 * h, bb.min.y + j as f64 * h);
    let valid: Vec<bool> = (0..nx * ny).map(|k| field.inside_or_on(at(k % nx, k / nx))).collect();

    let (s1, s2) = pair.sides();
    let src_arc = q.side_arc(s1);
    let dst_arc = q.side_arc(s2);
    let attach = |arc: &[Point]| -> Vec<Option<(Point, f64)>> {
        (0..nx * ny)
            .map(|k| {
                if !valid[k] {
                    return None;
                }
                let p = at(k % nx, k / nx);
                let (c, d) = nearest_on(p, arc);
                (d <= h && field.segment_ok(p, c)).then_some((c, d))
            })
            .collect()
    };
    let src = attach(&src_arc);
    let dst = attach(&dst_arc);
    if src.iter().all(Option::is_none) {
        return Err(GeodesicError::GridTooCoarse("source"));
    }
    if dst.iter().all(Option::is_none) {
        return Err(GeodesicError::GridTooCoarse("target"));
    }

    let mut dist = vec![f64::INFINITY; nx * ny];
    let mut pred = vec![usize::MAX; nx * ny];
    let mut heap = BinaryHeap::new();
    for (k, s) in src.iter().enumerate() {
        if let Some((_, d)) = s {
            dist[k] = *d;
            heap.push(Item(*d, k));
        }
    }
    let diag_step = h * core::f64::consts::SQRT_2;
    let mut best = (f64::INFINITY, usize::MAX);
    while let Some(Item(d, k)) = heap.pop() {
        if d != dist[k] {
            continue;
        }
        if d >= best.0 {
            break;
        }
        if let Some((_, t)) = dst[k] {
            if d + t < best.0 {
                best = (d + t, k);
            }
        }
        let (i, j) = ((k % nx) as isize, (k / nx) as isize);
        for (di, dj) in [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
            let (a, b) = (i + di, j + dj);
            if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                continue;
            }
            let m = b as usize * nx + a as usize;
            if !valid[m] {
                continue;
            }
            let w = if di != 0 && dj != 0 { diag_step } else { h };
            if d + w < dist[m] && field.segment_ok(at(i as usize, j as usize), at(a as usize, b as usize)) {
                dist[m] = d + w;
                pred[m] = k;
                heap.push(Item(d + w, m));
            }
        }
    }
    if best.1 == usize::MAX {
        return Err(GeodesicError::GridTooCoarse("reachable target"));
    }

    let mut chain = vec![best.1];
    while pred[*chain.last().unwrap()] != usize::MAX {
        chain.push(pred[*chain.last().unwrap()]);
    }
    chain.reverse();
    let pts: Vec<Point> = chain.iter().map(|&k| at(k % nx, k / nx)).collect();

    // Shortcut the grid path: dp[i] is the shortest admissible polyline
    // from the source side to pts[i] through a subsequence of the grid path.
    let k = pts.len();
    let mut dp = vec![f64::INFINITY; k];
    let mut back: Vec<Option<usize>> = vec![None; k];
    let starts: Vec<Option<(Point, f64)>> = pts
        .iter()
        .map(|&p| {
            let (c, d) = nearest_on(p, &src_arc);
            field.segment_ok(c, p).then_some((c, d))
        })
        .collect();
    for i in 0..k {
        if let Some((_, d)) = starts[i] {
            dp[i] = d;
        }
        for j in 0..i {
            if dp[j] + pts[j].dist(pts[i]) < dp[i] && field.segment_ok(pts[j], pts[i]) {
                dp[i] = dp[j] + pts[j].dist(pts[i]);
                back[i] = Some(j);
            }
        }
    }
    let mut fin = (f64::INFINITY, 0, Point::default());
    for i in 0..k {
        let (c, d) = nearest_on(pts[i], &dst_arc);
        if dp[i] + d < fin.0 && field.segment_ok(pts[i], c) {
            fin = (dp[i] + d, i, c);
        }
    }
    let mut path = vec![fin.2];
    let mut i = fin.1;
    path.push(pts[i]);
    while let Some(j) = back[i] {
        path.push(pts[j]);
        i = j;
    }
    path.push(starts[i].map(|s| s.0).unwrap_or(pts[i]));
    path.reverse();
    path.dedup();

    let grid = Grid { field: &field, nx, ny, at: &at, valid: &valid };
    let (smoothed_length, path) = match any_angle(&grid, &src, &dst, h) {
        Some((len, p)) if len < fin.0 => (len, p),
        _ => (fin.0.min(best.0), path),
    };
    Ok(OracleResult { length: best.0, smoothed_length, path, grid_nodes: nx * ny })
}

struct Grid<'a, F: Fn(usize, usize) -> Point> {
    field: &'a Field,
    nx: usize,
    ny: usize,
    at: &'a F,
    valid: &'a [bool],
}

/// Dijkstra in which a node may inherit its predecessor's parent when the
/// parent sees it directly, so paths bend only where the boundary forces them.
fn any_angle<F: Fn(usize, usize) -> Point>(
    g: &Grid<'_, F>,
    src: &[Option<(Point, f64)>],
    dst: &[Option<(Point, f64)>],
    h: f64,
) -> Option<(f64, Vec<Point>)> {
    const ROOT: usize = usize::MAX;
    let n = g.nx * g.ny;
    let pt = |k: usize| (g.at)(k % g.nx, k / g.nx);
    let mut dist = vec![f64::INFINITY; n];
    let mut par = vec![ROOT; n];
    let mut root = vec![Point::default(); n];
    let mut heap = BinaryHeap::new();
    for (k, s) in src.iter().enumerate() {
        if let Some((c, d)) = s {
            dist[k] = *d;
            root[k] = *c;
            heap.push(Item(*d, k));
        }
    }
    let parent = |par: &[usize], root: &[Point], dist: &[f64], k: usize| {
        if par[k] == ROOT {
            (root[k], 0.0)
        } else {
            (pt(par[k]), dist[par[k]])
        }
    };
    let diag_step = h * core::f64::consts::SQRT_2;
    // (length, last node, end point, whether the end point hangs off the last node's parent)
    let mut best: Option<(f64, usize, Point, bool)> = None;
    while let Some(Item(d, k)) = heap.pop() {
        if d != dist[k] {
            continue;
        }
        if best.is_some_and(|b| d >= b.0) {
            break;
        }
        let (pp, pd) = parent(&par, &root, &dist, k);
        if let Some((c, t)) = dst[k] {
            let direct = pd + pp.dist(c);
            let (len, skip) = if direct < d + t && g.field.segment_ok(pp, c) { (direct, true) } else { (d + t, false) };
            if best.is_none_or(|b| len < b.0) {
                best = Some((len, k, c, skip));
            }
        }
        let (i, j) = ((k % g.nx) as isize, (k / g.nx) as isize);
        for (di, dj) in [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
            let (a, b) = (i + di, j + dj);
            if a < 0 || b < 0 || a >= g.nx as isize || b >= g.ny as isize {
                continue;
            }
            let m = b as usize * g.nx + a as usize;
            if !g.valid[m] {
                continue;
            }
            let pm = pt(m);
            let through = pd + pp.dist(pm);
            if through < dist[m] && g.field.segment_ok(pp, pm) {
                dist[m] = through;
                par[m] = par[k];
                root[m] = root[k];
                heap.push(Item(through, m));
                continue;
            }
            let w = if di != 0 && dj != 0 { diag_step } else { h };
            if d + w < dist[m] && g.field.segment_ok(pt(k), pm) {
                dist[m] = d + w;
                par[m] = k;
                root[m] = root[k];
                heap.push(Item(d + w, m));
            }
        }
    }
    let (len, k, end, skip) = best?;
    let mut path = vec![end];
    let mut cur = if skip { par[k] } else { k };
    while cur != ROOT {
        path.push(pt(cur));
        cur = par[cur];
    }
    path.push(root[k]);
    path.reverse();
    path.dedup();
    Some((len, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::validate_polygon;

    #[test]
    fn rectangle_oracle() {
        let v = [(0., 0.), (2., 0.), (2., 1.), (0., 1.)].map(Point::from);
        let q = MarkedQuadrilateral::from_vertex_marks(validate_polygon(&v).unwrap(), [0, 1, 2, 3]).unwrap();
        let r = geodesic_oracle(&q, SidePair::A, 1.0 / 64.0).unwrap();
        assert!((r.length - 1.0).abs() < 0.02);
        assert!(r.smoothed_length <= r.length);
        assert!(geodesic_oracle(&q, SidePair::A, -1.0).is_err());
    }
}
