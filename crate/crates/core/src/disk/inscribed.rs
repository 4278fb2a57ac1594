//! Largest disk inside a polygon.

use alloc::vec::Vec;

use super::{DiskCandidate, Provenance};
use crate::geom::Point;
use crate::polygon::{Containment, SimplePolygon};

fn score(poly: &SimplePolygon, p: Point) -> f64 {
    match poly.contains(p) {
        Containment::Inside => poly.distance_to_boundary(p),
        Containment::Boundary => 0.0,
        Containment::Outside => -poly.distance_to_boundary(p),
    }
}

/// Maximizes the distance to the boundary over the polygon.
///
/// Grid seeding and pattern-search polish locate the optimum; the answer is
/// then refined by solving for points equidistant from three nearby sites
/// (edge lines or vertices).
pub fn largest_inscribed_disk(poly: &SimplePolygon) -> DiskCandidate {
    let bb = poly.bbox();
    let step = bb.width().max(bb.height()) / 256.0;
    let nx = libm::ceil(bb.width() / step) as usize;
    let ny = libm::ceil(bb.height() / step) as usize;
    let mut seeds: Vec<(f64, Point)> = Vec::new();
    for j in 0..ny.max(1) {
        for i in 0..nx.max(1) {
            let p = Point::new(bb.min.x + (i as f64 + 0.5) * step, bb.min.y + (j as f64 + 0.5) * step);
            if poly.contains(p) == Containment::Inside {
                seeds.push((poly.distance_to_boundary(p), p));
            }
        }
    }
    if seeds.is_empty() {
        // Thinner than the seeding grid: fall back to edge midpoints nudged inward.
        for (a, b) in poly.edges() {
            let d = b - a;
            let p = a.lerp(b, 0.5) + d.perp().normalized() * (step * 1e-3);
            seeds.push((score(poly, p), p));
        }
    }
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
    seeds.truncate(8);

    let mut best = (f64::NEG_INFINITY, Point::default());
    for &(_, s) in &seeds {
        let (v, p) = polish(poly, s, step);
        if v > best.0 {
            best = (v, p);
        }
    }
    while let Some((v, p)) = enumerate_sites(poly, best.1) {
        if v <= best.0 {
            break;
        }
        best = (v, p);
    }
    DiskCandidate { center: best.1, radius: best.0.max(0.0), provenance: Provenance::GlobalSearch }
}

fn polish(poly: &SimplePolygon, start: Point, step: f64) -> (f64, Point) {
    let mut p = start;
    let mut v = score(poly, p);
    let mut s = step;
    let floor = 1e-13 * poly.bbox().diagonal();
    let dirs = [(1., 0.), (-1., 0.), (0., 1.), (0., -1.), (1., 1.), (1., -1.), (-1., 1.), (-1., -1.)];
    while s > floor {
        let mut moved = false;
        for (dx, dy) in dirs {
            let c = Point::new(p.x + dx * s, p.y + dy * s);
            let cv = score(poly, c);
            if cv > v {
                p = c;
                v = cv;
                moved = true;
                break;
            }
        }
        if !moved {
            s *= 0.5;
        }
    }
    (v, p)
}

#[derive(Clone, Copy)]
enum Site {
    /// Line through `a` with unit inward normal `n`.
    Line { a: Point, n: Point },
    Vertex(Point),
}

/// Points equidistant from three of the sites nearest to `c`.
fn enumerate_sites(poly: &SimplePolygon, c: Point) -> Option<(f64, Point)> {
    let mut lines: Vec<(f64, Site)> = Vec::new();
    for (a, b) in poly.edges() {
        let d = crate::geom::point_segment_distance(c, a, b);
        lines.push((d, Site::Line { a, n: (b - a).perp().normalized() }));
    }
    let mut verts: Vec<(f64, Site)> = Vec::new();
    for (i, &v) in poly.vertices().iter().enumerate() {
        if poly.is_reflex(i) {
            verts.push((v.dist(c), Site::Vertex(v)));
        }
    }
    lines.sort_by(|a, b| a.0.total_cmp(&b.0));
    verts.sort_by(|a, b| a.0.total_cmp(&b.0));
    lines.truncate(12);
    verts.truncate(8);
    let sites: Vec<Site> = lines.into_iter().chain(verts).map(|s| s.1).collect();
    let mut best: Option<(f64, Point)> = None;
    let k = sites.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                for p in equidistant(sites[i], sites[j], sites[l]) {
                    if !p.is_finite() || poly.contains(p) != Containment::Inside {
                        continue;
                    }
                    let v = poly.distance_to_boundary(p);
                    if best.is_none_or(|b| v > b.0) {
                        best = Some((v, p));
                    }
                }
            }
        }
    }
    best
}

fn equidistant(s1: Site, s2: Site, s3: Site) -> Vec<Point> {
    use Site::*;
    let mut lines = Vec::new();
    let mut verts = Vec::new();
    for s in [s1, s2, s3] {
        match s {
            Line { a, n } => lines.push((a, n)),
            Vertex(v) => verts.push(v),
        }
    }
    match (lines.len(), verts.len()) {
        (3, 0) => {
            // n_i . p - r = n_i . a_i
            let m: Vec<[f64; 4]> = lines.iter().map(|&(a, n)| [n.x, n.y, -1.0, n.dot(a)]).collect();
            solve3(&m).into_iter().collect()
        }
        (2, 1) => {
            let ((a1, n1), (a2, n2)) = (lines[0], lines[1]);
            let m = n1 - n2;
            if m.norm() < 1e-12 {
                return Vec::new();
            }
            on_line_at_distance(m, n1.dot(a1) - n2.dot(a2), n1, n1.dot(a1), verts[0])
        }
        (1, 2) => {
            let (a, n) = lines[0];
            let (w1, w2) = (verts[0], verts[1]);
            let m = w2 - w1;
            on_line_at_distance(m, 0.5 * (w2.norm_sq() - w1.norm_sq()), n, n.dot(a), w1)
        }
        (0, 3) => circumcenter(verts[0], verts[1], verts[2]).into_iter().collect(),
        _ => Vec::new(),
    }
}

/// Points `p` with `m . p = k` and `|p - w| = n . p - c`.
fn on_line_at_distance(m: Point, k: f64, n: Point, c: f64, w: Point) -> Vec<Point> {
    let mm = m.norm_sq();
    let p0 = m * (k / mm);
    let dir = m.perp() * (1.0 / libm::sqrt(mm));
    let alpha = n.dot(p0) - c;
    let beta = n.dot(dir);
    let f = p0 - w;
    let qa = 1.0 - beta * beta;
    let qb = 2.0 * (dir.dot(f) - alpha * beta);
    let qc = f.norm_sq() - alpha * alpha;
    let mut ts = Vec::new();
    if qa.abs() < 1e-14 {
        if qb.abs() > 1e-14 {
            ts.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let s = libm::sqrt(disc);
            ts.push((-qb - s) / (2.0 * qa));
            ts.push((-qb + s) / (2.0 * qa));
        }
    }
    ts.into_iter().filter(|t| alpha + beta * t > 0.0).map(|t| p0 + dir * t).collect()
}

fn solve3(m: &[[f64; 4]]) -> Option<Point> {
    let det = |c: [usize; 3]| {
        m[0][c[0]] * (m[1][c[1]] * m[2][c[2]] - m[1][c[2]] * m[2][c[1]])
            - m[0][c[1]] * (m[1][c[0]] * m[2][c[2]] - m[1][c[2]] * m[2][c[0]])
            + m[0][c[2]] * (m[1][c[0]] * m[2][c[1]] - m[1][c[1]] * m[2][c[0]])
    };
    let d = det([0, 1, 2]);
    if d.abs() < 1e-12 {
        return None;
    }
    Some(Point::new(det([3, 1, 2]) / d, det([0, 3, 2]) / d))
}

fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let (b, c) = (b - a, c - a);
    let d = 2.0 * b.cross(c);
    if d.abs() < 1e-14 {
        return None;
    }
    let ux = (c.y * b.norm_sq() - b.y * c.norm_sq()) / d;
    let uy = (b.x * c.norm_sq() - c.x * b.norm_sq()) / d;
    Some(a + Point::new(ux, uy))
}

/// Brute-force reference: best interior node of a square grid of step `h`.
pub fn inscribed_radius_oracle(poly: &SimplePolygon, h: f64) -> f64 {
    let bb = poly.bbox();
    let nx = libm::ceil(bb.width() / h) as usize;
    let ny = libm::ceil(bb.height() / h) as usize;
    let mut best = 0.0f64;
    for j in 0..=ny {
        for i in 0..=nx {
            let p = Point::new(bb.min.x + i as f64 * h, bb.min.y + j as f64 * h);
            if poly.contains(p) == Containment::Inside {
                best = best.max(poly.distance_to_boundary(p));
            }
        }
    }
    best
}
