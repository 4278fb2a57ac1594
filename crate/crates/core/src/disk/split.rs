//! Splitting `D(w0, R)` along the arc and locating boundary pieces.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{ArcFrame, DiskError};
use crate::geodesic::disk_interval;
use crate::geom::{orient, point_segment_distance, segments_intersect, Orientation, Point};
use crate::polygon::{ring_contains, Containment};
use crate::quad::MarkedQuadrilateral;

/// Segments of the polygon approximating a full circle.
pub const POLYGON_SEGMENTS: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionSide {
    /// Left of the crosscut traversed from `w01` to `w02`.
    Left,
    Right,
}

/// Which half-chord the crosscut stays close to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfChord {
    /// `[w01, w0]`
    Start,
    /// `[w0, w02]`
    End,
}

/// One of the two parts of the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    /// Crosscut followed by a circumscribed polygonal arc.
    pub outline: Vec<Point>,
    /// Angle where the circular arc of this region starts, counter-clockwise.
    pub arc_start: f64,
    pub arc_sweep: f64,
    /// Boundary pieces of the polygon inside the open disk and this region.
    pub pieces: Vec<(Point, Point)>,
    /// All pieces lie near `w01` or `w02` and outside `D(w0, R - epsilon)`.
    pub confined: bool,
    /// A point just off `w0` on this side lies inside the polygon.
    pub interior: bool,
}

impl Region {
    pub fn is_good(&self) -> bool {
        self.confined && self.interior
    }

    pub fn area(&self) -> f64 {
        let n = self.outline.len();
        0.5 * (0..n).map(|i| self.outline[i].cross(self.outline[(i + 1) % n])).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitDisk {
    pub w0: Point,
    pub s0: f64,
    pub big_r: f64,
    pub epsilon: f64,
    pub w01: Point,
    pub s01: f64,
    pub w02: Point,
    pub s02: f64,
    /// The arc from `w01` to `w02`.
    pub crosscut: Vec<Point>,
    pub left: Region,
    pub right: Region,
    pub good: RegionSide,
    /// Half-chord hugged within `3 epsilon`, when the good region meets the boundary.
    pub hug: Option<HalfChord>,
}

impl SplitDisk {
    pub fn region(&self, side: RegionSide) -> &Region {
        match side {
            RegionSide::Left => &self.left,
            RegionSide::Right => &self.right,
        }
    }

    pub fn good_region(&self) -> &Region {
        self.region(self.good)
    }

    /// Both parts have positive area and together cover the disk.
    pub fn has_two_components(&self) -> bool {
        let (a, b) = (self.left.area(), self.right.area());
        let disk = PI * self.big_r * self.big_r;
        a > 0.0 && b > 0.0 && (a + b - disk).abs() <= 1e-4 * disk
    }
}

/// First point on segment `inner -> outer` at distance `r` from `c`,
/// given `|inner - c| < r <= |outer - c|`.
fn circle_exit(c: Point, inner: Point, outer: Point, r: f64) -> Point {
    let d = outer - inner;
    let f = inner - c;
    let qa = d.norm_sq();
    let qb = 2.0 * f.dot(d);
    let qc = f.norm_sq() - r * r;
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    let t = ((-qb + libm::sqrt(disc)) / (2.0 * qa)).clamp(0.0, 1.0);
    inner.lerp(outer, t)
}

fn arc_outline(crosscut: &[Point], c: Point, r: f64, start: f64, sweep: f64) -> Vec<Point> {
    let k = libm::ceil(POLYGON_SEGMENTS as f64 * sweep / (2.0 * PI)).max(1.0) as usize;
    let r_out = r / libm::cos(0.5 * sweep / k as f64);
    let mut out: Vec<Point> = crosscut.to_vec();
    for i in 0..=k {
        out.push(c + Point::from_polar(r_out, start + sweep * i as f64 / k as f64));
    }
    out
}

/// Splits `D(w0, R)` at arclength `s0` of the frame into the parts left and
/// right of the arc and classifies the boundary pieces inside.
pub fn split_disk(q: &MarkedQuadrilateral, frame: &ArcFrame, s0: f64) -> Result<SplitDisk, DiskError> {
    let w0 = frame.point_at(s0);
    let big_r = frame.big_r;
    let eps = frame.epsilon;
    let k0 = frame.segment_at(s0);

    // Walk backwards from w0 to the first exit.
    let mut cur = w0;
    let mut exit_back = None;
    for k in (0..=k0).rev() {
        let p = frame.path[k];
        if p.dist(w0) >= big_r {
            let x = circle_exit(w0, cur, p, big_r);
            let s = frame.vertex_arclength(k) + p.dist(x);
            exit_back = Some((x, s, k));
            break;
        }
        cur = p;
    }
    let mut cur = w0;
    let mut exit_fwd = None;
    for k in k0 + 1..frame.path.len() {
        let p = frame.path[k];
        if p.dist(w0) >= big_r {
            let x = circle_exit(w0, cur, p, big_r);
            let s = frame.vertex_arclength(k) - p.dist(x);
            exit_fwd = Some((x, s, k));
            break;
        }
        cur = p;
    }
    let ((w01, s01, kb), (w02, s02, kf)) = match (exit_back, exit_fwd) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(DiskError::DegenerateSplit),
    };
    let mut crosscut = alloc::vec![w01];
    crosscut.extend(frame.path[kb + 1..kf].iter().copied());
    crosscut.push(w02);
    crosscut.dedup();

    let a1 = (w01 - w0).angle();
    let a2 = (w02 - w0).angle();
    let mut left_sweep = (a1 - a2).rem_euclid(2.0 * PI);
    if left_sweep == 0.0 {
        left_sweep = 2.0 * PI;
    }
    let right_sweep = 2.0 * PI - left_sweep;
    let left_outline = arc_outline(&crosscut, w0, big_r, a2, left_sweep);
    let reversed: Vec<Point> = crosscut.iter().rev().copied().collect();
    let right_outline = arc_outline(&reversed, w0, big_r, a1, right_sweep);

    let tol = q.eta();
    let mut left_pieces = Vec::new();
    let mut right_pieces = Vec::new();
    let poly = q.polygon();
    for (a, b) in poly.edges() {
        let Some((r0, r1)) = disk_interval(a, b, w0, big_r) else { continue };
        let (t_in, t_out) = (r0.max(0.0), r1.min(1.0));
        if t_out <= t_in {
            continue;
        }
        let mut cuts = alloc::vec![t_in, t_out];
        let mut removed: Vec<(f64, f64)> = Vec::new();
        let d = b - a;
        for w in crosscut.windows(2) {
            let (c, e) = (w[0], w[1]);
            if orient(c, e, a) == Orientation::Collinear && orient(c, e, b) == Orientation::Collinear {
                let u = |p: Point| (p - a).dot(d) / d.norm_sq();
                let (u0, u1) = (u(c).min(u(e)), u(c).max(u(e)));
                removed.push((u0, u1));
                cuts.push(u0);
                cuts.push(u1);
            } else if segments_intersect(a, b, c, e) {
                let den = d.cross(e - c);
                if den != 0.0 {
                    cuts.push((c - a).cross(e - c) / den);
                } else {
                    for p in [c, e] {
                        cuts.push((p - a).dot(d) / d.norm_sq());
                    }
                }
            }
        }
        cuts.retain(|&t| t >= t_in && t <= t_out);
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let (u0, u1) = (w[0], w[1]);
            if (u1 - u0) * libm::sqrt(d.norm_sq()) <= tol {
                continue;
            }
            let um = 0.5 * (u0 + u1);
            if removed.iter().any(|&(r0, r1)| um >= r0 && um <= r1) {
                continue;
            }
            let (p0, p1) = (a.lerp(b, u0), a.lerp(b, u1));
            let mid = a.lerp(b, um);
            match ring_contains(&left_outline, mid) {
                Containment::Inside => left_pieces.push((p0, p1)),
                Containment::Outside => right_pieces.push((p0, p1)),
                Containment::Boundary => return Err(DiskError::ClassificationFailure),
            }
        }
    }

    let confined = |pieces: &[(Point, Point)]| {
        pieces.iter().all(|&(p0, p1)| {
            let far = point_segment_distance(w0, p0, p1) >= big_r - eps - tol;
            let near = |c: Point| p0.dist(c) <= 2.0 * eps + tol && p1.dist(c) <= 2.0 * eps + tol;
            far && (near(w01) || near(w02))
        })
    };
    let normal = interior_normal(frame, s0);
    let rho = big_r * 1e-3;
    let inside = |p: Point| poly.contains(p) == Containment::Inside;
    let left = Region {
        confined: confined(&left_pieces),
        interior: inside(w0 + normal * rho),
        outline: left_outline,
        arc_start: a2,
        arc_sweep: left_sweep,
        pieces: left_pieces,
    };
    let right = Region {
        confined: confined(&right_pieces),
        interior: inside(w0 - normal * rho),
        outline: right_outline,
        arc_start: a1,
        arc_sweep: right_sweep,
        pieces: right_pieces,
    };
    let good = match (left.is_good(), right.is_good()) {
        (true, true) => {
            if right.pieces.is_empty() && !left.pieces.is_empty() {
                RegionSide::Right
            } else {
                RegionSide::Left
            }
        }
        (true, false) => RegionSide::Left,
        (false, true) => RegionSide::Right,
        (false, false) => return Err(DiskError::ClassificationFailure),
    };
    let mut split = SplitDisk {
        w0,
        s0,
        big_r,
        epsilon: eps,
        w01,
        s01,
        w02,
        s02,
        crosscut,
        left,
        right,
        good,
        hug: None,
    };
    if !split.good_region().pieces.is_empty() {
        let limit = 3.0 * eps + tol;
        let hugs = |from: f64, to: f64| {
            let (p, q) = (frame.point_at(from), frame.point_at(to));
            frame.sub_path(from, to).iter().all(|&x| point_segment_distance(x, p, q) <= limit)
        };
        split.hug = if hugs(s01, s0) {
            Some(HalfChord::Start)
        } else if hugs(s0, s02) {
            Some(HalfChord::End)
        } else {
            None
        };
    }
    Ok(split)
}

/// Unit normal pointing to the left of the arc at arclength `s`.
fn interior_normal(frame: &ArcFrame, s: f64) -> Point {
    let k = frame.segment_at(s);
    let dir = (frame.path[k + 1] - frame.path[k]).normalized();
    let at_vertex = frame.vertex_arclength(k) == s && k > 0;
    let d = if at_vertex {
        let prev = (frame.path[k] - frame.path[k - 1]).normalized();
        let sum = prev + dir;
        if sum.norm() > 1e-12 {
            sum.normalized()
        } else {
            dir
        }
    } else {
        dir
    };
    d.perp()
}
