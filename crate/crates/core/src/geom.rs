//! Planar points and sign-exact predicates.

use core::ops::{Add, Mul, Neg, Sub};

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise rotation by a right angle.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn from_polar(r: f64, angle: f64) -> Point {
        Point::new(r * libm::cos(angle), r * libm::sin(angle))
    }

    pub fn angle(self) -> f64 {
        libm::atan2(self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

/// Sign of the determinant `(b - a) x (c - a)`, exact for all finite inputs.
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    let d = robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    );
    if d > 0.0 {
        Orientation::CounterClockwise
    } else if d < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// Whether `p` lies on the closed segment `ab`. Exact.
pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    orient(a, b, p) == Orientation::Collinear && in_box(p, a, b)
}

fn in_box(p: Point, a: Point, b: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Whether the open segments cross at a single point interior to both.
pub fn segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    use Orientation::*;
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear && o1 != o2 && o3 != o4
}

/// Whether the closed segments share at least one point. Exact.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    use Orientation::*;
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        return true;
    }
    (o1 == Collinear && in_box(c, a, b))
        || (o2 == Collinear && in_box(d, a, b))
        || (o3 == Collinear && in_box(a, c, d))
        || (o4 == Collinear && in_box(b, c, d))
}

/// Closest point of segment `ab` to `p`, with its parameter in `[0, 1]`.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> (Point, f64) {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return (a, 0.0);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    let q = if t == 0.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        a.lerp(b, t)
    };
    (q, t)
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    p.dist(closest_on_segment(p, a, b).0)
}

pub fn segment_segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    pub fn of(points: &[Point]) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }
}

/// Length of a polyline.
pub fn polyline_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Largest distance between two points of a polyline.
///
/// The farthest pair of a union of segments is always attained at vertices,
/// so the maximum over vertex pairs is exact.
pub fn arc_diameter(path: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in path.iter().enumerate() {
        for q in &path[i + 1..] {
            best = best.max(p.dist(*q));
        }
    }
    best
}

/// Euclidean distance between two polylines.
pub fn side_set_distance(p1: &[Point], p2: &[Point]) -> f64 {
    let segs = |p: &[Point]| -> alloc::vec::Vec<(Point, Point)> {
        if p.len() == 1 {
            alloc::vec![(p[0], p[0])]
        } else {
            p.windows(2).map(|w| (w[0], w[1])).collect()
        }
    };
    let s1 = segs(p1);
    let s2 = segs(p2);
    let mut best = f64::INFINITY;
    for &(a, b) in &s1 {
        for &(c, d) in &s2 {
            best = best.min(segment_segment_distance(a, b, c, d));
        }
    }
    best
}

/// Distance from `p` to a polyline.
pub fn point_polyline_distance(p: Point, path: &[Point]) -> f64 {
    if path.len() == 1 {
        return p.dist(path[0]);
    }
    path.windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}
