//! Simple polygons with a cached boundary parameterization.

use alloc::vec::Vec;

use crate::geom::{
    closest_on_segment, on_segment, orient, point_segment_distance, segments_intersect,
    BoundingBox, Orientation, Point,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PolygonError {
    #[error("polygon needs at least 3 distinct vertices, got {count}")]
    TooFewVertices { count: usize },
    #[error("vertex {index} is not finite")]
    NonFinite { index: usize },
    #[error("edge {edge} is degenerate or folds back onto its neighbour")]
    DegenerateEdge { edge: usize },
    #[error("edges {first} and {second} intersect")]
    SelfIntersection { first: usize, second: usize },
}

/// A point on the boundary: edge `edge` at parameter `t` in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BoundaryLocation {
    pub edge: usize,
    pub t: f64,
}

impl BoundaryLocation {
    pub const fn new(edge: usize, t: f64) -> Self {
        Self { edge, t }
    }

    pub const fn vertex(index: usize) -> Self {
        Self { edge: index, t: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// A counter-clockwise simple polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
    area: f64,
    cumulative: Vec<f64>,
    bbox: BoundingBox,
}

/// Normalizes and validates a vertex list.
///
/// Consecutive duplicates are collapsed and clockwise input is reversed
/// (keeping the first vertex first).
pub fn validate_polygon(vertices: &[Point]) -> Result<SimplePolygon, PolygonError> {
    if let Some(index) = vertices.iter().position(|p| !p.is_finite()) {
        return Err(PolygonError::NonFinite { index });
    }
    let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
    for &p in vertices {
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    let n = v.len();
    if n < 3 {
        return Err(PolygonError::TooFewVertices { count: n });
    }
    for i in 0..n {
        let prev = v[(i + n - 1) % n];
        let cur = v[i];
        let next = v[(i + 1) % n];
        if orient(prev, cur, next) == Orientation::Collinear && (cur - prev).dot(next - cur) < 0.0 {
            return Err(PolygonError::DegenerateEdge { edge: i });
        }
    }
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(PolygonError::SelfIntersection { first: i, second: j });
            }
        }
    }
    let mut area = shoelace(&v);
    if area == 0.0 {
        return Err(PolygonError::DegenerateEdge { edge: 0 });
    }
    if area < 0.0 {
        v[1..].reverse();
        area = -area;
    }
    Ok(SimplePolygon::from_parts(v, area))
}

fn shoelace(v: &[Point]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        s += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * s
}

impl SimplePolygon {
    pub fn new(vertices: &[Point]) -> Result<Self, PolygonError> {
        validate_polygon(vertices)
    }

    fn from_parts(vertices: Vec<Point>, area: f64) -> Self {
        let n = vertices.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 0..n {
            acc += vertices[i].dist(vertices[(i + 1) % n]);
            cumulative.push(acc);
        }
        let bbox = BoundingBox::of(&vertices);
        Self { vertices, area, cumulative, bbox }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.len()]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Endpoints of edge `i` (from vertex `i` to vertex `i + 1`).
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertices[i], self.vertices[self.next(i)])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.cumulative[i + 1] - self.cumulative[i]
    }

    pub fn perimeter(&self) -> f64 {
        self.cumulative[self.len()]
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn bbox(&self) -> BoundingBox {
        self.bbox
    }

    /// The global fuzzy tolerance: `1e-9` times the bounding-box diagonal.
    pub fn eta(&self) -> f64 {
        1e-9 * self.bbox.diagonal()
    }

    /// Whether the interior angle at vertex `i` exceeds a straight angle.
    pub fn is_reflex(&self, i: usize) -> bool {
        orient(self.vertex(self.prev(i)), self.vertices[i], self.vertex(self.next(i)))
            == Orientation::Clockwise
    }

    pub fn is_rectilinear(&self) -> bool {
        self.edges().all(|(a, b)| a.x == b.x || a.y == b.y)
    }

    pub fn point_at(&self, loc: BoundaryLocation) -> Point {
        let (a, b) = self.edge(loc.edge);
        if loc.t == 0.0 {
            a
        } else if loc.t == 1.0 {
            b
        } else {
            a.lerp(b, loc.t)
        }
    }

    /// Arclength from vertex 0 to `loc`.
    pub fn position(&self, loc: BoundaryLocation) -> f64 {
        self.cumulative[loc.edge] + loc.t * self.edge_length(loc.edge)
    }

    /// Location at arclength `s` (taken modulo the perimeter).
    pub fn location_at(&self, s: f64) -> BoundaryLocation {
        let per = self.perimeter();
        let mut s = s % per;
        if s < 0.0 {
            s += per;
        }
        let e = match self.cumulative.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => return BoundaryLocation::vertex(i % self.len()),
            Err(i) => i - 1,
        };
        let t = (s - self.cumulative[e]) / self.edge_length(e);
        normalize_location(self.len(), e, t)
    }

    /// Boundary location of a point lying on the boundary, if any.
    pub fn locate(&self, p: Point) -> Option<BoundaryLocation> {
        if let Some(i) = self.vertices.iter().position(|&v| v == p) {
            return Some(BoundaryLocation::vertex(i));
        }
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            if on_segment(p, a, b) {
                let (_, t) = closest_on_segment(p, a, b);
                return Some(normalize_location(self.len(), i, t));
            }
        }
        None
    }

    /// Nearest boundary location to `p`; ties go to the smallest location.
    pub fn nearest_location(&self, p: Point) -> (BoundaryLocation, f64) {
        let tol = self.eta();
        let mut best = (BoundaryLocation::vertex(0), f64::INFINITY);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let (q, t) = closest_on_segment(p, a, b);
            let d = p.dist(q);
            if d < best.1 - tol {
                best = (normalize_location(self.len(), i, t), d);
            } else if d <= best.1 + tol {
                let loc = normalize_location(self.len(), i, t);
                if loc < best.0 {
                    best.0 = loc;
                }
                best.1 = best.1.min(d);
            }
        }
        best
    }

    /// Exact point classification via the winding number.
    pub fn contains(&self, p: Point) -> Containment {
        ring_contains(&self.vertices, p)
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Uniformly scaled copy.
    pub fn scaled(&self, factor: f64) -> SimplePolygon {
        let v = self.vertices.iter().map(|&p| p * factor).collect();
        SimplePolygon::from_parts(v, self.area * factor * factor)
    }

    /// Translated copy.
    pub fn translated(&self, by: Point) -> SimplePolygon {
        let v = self.vertices.iter().map(|&p| p + by).collect();
        SimplePolygon::from_parts(v, self.area)
    }
}

/// Exact winding-number classification against a closed ring of vertices.
pub fn ring_contains(ring: &[Point], p: Point) -> Containment {
    let n = ring.len();
    let mut winding = 0i32;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if on_segment(p, a, b) {
            return Containment::Boundary;
        }
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) == Orientation::CounterClockwise {
                winding += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) == Orientation::Clockwise {
            winding -= 1;
        }
    }
    if winding != 0 {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

/// Maps `t == 1` onto the start of the following edge.
pub(crate) fn normalize_location(n: usize, edge: usize, t: f64) -> BoundaryLocation {
    if t >= 1.0 {
        BoundaryLocation::vertex((edge + 1) % n)
    } else {
        BoundaryLocation::new(edge, t.max(0.0))
    }
}
