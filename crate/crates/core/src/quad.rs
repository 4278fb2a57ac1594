//! Marked quadrilaterals and their sides.

use alloc::vec::Vec;

use crate::geom::Point;
use crate::polygon::{BoundaryLocation, Containment, SimplePolygon};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("mark {index} is not a valid boundary location")]
    InvalidLocation { index: usize },
    #[error("marks {first} and {second} coincide")]
    MarksNotDistinct { first: usize, second: usize },
    #[error("marks are not in counter-clockwise boundary order")]
    MarksOutOfOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SideId {
    A1,
    B1,
    A2,
    B2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SidePair {
    A,
    B,
}

impl SideId {
    pub const ALL: [SideId; 4] = [SideId::A1, SideId::B1, SideId::A2, SideId::B2];

    /// Indices of the marks bounding this side, in boundary order.
    pub fn marks(self) -> (usize, usize) {
        match self {
            SideId::A1 => (0, 1),
            SideId::B1 => (1, 2),
            SideId::A2 => (2, 3),
            SideId::B2 => (3, 0),
        }
    }

    pub fn pair(self) -> SidePair {
        match self {
            SideId::A1 | SideId::A2 => SidePair::A,
            SideId::B1 | SideId::B2 => SidePair::B,
        }
    }

    pub fn opposite(self) -> SideId {
        match self {
            SideId::A1 => SideId::A2,
            SideId::A2 => SideId::A1,
            SideId::B1 => SideId::B2,
            SideId::B2 => SideId::B1,
        }
    }
}

impl SidePair {
    pub fn sides(self) -> (SideId, SideId) {
        match self {
            SidePair::A => (SideId::A1, SideId::A2),
            SidePair::B => (SideId::B1, SideId::B2),
        }
    }

    pub fn other(self) -> SidePair {
        match self {
            SidePair::A => SidePair::B,
            SidePair::B => SidePair::A,
        }
    }
}

/// A sub-interval `[t0, t1]` of one polygon edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySegment {
    pub edge: usize,
    pub t0: f64,
    pub t1: f64,
    pub a: Point,
    pub b: Point,
}

impl BoundarySegment {
    pub fn new(poly: &SimplePolygon, edge: usize, t0: f64, t1: f64) -> Self {
        let a = poly.point_at(BoundaryLocation::new(edge, t0));
        let b = poly.point_at(BoundaryLocation::new(edge, t1));
        Self { edge, t0, t1, a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }
}

/// A simple polygon with four marked boundary points `v1..v4` in
/// counter-clockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedQuadrilateral {
    polygon: SimplePolygon,
    marks: [BoundaryLocation; 4],
}

pub fn mark_quadrilateral(
    polygon: SimplePolygon,
    marks: [BoundaryLocation; 4],
) -> Result<MarkedQuadrilateral, QuadError> {
    let mut marks = marks;
    for (index, m) in marks.iter_mut().enumerate() {
        if m.edge >= polygon.len() || !(m.t >= 0.0 && m.t <= 1.0) {
            return Err(QuadError::InvalidLocation { index });
        }
        if m.t == 1.0 {
            *m = BoundaryLocation::vertex(polygon.next(m.edge));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if marks[i] == marks[j] {
                return Err(QuadError::MarksNotDistinct { first: i, second: j });
            }
        }
    }
    // Some rotation of the marks must be strictly increasing.
    let descents = (0..4).filter(|&i| marks[(i + 1) % 4] < marks[i]).count();
    if descents != 1 {
        return Err(QuadError::MarksOutOfOrder);
    }
    Ok(MarkedQuadrilateral { polygon, marks })
}

impl MarkedQuadrilateral {
    pub fn new(polygon: SimplePolygon, marks: [BoundaryLocation; 4]) -> Result<Self, QuadError> {
        mark_quadrilateral(polygon, marks)
    }

    /// Marks the four given polygon vertices.
    pub fn from_vertex_marks(polygon: SimplePolygon, idx: [usize; 4]) -> Result<Self, QuadError> {
        mark_quadrilateral(polygon, idx.map(BoundaryLocation::vertex))
    }

    pub fn polygon(&self) -> &SimplePolygon {
        &self.polygon
    }

    pub fn marks(&self) -> &[BoundaryLocation; 4] {
        &self.marks
    }

    pub fn mark_point(&self, j: usize) -> Point {
        self.polygon.point_at(self.marks[j])
    }

    pub fn mark_points(&self) -> [Point; 4] {
        [0, 1, 2, 3].map(|j| self.mark_point(j))
    }

    pub fn eta(&self) -> f64 {
        self.polygon.eta()
    }

    /// The edge pieces making up a side, in boundary order.
    pub fn side_segments(&self, side: SideId) -> Vec<BoundarySegment> {
        let (i, j) = side.marks();
        let (s, f) = (self.marks[i], self.marks[j]);
        let p = &self.polygon;
        let n = p.len();
        let mut out = Vec::new();
        if s.edge == f.edge && s.t < f.t {
            out.push(BoundarySegment::new(p, s.edge, s.t, f.t));
            return out;
        }
        out.push(BoundarySegment::new(p, s.edge, s.t, 1.0));
        let mut e = p.next(s.edge);
        let mut guard = 0;
        while e != f.edge && guard <= n {
            out.push(BoundarySegment::new(p, e, 0.0, 1.0));
            e = p.next(e);
            guard += 1;
        }
        if f.t > 0.0 {
            out.push(BoundarySegment::new(p, f.edge, 0.0, f.t));
        }
        out
    }

    /// Closed polyline from the side's first mark to its second.
    pub fn side_arc(&self, side: SideId) -> Vec<Point> {
        let segs = self.side_segments(side);
        let mut out = Vec::with_capacity(segs.len() + 1);
        out.push(segs[0].a);
        out.extend(segs.iter().map(|s| s.b));
        out
    }

    pub fn side_length(&self, side: SideId) -> f64 {
        self.side_segments(side).iter().map(BoundarySegment::length).sum()
    }

    /// Sides containing a boundary location (two at a mark, one elsewhere).
    pub fn sides_at(&self, loc: BoundaryLocation) -> Vec<SideId> {
        SideId::ALL
            .into_iter()
            .filter(|&s| {
                let (i, j) = s.marks();
                cyclic_between(self.marks[i], loc, self.marks[j])
            })
            .collect()
    }

    /// Same polygon with marks rotated by one, so a- and b-sides swap.
    pub fn conjugate(&self) -> MarkedQuadrilateral {
        let m = self.marks;
        MarkedQuadrilateral { polygon: self.polygon.clone(), marks: [m[1], m[2], m[3], m[0]] }
    }

    pub fn scaled(&self, factor: f64) -> MarkedQuadrilateral {
        MarkedQuadrilateral { polygon: self.polygon.scaled(factor), marks: self.marks }
    }

    pub fn contains_point(&self, p: Point) -> Containment {
        self.polygon.contains(p)
    }

    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.polygon.distance_to_boundary(p)
    }
}

/// Whether `p` lies on the closed cyclic interval from `a` to `b`.
pub(crate) fn cyclic_between<T: PartialOrd>(a: T, p: T, b: T) -> bool {
    if a <= b {
        a <= p && p <= b
    } else {
        p >= a || p <= b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polyline_length;
    use crate::polygon::validate_polygon;

    fn poly(c: &[(f64, f64)]) -> SimplePolygon {
        let v: Vec<Point> = c.iter().map(|&p| p.into()).collect();
        validate_polygon(&v).unwrap()
    }

    #[test]
    fn corner_marked_square() {
        let q = MarkedQuadrilateral::from_vertex_marks(
            poly(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]),
            [0, 1, 2, 3],
        )
        .unwrap();
        assert_eq!(q.side_arc(SideId::A1), [Point::new(0., 0.), Point::new(1., 0.)]);
        assert_eq!(q.side_arc(SideId::B2), [Point::new(0., 1.), Point::new(0., 0.)]);
        let bad = MarkedQuadrilateral::from_vertex_marks(q.polygon().clone(), [0, 2, 1, 3]);
        assert_eq!(bad.unwrap_err(), QuadError::MarksOutOfOrder);
        let dup = MarkedQuadrilateral::from_vertex_marks(q.polygon().clone(), [0, 1, 1, 3]);
        assert!(matches!(dup, Err(QuadError::MarksNotDistinct { .. })));
    }

    #[test]
    fn rotated_start_is_in_order() {
        let q = MarkedQuadrilateral::from_vertex_marks(
            poly(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]),
            [2, 3, 0, 1],
        )
        .unwrap();
        assert_eq!(q.side_arc(SideId::A1), [Point::new(1., 1.), Point::new(0., 1.)]);
    }

    #[test]
    fn l_polygon_staircase() {
        let q = MarkedQuadrilateral::from_vertex_marks(
            poly(&[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]),
            [0, 1, 4, 5],
        )
        .unwrap();
        let b1 = q.side_arc(SideId::B1);
        let expect = [(2., 0.), (2., 1.), (1., 1.), (1., 2.)].map(Point::from);
        assert_eq!(b1, expect);
        let total: f64 = SideId::ALL.iter().map(|&s| polyline_length(&q.side_arc(s))).sum();
        assert_eq!(total, q.polygon().perimeter());
    }

    #[test]
    fn mid_edge_marks_and_wrapping_side() {
        let p = poly(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        let marks = [
            BoundaryLocation::new(0, 0.5),
            BoundaryLocation::new(1, 0.5),
            BoundaryLocation::new(2, 0.5),
            BoundaryLocation::new(3, 0.5),
        ];
        let q = mark_quadrilateral(p, marks).unwrap();
        let b2 = q.side_arc(SideId::B2);
        assert_eq!(b2, [(0., 0.5), (0., 0.), (0.5, 0.)].map(Point::from));
        assert_eq!(q.sides_at(BoundaryLocation::vertex(0)), [SideId::B2]);
        assert_eq!(q.sides_at(marks[0]), [SideId::A1, SideId::B2]);
    }

    #[test]
    fn conjugate_cycles() {
        let q = MarkedQuadrilateral::from_vertex_marks(
            poly(&[(0., 0.), (2., 0.), (2., 1.), (0., 1.)]),
            [0, 1, 2, 3],
        )
        .unwrap();
        let c = q.conjugate();
        assert_eq!(c.side_arc(SideId::A1), q.side_arc(SideId::B1));
        assert_eq!(c.conjugate().conjugate().conjugate(), q);
    }
}
