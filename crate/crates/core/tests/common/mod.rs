#![allow(dead_code)]

use proptest::prelude::*;
use quadlab_core::{validate_polygon, MarkedQuadrilateral, Point};

pub fn pts(v: &[(f64, f64)]) -> Vec<Point> {
    v.iter().map(|&p| Point::from(p)).collect()
}

pub fn quad(v: &[(f64, f64)], marks: [usize; 4]) -> MarkedQuadrilateral {
    MarkedQuadrilateral::from_vertex_marks(validate_polygon(&pts(v)).unwrap(), marks).unwrap()
}

pub fn rect(w: f64, h: f64) -> MarkedQuadrilateral {
    quad(&[(0., 0.), (w, 0.), (w, h), (0., h)], [0, 1, 2, 3])
}

pub fn l_polygon() -> MarkedQuadrilateral {
    quad(&[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)], [0, 1, 4, 5])
}

pub fn u_polygon() -> MarkedQuadrilateral {
    let v = [(0., 0.), (3., 0.), (3., 2.), (2., 2.), (2., 1.5), (2., 0.5), (1., 0.5), (1., 1.5), (1., 2.), (0., 2.)];
    quad(&v, [8, 3, 4, 7])
}

pub fn diamond() -> MarkedQuadrilateral {
    quad(&[(1., 0.), (2., 1.), (1., 2.), (0., 1.)], [0, 1, 2, 3])
}

/// Bar chart of integer column heights over `[0, n]`, marks at four vertices.
pub fn histogram(heights: &[u8], marks: [usize; 4]) -> Option<MarkedQuadrilateral> {
    let n = heights.len();
    let mut v = vec![Point::new(0.0, 0.0), Point::new(n as f64, 0.0)];
    for i in (0..n).rev() {
        let h = heights[i] as f64;
        let x1 = (i + 1) as f64;
        if v.last().unwrap().y != h {
            v.push(Point::new(x1, h));
        }
        v.push(Point::new(i as f64, h));
    }
    v.dedup();
    // Drop collinear vertices so the marks land on corners.
    let mut out: Vec<Point> = Vec::new();
    for i in 0..v.len() {
        let (a, b, c) = (v[(i + v.len() - 1) % v.len()], v[i], v[(i + 1) % v.len()]);
        if (b - a).cross(c - b) != 0.0 {
            out.push(b);
        }
    }
    let poly = validate_polygon(&out).ok()?;
    let k = poly.len();
    let mut idx = marks.map(|m| m % k);
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    MarkedQuadrilateral::from_vertex_marks(poly, idx).ok()
}

pub fn histogram_strategy(max_cols: usize, max_h: u8) -> impl Strategy<Value = MarkedQuadrilateral> {
    (prop::collection::vec(1..=max_h, 2..=max_cols), prop::array::uniform4(0usize..64))
        .prop_filter_map("marks must be distinct", |(h, m)| histogram(&h, m))
}

/// Star-shaped polygon around the origin with marks at four vertices.
pub fn star_strategy() -> impl Strategy<Value = MarkedQuadrilateral> {
    (prop::collection::vec((0.0f64..1.0, 0.5f64..2.0), 6..12), prop::array::uniform4(0usize..64)).prop_filter_map(
        "star polygon with distinct marks",
        |(raw, m)| {
            let mut a: Vec<(f64, f64)> = raw
                .iter()
                .enumerate()
                .map(|(i, &(u, r))| ((i as f64 + 0.8 * u) * std::f64::consts::TAU / raw.len() as f64, r))
                .collect();
            a.sort_by(|x, y| x.0.total_cmp(&y.0));
            let v: Vec<Point> = a.iter().map(|&(t, r)| Point::from_polar(r, t)).collect();
            let poly = validate_polygon(&v).ok()?;
            let k = poly.len();
            let mut idx = m.map(|x| x % k);
            idx.sort_unstable();
            if idx.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            MarkedQuadrilateral::from_vertex_marks(poly, idx).ok()
        },
    )
}
