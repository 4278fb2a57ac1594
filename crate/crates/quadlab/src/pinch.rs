//! Square with two thin tongues nearly closing a gap of width `t`.

use quadlab_core::geodesic::geodesic_between_sides;
use quadlab_core::{validate_polygon, Containment, MarkedQuadrilateral, Point, SidePair};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchParams {
    /// Gap between the tongue tips.
    pub t: f64,
    /// Side of the square.
    pub side: f64,
    /// Height of the tongues' lower edge.
    pub height: f64,
    pub thickness: f64,
    /// Disk radius factor for the window check.
    pub delta_test: f64,
}

impl PinchParams {
    pub fn new(t: f64) -> Self {
        PinchParams { t, side: 100.0, height: 3.0, thickness: 0.5, delta_test: 0.002 }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PinchError {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PinchInstance {
    pub params: PinchParams,
    pub quad: MarkedQuadrilateral,
    /// Tip-to-tip distance.
    pub s_b: f64,
    /// Height of the square.
    pub s_a: f64,
}

fn on_grid(v: f64, step: f64) -> bool {
    let k = v / step;
    k == k.round()
}

/// Builds the instance with marks at the four corners of the square.
///
/// The left tongue hangs off the left wall (side b2) and the right tongue off
/// the right wall (side b1).
pub fn pinch_family(p: &PinchParams) -> Result<PinchInstance, PinchError> {
    let PinchParams { t, side: w, height: h, thickness: th, .. } = *p;
    if !(t > 0.0 && t <= 1.0) {
        return Err(PinchError::InvalidParams("gap must lie in (0, 1]"));
    }
    if !(th > 0.0 && h > 0.0 && h + th < w && t < w) {
        return Err(PinchError::InvalidParams("tongues must fit inside the square"));
    }
    if !(p.delta_test > 0.0) {
        return Err(PinchError::InvalidParams("delta_test must be positive"));
    }
    let (xl, xr) = (0.5 * (w - t), 0.5 * (w + t));
    let step = t / 4.0;
    if ![w, h, th, h + th, xl, xr].iter().all(|&v| on_grid(v, step)) {
        return Err(PinchError::InvalidParams("coordinates must lie on the grid of step t/4"));
    }
    let v = [
        (0.0, 0.0),
        (w, 0.0),
        (w, h),
        (xr, h),
        (xr, h + th),
        (w, h + th),
        (w, w),
        (0.0, w),
        (0.0, h + th),
        (xl, h + th),
        (xl, h),
        (0.0, h),
    ]
    .map(|(x, y)| Point::new(x, y));
    let poly = validate_polygon(&v).map_err(|_| PinchError::InvalidParams("tongues overlap"))?;
    let quad = MarkedQuadrilateral::from_vertex_marks(poly, [0, 1, 6, 7])
        .map_err(|_| PinchError::InvalidParams("marks collapsed"))?;
    Ok(PinchInstance { params: *p, quad, s_b: t, s_a: w })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowSample {
    pub arclength: f64,
    pub w0: [f64; 2],
    pub center: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowCheck {
    pub r: f64,
    pub window: (f64, f64),
    pub samples: Vec<WindowSample>,
}

impl WindowCheck {
    pub fn pass(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.center.is_some())
    }
}

/// For `w0` on the a-geodesic at least `16 R` from both ends, looks for a disk
/// of radius `r = delta max(s_a, s_b)` inside `D(w0, R)` and inside the
/// polygon, with `R = 10 r`.
pub fn window_disk_check(q: &MarkedQuadrilateral, delta: f64, count: usize) -> WindowCheck {
    let geo = geodesic_between_sides(q, SidePair::A);
    let s_b = geodesic_between_sides(q, SidePair::B).length;
    let r = delta * geo.length.max(s_b);
    let big_r = 10.0 * r;
    let window = (16.0 * big_r, geo.length - 16.0 * big_r);
    let mut samples = Vec::new();
    if window.1 >= window.0 {
        for i in 0..count {
            let s = if count == 1 {
                0.5 * (window.0 + window.1)
            } else {
                window.0 + (window.1 - window.0) * i as f64 / (count - 1) as f64
            };
            let w0 = point_along(&geo.path, s);
            samples.push(WindowSample { arclength: s, w0: [w0.x, w0.y], center: find_disk(q, w0, r, big_r) });
        }
    }
    WindowCheck { r, window, samples }
}

fn find_disk(q: &MarkedQuadrilateral, w0: Point, r: f64, big_r: f64) -> Option<[f64; 2]> {
    let ok = |c: Point| q.contains_point(c) == Containment::Inside && q.distance_to_boundary(c) >= r;
    if ok(w0) {
        return Some([w0.x, w0.y]);
    }
    for ring in 1..=4 {
        let rho = (big_r - r) * ring as f64 / 4.0;
        for k in 0..32 {
            let c = w0 + Point::from_polar(rho, std::f64::consts::TAU * k as f64 / 32.0);
            if ok(c) {
                return Some([c.x, c.y]);
            }
        }
    }
    None
}

fn point_along(path: &[Point], s: f64) -> Point {
    let mut acc = 0.0;
    for w in path.windows(2) {
        let d = w[0].dist(w[1]);
        if acc + d >= s && d > 0.0 {
            return w[0].lerp(w[1], (s - acc) / d);
        }
        acc += d;
    }
    *path.last().expect("geodesic has points")
}
