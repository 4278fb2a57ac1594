//! The a-geodesic with the radii and windows used for disk placement.

use alloc::vec::Vec;

use super::DiskError;
use crate::geodesic::{geodesic_between_sides, truncated_internal_distance, validate_exclusion_delta, ExclusionSpec};
use crate::geom::{polyline_length, Point};
use crate::polygon::BoundaryLocation;
use crate::quad::{MarkedQuadrilateral, SidePair};

/// Arclength-parameterized arc `C` with `r = s_a / (1000 L)` and `R = 10 r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcFrame {
    pub path: Vec<Point>,
    cumulative: Vec<f64>,
    pub length: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub ratio_bound: f64,
    pub r: f64,
    pub big_r: f64,
    /// Excess of the arc length over `s_a`, never below the global tolerance.
    pub epsilon: f64,
    /// Exclusion radius used to move an endpoint off a mark, if any.
    pub nudge: Option<f64>,
    pub endpoint_locations: [BoundaryLocation; 2],
}

impl ArcFrame {
    fn new(path: Vec<Point>, s_a: f64, s_b: f64, ratio_bound: f64, r: f64, epsilon: f64) -> Self {
        let mut cumulative = Vec::with_capacity(path.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in path.windows(2) {
            acc += w[0].dist(w[1]);
            cumulative.push(acc);
        }
        ArcFrame {
            path,
            cumulative,
            length: acc,
            s_a,
            s_b,
            ratio_bound,
            r,
            big_r: 10.0 * r,
            epsilon,
            nudge: None,
            endpoint_locations: [BoundaryLocation::vertex(0); 2],
        }
    }

    /// Point at arclength `s`, clamped to the arc.
    pub fn point_at(&self, s: f64) -> Point {
        let s = s.clamp(0.0, self.length);
        let k = self.segment_at(s);
        let seg = self.cumulative[k + 1] - self.cumulative[k];
        if seg == 0.0 {
            return self.path[k];
        }
        let t = (s - self.cumulative[k]) / seg;
        if t <= 0.0 {
            self.path[k]
        } else if t >= 1.0 {
            self.path[k + 1]
        } else {
            self.path[k].lerp(self.path[k + 1], t)
        }
    }

    /// Index of the segment containing arclength `s`.
    pub fn segment_at(&self, s: f64) -> usize {
        let last = self.path.len() - 2;
        match self.cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => i.min(last),
            Err(i) => (i.max(1) - 1).min(last),
        }
    }

    pub fn vertex_arclength(&self, k: usize) -> f64 {
        self.cumulative[k]
    }

    /// Points at least `15 R` from both ends.
    pub fn far_window(&self) -> (f64, f64) {
        let m = 15.0 * self.big_r;
        (m, self.length - m)
    }

    /// Points at least `16 R + 2 epsilon` from both ends.
    pub fn further_window(&self) -> (f64, f64) {
        let m = 16.0 * self.big_r + 2.0 * self.epsilon;
        (m, self.length - m)
    }

    /// `count` evenly spaced arclengths spanning a window.
    pub fn sample(window: (f64, f64), count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => alloc::vec![0.5 * (window.0 + window.1)],
            _ => (0..count).map(|i| window.0 + (window.1 - window.0) * i as f64 / (count - 1) as f64).collect(),
        }
    }

    /// Sub-polyline between two arclengths.
    pub fn sub_path(&self, s0: f64, s1: f64) -> Vec<Point> {
        let mut out = alloc::vec![self.point_at(s0)];
        for k in 0..self.path.len() {
            if self.cumulative[k] > s0 && self.cumulative[k] < s1 {
                out.push(self.path[k]);
            }
        }
        out.push(self.point_at(s1));
        out
    }
}

/// Builds the frame for `C`, the pair-A geodesic.
///
/// An endpoint sitting on a mark also lies on a b-side; the arc is then
/// re-solved with endpoints kept `delta_sup / 100` away from the marks, or
/// closer when that is needed to keep `4 pi delta` below `r / 1000`.
pub fn build_arc_frame(q: &MarkedQuadrilateral, l: f64) -> Result<ArcFrame, DiskError> {
    let a = geodesic_between_sides(q, SidePair::A);
    let b = geodesic_between_sides(q, SidePair::B);
    let (s_a, s_b) = (a.length, b.length);
    let ratio = (s_a / s_b).max(s_b / s_a);
    if !(l >= ratio * (1.0 - 1e-12)) {
        return Err(DiskError::RatioBoundViolated { bound: l, ratio });
    }
    let eta = q.eta();
    let at_mark = a.endpoint_locations.iter().any(|loc| q.marks().contains(loc));
    let (geo, nudge) = if at_mark {
        let r = s_a / (1000.0 * l);
        let delta = (validate_exclusion_delta(q, 1.0).delta_sup() / 100.0).min(1e-3 * r / (4.0 * core::f64::consts::PI));
        let spec = ExclusionSpec::new(q, delta).map_err(|_| DiskError::DegenerateSplit)?;
        let g = truncated_internal_distance(q, SidePair::A, &spec).map_err(|_| DiskError::DegenerateSplit)?;
        (g, Some(delta))
    } else {
        (a, None)
    };
    let epsilon = eta.max(polyline_length(&geo.path) - s_a);
    let mut frame = ArcFrame::new(geo.path, s_a, s_b, l, s_a / (1000.0 * l), epsilon);
    frame.nudge = nudge;
    frame.endpoint_locations = geo.endpoint_locations;
    Ok(frame)
}

/// Frame over an arbitrary polyline with a chosen radius `r`.
pub fn arc_frame_from_path(path: Vec<Point>, r: f64, epsilon: f64) -> ArcFrame {
    let len = polyline_length(&path);
    ArcFrame::new(path, len, len, 1.0, r, epsilon)
}

/// Whether the arc leaves the closed disk `D(w0, R)` within arclength `15 R`
/// on each side of `w0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExitCheck {
    pub backward: bool,
    pub forward: bool,
    pub backward_reach: f64,
    pub forward_reach: f64,
}

impl ExitCheck {
    pub fn holds(&self) -> bool {
        self.backward && self.forward
    }
}

pub fn check_exits(frame: &ArcFrame, s0: f64) -> ExitCheck {
    let w0 = frame.point_at(s0);
    let span = 15.0 * frame.big_r;
    let reach = |lo: f64, hi: f64| -> f64 {
        frame.sub_path(lo.max(0.0), hi.min(frame.length)).iter().map(|p| p.dist(w0)).fold(0.0, f64::max)
    };
    let backward_reach = reach(s0 - span, s0);
    let forward_reach = reach(s0, s0 + span);
    ExitCheck {
        backward: backward_reach > frame.big_r,
        forward: forward_reach > frame.big_r,
        backward_reach,
        forward_reach,
    }
}
