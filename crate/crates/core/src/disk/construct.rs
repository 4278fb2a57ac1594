//! Constructive disk placement and the end-to-end theorem check.

use alloc::vec::Vec;

use super::{
    build_arc_frame, check_exits, largest_inscribed_disk, split_disk, ArcFrame, DiskCandidate, DiskError, HalfChord,
    Provenance, RegionSide, SplitDisk, TraceEvent,
};
use crate::geodesic::geodesic_between_sides;
use crate::geom::{point_polyline_distance, Point};
use crate::modulus::{compute_modulus, lattice_step, ratio_bound_from_k, rengel_bounds, DEFAULT_TOLERANCE};
use crate::quad::{MarkedQuadrilateral, SidePair};

const NO_B_CHORD: &str = "the arc meets no segment with both endpoints on one b-side";

/// A disk placed inside the good part of a split disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Placement {
    pub split: SplitDisk,
    pub candidate: DiskCandidate,
    /// Validity of the seven candidates, when that branch ran.
    pub seven: Option<[bool; 7]>,
}

/// Places a disk of radius `r` near the point of the arc at arclength `s0`.
///
/// When the good region meets the boundary, the disk is tangent to the
/// `3 epsilon` strip around the hugged half-chord; otherwise one of seven disks
/// internally tangent to the good arc is used. The result is checked exactly.
pub fn place_disk(q: &MarkedQuadrilateral, frame: &ArcFrame, s0: f64) -> Result<Placement, DiskError> {
    let split = split_disk(q, frame, s0)?;
    let r = frame.r;
    let good = split.good_region();
    let poly = q.polygon();
    if good.pieces.is_empty() {
        let mut valid = [false; 7];
        let mut chosen = None;
        for (j, ok) in valid.iter_mut().enumerate() {
            let angle = good.arc_start + good.arc_sweep * (j + 1) as f64 / 8.0;
            let center = split.w0 + Point::from_polar(split.big_r - r, angle);
            let cand = DiskCandidate { center, radius: r, provenance: Provenance::SevenArc };
            *ok = point_polyline_distance(center, &split.crosscut) >= r && cand.is_contained_in(poly);
            if *ok && chosen.is_none() {
                chosen = Some(cand);
            }
        }
        let candidate = chosen.ok_or(DiskError::NotContained)?;
        return Ok(Placement { split, candidate, seven: Some(valid) });
    }
    let hug = split.hug.ok_or(DiskError::ClassificationFailure)?;
    let (from, to) = match hug {
        HalfChord::Start => (split.w01, split.w0),
        HalfChord::End => (split.w02, split.w0),
    };
    let along = (to - from).normalized();
    let w2r = from + along * (2.0 * r);
    // Traversal direction of the crosscut along this half-chord.
    let dir = match hug {
        HalfChord::Start => along,
        HalfChord::End => -along,
    };
    let nu = match split.good {
        RegionSide::Left => dir.perp(),
        RegionSide::Right => -dir.perp(),
    };
    let n0 = w2r + nu * (3.0 * split.epsilon);
    let candidate = DiskCandidate { center: n0 + nu * r, radius: r, provenance: Provenance::TangentConstruction };
    if !candidate.is_contained_in(poly) {
        return Err(DiskError::NotContained);
    }
    Ok(Placement { split, candidate, seven: None })
}

/// Disk of radius `s_a / (1000 L)` inside `q`.
pub fn construct_disk(q: &MarkedQuadrilateral, l: f64) -> Result<DiskCandidate, DiskError> {
    construct_disk_traced(q, l).map(|(c, _)| c)
}

/// As [`construct_disk`], also returning the stage outcomes.
///
/// Only a violated ratio bound is an error; any other failure of the
/// construction falls back to the global search.
pub fn construct_disk_traced(q: &MarkedQuadrilateral, l: f64) -> Result<(DiskCandidate, Vec<TraceEvent>), DiskError> {
    let frame = build_arc_frame(q, l)?;
    let mut trace = alloc::vec![
        TraceEvent::Frame {
            s_a: frame.s_a,
            s_b: frame.s_b,
            r: frame.r,
            big_r: frame.big_r,
            epsilon: frame.epsilon,
            nudge: frame.nudge,
        },
        TraceEvent::Assumption(NO_B_CHORD),
    ];
    let s0 = 0.5 * frame.length;
    trace.push(TraceEvent::Centre { arclength: s0, point: frame.point_at(s0) });
    let exits = check_exits(&frame, s0);
    trace.push(TraceEvent::Exits(exits));
    if !exits.holds() {
        return Ok(fallback(q, trace, "arc stays in the disk"));
    }
    match place_disk(q, &frame, s0) {
        Ok(p) => {
            trace.push(TraceEvent::Split {
                good: p.split.good,
                left_pieces: p.split.left.pieces.len(),
                right_pieces: p.split.right.pieces.len(),
            });
            if let Some(h) = p.split.hug {
                trace.push(TraceEvent::Hug(h));
            }
            if let Some(v) = p.seven {
                trace.push(TraceEvent::SevenCandidates(v));
            }
            trace.push(TraceEvent::Branch(p.candidate.provenance));
            Ok((p.candidate, trace))
        }
        Err(DiskError::DegenerateSplit) => Ok(fallback(q, trace, "degenerate split")),
        Err(DiskError::ClassificationFailure) => Ok(fallback(q, trace, "classification failed")),
        Err(DiskError::NotContained) => Ok(fallback(q, trace, "constructed disk not contained")),
        Err(e) => Err(e),
    }
}

fn fallback(q: &MarkedQuadrilateral, mut trace: Vec<TraceEvent>, why: &'static str) -> (DiskCandidate, Vec<TraceEvent>) {
    trace.push(TraceEvent::Fallback(why));
    trace.push(TraceEvent::Branch(Provenance::GlobalSearch));
    (largest_inscribed_disk(q.polygon()), trace)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TheoremMode {
    /// Ratio bound `L` given directly.
    FromL(f64),
    /// Modulus bound `K`.
    FromK(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    pub mode: TheoremMode,
    pub s_a: f64,
    pub s_b: f64,
    pub modulus: Option<f64>,
    pub modulus_error: Option<f64>,
    pub l_tilde: Option<f64>,
    pub l: f64,
    pub delta: f64,
    pub required_radius: f64,
    pub found: DiskCandidate,
    pub contained: bool,
    pub pass: bool,
    pub trace: Vec<TraceEvent>,
}

/// Checks that `q` contains a disk of radius `delta * max(s_a, s_b)`.
///
/// `FromL(L)` uses `delta = 1 / (1000 L)` on whichever of `q` and its
/// conjugate has the longer a-distance. `FromK(K)` first certifies the modulus
/// lies in `[1/K, K]`, then uses `L = 3 L~` and `delta = 1 / (4000 L)`.
pub fn verify_theorem(q: &MarkedQuadrilateral, mode: TheoremMode) -> Result<TheoremReport, DiskError> {
    let s_a = geodesic_between_sides(q, SidePair::A).length;
    let s_b = geodesic_between_sides(q, SidePair::B).length;
    let mut trace = Vec::new();
    let (mut modulus, mut modulus_error, mut l_tilde) = (None, None, None);
    let (l, delta) = match mode {
        TheoremMode::FromL(l) => (l, 1.0 / (1000.0 * l)),
        TheoremMode::FromK(k) => {
            let lt = ratio_bound_from_k(k)?;
            let bounds = rengel_bounds(s_a, s_b)?;
            if bounds.upper < 1.0 / k || bounds.lower > k {
                return Err(DiskError::ModulusOutOfRange { modulus: None, bounds, k });
            }
            let res = compute_modulus(q, lattice_step(q, 64.0), DEFAULT_TOLERANCE)?;
            let err = if res.error_estimate.is_finite() { res.error_estimate } else { 0.0 };
            let slack = err + 1e-8 * res.modulus;
            trace.push(TraceEvent::Modulus { value: res.modulus, error: res.error_estimate });
            if res.modulus < 1.0 / k - slack || res.modulus > k + slack {
                return Err(DiskError::ModulusOutOfRange { modulus: Some(res.modulus), bounds, k });
            }
            modulus = Some(res.modulus);
            modulus_error = Some(res.error_estimate);
            l_tilde = Some(lt);
            let l = 3.0 * lt;
            (l, 1.0 / (4000.0 * l))
        }
    };
    let required_radius = delta * s_a.max(s_b);
    let target = if s_b > s_a {
        trace.push(TraceEvent::Conjugated);
        q.conjugate()
    } else {
        q.clone()
    };
    let found = match construct_disk_traced(&target, l) {
        Ok((c, t)) => {
            trace.extend(t);
            c
        }
        Err(DiskError::RatioBoundViolated { .. }) => {
            trace.push(TraceEvent::Fallback("ratio bound below the actual ratio"));
            trace.push(TraceEvent::Branch(Provenance::GlobalSearch));
            largest_inscribed_disk(q.polygon())
        }
        Err(e) => return Err(e),
    };
    let contained = found.is_contained_in(q.polygon());
    let pass = contained && found.radius >= required_radius - q.eta();
    Ok(TheoremReport {
        mode,
        s_a,
        s_b,
        modulus,
        modulus_error,
        l_tilde,
        l,
        delta,
        required_radius,
        found,
        contained,
        pass,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::validate_polygon;

    fn rect(w: f64, h: f64) -> MarkedQuadrilateral {
        let p = validate_polygon(&[Point::new(0.0, 0.0), Point::new(w, 0.0), Point::new(w, h), Point::new(0.0, h)]).unwrap();
        MarkedQuadrilateral::from_vertex_marks(p, [0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn rectangle_seven_arc() {
        let q = rect(2.0, 1.0);
        let frame = build_arc_frame(&q, 2.0).unwrap();
        assert!((frame.r - 5e-4).abs() < 1e-15);
        let p = place_disk(&q, &frame, 0.5 * frame.length).unwrap();
        assert_eq!(p.candidate.provenance, Provenance::SevenArc);
        assert_eq!(p.seven, Some([true; 7]));
        assert!(p.split.has_two_components());
        assert_eq!(p.candidate.radius, frame.r);
    }

    #[test]
    fn unit_square_from_k() {
        let q = rect(1.0, 1.0);
        let rep = verify_theorem(&q, TheoremMode::FromK(1.0)).unwrap();
        assert!(rep.pass);
        assert!((rep.required_radius - 1.956e-7).abs() < 1e-10);
    }

    #[test]
    fn teeth_force_tangent_branch() {
        let v = [
            (0., 0.),
            (1.899, 0.),
            (1.899, 0.998),
            (1.901, 0.998),
            (1.901, 0.),
            (4., 0.),
            (4., 2.),
            (2.101, 2.),
            (2.101, 1.002),
            (2.099, 1.002),
            (2.099, 2.),
            (0., 2.),
        ]
        .map(Point::from);
        let q = MarkedQuadrilateral::from_vertex_marks(validate_polygon(&v).unwrap(), [0, 5, 6, 11]).unwrap();
        let frame = super::super::arc_frame_from_path(alloc::vec![Point::new(0., 1.), Point::new(4., 1.)], 0.01, 0.01);
        let p = place_disk(&q, &frame, 2.0).unwrap();
        assert_eq!(p.split.good, RegionSide::Left);
        assert!(!p.split.left.pieces.is_empty() && !p.split.right.pieces.is_empty());
        assert_eq!(p.split.hug, Some(HalfChord::Start));
        assert_eq!(p.candidate.provenance, Provenance::TangentConstruction);
        assert!((p.candidate.center.dist(Point::new(1.92, 1.04))) < 1e-12);
    }

    #[test]
    fn ratio_bound_checked() {
        let q = rect(2.0, 1.0);
        assert!(matches!(construct_disk(&q, 1.5), Err(DiskError::RatioBoundViolated { .. })));
    }
}
