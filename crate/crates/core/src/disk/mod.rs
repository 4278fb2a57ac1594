//! Inscribed disks: global search, the constructive placement along the
//! a-geodesic, and the end-to-end theorem check.

mod construct;
mod frame;
mod inscribed;
mod split;

use core::fmt;

pub use construct::{construct_disk, construct_disk_traced, place_disk, verify_theorem, Placement, TheoremMode, TheoremReport};
pub use frame::{arc_frame_from_path, build_arc_frame, check_exits, ArcFrame, ExitCheck};
pub use inscribed::{inscribed_radius_oracle, largest_inscribed_disk};
pub use split::{split_disk, HalfChord, Region, RegionSide, SplitDisk, POLYGON_SEGMENTS};

use crate::geom::Point;
use crate::modulus::{ModulusError, RengelBounds};
use crate::polygon::{Containment, SimplePolygon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    TangentConstruction,
    SevenArc,
    GlobalSearch,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::TangentConstruction => "tangent_construction",
            Provenance::SevenArc => "seven_arc",
            Provenance::GlobalSearch => "global_search",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskCandidate {
    pub center: Point,
    pub radius: f64,
    pub provenance: Provenance,
}

impl DiskCandidate {
    /// Centre strictly inside and every boundary point at least `radius` away.
    pub fn is_contained_in(&self, poly: &SimplePolygon) -> bool {
        poly.contains(self.center) == Containment::Inside && poly.distance_to_boundary(self.center) >= self.radius
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DiskError {
    #[error("ratio bound {bound} is below the actual ratio {ratio}")]
    RatioBoundViolated { bound: f64, ratio: f64 },
    #[error("the arc does not leave the disk around the chosen point")]
    DegenerateSplit,
    #[error("no component of the split disk is confined")]
    ClassificationFailure,
    #[error("construction produced a disk that is not inside the polygon")]
    NotContained,
    #[error("modulus {modulus:?} (bounds {bounds:?}) lies outside [1/K, K] for K = {k}")]
    ModulusOutOfRange { modulus: Option<f64>, bounds: RengelBounds, k: f64 },
    #[error("modulus unavailable: {0}")]
    Modulus(#[from] ModulusError),
}

/// One stage outcome of the constructive pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceEvent {
    Frame { s_a: f64, s_b: f64, r: f64, big_r: f64, epsilon: f64, nudge: Option<f64> },
    Centre { arclength: f64, point: Point },
    Exits(ExitCheck),
    Split { good: RegionSide, left_pieces: usize, right_pieces: usize },
    Hug(HalfChord),
    SevenCandidates([bool; 7]),
    Branch(Provenance),
    Conjugated,
    Modulus { value: f64, error: f64 },
    Fallback(&'static str),
    Assumption(&'static str),
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Frame { s_a, s_b, r, big_r, epsilon, nudge } => {
                write!(f, "frame s_a={s_a} s_b={s_b} r={r} R={big_r} eps={epsilon}")?;
                if let Some(d) = nudge {
                    write!(f, " nudge={d}")?;
                }
                Ok(())
            }
            TraceEvent::Centre { arclength, point } => write!(f, "w0 at s={arclength} ({}, {})", point.x, point.y),
            TraceEvent::Exits(e) => write!(f, "exits backward={} forward={}", e.backward, e.forward),
            TraceEvent::Split { good, left_pieces, right_pieces } => {
                write!(f, "split good={good:?} pieces left={left_pieces} right={right_pieces}")
            }
            TraceEvent::Hug(h) => write!(f, "hugged half-chord {h:?}"),
            TraceEvent::SevenCandidates(v) => {
                write!(f, "seven candidates valid=")?;
                for b in v {
                    f.write_str(if *b { "1" } else { "0" })?;
                }
                Ok(())
            }
            TraceEvent::Branch(p) => write!(f, "branch {p}"),
            TraceEvent::Conjugated => f.write_str("ran on the conjugate quadrilateral"),
            TraceEvent::Modulus { value, error } => write!(f, "modulus {value} +/- {error}"),
            TraceEvent::Fallback(why) => write!(f, "fallback: {why}"),
            TraceEvent::Assumption(a) => write!(f, "assumed: {a}"),
        }
    }
}
