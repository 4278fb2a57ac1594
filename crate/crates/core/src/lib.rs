//! Internal distances, conformal moduli, rectilinear approximation and
//! inscribed disks for marked quadrilaterals.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cells;
pub mod disk;
pub mod geodesic;
pub mod geom;
pub mod modulus;
pub mod polygon;
pub mod quad;
pub mod rectify;

pub use geom::{Orientation, Point};
pub use polygon::{validate_polygon, BoundaryLocation, Containment, PolygonError, SimplePolygon};
pub use quad::{mark_quadrilateral, MarkedQuadrilateral, QuadError, SideId, SidePair};
pub use disk::{construct_disk, largest_inscribed_disk, verify_theorem, DiskCandidate, Provenance, TheoremMode};
pub use modulus::{compute_modulus, rengel_bounds, ModulusResult, RengelBounds};
pub use rectify::{rectify, rectify_to_tolerance, GridSpec, RectifiedQuad};
