//! File formats, instance generators, SVG output and batch runs on top of
//! `quadlab-core`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
pub mod format;
pub mod generate;
pub mod pinch;
pub mod svg;

pub use quadlab_core as core;
