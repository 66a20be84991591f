//! Combinatorial engine for end-periodic homeomorphisms of infinite-type
//! surfaces: truncation windows, weighted pants paths, block
//! decompositions of the compactified mapping torus and the associated
//! volume and translation-length bounds.

pub mod blocks;
pub mod bounds;
pub mod certify;
pub mod cli;
pub mod error;
pub mod examples;
pub mod farey;
pub mod end_periodic;
pub mod ladder;
pub mod moves;
pub mod schema;
pub mod slope;
pub mod surface;

pub use error::{Error, Result};
pub use slope::{Slope, Unimodular};
pub use surface::{
    complexity, validate_pants, Attachment, Curve, CurveId, EndStub, HalfEdge, Orientation,
    PantsDecomposition, PieceKind, SlotRef, SurfaceSig, ValidationReport, Violation, Window,
};
