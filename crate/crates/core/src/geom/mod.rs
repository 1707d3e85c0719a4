//! Exact rational geometry: objects, projected crossings, above/below
//! relation, general-position validation and cut application.
//!
//! Every predicate here is decided with exact rationals.

mod cuts;
mod objects;
mod predicates;
mod scalar;
mod scene;

pub use cuts::{apply_cuts, Cut, CutSet, Piece};
pub use objects::{Carrier, Interval, Line3, Object, ObjectId, SceneKind, Segment3};
pub use predicates::{
    carrier_crossing, depth_order_at, xy_cross, xy_cross_in, CrossingPoint, DepthOrder,
};
pub use scalar::{
    cross2, format_scalar, half, int, one, orient2d, parse_scalar, ratio, serde_scalar,
    serde_triple, to_f64, zero, ParseScalarError, Point2, Point3, Scalar, Vec3,
};
pub use scene::{
    scene_crossings, validate_scene, ObjectCrossing, Scene, ValidationReport, Violation,
    ViolationCode,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("objects meet in space at projected point {point}")]
    EqualHeights { point: Box<Point2> },
    #[error("cut t = {t} on object {id} is not strictly inside its parameter range")]
    CutOutOfRange { id: ObjectId, t: Scalar },
    #[error("cut refers to unknown object {0}")]
    UnknownObject(ObjectId),
    #[error("object {id} does not match scene kind {expected}")]
    MixedKinds { expected: SceneKind, id: ObjectId },
}
