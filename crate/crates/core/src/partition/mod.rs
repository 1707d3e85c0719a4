//! Recursive cutting driven by a product of planes: zero-set cuts,
//! criticality cuts, and recursion into the sign-vector cells.

mod cells;
mod planes;
mod procedure;

pub use cells::{assign_cells, assign_clips, whole_clips, CellMap, Clip, SignVector};
pub use planes::{
    choose_planes, criticality_cuts, criticality_params, criticality_params_in, level, on_zero_set,
    zero_set_cuts, zero_set_params, zero_set_params_in, Plane, PlaneCrossing, PlaneSet,
};
pub use procedure::{
    clip_edges, partition_clips, partition_cut, partition_cut_traced, partition_cut_with_planes,
    NodeKind, NodeTrace, PartitionOutcome, PartitionParams,
};

use crate::geom::GeomError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("point lies on plane {0}")]
    OnZeroSet(usize),
    #[error("plane is vertical")]
    VerticalPlane,
    #[error("plane {0} repeats an earlier plane")]
    DuplicatePlane(usize),
    #[error("invalid partition parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
