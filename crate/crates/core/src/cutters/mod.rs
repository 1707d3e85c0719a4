//! Cycle-elimination strategies and their verification.

mod greedy;
mod naive;
mod segments;

pub use greedy::greedy_cycle_cut;
pub use naive::naive_cut;
pub use segments::{
    segment_sensitive_cut, segment_sensitive_cut_traced, SegmentOutcome, SegmentRegime,
};

use serde::{Deserialize, Serialize};

use crate::depth::{build_graph, depth_order};
use crate::geom::{apply_cuts, CutSet, GeomError, ObjectCrossing, Scene, SceneKind};
use crate::partition::{partition_cut, PartitionError, PartitionParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum Strategy {
    Naive,
    Greedy,
    Partition(PartitionParams),
    SegmentSensitive(PartitionParams),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::Greedy => "greedy",
            Strategy::Partition(_) => "partition",
            Strategy::SegmentSensitive(_) => "segment-sensitive",
        }
    }
}

/// Object count and the proper projected crossings of a scene.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SceneStats {
    pub n: usize,
    /// Number of crossing pairs, `X`.
    pub crossing_count: usize,
    pub crossings: Vec<ObjectCrossing>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CutterError {
    #[error("strategy needs a scene of {expected}, got {found}")]
    WrongKind {
        expected: SceneKind,
        found: SceneKind,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

pub fn run_strategy(scene: &Scene, strategy: &Strategy) -> Result<CutSet, CutterError> {
    match strategy {
        Strategy::Naive => Ok(naive_cut(scene)?),
        Strategy::Greedy => Ok(greedy_cycle_cut(scene)?),
        Strategy::Partition(p) => Ok(partition_cut(scene, p)?),
        Strategy::SegmentSensitive(p) => segment_sensitive_cut(scene, p),
    }
}

/// True when the pieces produced by `cuts` admit a depth order.
pub fn verify_cuts(scene: &Scene, cuts: &CutSet) -> Result<bool, GeomError> {
    let pieces = apply_cuts(scene, cuts)?;
    let g = build_graph(scene, &pieces)?;
    Ok(depth_order(&g).is_some())
}
