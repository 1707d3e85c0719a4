//! Depth-cycle elimination for non-vertical lines and segments in 3-space.
//!
//! The crate computes the vertical above/below relation among objects,
//! finds and shortcuts depth cycles, and cuts the objects into pieces whose
//! depth relation is acyclic. Strategies: per-crossing ([`cutters::naive_cut`]),
//! greedy cycle breaking, a recursive space partition by planes
//! ([`partition::partition_cut`]) and a crossing-sensitive strategy for
//! segments. Every predicate uses exact rational arithmetic.

pub mod cutters;
pub mod depth;
pub mod geom;
pub mod io;
pub mod partition;
pub mod scenes;
