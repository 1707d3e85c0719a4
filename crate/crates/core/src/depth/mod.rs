//! The depth relation on pieces: graph construction, depth orders, cycle
//! search and the spatial realization of a cycle.

mod cycle;
mod graph;

pub use cycle::{
    enumerate_triangular_cycles, find_cycle, find_simple_cycle, find_simple_cycle_with,
    first_self_crossing, is_elementary, is_elementary_with, meets_open_triangle,
    projection_is_simple, realize_path, realize_path_with, shortcut_once, whole_pieces, CycleError,
    CyclePath, SimpleCycle,
};
pub use graph::{
    build_graph, build_graph_with, cyclic_nodes, depth_order, strongly_connected_components,
    CrossingTable, DepthEdge, DepthGraph,
};
