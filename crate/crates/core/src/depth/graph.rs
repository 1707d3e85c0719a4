//! The depth relation on pieces as a directed graph.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::geom::{
    scene_crossings, CrossingPoint, GeomError, Interval, ObjectCrossing, Piece, Scalar, Scene,
};

/// Every proper crossing of a scene, plus each object's crossings sorted by
/// parameter. Computed once and shared by graphs built over different cut
/// sets of the same scene.
#[derive(Clone, Debug)]
pub struct CrossingTable {
    crossings: Arc<Vec<ObjectCrossing>>,
    per_object: Vec<Vec<usize>>,
}

impl CrossingTable {
    pub fn new(scene: &Scene) -> Result<Self, GeomError> {
        let crossings = scene_crossings(scene)?;
        let mut per_object: Vec<Vec<usize>> = vec![Vec::new(); scene.len()];
        for (k, c) in crossings.iter().enumerate() {
            per_object[c.a].push(k);
            per_object[c.b].push(k);
        }
        for (obj, list) in per_object.iter_mut().enumerate() {
            list.sort_by(|&x, &y| crossings[x].param_on(obj).cmp(crossings[y].param_on(obj)));
        }
        Ok(CrossingTable {
            crossings: Arc::new(crossings),
            per_object,
        })
    }

    pub fn crossings(&self) -> &[ObjectCrossing] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Crossing indices on `object`, by increasing parameter.
    pub fn on_object(&self, object: usize) -> &[usize] {
        &self.per_object[object]
    }
}

/// `below ≺ above`: the pieces' projections cross and `below` passes under
/// `above` there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DepthEdge {
    pub below: usize,
    pub above: usize,
    /// Index into the scene's [`CrossingTable`].
    pub crossing: usize,
}

#[derive(Clone, Debug)]
pub struct DepthGraph {
    node_count: usize,
    /// Sorted by `(below, above)`; `offsets[u]..offsets[u + 1]` are the
    /// edges leaving `u`.
    edges: Vec<DepthEdge>,
    offsets: Vec<usize>,
    crossings: Arc<Vec<ObjectCrossing>>,
}

impl DepthGraph {
    /// Assembles a graph; successor lists are kept sorted by target, and
    /// parallel edges keep their input order. Linear in edges plus nodes.
    pub fn from_edges(node_count: usize, edges: Vec<DepthEdge>, table: &CrossingTable) -> Self {
        let edges = counting_sort(
            counting_sort(edges, node_count, |e| e.above),
            node_count,
            |e| e.below,
        );
        let mut offsets = vec![0usize; node_count + 1];
        for e in &edges {
            offsets[e.below + 1] += 1;
        }
        for u in 0..node_count {
            offsets[u + 1] += offsets[u];
        }
        DepthGraph {
            node_count,
            edges,
            offsets,
            crossings: Arc::clone(&table.crossings),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[DepthEdge] {
        &self.edges
    }

    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = &DepthEdge> {
        self.edges[self.offsets[u]..self.offsets[u + 1]].iter()
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges(u).map(|e| e.above)
    }

    pub fn edge(&self, below: usize, above: usize) -> Option<&DepthEdge> {
        self.out_edges(below).find(|e| e.above == above)
    }

    /// The crossing of an edge, with `ta` on the lower piece.
    pub fn crossing_point(&self, e: &DepthEdge) -> CrossingPoint {
        let c = &self.crossings[e.crossing];
        let (t_below, t_above) = c.below_above_params();
        CrossingPoint {
            ta: t_below.clone(),
            tb: t_above.clone(),
            point: c.crossing.point.clone(),
        }
    }
}

/// Stable sort by a key below `buckets`.
fn counting_sort(
    items: Vec<DepthEdge>,
    buckets: usize,
    key: impl Fn(&DepthEdge) -> usize,
) -> Vec<DepthEdge> {
    let mut start = vec![0usize; buckets + 1];
    for e in &items {
        start[key(e) + 1] += 1;
    }
    for b in 0..buckets {
        start[b + 1] += start[b];
    }
    let mut out = vec![None; items.len()];
    for e in items {
        let slot = &mut start[key(&e)];
        out[*slot] = Some(e);
        *slot += 1;
    }
    out.into_iter()
        .map(|e| e.expect("every slot is filled"))
        .collect()
}

/// Builds the depth relation among `pieces` in `O(X + P)` after the scene's
/// crossings are known.
pub fn build_graph(scene: &Scene, pieces: &[Piece]) -> Result<DepthGraph, GeomError> {
    let table = CrossingTable::new(scene)?;
    Ok(build_graph_with(&table, scene.len(), pieces))
}

pub fn build_graph_with(
    table: &CrossingTable,
    object_count: usize,
    pieces: &[Piece],
) -> DepthGraph {
    let mut by_object: Vec<Vec<&Piece>> = vec![Vec::new(); object_count];
    for p in pieces {
        by_object[p.parent_index].push(p);
    }
    // piece holding each crossing's endpoint on `a` and on `b`
    let mut at_a: Vec<Option<usize>> = vec![None; table.len()];
    let mut at_b: Vec<Option<usize>> = vec![None; table.len()];
    for (obj, list) in by_object.iter_mut().enumerate() {
        list.sort_by(|x, y| lo_cmp(&x.interval, &y.interval));
        let mut cursor = 0;
        for &k in table.on_object(obj) {
            let c = &table.crossings[k];
            let t = c.param_on(obj);
            while cursor < list.len() && upper_le(&list[cursor].interval, t) {
                cursor += 1;
            }
            let hit = list
                .get(cursor)
                .filter(|p| p.interval.contains(t))
                .map(|p| p.id);
            if c.a == obj {
                at_a[k] = hit;
            } else {
                at_b[k] = hit;
            }
        }
    }
    let mut edges = Vec::new();
    for (k, c) in table.crossings.iter().enumerate() {
        if let (Some(pa), Some(pb)) = (at_a[k], at_b[k]) {
            let (below, above) = match c.order {
                crate::geom::DepthOrder::Below => (pa, pb),
                crate::geom::DepthOrder::Above => (pb, pa),
            };
            edges.push(DepthEdge {
                below,
                above,
                crossing: k,
            });
        }
    }
    DepthGraph::from_edges(pieces.len(), edges, table)
}

fn lo_cmp(a: &Interval, b: &Interval) -> std::cmp::Ordering {
    match (&a.lo, &b.lo) {
        (None, None) => std::cmp::Ordering::Equal,
        (None, Some(_)) => std::cmp::Ordering::Less,
        (Some(_), None) => std::cmp::Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// `hi <= t`, i.e. the interval ends at or before `t`.
fn upper_le(iv: &Interval, t: &Scalar) -> bool {
    iv.hi.as_ref().is_some_and(|hi| hi <= t)
}

/// A topological order of the nodes, smallest available id first, or `None`
/// when the graph has a cycle.
pub fn depth_order(g: &DepthGraph) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; g.node_count()];
    for e in g.edges() {
        indeg[e.above] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..g.node_count())
        .filter(|&u| indeg[u] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(g.node_count());
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for v in g.successors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    (order.len() == g.node_count()).then_some(order)
}

/// Strongly connected components (iterative Tarjan). Components are listed in
/// reverse topological order; each is sorted by node id.
pub fn strongly_connected_components(g: &DepthGraph) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if g.offsets[u] + *pos < g.offsets[u + 1] {
                let v = g.edges[g.offsets[u] + *pos].above;
                *pos += 1;
                if index[v] == UNSEEN {
                    index[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == u {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Nodes that lie on some directed cycle.
pub fn cyclic_nodes(g: &DepthGraph) -> Vec<bool> {
    let mut mark = vec![false; g.node_count()];
    for comp in strongly_connected_components(g) {
        if comp.len() > 1 {
            for u in comp {
                mark[u] = true;
            }
        }
    }
    mark
}
