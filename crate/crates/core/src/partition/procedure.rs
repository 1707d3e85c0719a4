//! The recursive cutting procedure.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cells::{assign_clips, whole_clips, Clip};
use super::planes::{choose_planes, criticality_params_in, zero_set_params_in, PlaneSet};
use super::PartitionError;
use crate::depth::{strongly_connected_components, CrossingTable, DepthEdge, DepthGraph};
use crate::geom::{int, ratio, serde_scalar, Carrier, CutSet, ObjectId, Point3, Scalar, Scene};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PartitionParams {
    /// Number of planes per node.
    pub degree: usize,
    /// Sub-problems with at most this many objects are cut naively.
    pub leaf_threshold: usize,
    /// A draw is accepted when every cell holds at most this fraction of the
    /// node's objects.
    #[serde(with = "serde_scalar")]
    pub load_factor: Scalar,
    /// Extra plane draws before falling back to naive cuts.
    pub max_retries: usize,
    pub seed: u64,
    /// Drop objects outside every nontrivial strongly connected component of
    /// a cell's depth graph before recursing into it.
    pub prune_acyclic: bool,
}

impl Default for PartitionParams {
    fn default() -> Self {
        PartitionParams {
            degree: 4,
            leaf_threshold: 8,
            load_factor: ratio(1, 2),
            max_retries: 8,
            seed: 0,
            prune_acyclic: true,
        }
    }
}

impl PartitionParams {
    pub fn check(&self) -> Result<(), PartitionError> {
        if self.degree == 0 {
            return Err(PartitionError::BadParams(
                "degree must be at least 1".into(),
            ));
        }
        if self.leaf_threshold < 2 {
            return Err(PartitionError::BadParams(
                "leaf threshold must be at least 2".into(),
            ));
        }
        if self.load_factor <= int(0) || self.load_factor > int(1) {
            return Err(PartitionError::BadParams(
                "load factor must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    /// Planes were drawn, cuts emitted and the cells recursed into.
    Split,
    /// Small enough to cut naively.
    Leaf,
    /// No draw balanced the cells; cut naively.
    Fallback,
}

/// What happened at one node of the recursion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTrace {
    pub depth: usize,
    pub kind: NodeKind,
    pub size: usize,
    /// Plane draws made at this node.
    pub draws: usize,
    /// Largest child size after pruning; for a fallback, the best load any
    /// draw achieved.
    pub max_load: usize,
    pub planes: PlaneSet,
    /// Zero-set and criticality cuts emitted here.
    pub step_cuts: usize,
    /// The most such cuts landing on a single object.
    pub max_step_cuts_per_object: usize,
    /// Naive cuts emitted here.
    pub naive_cuts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOutcome {
    pub cuts: CutSet,
    pub nodes: Vec<NodeTrace>,
}

impl PartitionOutcome {
    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }
}

/// Cuts the scene until its depth relation is acyclic.
pub fn partition_cut(scene: &Scene, params: &PartitionParams) -> Result<CutSet, PartitionError> {
    Ok(partition_cut_traced(scene, params)?.cuts)
}

pub fn partition_cut_traced(
    scene: &Scene,
    params: &PartitionParams,
) -> Result<PartitionOutcome, PartitionError> {
    params.check()?;
    let table = CrossingTable::new(scene)?;
    let carriers = scene.carriers();
    let clips = whole_clips(scene, &carriers);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok(partition_clips(
        &table, &carriers, clips, params, &mut rng, None,
    ))
}

/// Like [`partition_cut_traced`] but the root uses `planes` regardless of
/// its size or cell loads.
pub fn partition_cut_with_planes(
    scene: &Scene,
    planes: &PlaneSet,
    params: &PartitionParams,
) -> Result<PartitionOutcome, PartitionError> {
    params.check()?;
    let table = CrossingTable::new(scene)?;
    let carriers = scene.carriers();
    let clips = whole_clips(scene, &carriers);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok(partition_clips(
        &table,
        &carriers,
        clips,
        params,
        &mut rng,
        Some(planes.clone()),
    ))
}

/// Runs the procedure on an arbitrary set of clips; clips of one object
/// must be disjoint.
/// `table` must hold the crossings of the scene `carriers` come from.
pub fn partition_clips(
    table: &CrossingTable,
    carriers: &[Carrier],
    clips: Vec<Clip>,
    params: &PartitionParams,
    rng: &mut ChaCha8Rng,
    root_planes: Option<PlaneSet>,
) -> PartitionOutcome {
    let mut run = Run {
        table,
        carriers,
        params,
        rng,
        cuts: CutSet::new(),
        nodes: Vec::new(),
    };
    run.node(clips, 0, root_planes);
    PartitionOutcome {
        cuts: run.cuts,
        nodes: run.nodes,
    }
}

struct Run<'a> {
    table: &'a CrossingTable,
    carriers: &'a [Carrier],
    params: &'a PartitionParams,
    rng: &'a mut ChaCha8Rng,
    cuts: CutSet,
    nodes: Vec<NodeTrace>,
}

impl Run<'_> {
    fn node(&mut self, clips: Vec<Clip>, depth: usize, fixed: Option<PlaneSet>) {
        let n = clips.len();
        if n == 0 {
            return;
        }
        let mut trace = NodeTrace {
            depth,
            kind: NodeKind::Leaf,
            size: n,
            draws: 0,
            max_load: 0,
            planes: PlaneSet::empty(),
            step_cuts: 0,
            max_step_cuts_per_object: 0,
            naive_cuts: 0,
        };
        let chosen = match fixed {
            Some(planes) => {
                let children = self.children(&clips, &planes);
                Some((planes, children))
            }
            None if n <= self.params.leaf_threshold => None,
            None => {
                trace.kind = NodeKind::Fallback;
                self.draw(&clips, &mut trace)
            }
        };
        let Some((planes, children)) = chosen else {
            trace.naive_cuts = self.naive(&clips);
            self.nodes.push(trace);
            return;
        };
        trace.kind = NodeKind::Split;
        trace.max_load = children.iter().map(Vec::len).max().unwrap_or(0);
        let mut per_object: BTreeMap<ObjectId, usize> = BTreeMap::new();
        for clip in &clips {
            let carrier = &self.carriers[clip.index];
            let mut params = zero_set_params_in(carrier, &clip.interval, &planes);
            params.extend(criticality_params_in(carrier, &clip.interval, &planes));
            params.sort();
            params.dedup();
            *per_object.entry(clip.id).or_default() += params.len();
            trace.step_cuts += params.len();
            for t in params {
                self.cuts.insert(clip.id, t);
            }
        }
        trace.max_step_cuts_per_object = per_object.values().copied().max().unwrap_or(0);
        trace.planes = planes;
        self.nodes.push(trace);
        for child in children {
            self.node(child, depth + 1, None);
        }
    }

    /// Draws plane sets until one balances the cells.
    fn draw(
        &mut self,
        clips: &[Clip],
        trace: &mut NodeTrace,
    ) -> Option<(PlaneSet, Vec<Vec<Clip>>)> {
        let points: Vec<Point3> = clips
            .iter()
            .map(|c| self.carriers[c.index].point_at(&c.interval.representative()))
            .collect();
        let bound = &self.params.load_factor * int(clips.len() as i64);
        trace.max_load = usize::MAX;
        for _ in 0..=self.params.max_retries {
            trace.draws += 1;
            let planes = choose_planes(&points, self.params.degree, self.rng);
            let children = self.children(clips, &planes);
            let load = children.iter().map(Vec::len).max().unwrap_or(0);
            trace.max_load = trace.max_load.min(load);
            if int(load as i64) <= bound {
                return Some((planes, children));
            }
        }
        None
    }

    fn children(&self, clips: &[Clip], planes: &PlaneSet) -> Vec<Vec<Clip>> {
        assign_clips(clips, self.carriers, planes)
            .into_cells()
            .map(|(_, cell)| {
                if self.params.prune_acyclic {
                    self.prune(cell)
                } else {
                    cell
                }
            })
            .filter(|cell| !cell.is_empty())
            .collect()
    }

    /// Keeps the clips lying in a nontrivial strongly connected component.
    fn prune(&self, clips: Vec<Clip>) -> Vec<Clip> {
        let edges = clip_edges(self.table, &clips);
        let g = DepthGraph::from_edges(clips.len(), edges, self.table);
        let mut keep = vec![false; clips.len()];
        for comp in strongly_connected_components(&g) {
            if comp.len() > 1 {
                for u in comp {
                    keep[u] = true;
                }
            }
        }
        clips
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect()
    }

    /// Cuts both clips at every crossing between two of them.
    fn naive(&mut self, clips: &[Clip]) -> usize {
        let before = self.cuts.len();
        for e in clip_edges(self.table, clips) {
            let c = &self.table.crossings()[e.crossing];
            let (below, above) = (&clips[e.below], &clips[e.above]);
            self.cuts.insert(below.id, c.param_on(below.index).clone());
            self.cuts.insert(above.id, c.param_on(above.index).clone());
        }
        self.cuts.len() - before
    }
}

/// Depth edges among clips, with clip positions as nodes. Clips of one
/// object must be disjoint.
pub fn clip_edges(table: &CrossingTable, clips: &[Clip]) -> Vec<DepthEdge> {
    let mut pos: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, c) in clips.iter().enumerate() {
        pos.entry(c.index).or_default().push(i);
    }
    let crossings = table.crossings();
    let mut edges = Vec::new();
    for (i, clip) in clips.iter().enumerate() {
        let list = table.on_object(clip.index);
        let iv = &clip.interval;
        let start = match &iv.lo {
            Some(lo) => list.partition_point(|&k| crossings[k].param_on(clip.index) <= lo),
            None => 0,
        };
        for &k in &list[start..] {
            let c = &crossings[k];
            let t = c.param_on(clip.index);
            if iv.hi.as_ref().is_some_and(|hi| t >= hi) {
                break;
            }
            if c.a != clip.index {
                continue;
            }
            let Some(others) = pos.get(&c.b) else {
                continue;
            };
            let Some(&j) = others
                .iter()
                .find(|&&j| clips[j].interval.contains(&c.crossing.tb))
            else {
                continue;
            };
            let (below, above) = match c.order {
                crate::geom::DepthOrder::Below => (i, j),
                crate::geom::DepthOrder::Above => (j, i),
            };
            edges.push(DepthEdge {
                below,
                above,
                crossing: k,
            });
        }
    }
    edges
}
