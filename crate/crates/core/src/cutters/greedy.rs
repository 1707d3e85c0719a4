use crate::depth::{find_simple_cycle_with, CrossingTable, DepthEdge, DepthGraph};
use crate::geom::{half, CutSet, DepthOrder, GeomError, Interval, Piece, Scalar, Scene};

/// Repeatedly finds a projection-simple cycle and cuts its lowest-id piece
/// at the midpoint of that piece's cycle edge.
pub fn greedy_cycle_cut(scene: &Scene) -> Result<CutSet, GeomError> {
    let table = CrossingTable::new(scene)?;
    let carriers = scene.carriers();
    let mut state = Pieces::new(scene, &table);
    let mut cuts = CutSet::new();
    loop {
        let g = state.graph(&table);
        let Some(cycle) = find_simple_cycle_with(&g, &carriers, &state.pieces) else {
            break;
        };
        let i = (0..cycle.len())
            .min_by_key(|&i| cycle.pieces[i])
            .expect("cycles are nonempty");
        let (arrive, leave) = cycle.edge_params(i);
        let t = half(&(arrive + leave));
        let u = cycle.pieces[i];
        cuts.insert(state.pieces[u].parent, t.clone());
        state.split(&table, u, t);
    }
    Ok(cuts)
}

/// Pieces kept in an arena: splitting piece `u` shrinks it to the lower part
/// and appends the upper part, so existing ids stay valid.
struct Pieces {
    pieces: Vec<Piece>,
    /// Piece holding each crossing on its `a` and `b` object.
    at: Vec<[Option<usize>; 2]>,
    /// Whether the `a` object passes below at each crossing.
    a_below: Vec<bool>,
}

impl Pieces {
    fn new(scene: &Scene, table: &CrossingTable) -> Self {
        let pieces = scene
            .objects()
            .iter()
            .enumerate()
            .map(|(i, o)| Piece {
                id: i,
                parent: o.id(),
                parent_index: i,
                interval: o.carrier().range,
            })
            .collect();
        let at = table
            .crossings()
            .iter()
            .map(|c| [Some(c.a), Some(c.b)])
            .collect();
        let a_below = table
            .crossings()
            .iter()
            .map(|c| c.order == DepthOrder::Below)
            .collect();
        Pieces {
            pieces,
            at,
            a_below,
        }
    }

    fn graph(&self, table: &CrossingTable) -> DepthGraph {
        let mut out = Vec::with_capacity(self.at.len());
        for (k, (at, &a_below)) in self.at.iter().zip(&self.a_below).enumerate() {
            if let [Some(pa), Some(pb)] = *at {
                let (below, above) = if a_below { (pa, pb) } else { (pb, pa) };
                out.push(DepthEdge {
                    below,
                    above,
                    crossing: k,
                });
            }
        }
        DepthGraph::from_edges(self.pieces.len(), out, table)
    }

    fn split(&mut self, table: &CrossingTable, u: usize, t: Scalar) {
        let obj = self.pieces[u].parent_index;
        let old = self.pieces[u].interval.clone();
        let v = self.pieces.len();
        self.pieces.push(Piece {
            id: v,
            parent: self.pieces[u].parent,
            parent_index: obj,
            interval: Interval::new(Some(t.clone()), old.hi.clone()),
        });
        self.pieces[u].interval = Interval::new(old.lo.clone(), Some(t.clone()));
        let crossings = table.crossings();
        let list = table.on_object(obj);
        let start = match &old.lo {
            Some(lo) => list.partition_point(|&k| crossings[k].param_on(obj) <= lo),
            None => 0,
        };
        for &k in &list[start..] {
            let s = crossings[k].param_on(obj);
            if old.hi.as_ref().is_some_and(|hi| s >= hi) {
                break;
            }
            let side = usize::from(crossings[k].a != obj);
            self.at[k][side] = match s.cmp(&t) {
                std::cmp::Ordering::Less => Some(u),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(v),
            };
        }
    }
}
