//! Depth cycles: search, shortcutting to projection-simple cycles, and the
//! spatial path that realizes a cycle.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::graph::{strongly_connected_components, CrossingTable, DepthEdge, DepthGraph};
use crate::geom::{
    apply_cuts, carrier_crossing, cross2, Carrier, CrossingPoint, CutSet, GeomError, Interval,
    Piece, Point2, Point3, Scalar, Scene,
};

/// `pieces[0] ≺ pieces[1] ≺ … ≺ pieces[k-1] ≺ pieces[0]`.
///
/// `crossings[i]` witnesses `pieces[i] ≺ pieces[i+1]` (indices mod k), with
/// `ta` on `pieces[i]` and `tb` on `pieces[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleCycle {
    pub pieces: Vec<usize>,
    pub crossings: Vec<CrossingPoint>,
}

impl SimpleCycle {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Parameters `(arrive, leave)` delimiting the edge `e_i` on `pieces[i]`.
    pub fn edge_params(&self, i: usize) -> (&Scalar, &Scalar) {
        let k = self.len();
        (&self.crossings[(i + k - 1) % k].tb, &self.crossings[i].ta)
    }

    /// Closed parameter range of `e_i`, low end first.
    pub fn edge_range(&self, i: usize) -> (&Scalar, &Scalar) {
        let (a, b) = self.edge_params(i);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// The same pieces traversed backwards. This is not a cycle of `≺`; it is
    /// useful for exercising orientation checks.
    pub fn reversed(&self) -> SimpleCycle {
        let k = self.len();
        SimpleCycle {
            pieces: self.pieces.iter().rev().copied().collect(),
            crossings: (0..k)
                .map(|i| self.crossings[(2 * k - 2 - i) % k].swapped())
                .collect(),
        }
    }

    fn rotated_to_min(&self) -> SimpleCycle {
        let r = (0..self.len()).min_by_key(|&i| self.pieces[i]).unwrap_or(0);
        let k = self.len();
        SimpleCycle {
            pieces: (0..k).map(|i| self.pieces[(i + r) % k]).collect(),
            crossings: (0..k)
                .map(|i| self.crossings[(i + r) % k].clone())
                .collect(),
        }
    }
}

/// The closed path `v1⁻ v1⁺ v2⁻ v2⁺ … vk⁻ vk⁺ v1⁻`: `e_i = vi⁻ vi⁺` runs along
/// piece `i`, and `vi⁺ → v(i+1)⁻` is an upward vertical jump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePath {
    pub vertices: Vec<Point3>,
}

impl CyclePath {
    pub fn len(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (&Point3, &Point3) {
        (&self.vertices[2 * i], &self.vertices[2 * i + 1])
    }

    pub fn jump(&self, i: usize) -> (&Point3, &Point3) {
        (
            &self.vertices[2 * i + 1],
            &self.vertices[(2 * i + 2) % self.vertices.len()],
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycleError {
    #[error("a cycle needs at least 3 pieces, got {0}")]
    NotACycle(usize),
    #[error("jump {0} does not go upward")]
    OrientationViolation(usize),
    #[error("crossing {0} is not a crossing of its two pieces")]
    CrossingMismatch(usize),
}

/// Checks that `c` is a cycle of `≺` among `pieces` and returns its path.
pub fn realize_path(
    c: &SimpleCycle,
    scene: &Scene,
    pieces: &[Piece],
) -> Result<CyclePath, CycleError> {
    realize_path_with(c, &scene.carriers(), pieces)
}

pub fn realize_path_with(
    c: &SimpleCycle,
    carriers: &[Carrier],
    pieces: &[Piece],
) -> Result<CyclePath, CycleError> {
    let k = c.len();
    if k < 3 || c.crossings.len() != k {
        return Err(CycleError::NotACycle(k));
    }
    for i in 0..k {
        check_crossing(c, i, carriers, pieces)?;
    }
    let mut vertices = Vec::with_capacity(2 * k);
    for i in 0..k {
        let (arrive, leave) = c.edge_params(i);
        let carrier = &carriers[pieces[c.pieces[i]].parent_index];
        vertices.push(carrier.point_at(arrive));
        vertices.push(carrier.point_at(leave));
    }
    Ok(CyclePath { vertices })
}

/// Checks that `crossings[i]` is a crossing of pieces `i` and `i + 1` at
/// which the path jumps upward.
fn check_crossing(
    c: &SimpleCycle,
    i: usize,
    carriers: &[Carrier],
    pieces: &[Piece],
) -> Result<(), CycleError> {
    let j = (i + 1) % c.len();
    let (pi, pj) = (&pieces[c.pieces[i]], &pieces[c.pieces[j]]);
    let (ci, cj) = (&carriers[pi.parent_index], &carriers[pj.parent_index]);
    let x = &c.crossings[i];
    let inside = pi.interval.contains(&x.ta) && pj.interval.contains(&x.tb);
    if !inside || ci.xy_at(&x.ta) != x.point || cj.xy_at(&x.tb) != x.point {
        return Err(CycleError::CrossingMismatch(i));
    }
    if ci.z_at(&x.ta) >= cj.z_at(&x.tb) {
        return Err(CycleError::OrientationViolation(i));
    }
    Ok(())
}

/// Any directed cycle of `g`: a shortest cycle through the smallest node of
/// the first nontrivial strongly connected component (by smallest member).
pub fn find_cycle(g: &DepthGraph) -> Option<SimpleCycle> {
    let comp = strongly_connected_components(g)
        .into_iter()
        .filter(|c| c.len() > 1)
        .min_by_key(|c| c[0])?;
    let mut member = vec![false; g.node_count()];
    for &u in &comp {
        member[u] = true;
    }
    let start = comp[0];
    let mut via: Vec<Option<DepthEdge>> = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for e in g.out_edges(u) {
            if e.above == start {
                let mut edges = vec![*e];
                let mut cur = u;
                while let Some(pe) = via[cur] {
                    edges.push(pe);
                    cur = pe.below;
                }
                edges.reverse();
                return Some(SimpleCycle {
                    pieces: edges.iter().map(|e| e.below).collect(),
                    crossings: edges.iter().map(|e| g.crossing_point(e)).collect(),
                });
            }
            if member[e.above] && !seen[e.above] {
                seen[e.above] = true;
                via[e.above] = Some(*e);
                queue.push_back(e.above);
            }
        }
    }
    None
}

/// A cycle of `g` whose projection does not cross itself, or `None` when `g`
/// is acyclic.
pub fn find_simple_cycle(g: &DepthGraph, scene: &Scene, pieces: &[Piece]) -> Option<SimpleCycle> {
    find_simple_cycle_with(g, &scene.carriers(), pieces)
}

pub fn find_simple_cycle_with(
    g: &DepthGraph,
    carriers: &[Carrier],
    pieces: &[Piece],
) -> Option<SimpleCycle> {
    let mut cycle = find_cycle(g)?;
    while let Some(shorter) = shortcut_once(&cycle, carriers, pieces) {
        cycle = shorter;
    }
    Some(cycle.rotated_to_min())
}

/// The first self-crossing of the projected cycle, scanning edge pairs from
/// the smallest-id piece: `(i, j, t_i, t_j)` with `i < j` non-adjacent.
pub fn first_self_crossing(
    c: &SimpleCycle,
    carriers: &[Carrier],
    pieces: &[Piece],
) -> Option<(usize, usize, Scalar, Scalar)> {
    let k = c.len();
    for i in 0..k {
        for j in i + 2..k {
            if i == 0 && j == k - 1 {
                continue;
            }
            let (pi, pj) = (&pieces[c.pieces[i]], &pieces[c.pieces[j]]);
            if pi.parent_index == pj.parent_index {
                continue;
            }
            let Some((ti, tj)) =
                carrier_crossing(&carriers[pi.parent_index], &carriers[pj.parent_index])
            else {
                continue;
            };
            let (lo_i, hi_i) = c.edge_range(i);
            let (lo_j, hi_j) = c.edge_range(j);
            if lo_i <= &ti && ti <= *hi_i && lo_j <= &tj && tj <= *hi_j {
                return Some((i, j, ti, tj));
            }
        }
    }
    None
}

/// Splits the cycle at its first projected self-crossing and keeps the part
/// that is again a cycle of `≺`. `None` when the projection is already
/// simple.
pub fn shortcut_once(
    c: &SimpleCycle,
    carriers: &[Carrier],
    pieces: &[Piece],
) -> Option<SimpleCycle> {
    let c = c.rotated_to_min();
    let k = c.len();
    let (i, j, ti, tj) = first_self_crossing(&c, carriers, pieces)?;
    let (ci, cj) = (
        &carriers[pieces[c.pieces[i]].parent_index],
        &carriers[pieces[c.pieces[j]].parent_index],
    );
    let w = ci.xy_at(&ti);
    let candidate = if cj.z_at(&tj) < ci.z_at(&ti) {
        // pieces i..=j, closed by the jump from piece j up to piece i
        let mut crossings: Vec<CrossingPoint> = c.crossings[i..j].to_vec();
        crossings.push(CrossingPoint {
            ta: tj,
            tb: ti,
            point: w,
        });
        SimpleCycle {
            pieces: c.pieces[i..=j].to_vec(),
            crossings,
        }
    } else {
        // pieces j..k then 0..=i, closed by the jump from piece i up to piece j
        let mut pcs: Vec<usize> = c.pieces[j..].to_vec();
        pcs.extend_from_slice(&c.pieces[..=i]);
        let mut crossings: Vec<CrossingPoint> = c.crossings[j..k].to_vec();
        crossings.extend_from_slice(&c.crossings[..i]);
        crossings.push(CrossingPoint {
            ta: ti,
            tb: tj,
            point: w,
        });
        SimpleCycle {
            pieces: pcs,
            crossings,
        }
    };
    // Every crossing but the new closing one comes from `c`; confirm that one.
    let last = candidate.len() - 1;
    match check_crossing(&candidate, last, carriers, pieces) {
        Ok(()) if candidate.len() >= 3 => Some(candidate),
        Ok(()) => panic!(
            "shortcut produced a {}-cycle; scene violates general position",
            candidate.len()
        ),
        Err(e) => {
            panic!("shortcut produced an invalid cycle ({e}); scene violates general position")
        }
    }
}

/// True when the projected cycle has no crossing between non-adjacent edges.
pub fn projection_is_simple(c: &SimpleCycle, carriers: &[Carrier], pieces: &[Piece]) -> bool {
    first_self_crossing(c, carriers, pieces).is_none()
}

/// All triangular cycles among the (uncut) scene objects, each reported once,
/// starting at its smallest object index. Piece ids equal object indices.
pub fn enumerate_triangular_cycles(scene: &Scene) -> Result<Vec<SimpleCycle>, GeomError> {
    let table = CrossingTable::new(scene)?;
    let n = scene.len();
    // below[a * n + b] = crossing index when a ≺ b
    let mut below: Vec<Option<usize>> = vec![None; n * n];
    for (k, c) in table.crossings().iter().enumerate() {
        let (lo, hi) = c.below_above();
        below[lo * n + hi] = Some(k);
    }
    let edge = |a: usize, b: usize| below[a * n + b];
    let point = |a: usize, b: usize| -> CrossingPoint {
        let c = &table.crossings()[edge(a, b).expect("edge exists")];
        let (ta, tb) = c.below_above_params();
        CrossingPoint {
            ta: ta.clone(),
            tb: tb.clone(),
            point: c.crossing.point.clone(),
        }
    };
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let order = if edge(a, b).is_some() && edge(b, c).is_some() && edge(c, a).is_some()
                {
                    [a, b, c]
                } else if edge(a, c).is_some() && edge(c, b).is_some() && edge(b, a).is_some() {
                    [a, c, b]
                } else {
                    continue;
                };
                let crossings = (0..3)
                    .map(|i| point(order[i], order[(i + 1) % 3]))
                    .collect();
                out.push(SimpleCycle {
                    pieces: order.to_vec(),
                    crossings,
                });
            }
        }
    }
    Ok(out)
}

/// Pieces of the uncut scene (one per object), matching the piece ids used by
/// [`enumerate_triangular_cycles`].
pub fn whole_pieces(scene: &Scene) -> Vec<Piece> {
    apply_cuts(scene, &CutSet::new()).expect("empty cut set is always valid")
}

/// A triangular cycle is elementary when no other object's projection meets
/// the interior of its projected triangle.
/// Piece ids must be object indices, as produced by
/// [`enumerate_triangular_cycles`].
pub fn is_elementary(c: &SimpleCycle, scene: &Scene) -> bool {
    is_elementary_with(c, &scene.carriers())
}

pub fn is_elementary_with(c: &SimpleCycle, carriers: &[Carrier]) -> bool {
    if c.len() != 3 {
        return false;
    }
    let tri: Vec<&Point2> = c.crossings.iter().map(|x| &x.point).collect();
    (0..carriers.len())
        .filter(|o| !c.pieces.contains(o))
        .all(|o| !meets_open_triangle(&carriers[o], &tri))
}

/// Whether the carrier (within its range) passes through the open triangle.
pub fn meets_open_triangle(carrier: &Carrier, tri: &[&Point2]) -> bool {
    if carrier.range.lo.is_none() && carrier.range.hi.is_none() {
        // a full line meets the open triangle iff it strictly separates two vertices
        let side = |v: &Point2| {
            let (wx, wy) = (&v.x - &carrier.origin.x, &v.y - &carrier.origin.y);
            cross2(&carrier.direction.x, &carrier.direction.y, &wx, &wy).cmp(&Scalar::zero())
        };
        let sides: Vec<Ordering> = tri.iter().map(|v| side(v)).collect();
        return sides.contains(&Ordering::Greater) && sides.contains(&Ordering::Less);
    }
    let mut feasible = carrier.range.clone();
    for e in 0..3 {
        let (a, b, third) = (tri[e], tri[(e + 1) % 3], tri[(e + 2) % 3]);
        let (ex, ey) = (&b.x - &a.x, &b.y - &a.y);
        let side = cross2(&ex, &ey, &(&third.x - &a.x), &(&third.y - &a.y));
        let sign = match side.cmp(&Scalar::zero()) {
            Ordering::Greater => Scalar::from_integer(1.into()),
            Ordering::Less => Scalar::from_integer((-1).into()),
            Ordering::Equal => return false,
        };
        let alpha = cross2(
            &ex,
            &ey,
            &(&carrier.origin.x - &a.x),
            &(&carrier.origin.y - &a.y),
        ) * &sign;
        let beta = cross2(&ex, &ey, &carrier.direction.x, &carrier.direction.y) * &sign;
        // alpha + beta t > 0
        let half = match beta.cmp(&Scalar::zero()) {
            Ordering::Equal => {
                if alpha > Scalar::zero() {
                    continue;
                }
                return false;
            }
            Ordering::Greater => Interval::new(Some(-&alpha / &beta), None),
            Ordering::Less => Interval::new(None, Some(-&alpha / &beta)),
        };
        feasible = feasible.intersect(&half);
        if feasible.is_empty() {
            return false;
        }
    }
    !feasible.is_empty()
}
