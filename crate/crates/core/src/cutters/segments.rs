//! Crossing-sensitive cutting for segments: a random sample's vertical
//! decomposition splits the plane into trapezoids, every segment is cut where
//! it meets a trapezoid boundary, and each trapezoid is handled by the
//! partition procedure.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CutterError;
use crate::depth::CrossingTable;
use crate::geom::{cross2, int, one, zero, CutSet, Interval, Point2, Scalar, Scene, SceneKind};
use crate::partition::{partition_clips, Clip, PartitionParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentRegime {
    /// No crossings at all.
    Empty,
    /// `X ≤ n`: every crossing is cut.
    Sparse,
    /// `X > n`: sample, decompose and recurse.
    Dense,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentOutcome {
    pub regime: SegmentRegime,
    pub cuts: CutSet,
    pub n: usize,
    pub crossing_count: usize,
    pub sample_size: usize,
    pub trapezoids: usize,
    /// Cuts placed on trapezoid boundaries and among sample segments.
    pub boundary_cuts: usize,
    pub max_trapezoid_load: usize,
}

pub fn segment_sensitive_cut(
    scene: &Scene,
    params: &PartitionParams,
) -> Result<CutSet, CutterError> {
    Ok(segment_sensitive_cut_traced(scene, params)?.cuts)
}

pub fn segment_sensitive_cut_traced(
    scene: &Scene,
    params: &PartitionParams,
) -> Result<SegmentOutcome, CutterError> {
    if scene.kind() != SceneKind::Segments {
        return Err(CutterError::WrongKind {
            expected: SceneKind::Segments,
            found: scene.kind(),
        });
    }
    params.check()?;
    let table = CrossingTable::new(scene)?;
    let n = scene.len();
    let x = table.len();
    let mut out = SegmentOutcome {
        regime: SegmentRegime::Empty,
        cuts: CutSet::new(),
        n,
        crossing_count: x,
        sample_size: 0,
        trapezoids: 0,
        boundary_cuts: 0,
        max_trapezoid_load: 0,
    };
    if x == 0 {
        return Ok(out);
    }
    let ids: Vec<_> = scene.objects().iter().map(|o| o.id()).collect();
    if x <= n {
        out.regime = SegmentRegime::Sparse;
        for c in table.crossings() {
            out.cuts.insert(ids[c.a], c.crossing.ta.clone());
            out.cuts.insert(ids[c.b], c.crossing.tb.clone());
        }
        return Ok(out);
    }

    out.regime = SegmentRegime::Dense;
    let r = (n * n).div_ceil(x).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut sample = rand::seq::index::sample(&mut rng, n, r).into_vec();
    sample.sort_unstable();
    out.sample_size = r;
    let carriers = scene.carriers();
    let segs: Vec<Seg2> = carriers
        .iter()
        .map(|c| Seg2 {
            o: c.origin.xy(),
            dx: c.direction.x.clone(),
            dy: c.direction.y.clone(),
        })
        .collect();
    let decomposition = Decomposition::new(&segs, &sample, &table);

    let mut in_sample = vec![false; n];
    for &s in &sample {
        in_sample[s] = true;
    }
    // sample segments are pieces of the boundary; cut them at their mutual crossings
    for c in table.crossings() {
        if in_sample[c.a] && in_sample[c.b] {
            out.cuts.insert(ids[c.a], c.crossing.ta.clone());
            out.cuts.insert(ids[c.b], c.crossing.tb.clone());
        }
    }
    let mut groups: BTreeMap<FaceKey, Vec<Clip>> = BTreeMap::new();
    for i in (0..n).filter(|&i| !in_sample[i]) {
        let params_i = decomposition.boundary_params(&segs[i]);
        for t in &params_i {
            out.cuts.insert(ids[i], t.clone());
        }
        for sub in Interval::unit().split_at(&params_i) {
            let p = segs[i].at(&sub.representative());
            if decomposition.on_boundary(&p) {
                continue;
            }
            groups
                .entry(decomposition.locate(&p))
                .or_default()
                .push(Clip {
                    index: i,
                    id: ids[i],
                    interval: sub,
                });
        }
    }
    out.boundary_cuts = out.cuts.len();
    out.trapezoids = groups.len();
    out.max_trapezoid_load = groups.values().map(Vec::len).max().unwrap_or(0);
    for clips in groups.into_values() {
        let sub = partition_clips(&table, &carriers, clips, params, &mut rng, None);
        out.cuts.merge(sub.cuts);
    }
    Ok(out)
}

/// A projected segment `o + t·(dx, dy)`, `t ∈ [0, 1]`.
#[derive(Clone, Debug)]
struct Seg2 {
    o: Point2,
    dx: Scalar,
    dy: Scalar,
}

impl Seg2 {
    fn at(&self, t: &Scalar) -> Point2 {
        Point2::new(&self.o.x + t * &self.dx, &self.o.y + t * &self.dy)
    }

    fn end(&self) -> Point2 {
        self.at(&one())
    }

    fn x_range(&self) -> (Scalar, Scalar) {
        let e = &self.o.x + &self.dx;
        if self.dx.is_negative() {
            (e, self.o.x.clone())
        } else {
            (self.o.x.clone(), e)
        }
    }

    /// Height above `x`; only for segments that are not parallel to the
    /// y axis and whose x-range holds `x`.
    fn y_at(&self, x: &Scalar) -> Scalar {
        &self.o.y + (x - &self.o.x) / &self.dx * &self.dy
    }

    fn spans(&self, x: &Scalar) -> bool {
        let (lo, hi) = self.x_range();
        !self.dx.is_zero() && &lo <= x && x <= &hi
    }

    fn contains(&self, p: &Point2) -> bool {
        let (wx, wy) = (&p.x - &self.o.x, &p.y - &self.o.y);
        if !cross2(&wx, &wy, &self.dx, &self.dy).is_zero() {
            return false;
        }
        let dot = &wx * &self.dx + &wy * &self.dy;
        let len2 = &self.dx * &self.dx + &self.dy * &self.dy;
        !dot.is_negative() && dot <= len2
    }
}

/// A closed boundary piece: a segment (`u ∈ [0, 1]`) or a ray (`u ≥ 0`).
#[derive(Clone, Debug)]
struct Elem {
    seg: Seg2,
    ray: bool,
}

impl Elem {
    /// Parameters in `(0, 1)` of `s` where it meets this element: a single
    /// crossing, or the ends of a collinear overlap.
    fn meet(&self, s: &Seg2) -> Vec<Scalar> {
        let e = &self.seg;
        let (wx, wy) = (&e.o.x - &s.o.x, &e.o.y - &s.o.y);
        let det = cross2(&s.dx, &s.dy, &e.dx, &e.dy);
        let inside = |t: &Scalar| t.is_positive() && t < &one();
        if !det.is_zero() {
            let t = cross2(&wx, &wy, &e.dx, &e.dy) / &det;
            let u = cross2(&wx, &wy, &s.dx, &s.dy) / &det;
            let on_elem = !u.is_negative() && (self.ray || u <= one());
            return if inside(&t) && on_elem {
                vec![t]
            } else {
                Vec::new()
            };
        }
        if !cross2(&wx, &wy, &s.dx, &s.dy).is_zero() {
            return Vec::new();
        }
        let len2 = &s.dx * &s.dx + &s.dy * &s.dy;
        let t0 = (&wx * &s.dx + &wy * &s.dy) / &len2;
        let ends = if self.ray {
            vec![t0]
        } else {
            let t1 = &t0 + (&e.dx * &s.dx + &e.dy * &s.dy) / &len2;
            vec![t0, t1]
        };
        ends.into_iter().filter(inside).collect()
    }

    fn contains(&self, p: &Point2) -> bool {
        if !self.ray {
            return self.seg.contains(p);
        }
        let e = &self.seg;
        let (wx, wy) = (&p.x - &e.o.x, &p.y - &e.o.y);
        cross2(&wx, &wy, &e.dx, &e.dy).is_zero() && !(&wx * &e.dx + &wy * &e.dy).is_negative()
    }
}

/// `(segment above, segment below, x of the left wall)`, by sample position.
type FaceKey = (Option<usize>, Option<usize>, Option<Scalar>);

/// Exact vertical decomposition of the sample's projections, built by brute
/// force.
struct Decomposition<'a> {
    segs: &'a [Seg2],
    sample: &'a [usize],
    vertices: Vec<Point2>,
    boundary: Vec<Elem>,
}

impl<'a> Decomposition<'a> {
    fn new(segs: &'a [Seg2], sample: &'a [usize], table: &CrossingTable) -> Self {
        let in_sample: HashSet<usize> = sample.iter().copied().collect();
        let mut vertices: BTreeSet<Point2> = BTreeSet::new();
        for &s in sample {
            vertices.insert(segs[s].o.clone());
            vertices.insert(segs[s].end());
        }
        for c in table.crossings() {
            if in_sample.contains(&c.a) && in_sample.contains(&c.b) {
                vertices.insert(c.crossing.point.clone());
            }
        }
        let vertices: Vec<Point2> = vertices.into_iter().collect();
        let mut boundary: Vec<Elem> = sample
            .iter()
            .map(|&s| Elem {
                seg: segs[s].clone(),
                ray: false,
            })
            .collect();
        for v in &vertices {
            let (up, down) = Self::wall_ends(segs, sample, v);
            for (end, sign) in [(up, 1), (down, -1)] {
                let (dy, ray) = match end {
                    Some(y) => (y - &v.y, false),
                    None => (int(sign), true),
                };
                boundary.push(Elem {
                    seg: Seg2 {
                        o: v.clone(),
                        dx: zero(),
                        dy,
                    },
                    ray,
                });
            }
        }
        Decomposition {
            segs,
            sample,
            vertices,
            boundary,
        }
    }

    /// Heights where the walls from `v` stop: the nearest sample segment above
    /// and below, ignoring segments through `v`.
    fn wall_ends(segs: &[Seg2], sample: &[usize], v: &Point2) -> (Option<Scalar>, Option<Scalar>) {
        let mut up: Option<Scalar> = None;
        let mut down: Option<Scalar> = None;
        let mut offer = |y: Scalar| {
            if y > v.y {
                if up.as_ref().is_none_or(|u| &y < u) {
                    up = Some(y);
                }
            } else if down.as_ref().is_none_or(|d| &y > d) {
                down = Some(y);
            }
        };
        for &s in sample {
            let seg = &segs[s];
            if seg.contains(v) {
                continue;
            }
            if seg.spans(&v.x) {
                offer(seg.y_at(&v.x));
            } else if seg.dx.is_zero() && seg.o.x == v.x {
                let (a, b) = (seg.o.y.clone(), &seg.o.y + &seg.dy);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                offer(if lo > v.y { lo } else { hi });
            }
        }
        (up, down)
    }

    /// Sorted parameters in `(0, 1)` where `s` meets the boundary.
    fn boundary_params(&self, s: &Seg2) -> Vec<Scalar> {
        let set: BTreeSet<Scalar> = self.boundary.iter().flat_map(|e| e.meet(s)).collect();
        set.into_iter().collect()
    }

    fn on_boundary(&self, p: &Point2) -> bool {
        self.boundary.iter().any(|e| e.contains(p))
    }

    /// The face holding `p`, which must not lie on the boundary.
    fn locate(&self, p: &Point2) -> FaceKey {
        let mut above: Option<(Scalar, usize)> = None;
        let mut below: Option<(Scalar, usize)> = None;
        for (k, &s) in self.sample.iter().enumerate() {
            let seg = &self.segs[s];
            if !seg.spans(&p.x) {
                continue;
            }
            let y = seg.y_at(&p.x);
            if y > p.y {
                if above.as_ref().is_none_or(|(u, _)| &y < u) {
                    above = Some((y, k));
                }
            } else if below.as_ref().is_none_or(|(d, _)| &y > d) {
                below = Some((y, k));
            }
        }
        let top = above.as_ref().map(|(_, k)| &self.segs[self.sample[*k]]);
        let bottom = below.as_ref().map(|(_, k)| &self.segs[self.sample[*k]]);
        let left_limit = [top, bottom]
            .into_iter()
            .flatten()
            .map(|s| s.x_range().0)
            .max();
        let left = self
            .vertices
            .iter()
            .filter(|v| v.x < p.x)
            .filter(|v| left_limit.as_ref().is_none_or(|l| &v.x >= l))
            .filter(|v| top.is_none_or(|s| v.y <= s.y_at(&v.x)))
            .filter(|v| bottom.is_none_or(|s| s.y_at(&v.x) <= v.y))
            .map(|v| v.x.clone())
            .max();
        (above.map(|(_, k)| k), below.map(|(_, k)| k), left)
    }
}
