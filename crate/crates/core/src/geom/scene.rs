//! Scenes and their general-position validation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::objects::{Carrier, Line3, Object, ObjectId, SceneKind, Segment3};
use super::predicates::{pair_crossing, CrossingPoint, DepthOrder, IntCarrier, PairCrossing};
use super::scalar::{cross2, Point2, Scalar};
use super::GeomError;
use crate::scenes::GeneratorSpec;

/// A homogeneous collection of lines or segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    kind: SceneKind,
    objects: Vec<Object>,
    pub meta: Option<GeneratorSpec>,
}

impl Scene {
    pub fn new(kind: SceneKind, objects: Vec<Object>) -> Result<Self, GeomError> {
        if let Some(bad) = objects.iter().find(|o| o.kind() != kind) {
            return Err(GeomError::MixedKinds {
                expected: kind,
                id: bad.id(),
            });
        }
        Ok(Scene {
            kind,
            objects,
            meta: None,
        })
    }

    pub fn from_lines(lines: Vec<Line3>) -> Self {
        Scene {
            kind: SceneKind::Lines,
            objects: lines.into_iter().map(Object::Line).collect(),
            meta: None,
        }
    }

    pub fn from_segments(segments: Vec<Segment3>) -> Self {
        Scene {
            kind: SceneKind::Segments,
            objects: segments.into_iter().map(Object::Segment).collect(),
            meta: None,
        }
    }

    pub fn with_meta(mut self, meta: GeneratorSpec) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn kind(&self) -> SceneKind {
        self.kind
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn carriers(&self) -> Vec<Carrier> {
        self.objects.iter().map(Object::carrier).collect()
    }

    pub fn id_index(&self) -> HashMap<ObjectId, usize> {
        self.objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.id(), i))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationCode {
    DuplicateId,
    VerticalObject,
    ProjectionParallel,
    SpatialIntersection,
    ThreeConcurrent,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub ids: Vec<ObjectId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Checks the general-position assumptions: unique ids, no vertical objects,
/// no parallel (lines) or overlapping collinear (segments) projections, no two
/// objects meeting in space and no three projections through one point.
pub fn validate_scene(scene: &Scene) -> ValidationReport {
    let mut violations = Vec::new();

    let mut by_id: BTreeMap<ObjectId, Vec<ObjectId>> = BTreeMap::new();
    for o in scene.objects() {
        by_id.entry(o.id()).or_default().push(o.id());
    }
    for (_, ids) in by_id.into_iter().filter(|(_, v)| v.len() > 1) {
        violations.push(Violation {
            code: ViolationCode::DuplicateId,
            ids,
        });
    }

    let carriers = scene.carriers();
    let mut live = Vec::new();
    for (i, o) in scene.objects().iter().enumerate() {
        if o.is_vertical() {
            violations.push(Violation {
                code: ViolationCode::VerticalObject,
                ids: vec![o.id()],
            });
        } else {
            live.push(i);
        }
    }

    let id = |i: usize| scene.objects()[i].id();
    let small: Vec<Option<IntCarrier>> = carriers.iter().map(IntCarrier::new).collect();
    let mut at_point: HashMap<Point2, Vec<usize>> = HashMap::new();
    for (k, &i) in live.iter().enumerate() {
        for &j in &live[k + 1..] {
            let (a, b) = (&carriers[i], &carriers[j]);
            match pair_crossing(a, small[i].as_ref(), b, small[j].as_ref()) {
                PairCrossing::Parallel => {
                    if scene.kind() == SceneKind::Lines || collinear_overlap(a, b) {
                        violations.push(Violation {
                            code: ViolationCode::ProjectionParallel,
                            ids: vec![id(i), id(j)],
                        });
                    }
                }
                PairCrossing::Outside => {}
                PairCrossing::Hit(crossing, order) => {
                    if order == Ordering::Equal {
                        violations.push(Violation {
                            code: ViolationCode::SpatialIntersection,
                            ids: vec![id(i), id(j)],
                        });
                    }
                    let members = at_point.entry(crossing.point).or_default();
                    members.push(i);
                    members.push(j);
                }
            }
        }
    }
    for members in at_point.into_values() {
        if members.len() > 2 {
            let mut ids: Vec<ObjectId> = members.into_iter().map(id).collect();
            ids.sort();
            ids.dedup();
            violations.push(Violation {
                code: ViolationCode::ThreeConcurrent,
                ids,
            });
        }
    }

    ValidationReport::from_violations(violations)
}

/// For carriers with parallel projections: do the projected ranges overlap
/// along a common supporting line?
fn collinear_overlap(a: &Carrier, b: &Carrier) -> bool {
    let (da, w) = (&a.direction, b.origin.sub(&a.origin));
    if !cross2(&w.x, &w.y, &da.x, &da.y).is_zero() {
        return false;
    }
    let norm = &da.x * &da.x + &da.y * &da.y;
    if norm.is_zero() {
        return false;
    }
    let project = |t: Option<&Scalar>| -> Option<Scalar> {
        let t = t?;
        let p = b.xy_at(t);
        Some(((&p.x - &a.origin.x) * &da.x + (&p.y - &a.origin.y) * &da.y) / &norm)
    };
    let (Some(s0), Some(s1)) = (project(b.range.lo.as_ref()), project(b.range.hi.as_ref())) else {
        // an unbounded collinear partner always overlaps
        return true;
    };
    let (lo, hi) = if s0 <= s1 { (s0, s1) } else { (s1, s0) };
    let lo = match &a.range.lo {
        Some(l) => lo.max(l.clone()),
        None => lo,
    };
    let hi = match &a.range.hi {
        Some(h) => hi.min(h.clone()),
        None => hi,
    };
    lo < hi
}

/// One proper crossing between scene objects `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectCrossing {
    pub a: usize,
    pub b: usize,
    /// `ta` lives on `a`, `tb` on `b`.
    pub crossing: CrossingPoint,
    /// How `a` relates to `b` at the crossing.
    pub order: DepthOrder,
}

impl ObjectCrossing {
    /// `(below, above)` object indices.
    pub fn below_above(&self) -> (usize, usize) {
        match self.order {
            DepthOrder::Below => (self.a, self.b),
            DepthOrder::Above => (self.b, self.a),
        }
    }

    /// `(t on below, t on above)`.
    pub fn below_above_params(&self) -> (&Scalar, &Scalar) {
        match self.order {
            DepthOrder::Below => (&self.crossing.ta, &self.crossing.tb),
            DepthOrder::Above => (&self.crossing.tb, &self.crossing.ta),
        }
    }

    pub fn param_on(&self, object: usize) -> &Scalar {
        if object == self.a {
            &self.crossing.ta
        } else {
            &self.crossing.tb
        }
    }
}

/// All proper projected crossings of the scene, in `(a, b)` lexicographic
/// order. Vertical objects are skipped.
pub fn scene_crossings(scene: &Scene) -> Result<Vec<ObjectCrossing>, GeomError> {
    let carriers = scene.carriers();
    let small: Vec<Option<IntCarrier>> = carriers.iter().map(IntCarrier::new).collect();
    let live: Vec<usize> = (0..carriers.len())
        .filter(|&i| !scene.objects()[i].is_vertical())
        .collect();
    let mut out = Vec::new();
    for (k, &i) in live.iter().enumerate() {
        for &j in &live[k + 1..] {
            let PairCrossing::Hit(crossing, order) = pair_crossing(
                &carriers[i],
                small[i].as_ref(),
                &carriers[j],
                small[j].as_ref(),
            ) else {
                continue;
            };
            let order = match order {
                Ordering::Less => DepthOrder::Below,
                Ordering::Greater => DepthOrder::Above,
                Ordering::Equal => {
                    return Err(GeomError::EqualHeights {
                        point: Box::new(crossing.point),
                    })
                }
            };
            out.push(ObjectCrossing {
                a: i,
                b: j,
                crossing,
                order,
            });
        }
    }
    Ok(out)
}
