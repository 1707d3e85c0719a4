//! Cut sets and the pieces they produce.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::objects::{Interval, ObjectId};
use super::scalar::{serde_scalar, Scalar};
use super::scene::Scene;
use super::GeomError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cut {
    pub id: ObjectId,
    #[serde(with = "serde_scalar")]
    pub t: Scalar,
}

/// A deduplicated set of cut points, ordered by `(object id, t)`.
///
/// Merging is set union, so it is associative and commutative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutSet {
    by_object: BTreeMap<ObjectId, BTreeSet<Scalar>>,
    len: usize,
}

impl CutSet {
    pub fn new() -> Self {
        CutSet::default()
    }

    pub fn insert(&mut self, id: ObjectId, t: Scalar) -> bool {
        let fresh = self.by_object.entry(id).or_default().insert(t);
        if fresh {
            self.len += 1;
        }
        fresh
    }

    pub fn merge(&mut self, other: CutSet) {
        for (id, ts) in other.by_object {
            for t in ts {
                self.insert(id, t);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (ObjectId, &Scalar)> {
        self.by_object
            .iter()
            .flat_map(|(&id, ts)| ts.iter().map(move |t| (id, t)))
    }

    pub fn contains(&self, id: ObjectId, t: &Scalar) -> bool {
        self.by_object.get(&id).is_some_and(|ts| ts.contains(t))
    }

    /// Sorted cut parameters on one object.
    pub fn params_of(&self, id: ObjectId) -> impl Iterator<Item = &Scalar> {
        self.by_object.get(&id).into_iter().flat_map(|ts| ts.iter())
    }

    pub fn to_vec(&self) -> Vec<Cut> {
        self.iter()
            .map(|(id, t)| Cut { id, t: t.clone() })
            .collect()
    }
}

impl FromIterator<Cut> for CutSet {
    fn from_iter<I: IntoIterator<Item = Cut>>(iter: I) -> Self {
        let mut set = CutSet::new();
        for c in iter {
            set.insert(c.id, c.t);
        }
        set
    }
}

impl Serialize for CutSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CutSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Vec::<Cut>::deserialize(d)?.into_iter().collect())
    }
}

/// A maximal uncut parameter interval of one scene object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub id: usize,
    pub parent: ObjectId,
    /// Position of the parent in the scene's object list.
    pub parent_index: usize,
    pub interval: Interval,
}

/// Splits every object at its cuts. Pieces are numbered in scene order, and
/// by increasing parameter within an object.
pub fn apply_cuts(scene: &Scene, cuts: &CutSet) -> Result<Vec<Piece>, GeomError> {
    let index = scene.id_index();
    let carriers = scene.carriers();
    let mut per_object: Vec<Vec<&Scalar>> = vec![Vec::new(); scene.len()];
    for (id, t) in cuts.iter() {
        let &i = index.get(&id).ok_or(GeomError::UnknownObject(id))?;
        if !carriers[i].range.contains(t) {
            return Err(GeomError::CutOutOfRange { id, t: t.clone() });
        }
        per_object[i].push(t);
    }

    let mut pieces = Vec::with_capacity(scene.len() + cuts.len());
    for (i, (object, ts)) in scene.objects().iter().zip(per_object).enumerate() {
        for interval in carriers[i].range.split_at(ts) {
            pieces.push(Piece {
                id: pieces.len(),
                parent: object.id(),
                parent_index: i,
                interval,
            });
        }
    }
    Ok(pieces)
}
