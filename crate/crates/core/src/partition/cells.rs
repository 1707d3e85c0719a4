//! Sign-vector cells of a plane arrangement and the clipped objects they
//! contain.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::planes::PlaneSet;
use crate::geom::{Carrier, Interval, ObjectId, Scalar, Scene};

/// The part of one scene object inside the current region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clip {
    /// Position of the object in the scene.
    pub index: usize,
    pub id: ObjectId,
    pub interval: Interval,
}

/// Side of each plane, `true` meaning above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<bool>);

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &above in &self.0 {
            f.write_str(if above { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Realized sign vectors and the clips realizing them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellMap {
    cells: BTreeMap<SignVector, Vec<Clip>>,
}

impl CellMap {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, sign: &SignVector) -> Option<&[Clip]> {
        self.cells.get(sign).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SignVector, &[Clip])> {
        self.cells.iter().map(|(s, c)| (s, c.as_slice()))
    }

    /// Ids in one cell, in clip order.
    pub fn ids(&self, sign: &SignVector) -> Vec<ObjectId> {
        self.get(sign)
            .unwrap_or_default()
            .iter()
            .map(|c| c.id)
            .collect()
    }

    pub fn max_load(&self) -> usize {
        self.cells.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn into_cells(self) -> impl Iterator<Item = (SignVector, Vec<Clip>)> {
        self.cells.into_iter()
    }
}

/// Splits each clip at its plane crossings and files every open sub-interval
/// under the sign vector it realizes. Clips lying in a plane are dropped.
pub fn assign_clips(clips: &[Clip], carriers: &[Carrier], planes: &PlaneSet) -> CellMap {
    let mut cells: BTreeMap<SignVector, Vec<Clip>> = BTreeMap::new();
    'clips: for clip in clips {
        let carrier = &carriers[clip.index];
        let iv = &clip.interval;
        // per plane: the first sub-interval above it, counted in `params`
        let mut crossings: Vec<(bool, Option<Scalar>)> = Vec::with_capacity(planes.len());
        for p in planes.planes() {
            let (f0, f1) = p.offset_along(carrier);
            if f1.is_zero() {
                if f0.is_zero() {
                    continue 'clips;
                }
                crossings.push((f0.is_positive(), None));
            } else {
                crossings.push((f1.is_positive(), Some(-f0 / f1)));
            }
        }
        let mut params: Vec<Scalar> = crossings
            .iter()
            .filter_map(|(_, t)| t.clone())
            .filter(|t| iv.contains(t))
            .collect();
        params.sort();
        params.dedup();
        let subs = iv.split_at(&params);
        let mut signs = vec![SignVector(Vec::with_capacity(planes.len())); subs.len()];
        for (rising, t) in &crossings {
            // index of the first sub-interval after the crossing
            let first_after = match t {
                None => 0,
                Some(t) if iv.lo.as_ref().is_some_and(|lo| t <= lo) => 0,
                Some(t) if iv.hi.as_ref().is_some_and(|hi| t >= hi) => subs.len(),
                Some(t) => params.partition_point(|x| x < t) + 1,
            };
            for (k, sign) in signs.iter_mut().enumerate() {
                let after = t.is_none() || k >= first_after;
                sign.0.push(after == *rising);
            }
        }
        for (sub, sign) in subs.into_iter().zip(signs) {
            cells.entry(sign).or_default().push(Clip {
                index: clip.index,
                id: clip.id,
                interval: sub,
            });
        }
    }
    CellMap { cells }
}

/// Whole objects of `scene` assigned to the cells of `planes`.
pub fn assign_cells(scene: &Scene, planes: &PlaneSet) -> CellMap {
    let carriers = scene.carriers();
    assign_clips(&whole_clips(scene, &carriers), &carriers, planes)
}

pub fn whole_clips(scene: &Scene, carriers: &[Carrier]) -> Vec<Clip> {
    scene
        .objects()
        .iter()
        .zip(carriers)
        .enumerate()
        .map(|(index, (o, c))| Clip {
            index,
            id: o.id(),
            interval: c.range.clone(),
        })
        .collect()
}
