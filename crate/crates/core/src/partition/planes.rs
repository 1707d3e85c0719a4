//! Non-vertical planes, the level function and the cuts they induce on a
//! carrier.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PartitionError;
use crate::geom::{int, serde_scalar, Carrier, CutSet, Interval, Object, Point3, Scalar};

/// `a·x + b·y + c·z + d = 0` with `c ≠ 0`, stored with `c = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Plane {
    #[serde(with = "serde_scalar")]
    pub a: Scalar,
    #[serde(with = "serde_scalar")]
    pub b: Scalar,
    #[serde(with = "serde_scalar")]
    pub c: Scalar,
    #[serde(with = "serde_scalar")]
    pub d: Scalar,
}

impl Plane {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self, PartitionError> {
        if c.is_zero() {
            return Err(PartitionError::VerticalPlane);
        }
        Ok(Plane {
            a: a / &c,
            b: b / &c,
            d: d / &c,
            c: int(1),
        })
    }

    /// The plane `z = h`.
    pub fn horizontal(h: Scalar) -> Self {
        Plane {
            a: int(0),
            b: int(0),
            c: int(1),
            d: -h,
        }
    }

    /// Height of the plane above `(x, y)`.
    pub fn height_at(&self, x: &Scalar, y: &Scalar) -> Scalar {
        -(&self.a * x + &self.b * y + &self.d)
    }

    /// `Greater` when `q` is above the plane.
    pub fn side(&self, q: &Point3) -> Ordering {
        q.z.cmp(&self.height_at(&q.x, &q.y))
    }

    /// The plane restricted to the vertical plane through `carrier`:
    /// `z = α + β·t`.
    pub fn restrict(&self, carrier: &Carrier) -> (Scalar, Scalar) {
        let o = &carrier.origin;
        let v = &carrier.direction;
        let alpha = -(&self.a * &o.x + &self.b * &o.y + &self.d);
        let beta = -(&self.a * &v.x + &self.b * &v.y);
        (alpha, beta)
    }

    /// `(f0, f1)` with `z(t) − plane height = f0 + f1·t` along `carrier`.
    pub fn offset_along(&self, carrier: &Carrier) -> (Scalar, Scalar) {
        let (alpha, beta) = self.restrict(carrier);
        (&carrier.origin.z - alpha, &carrier.direction.z - beta)
    }

    /// Where `carrier` meets the plane.
    pub fn crossing(&self, carrier: &Carrier) -> PlaneCrossing {
        let (f0, f1) = self.offset_along(carrier);
        if f1.is_zero() {
            return if f0.is_zero() {
                PlaneCrossing::Contained
            } else {
                PlaneCrossing::Parallel
            };
        }
        PlaneCrossing::At(-f0 / f1)
    }

    pub fn contains_carrier(&self, carrier: &Carrier) -> bool {
        self.crossing(carrier) == PlaneCrossing::Contained
    }
}

/// How a carrier's supporting line meets a plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaneCrossing {
    /// Transversal crossing at this parameter.
    At(Scalar),
    Parallel,
    Contained,
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x + {}y + {}z + {} = 0",
            self.a, self.b, self.c, self.d
        )
    }
}

/// Distinct non-vertical planes; their product stands in for the
/// partitioning polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Plane>", into = "Vec<Plane>")]
pub struct PlaneSet {
    planes: Vec<Plane>,
}

impl PlaneSet {
    pub fn new(planes: Vec<Plane>) -> Result<Self, PartitionError> {
        for (i, p) in planes.iter().enumerate() {
            if p.c.is_zero() {
                return Err(PartitionError::VerticalPlane);
            }
            if planes[..i].contains(p) {
                return Err(PartitionError::DuplicatePlane(i));
            }
        }
        Ok(PlaneSet { planes })
    }

    pub fn empty() -> Self {
        PlaneSet::default()
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }
}

impl TryFrom<Vec<Plane>> for PlaneSet {
    type Error = PartitionError;

    fn try_from(planes: Vec<Plane>) -> Result<Self, Self::Error> {
        let planes = planes
            .into_iter()
            .map(|p| Plane::new(p.a, p.b, p.c, p.d))
            .collect::<Result<Vec<_>, _>>()?;
        PlaneSet::new(planes)
    }
}

impl From<PlaneSet> for Vec<Plane> {
    fn from(set: PlaneSet) -> Self {
        set.planes
    }
}

/// Number of planes met by the open downward vertical ray from `q`.
pub fn level(q: &Point3, planes: &PlaneSet) -> Result<usize, PartitionError> {
    let mut count = 0;
    for (i, p) in planes.planes().iter().enumerate() {
        match p.side(q) {
            Ordering::Equal => return Err(PartitionError::OnZeroSet(i)),
            Ordering::Greater => count += 1,
            Ordering::Less => {}
        }
    }
    Ok(count)
}

/// Parameters inside the carrier's range where it crosses a plane
/// transversally, sorted and deduplicated. Planes containing the carrier
/// contribute nothing.
pub fn zero_set_params(carrier: &Carrier, planes: &PlaneSet) -> Vec<Scalar> {
    zero_set_params_in(carrier, &carrier.range, planes)
}

/// [`zero_set_params`] restricted to `range`.
pub fn zero_set_params_in(carrier: &Carrier, range: &Interval, planes: &PlaneSet) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = planes
        .planes()
        .iter()
        .filter_map(|p| match p.crossing(carrier) {
            PlaneCrossing::At(t) => Some(t),
            _ => None,
        })
        .filter(|t| range.contains(t))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Parameters inside the carrier's range above pairwise intersections of the
/// planes' traces in the carrier's vertical plane. Planes containing the
/// carrier are dropped and coincident traces are counted once.
pub fn criticality_params(carrier: &Carrier, planes: &PlaneSet) -> Vec<Scalar> {
    criticality_params_in(carrier, &carrier.range, planes)
}

/// [`criticality_params`] restricted to `range`.
pub fn criticality_params_in(
    carrier: &Carrier,
    range: &Interval,
    planes: &PlaneSet,
) -> Vec<Scalar> {
    let mut traces: Vec<(Scalar, Scalar)> = planes
        .planes()
        .iter()
        .filter(|p| !p.contains_carrier(carrier))
        .map(|p| p.restrict(carrier))
        .collect();
    traces.sort();
    traces.dedup();
    let mut out = Vec::new();
    for (i, (a1, b1)) in traces.iter().enumerate() {
        for (a2, b2) in &traces[i + 1..] {
            if b1 == b2 {
                continue;
            }
            let t = (a2 - a1) / (b1 - b2);
            if range.contains(&t) {
                out.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn zero_set_cuts(object: &Object, planes: &PlaneSet) -> CutSet {
    let mut cuts = CutSet::new();
    for t in zero_set_params(&object.carrier(), planes) {
        cuts.insert(object.id(), t);
    }
    cuts
}

pub fn criticality_cuts(object: &Object, planes: &PlaneSet) -> CutSet {
    let mut cuts = CutSet::new();
    for t in criticality_params(&object.carrier(), planes) {
        cuts.insert(object.id(), t);
    }
    cuts
}

/// Cube diagonals: four nearly equiangular normals.
const TETRAHEDRAL: [[i64; 3]; 4] = [[8, 8, 8], [8, -8, -8], [-8, 8, -8], [-8, -8, 8]];
/// Axes through opposite vertices of an icosahedron, with 13/8 for the
/// golden ratio.
const ICOSAHEDRAL: [[i64; 3]; 6] = [
    [0, 8, 13],
    [0, -8, 13],
    [8, 13, 0],
    [-8, 13, 0],
    [13, 0, 8],
    [-13, 0, 8],
];
const JITTER: i64 = 3;

/// Well-spread normals for `degree` planes; random beyond ten.
fn base_normals(degree: usize, rng: &mut ChaCha8Rng) -> Vec<[i64; 3]> {
    let mut base: Vec<[i64; 3]> = match degree {
        0..=4 => TETRAHEDRAL.to_vec(),
        5..=6 => ICOSAHEDRAL.to_vec(),
        _ => ICOSAHEDRAL.iter().chain(&TETRAHEDRAL).copied().collect(),
    };
    base.shuffle(rng);
    base.truncate(degree);
    while base.len() < degree {
        base.push([
            rng.gen_range(-16..=16),
            rng.gen_range(-16..=16),
            rng.gen_range(-16..=16),
        ]);
    }
    // a random symmetry of the cube keeps the set well spread
    let mut axes = [0usize, 1, 2];
    axes.shuffle(rng);
    let flips: [i64; 3] = std::array::from_fn(|_| if rng.gen_bool(0.5) { 1 } else { -1 });
    base.iter()
        .map(|n| std::array::from_fn(|k| n[axes[k]] * flips[k] + rng.gen_range(-JITTER..=JITTER)))
        .collect()
}

/// `degree` distinct non-vertical planes `a·x + b·y + c·z + d = 0`, each
/// through the median of `a·x + b·y + c·z` over `points`. Normals start from
/// a well-spread configuration under a random cube symmetry plus integer
/// jitter, so the ends of lines fall into many different unbounded cells.
pub fn choose_planes(points: &[Point3], degree: usize, rng: &mut ChaCha8Rng) -> PlaneSet {
    let mut planes: Vec<Plane> = Vec::with_capacity(degree);
    let mut values: Vec<Scalar> = Vec::with_capacity(points.len());
    while planes.len() < degree {
        for [a, b, c] in base_normals(degree, rng) {
            if planes.len() == degree {
                break;
            }
            let (a, b) = (int(a), int(b));
            let c = int(if c == 0 { 1 } else { c });
            values.clear();
            values.extend(points.iter().map(|q| &a * &q.x + &b * &q.y + &c * &q.z));
            let median = median(&mut values);
            let plane = Plane::new(a, b, c, -median).expect("c is nonzero");
            if !planes.contains(&plane) {
                planes.push(plane);
            }
        }
    }
    PlaneSet { planes }
}

/// Lower-upper median average; 0 for no values.
fn median(values: &mut [Scalar]) -> Scalar {
    let m = values.len();
    if m == 0 {
        return int(0);
    }
    let lo = (m - 1) / 2;
    let (_, x, rest) = values.select_nth_unstable(lo);
    let x = x.clone();
    if m % 2 == 1 {
        x
    } else {
        let y = rest
            .iter()
            .min()
            .expect("even count has an upper half")
            .clone();
        (x + y) / int(2)
    }
}

/// `true` when `t` sits on a plane crossing of the carrier or the carrier
/// lies in a plane.
pub fn on_zero_set(carrier: &Carrier, planes: &PlaneSet, t: &Scalar) -> bool {
    let q = carrier.point_at(t);
    planes
        .planes()
        .iter()
        .any(|p| p.side(&q) == Ordering::Equal)
}
