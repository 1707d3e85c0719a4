//! Lines, segments and the parameter intervals that describe their pieces.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{int, one, zero, Point2, Point3, Scalar, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub u64);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A line `origin + t * direction`, `t ∈ ℝ`.
///
/// The direction is sign-normalized so that `dx > 0`, or `dx = 0` and
/// `dy > 0`. A vertical direction is representable so that validation can
/// report it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line3 {
    pub id: ObjectId,
    pub origin: Point3,
    pub direction: Vec3,
}

impl Line3 {
    pub fn new(id: ObjectId, origin: Point3, direction: Vec3) -> Self {
        let flip = match direction.x.cmp(&zero()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => direction.y.is_negative(),
        };
        let direction = if flip { direction.neg() } else { direction };
        Line3 {
            id,
            origin,
            direction,
        }
    }

    pub fn is_vertical(&self) -> bool {
        self.direction.x.is_zero() && self.direction.y.is_zero()
    }

    pub fn carrier(&self) -> Carrier {
        Carrier {
            origin: self.origin.clone(),
            direction: self.direction.clone(),
            range: Interval::whole(),
        }
    }
}

/// A segment from `a` (t = 0) to `b` (t = 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment3 {
    pub id: ObjectId,
    pub a: Point3,
    pub b: Point3,
}

impl Segment3 {
    pub fn new(id: ObjectId, a: Point3, b: Point3) -> Self {
        Segment3 { id, a, b }
    }

    /// True when the projections of the endpoints coincide (this includes a
    /// degenerate segment with `a == b`).
    pub fn is_vertical(&self) -> bool {
        self.a.x == self.b.x && self.a.y == self.b.y
    }

    pub fn carrier(&self) -> Carrier {
        Carrier {
            origin: self.a.clone(),
            direction: self.b.sub(&self.a),
            range: Interval::unit(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SceneKind {
    Lines,
    Segments,
}

impl fmt::Display for SceneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SceneKind::Lines => f.write_str("lines"),
            SceneKind::Segments => f.write_str("segments"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Line(Line3),
    Segment(Segment3),
}

impl Object {
    pub fn id(&self) -> ObjectId {
        match self {
            Object::Line(l) => l.id,
            Object::Segment(s) => s.id,
        }
    }

    pub fn kind(&self) -> SceneKind {
        match self {
            Object::Line(_) => SceneKind::Lines,
            Object::Segment(_) => SceneKind::Segments,
        }
    }

    pub fn is_vertical(&self) -> bool {
        match self {
            Object::Line(l) => l.is_vertical(),
            Object::Segment(s) => s.is_vertical(),
        }
    }

    pub fn carrier(&self) -> Carrier {
        match self {
            Object::Line(l) => l.carrier(),
            Object::Segment(s) => s.carrier(),
        }
    }
}

/// An open parameter interval `(lo, hi)`; `None` stands for ∓∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Option<Scalar>,
    pub hi: Option<Scalar>,
}

impl Interval {
    pub fn new(lo: Option<Scalar>, hi: Option<Scalar>) -> Self {
        Interval { lo, hi }
    }

    pub fn whole() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn unit() -> Self {
        Interval {
            lo: Some(zero()),
            hi: Some(one()),
        }
    }

    pub fn finite(lo: Scalar, hi: Scalar) -> Self {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    /// Strict containment `lo < t < hi`.
    pub fn contains(&self, t: &Scalar) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo < t) && self.hi.as_ref().is_none_or(|hi| t < hi)
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => lo >= hi,
            _ => false,
        }
    }

    /// True when `other` lies inside the closure of `self`.
    pub fn covers(&self, other: &Interval) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => b <= a,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = match (&self.lo, &other.lo) {
            (None, x) | (x, None) => x.clone(),
            (Some(a), Some(b)) => Some(a.max(b).clone()),
        };
        let hi = match (&self.hi, &other.hi) {
            (None, x) | (x, None) => x.clone(),
            (Some(a), Some(b)) => Some(a.min(b).clone()),
        };
        Interval { lo, hi }
    }

    /// A canonical parameter strictly inside the interval: the midpoint when
    /// bounded, one unit in from a single finite end, and 0 for the whole line.
    pub fn representative(&self) -> Scalar {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => (lo + hi) / int(2),
            (Some(lo), None) => lo + one(),
            (None, Some(hi)) => hi - one(),
            (None, None) => zero(),
        }
    }

    /// Splits at the given sorted parameters (those outside are ignored).
    pub fn split_at<'a>(&self, cuts: impl IntoIterator<Item = &'a Scalar>) -> Vec<Interval> {
        let mut out = Vec::new();
        let mut lo = self.lo.clone();
        for t in cuts {
            if !self.contains(t) {
                continue;
            }
            if lo.as_ref().is_some_and(|l| l >= t) {
                continue;
            }
            out.push(Interval::new(lo, Some(t.clone())));
            lo = Some(t.clone());
        }
        out.push(Interval::new(lo, self.hi.clone()));
        out
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Some(lo) => write!(f, "({lo}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.hi {
            Some(hi) => write!(f, "{hi})"),
            None => write!(f, "+inf)"),
        }
    }
}

/// The supporting line of an object together with its admissible range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carrier {
    pub origin: Point3,
    pub direction: Vec3,
    pub range: Interval,
}

impl Carrier {
    pub fn point_at(&self, t: &Scalar) -> Point3 {
        Point3::new(
            &self.origin.x + t * &self.direction.x,
            &self.origin.y + t * &self.direction.y,
            &self.origin.z + t * &self.direction.z,
        )
    }

    pub fn xy_at(&self, t: &Scalar) -> Point2 {
        Point2::new(
            &self.origin.x + t * &self.direction.x,
            &self.origin.y + t * &self.direction.y,
        )
    }

    pub fn z_at(&self, t: &Scalar) -> Scalar {
        &self.origin.z + t * &self.direction.z
    }
}
