//! Exact rational scalars and the small point types built on them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number in canonical form.
///
/// `num_rational` keeps the denominator positive and the fraction reduced
/// after every operation, so equality is structural.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Panics when `den` is zero.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn half(s: &Scalar) -> Scalar {
    s / int(2)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}: expected \"p/q\" or an integer")]
pub struct ParseScalarError(pub String);

/// Parses `"p/q"` or `"p"`. Non-canonical input (`"2/4"`) is reduced.
pub fn parse_scalar(s: &str) -> Result<Scalar, ParseScalarError> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(ParseScalarError(s.to_string()));
    }
    trimmed
        .parse::<Scalar>()
        .map_err(|_| ParseScalarError(s.to_string()))
}

/// `"p/q"` with `q > 1`, or just `"p"` for integers.
pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

/// Lossy conversion, used only for rendering and statistics.
pub fn to_f64(s: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    s.to_f64().unwrap_or_else(|| {
        if s.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serde adapter writing a [`Scalar`] as its `"p/q"` string.
pub mod serde_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let raw = String::deserialize(d)?;
        parse_scalar(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `[x, y, z]` coordinate triples of `"p/q"` strings.
pub mod serde_triple {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Scalar; 3], s: S) -> Result<S::Ok, S::Error> {
        let strs = [
            format_scalar(&v[0]),
            format_scalar(&v[1]),
            format_scalar(&v[2]),
        ];
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Scalar; 3], D::Error> {
        let raw = <[String; 3]>::deserialize(d)?;
        let mut out = [zero(), zero(), zero()];
        for (slot, r) in out.iter_mut().zip(raw.iter()) {
            *slot = parse_scalar(r).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Scalar,
    pub y: Scalar,
}

/// Hashes the canonical numerators and denominators, which is far cheaper
/// than the rational hash and agrees with equality.
impl std::hash::Hash for Point2 {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for c in [&self.x, &self.y] {
            c.numer().hash(state);
            c.denom().hash(state);
        }
    }
}

impl Point2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point2 { x, y }
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_scalar(&self.x), format_scalar(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok(Point2 {
            x: parse_scalar(&x).map_err(serde::de::Error::custom)?,
            y: parse_scalar(&y).map_err(serde::de::Error::custom)?,
        })
    }
}

/// A point in 3-space; also used for direction vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point3 {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

pub type Vec3 = Point3;

impl Point3 {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Self {
        Point3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Point3::new(int(x), int(y), int(z))
    }

    pub fn xy(&self) -> Point2 {
        Point2::new(self.x.clone(), self.y.clone())
    }

    pub fn sub(&self, o: &Point3) -> Point3 {
        Point3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn add(&self, o: &Point3) -> Point3 {
        Point3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn scale(&self, k: &Scalar) -> Point3 {
        Point3::new(&self.x * k, &self.y * k, &self.z * k)
    }

    pub fn neg(&self) -> Point3 {
        Point3::new(-&self.x, -&self.y, -&self.z)
    }

    pub fn to_array(&self) -> [Scalar; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn from_array([x, y, z]: [Scalar; 3]) -> Self {
        Point3 { x, y, z }
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// z-component of the planar cross product `u × v`.
pub fn cross2(ux: &Scalar, uy: &Scalar, vx: &Scalar, vy: &Scalar) -> Scalar {
    ux * vy - uy * vx
}

/// Sign of the orientation of `c` relative to the directed line `a → b`.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> std::cmp::Ordering {
    let det = cross2(
        &(&b.x - &a.x),
        &(&b.y - &a.y),
        &(&c.x - &a.x),
        &(&c.y - &a.y),
    );
    det.cmp(&zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(parse_scalar("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_scalar("-7").unwrap(), int(-7));
        assert_eq!(format_scalar(&parse_scalar("2/4").unwrap()), "1/2");
        assert_eq!(format_scalar(&parse_scalar("-6/3").unwrap()), "-2");
        assert_eq!(format_scalar(&ratio(1, -3)), "-1/3");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("1.5").is_err());
        assert!(parse_scalar("a/b").is_err());
    }

    #[test]
    fn orientation_signs() {
        let a = Point2::new(int(0), int(0));
        let b = Point2::new(int(1), int(0));
        assert_eq!(
            orient2d(&a, &b, &Point2::new(int(0), int(1))),
            std::cmp::Ordering::Greater
        );
        assert_eq!(
            orient2d(&a, &b, &Point2::new(int(5), int(0))),
            std::cmp::Ordering::Equal
        );
    }
}
