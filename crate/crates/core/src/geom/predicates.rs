//! Exact projected-crossing and above/below predicates.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::objects::{Carrier, Interval};
use super::scalar::{cross2, serde_scalar, Point2, Point3, Scalar};
use super::GeomError;

/// Where the xy-projections of two objects cross.
///
/// `ta` and `tb` are the parameters on the first and second argument of
/// [`xy_cross`]; both map to `point`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossingPoint {
    #[serde(with = "serde_scalar")]
    pub ta: Scalar,
    #[serde(with = "serde_scalar")]
    pub tb: Scalar,
    pub point: Point2,
}

impl CrossingPoint {
    /// The same crossing seen from the other object.
    pub fn swapped(&self) -> CrossingPoint {
        CrossingPoint {
            ta: self.tb.clone(),
            tb: self.ta.clone(),
            point: self.point.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepthOrder {
    Below,
    Above,
}

impl DepthOrder {
    pub fn reversed(self) -> DepthOrder {
        match self {
            DepthOrder::Below => DepthOrder::Above,
            DepthOrder::Above => DepthOrder::Below,
        }
    }
}

/// Crossing parameters of the two supporting lines, ignoring ranges.
/// `None` when the projections are parallel (or either is a point).
pub fn carrier_crossing(a: &Carrier, b: &Carrier) -> Option<(Scalar, Scalar)> {
    if let (Some(ia), Some(ib)) = (IntCarrier::new(a), IntCarrier::new(b)) {
        if let Some(small) = small_params(&ia, &ib) {
            return small.map(|s| (reduced(s.na, s.den), reduced(s.nb, s.den)));
        }
    }
    let (da, db) = (&a.direction, &b.direction);
    let det = cross2(&da.x, &da.y, &db.x, &db.y);
    if det.is_zero() {
        return None;
    }
    let wx = &b.origin.x - &a.origin.x;
    let wy = &b.origin.y - &a.origin.y;
    let ta = cross2(&wx, &wy, &db.x, &db.y) / &det;
    let tb = cross2(&wx, &wy, &da.x, &da.y) / &det;
    Some((ta, tb))
}

/// The projected crossing of `a` and `b` restricted to their own ranges.
pub fn xy_cross(a: &Carrier, b: &Carrier) -> Option<CrossingPoint> {
    xy_cross_in(a, &a.range, b, &b.range)
}

/// The projected crossing of `a` restricted to `ia` and `b` restricted to
/// `ib`. Both intervals are open.
pub fn xy_cross_in(
    a: &Carrier,
    ia: &Interval,
    b: &Carrier,
    ib: &Interval,
) -> Option<CrossingPoint> {
    let (ta, tb) = carrier_crossing(a, b)?;
    if !ia.contains(&ta) || !ib.contains(&tb) {
        return None;
    }
    let point = a.xy_at(&ta);
    Some(CrossingPoint { ta, tb, point })
}

/// Whether `a` passes below or above `b` at their crossing `c`.
pub fn depth_order_at(
    a: &Carrier,
    b: &Carrier,
    c: &CrossingPoint,
) -> Result<DepthOrder, GeomError> {
    match a.z_at(&c.ta).cmp(&b.z_at(&c.tb)) {
        Ordering::Less => Ok(DepthOrder::Below),
        Ordering::Greater => Ok(DepthOrder::Above),
        Ordering::Equal => Err(GeomError::EqualHeights {
            point: Box::new(c.point.clone()),
        }),
    }
}

/// Crossing of two carriers within their ranges, with `a`'s height compared
/// to `b`'s there.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub(crate) enum PairCrossing {
    Parallel,
    Outside,
    Hit(CrossingPoint, Ordering),
}

/// A carrier as `origin = o / l`, `direction = d / m` over `i128`, for the
/// allocation-free crossing path.
#[derive(Clone, Debug)]
pub(crate) struct IntCarrier {
    o: [i128; 3],
    l: i128,
    d: [i128; 3],
    m: i128,
}

impl IntCarrier {
    /// `None` when some coordinate does not fit.
    pub(crate) fn new(c: &Carrier) -> Option<Self> {
        let (o, l) = common_denominator(&c.origin)?;
        let (d, m) = common_denominator(&c.direction)?;
        Some(IntCarrier { o, l, d, m })
    }
}

fn common_denominator(p: &Point3) -> Option<([i128; 3], i128)> {
    let coords = [&p.x, &p.y, &p.z];
    let mut l: i128 = 1;
    for c in coords {
        let q = c.denom().to_i128()?;
        l = l.checked_mul(q / l.gcd(&q))?;
    }
    let mut out = [0i128; 3];
    for (k, c) in coords.into_iter().enumerate() {
        let q = c.denom().to_i128()?;
        out[k] = c.numer().to_i128()?.checked_mul(l / q)?;
    }
    Some((out, l))
}

/// `num / den` in lowest terms; `den` is nonzero.
fn reduced(num: i128, den: i128) -> Scalar {
    let g = num.gcd(&den);
    let (num, den) = if den < 0 {
        (-num / g, -den / g)
    } else {
        (num / g, den / g)
    };
    Scalar::new_raw(BigInt::from(num), BigInt::from(den))
}

/// `ta = na / den`, `tb = nb / den`, with the cross products reused for
/// heights and the projected point.
struct SmallParams {
    na: i128,
    nb: i128,
    den: i128,
    c: i128,
    cwa: i128,
    cwb: i128,
}

fn cross_i128(p: i128, q: i128, r: i128, s: i128) -> Option<i128> {
    p.checked_mul(s)?.checked_sub(q.checked_mul(r)?)
}

/// Outer `None` on overflow, inner `None` for parallel projections.
fn small_params(ia: &IntCarrier, ib: &IntCarrier) -> Option<Option<SmallParams>> {
    let c = cross_i128(ia.d[0], ia.d[1], ib.d[0], ib.d[1])?;
    if c == 0 {
        return Some(None);
    }
    // (origin_b - origin_a) · l_a l_b
    let wx = ib.o[0]
        .checked_mul(ia.l)?
        .checked_sub(ia.o[0].checked_mul(ib.l)?)?;
    let wy = ib.o[1]
        .checked_mul(ia.l)?
        .checked_sub(ia.o[1].checked_mul(ib.l)?)?;
    let cwb = cross_i128(wx, wy, ib.d[0], ib.d[1])?;
    let cwa = cross_i128(wx, wy, ia.d[0], ia.d[1])?;
    Some(Some(SmallParams {
        na: cwb.checked_mul(ia.m)?,
        nb: cwa.checked_mul(ib.m)?,
        den: ia.l.checked_mul(ib.l)?.checked_mul(c)?,
        c,
        cwa,
        cwb,
    }))
}

/// Exact, overflow-checked crossing over `i128`; `None` on overflow.
fn small_pair_crossing(
    a: &Carrier,
    ia: &IntCarrier,
    b: &Carrier,
    ib: &IntCarrier,
) -> Option<PairCrossing> {
    let Some(sp) = small_params(ia, ib)? else {
        return Some(PairCrossing::Parallel);
    };
    let ta = reduced(sp.na, sp.den);
    let tb = reduced(sp.nb, sp.den);
    if !a.range.contains(&ta) || !b.range.contains(&tb) {
        return Some(PairCrossing::Outside);
    }
    // a coordinate of `a` at ta, times den
    let on_a = |k: usize| {
        ia.o[k]
            .checked_mul(ib.l)?
            .checked_mul(sp.c)?
            .checked_add(sp.cwb.checked_mul(ia.d[k])?)
    };
    let za = on_a(2)?;
    let zb = ib.o[2]
        .checked_mul(ia.l)?
        .checked_mul(sp.c)?
        .checked_add(sp.cwa.checked_mul(ib.d[2])?)?;
    let order = if sp.den > 0 { za.cmp(&zb) } else { zb.cmp(&za) };
    let point = Point2::new(reduced(on_a(0)?, sp.den), reduced(on_a(1)?, sp.den));
    Some(PairCrossing::Hit(CrossingPoint { ta, tb, point }, order))
}

/// Like [`xy_cross`] followed by a height comparison, using `i128` when the
/// integer forms are given and fit.
pub(crate) fn pair_crossing(
    a: &Carrier,
    ia: Option<&IntCarrier>,
    b: &Carrier,
    ib: Option<&IntCarrier>,
) -> PairCrossing {
    if let (Some(ia), Some(ib)) = (ia, ib) {
        if let Some(hit) = small_pair_crossing(a, ia, b, ib) {
            return hit;
        }
    }
    let Some((ta, tb)) = carrier_crossing(a, b) else {
        return PairCrossing::Parallel;
    };
    if !a.range.contains(&ta) || !b.range.contains(&tb) {
        return PairCrossing::Outside;
    }
    let order = a.z_at(&ta).cmp(&b.z_at(&tb));
    let point = a.xy_at(&ta);
    PairCrossing::Hit(CrossingPoint { ta, tb, point }, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::objects::{Line3, Object, ObjectId, Segment3};
    use crate::geom::scalar::{int, Point3};

    fn line(o: (i64, i64, i64), d: (i64, i64, i64)) -> Carrier {
        Object::Line(Line3::new(
            ObjectId(0),
            Point3::from_ints(o.0, o.1, o.2),
            Point3::from_ints(d.0, d.1, d.2),
        ))
        .carrier()
    }

    #[test]
    fn crossing_of_first_two_lines_of_the_triangle_scene() {
        let l1 = line((0, 0, 0), (1, 0, 0));
        let l2 = line((0, 0, 1), (1, 1, 0));
        let c = xy_cross(&l1, &l2).unwrap();
        assert_eq!(c.ta, int(0));
        assert_eq!(c.tb, int(0));
        assert_eq!(c.point, Point2::new(int(0), int(0)));
        assert_eq!(depth_order_at(&l1, &l2, &c).unwrap(), DepthOrder::Below);
        assert_eq!(
            depth_order_at(&l2, &l1, &c.swapped()).unwrap(),
            DepthOrder::Above
        );
    }

    #[test]
    fn third_line_passes_below_first() {
        let l1 = line((0, 0, 0), (1, 0, 0));
        let l3 = line((0, 2, 5), (1, -1, -3));
        let c = xy_cross(&l3, &l1).unwrap();
        assert_eq!(c.point, Point2::new(int(2), int(0)));
        assert_eq!(depth_order_at(&l3, &l1, &c).unwrap(), DepthOrder::Below);
    }

    #[test]
    fn parallel_projections_do_not_cross() {
        let l = line((0, 0, 0), (1, 0, 0));
        let m = line((0, 1, 5), (1, 0, 0));
        assert!(xy_cross(&l, &m).is_none());
    }

    #[test]
    fn crossing_outside_a_segment_is_ignored() {
        let a = Object::Segment(Segment3::new(
            ObjectId(0),
            Point3::from_ints(0, 0, 0),
            Point3::from_ints(1, 0, 0),
        ))
        .carrier();
        let b = Object::Segment(Segment3::new(
            ObjectId(1),
            Point3::from_ints(2, -1, 1),
            Point3::from_ints(2, 1, 1),
        ))
        .carrier();
        assert!(xy_cross(&a, &b).is_none());
    }

    #[test]
    fn equal_heights_are_reported() {
        let a = line((0, 0, 0), (1, 0, 0));
        let b = line((0, 0, 0), (0, 1, 0));
        let c = xy_cross(&a, &b).unwrap();
        assert!(matches!(
            depth_order_at(&a, &b, &c),
            Err(GeomError::EqualHeights { .. })
        ));
    }
}
