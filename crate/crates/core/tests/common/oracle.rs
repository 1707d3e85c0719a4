//! Brute-force references built straight from object coordinates. They share
//! no code with the library beyond the data types.

use std::collections::BTreeSet;

use depthcut::geom::{Interval, Object, Piece, Point3, Scalar, Scene};
use num_traits::Zero;

/// `(below piece, above piece, x, y)` for every crossing of two pieces.
pub type OracleEdge = (usize, usize, Scalar, Scalar);

/// Start point and direction of the parametrisation of `o`.
fn frame(o: &Object) -> (Point3, Point3) {
    match o {
        Object::Line(l) => (l.origin.clone(), l.direction.clone()),
        Object::Segment(s) => (s.a.clone(), s.b.sub(&s.a)),
    }
}

fn inside(i: &Interval, t: &Scalar) -> bool {
    i.lo.as_ref().is_none_or(|lo| lo < t) && i.hi.as_ref().is_none_or(|hi| t < hi)
}

/// Solves `p + s·u = q + t·v` in the xy-plane by Cramer's rule.
fn solve(p: &Point3, u: &Point3, q: &Point3, v: &Point3) -> Option<(Scalar, Scalar)> {
    // [ux  -vx] [s]   [qx - px]
    // [uy  -vy] [t] = [qy - py]
    let det = &u.y * &v.x - &u.x * &v.y;
    if det.is_zero() {
        return None;
    }
    let rx = &q.x - &p.x;
    let ry = &q.y - &p.y;
    let s = (&ry * &v.x - &rx * &v.y) / &det;
    let t = (&u.x * &ry - &u.y * &rx) / &det;
    Some((s, t))
}

/// Every pair of objects is solved once; the crossing then belongs to
/// whichever piece of each object contains its parameter.
pub fn depth_edges(scene: &Scene, pieces: &[Piece]) -> BTreeSet<OracleEdge> {
    let frames: Vec<_> = scene.objects().iter().map(frame).collect();
    let mut by_object: Vec<Vec<&Piece>> = vec![Vec::new(); frames.len()];
    for p in pieces {
        by_object[p.parent_index].push(p);
    }
    let holder = |o: usize, t: &Scalar| {
        by_object[o]
            .iter()
            .find(|p| inside(&p.interval, t))
            .map(|p| p.id)
    };
    let mut out = BTreeSet::new();
    for i in 0..frames.len() {
        for j in i + 1..frames.len() {
            let (p, u) = &frames[i];
            let (q, v) = &frames[j];
            let Some((s, t)) = solve(p, u, q, v) else {
                continue;
            };
            let (Some(a), Some(b)) = (holder(i, &s), holder(j, &t)) else {
                continue;
            };
            let x = &p.x + &s * &u.x;
            let y = &p.y + &s * &u.y;
            let za = &p.z + &s * &u.z;
            let zb = &q.z + &t * &v.z;
            assert_ne!(za, zb, "objects meet in space");
            if za < zb {
                out.insert((a, b, x, y));
            } else {
                out.insert((b, a, x, y));
            }
        }
    }
    out
}

/// Number of object pairs whose projections cross inside both ranges.
pub fn crossing_count(scene: &Scene) -> usize {
    let pieces = whole(scene);
    depth_edges(scene, &pieces).len()
}

/// One piece per object, each covering the object's full range.
pub fn whole(scene: &Scene) -> Vec<Piece> {
    scene
        .objects()
        .iter()
        .enumerate()
        .map(|(i, o)| Piece {
            id: i,
            parent: o.id(),
            parent_index: i,
            interval: match o {
                Object::Line(_) => Interval::whole(),
                Object::Segment(_) => Interval::unit(),
            },
        })
        .collect()
}

/// Triangular cycles among whole objects as sorted index triples.
pub fn triangles(scene: &Scene) -> BTreeSet<[usize; 3]> {
    let n = scene.len();
    let mut below = vec![vec![false; n]; n];
    for (a, b, _, _) in depth_edges(scene, &whole(scene)) {
        below[a][b] = true;
    }
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a < b && a < c && b != c && below[a][b] && below[b][c] && below[c][a] {
                    let mut t = [a, b, c];
                    t.sort_unstable();
                    out.insert(t);
                }
            }
        }
    }
    out
}

/// The library's depth graph in oracle form.
pub fn library_edges(scene: &Scene, pieces: &[Piece]) -> BTreeSet<OracleEdge> {
    let g = depthcut::depth::build_graph(scene, pieces).unwrap();
    g.edges()
        .iter()
        .map(|e| {
            let p = g.crossing_point(e).point;
            (e.below, e.above, p.x, p.y)
        })
        .collect()
}
