//! Scene generators and scene statistics.
//!
//! Every generator is deterministic for a given [`GeneratorSpec`] and only
//! returns scenes that pass [`validate_scene`].

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cutters::SceneStats;
use crate::depth::{enumerate_triangular_cycles, is_elementary_with, SimpleCycle};
use crate::geom::{
    format_scalar, int, parse_scalar, ratio, serde_scalar, validate_scene, GeomError, Line3,
    ObjectId, Point3, Scalar, Scene, SceneKind, Segment3, ViolationCode,
};

/// Denominator of the rational grid random coordinates are drawn from.
const COORD_DENOMINATOR: i64 = 8;
const MAX_REDRAWS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    RandomLines,
    RandomSegments,
    GridLowerBound,
    GridPattern,
}

/// Everything needed to regenerate a scene; stored in the scene metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    /// `n` for random scenes, `m` for the lower-bound grid, `k` for the
    /// segment grid pattern.
    pub size: usize,
    pub seed: u64,
    #[serde(with = "serde_scalar")]
    pub bound: Scalar,
    #[serde(with = "serde_scalar")]
    pub epsilon: Scalar,
    /// Maximum coordinate extent of a random segment; unbounded if absent.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_scalar")]
    pub segment_length: Option<Scalar>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, size: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind,
            size,
            seed,
            bound: int(1000),
            epsilon: ratio(1, 64),
            segment_length: None,
        }
    }
}

mod opt_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&format_scalar(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Scalar>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|raw| parse_scalar(&raw).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SceneError {
    #[error("grid perturbation failed after {0} attempts")]
    PerturbationFailed(usize),
    #[error("could not draw a scene in general position after {0} redraws")]
    RejectionFailed(usize),
    #[error("invalid generator parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

pub fn generate(spec: &GeneratorSpec) -> Result<Scene, SceneError> {
    let scene = match spec.kind {
        GeneratorKind::RandomLines => gen_random(spec.size, spec.seed, &spec.bound)?,
        GeneratorKind::RandomSegments => gen_random_segments(
            spec.size,
            spec.seed,
            &spec.bound,
            spec.segment_length.as_ref(),
        )?,
        GeneratorKind::GridLowerBound => {
            gen_grid_lower_bound(spec.size, spec.seed, &spec.epsilon)?.scene
        }
        GeneratorKind::GridPattern => gen_grid_pattern(spec.size, spec.seed)?,
    };
    Ok(scene.with_meta(spec.clone()))
}

/// ℓ1(t)=(t,0,0), ℓ2(t)=(t,t,1), ℓ3(t)=(t,2−t,5−3t) with ids 1, 2, 3: the
/// smallest scene with a depth cycle.
pub fn triangle_scene() -> Scene {
    let l = |id, o: (i64, i64, i64), d: (i64, i64, i64)| {
        Line3::new(
            ObjectId(id),
            Point3::from_ints(o.0, o.1, o.2),
            Point3::from_ints(d.0, d.1, d.2),
        )
    };
    Scene::from_lines(vec![
        l(1, (0, 0, 0), (1, 0, 0)),
        l(2, (0, 0, 1), (1, 1, 0)),
        l(3, (0, 2, 5), (1, -1, -3)),
    ])
}

fn rational_in(rng: &mut ChaCha8Rng, lo: &Scalar, hi: &Scalar, den: i64) -> Scalar {
    use num_traits::ToPrimitive;
    let d = int(den);
    let a = (lo * &d)
        .ceil()
        .to_integer()
        .to_i64()
        .expect("bound fits in i64");
    let b = (hi * &d)
        .floor()
        .to_integer()
        .to_i64()
        .expect("bound fits in i64");
    ratio(rng.gen_range(a..=b), den)
}

fn random_point(rng: &mut ChaCha8Rng, bound: &Scalar) -> Point3 {
    let lo = -bound;
    Point3::new(
        rational_in(rng, &lo, bound, COORD_DENOMINATOR),
        rational_in(rng, &lo, bound, COORD_DENOMINATOR),
        rational_in(rng, &lo, bound, COORD_DENOMINATOR),
    )
}

/// Redraws offending objects until the scene validates. For each violation
/// the object with the largest index is replaced.
fn reject_until_valid(
    mut objects: Vec<crate::geom::Object>,
    kind: SceneKind,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng, usize) -> crate::geom::Object,
) -> Result<Scene, SceneError> {
    for _ in 0..MAX_REDRAWS {
        let scene = Scene::new(kind, objects.clone())?;
        let report = validate_scene(&scene);
        if report.ok {
            return Ok(scene);
        }
        let index = scene.id_index();
        let mut redo: Vec<usize> = report
            .violations
            .iter()
            .filter(|v| v.code != ViolationCode::DuplicateId)
            .filter_map(|v| v.ids.iter().map(|id| index[id]).max())
            .collect();
        redo.sort_unstable();
        redo.dedup();
        for i in redo {
            objects[i] = draw(rng, i);
        }
    }
    Err(SceneError::RejectionFailed(MAX_REDRAWS))
}

/// `n` random lines with rational coordinates in `[-bound, bound]`, ids `1..=n`.
pub fn gen_random(n: usize, seed: u64, bound: &Scalar) -> Result<Scene, SceneError> {
    if !bound.is_positive() {
        return Err(SceneError::BadParameter("bound must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng, i: usize| {
        let origin = random_point(rng, bound);
        let mut dir = random_point(rng, bound);
        while dir.x.is_zero() && dir.y.is_zero() {
            dir = random_point(rng, bound);
        }
        crate::geom::Object::Line(Line3::new(ObjectId(i as u64 + 1), origin, dir))
    };
    let objects = (0..n).map(|i| draw(&mut rng, i)).collect();
    reject_until_valid(objects, SceneKind::Lines, &mut rng, draw)
}

/// `n` random segments. With `length`, each endpoint offset lies in
/// `[-length, length]³` around the first endpoint; otherwise both endpoints
/// are uniform in the box.
pub fn gen_random_segments(
    n: usize,
    seed: u64,
    bound: &Scalar,
    length: Option<&Scalar>,
) -> Result<Scene, SceneError> {
    if !bound.is_positive() || length.is_some_and(|l| !l.is_positive()) {
        return Err(SceneError::BadParameter(
            "bound and length must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng, i: usize| loop {
        let a = random_point(rng, bound);
        let b = match length {
            Some(l) => a.add(&random_point(rng, l)),
            None => random_point(rng, bound),
        };
        if a.x != b.x || a.y != b.y {
            break crate::geom::Object::Segment(Segment3::new(ObjectId(i as u64 + 1), a, b));
        }
    };
    let objects = (0..n).map(|i| draw(&mut rng, i)).collect();
    reject_until_valid(objects, SceneKind::Segments, &mut rng, draw)
}

/// The lower-bound construction together with its certificate.
#[derive(Clone, Debug)]
pub struct GridScene {
    pub scene: Scene,
    /// One cycle per former joint, as object indices.
    pub joint_cycles: Vec<SimpleCycle>,
}

const GRID_ATTEMPTS: usize = 16;

/// `3m²` lines: the axis-parallel lines of the `m × m × m` integer grid, each
/// translated by a fraction of `epsilon` and slightly tilted, then sheared so
/// that none is vertical. Every joint becomes a small triangular cycle.
///
/// The result is verified exactly: the scene is in general position, the
/// elementary triangular cycles are exactly the `m³` joint triples, and their
/// projected triangles are pairwise disjoint. Other triples may still form
/// larger, non-elementary triangular cycles.
pub fn gen_grid_lower_bound(
    m: usize,
    seed: u64,
    epsilon: &Scalar,
) -> Result<GridScene, SceneError> {
    if m == 0 {
        return Err(SceneError::BadParameter("m must be at least 1".into()));
    }
    if !epsilon.is_positive() || epsilon >= &ratio(1, 4) {
        return Err(SceneError::BadParameter(
            "epsilon must lie in (0, 1/4)".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GRID_ATTEMPTS {
        let (scene, joints) = perturbed_grid(m, epsilon, &mut rng);
        if let Some(cycles) = certify_grid(&scene, &joints) {
            return Ok(GridScene {
                scene,
                joint_cycles: cycles,
            });
        }
    }
    Err(SceneError::PerturbationFailed(GRID_ATTEMPTS))
}

/// Object indices `(x-line, y-line, z-line)` meeting at each joint, in
/// `(i, j, k)` lexicographic order.
type Joint = [usize; 3];

fn perturbed_grid(m: usize, epsilon: &Scalar, rng: &mut ChaCha8Rng) -> (Scene, Vec<Joint>) {
    let mi = m as i64;
    // shear (x, y, z) -> (x - αz, y - βz, z) makes direction (α, β, 1) vertical;
    // α = m/(m+1), β = 1/(m+1) keep every joint away from the other lines
    let alpha = ratio(mi, mi + 1);
    let beta = ratio(1, mi + 1);
    let shear = |p: &Point3| Point3::new(&p.x - &alpha * &p.z, &p.y - &beta * &p.z, p.z.clone());
    // one global orientation; mixed signs would break the joint cycles
    let sign = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
    let offset = |rng: &mut ChaCha8Rng| &sign * epsilon * ratio(rng.gen_range(32..=64), 64);
    let tilt_bound = epsilon / int(16 * mi);
    let tilt = |rng: &mut ChaCha8Rng| {
        let q = rng.gen_range(-64..=64);
        &tilt_bound * ratio(q, 64)
    };

    let mut lines = Vec::with_capacity(3 * m * m);
    let mut push = |origin: Point3, dir: Point3| {
        let id = ObjectId(lines.len() as u64 + 1);
        lines.push(Line3::new(id, shear(&origin), shear(&dir)));
        lines.len() - 1
    };
    let mut x_line = vec![vec![0usize; m]; m];
    let mut y_line = vec![vec![0usize; m]; m];
    let mut z_line = vec![vec![0usize; m]; m];
    for j in 0..mi {
        for k in 0..mi {
            let o = Point3::new(int(0), int(j) + offset(rng), int(k));
            let d = Point3::new(int(1), tilt(rng), tilt(rng));
            x_line[j as usize][k as usize] = push(o, d);
        }
    }
    for i in 0..mi {
        for k in 0..mi {
            let o = Point3::new(int(i), int(0), int(k) + offset(rng));
            let d = Point3::new(tilt(rng), int(1), tilt(rng));
            y_line[i as usize][k as usize] = push(o, d);
        }
    }
    for i in 0..mi {
        for j in 0..mi {
            let o = Point3::new(int(i) + offset(rng), int(j), int(0));
            let d = Point3::new(tilt(rng), tilt(rng), int(1));
            z_line[i as usize][j as usize] = push(o, d);
        }
    }
    let mut joints = Vec::with_capacity(m * m * m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                joints.push([x_line[j][k], y_line[i][k], z_line[i][j]]);
            }
        }
    }
    (Scene::from_lines(lines), joints)
}

fn certify_grid(scene: &Scene, joints: &[Joint]) -> Option<Vec<SimpleCycle>> {
    if !validate_scene(scene).ok {
        return None;
    }
    let carriers = scene.carriers();
    let elementary: Vec<SimpleCycle> = enumerate_triangular_cycles(scene)
        .ok()?
        .into_iter()
        .filter(|c| is_elementary_with(c, &carriers))
        .collect();
    if elementary.len() != joints.len() {
        return None;
    }
    let mut cycles = Vec::with_capacity(joints.len());
    for joint in joints {
        let mut key = joint.to_vec();
        key.sort_unstable();
        let c = elementary.iter().find(|c| {
            let mut p = c.pieces.clone();
            p.sort_unstable();
            p == key
        })?;
        cycles.push(c.clone());
    }
    if !triangles_pairwise_disjoint(&cycles) {
        return None;
    }
    Some(cycles)
}

/// Exact disjointness of the closed projected triangles of triangular cycles.
pub fn triangles_pairwise_disjoint(cycles: &[SimpleCycle]) -> bool {
    for (a, ca) in cycles.iter().enumerate() {
        for cb in &cycles[a + 1..] {
            if !closed_triangles_disjoint(ca, cb) {
                return false;
            }
        }
    }
    true
}

fn closed_triangles_disjoint(a: &SimpleCycle, b: &SimpleCycle) -> bool {
    use crate::geom::orient2d;
    use std::cmp::Ordering;
    let ta: Vec<_> = a.crossings.iter().map(|c| &c.point).collect();
    let tb: Vec<_> = b.crossings.iter().map(|c| &c.point).collect();
    // separating axis along an edge of either triangle
    let separated_by = |t: &[&crate::geom::Point2], u: &[&crate::geom::Point2]| {
        (0..3).any(|e| {
            let (p, q, r) = (t[e], t[(e + 1) % 3], t[(e + 2) % 3]);
            let inner = orient2d(p, q, r);
            u.iter().all(|v| {
                let s = orient2d(p, q, v);
                s != inner && s != Ordering::Equal
            })
        })
    };
    separated_by(&ta, &tb) || separated_by(&tb, &ta)
}

/// Two families of `k` nearly parallel segments whose projections form a
/// `k × k` grid, at random heights.
pub fn gen_grid_pattern(k: usize, seed: u64) -> Result<Scene, SceneError> {
    if k == 0 {
        return Err(SceneError::BadParameter("k must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ki = k as i64;
    let height = |rng: &mut ChaCha8Rng| ratio(rng.gen_range(-1000..=1000), COORD_DENOMINATOR);
    let jitter = |rng: &mut ChaCha8Rng| ratio(rng.gen_range(-8..=8), 64);
    let draw = |rng: &mut ChaCha8Rng, idx: usize| {
        let id = ObjectId(idx as u64 + 1);
        let (a, b) = if idx < k {
            let y = int(idx as i64);
            (
                Point3::new(int(-1), &y + jitter(rng), height(rng)),
                Point3::new(int(ki), &y + jitter(rng), height(rng)),
            )
        } else {
            let x = int((idx - k) as i64);
            (
                Point3::new(&x + jitter(rng), int(-1), height(rng)),
                Point3::new(&x + jitter(rng), int(ki), height(rng)),
            )
        };
        crate::geom::Object::Segment(Segment3::new(id, a, b))
    };
    let objects = (0..2 * k).map(|i| draw(&mut rng, i)).collect();
    reject_until_valid(objects, SceneKind::Segments, &mut rng, draw)
}

/// Object count and all proper projected crossings.
pub fn scene_stats(scene: &Scene) -> Result<SceneStats, GeomError> {
    let crossings = crate::geom::scene_crossings(scene)?;
    Ok(SceneStats {
        n: scene.len(),
        crossing_count: crossings.len(),
        crossings,
    })
}

/// Triangular cycles of `scene` whose projected triangle no other object
/// enters.
pub fn elementary_triangular_cycles(scene: &Scene) -> Result<Vec<SimpleCycle>, GeomError> {
    let carriers = scene.carriers();
    Ok(enumerate_triangular_cycles(scene)?
        .into_iter()
        .filter(|c| is_elementary_with(c, &carriers))
        .collect())
}
