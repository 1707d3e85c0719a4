//! Level bookkeeping along realized cycle paths.

use depthcut::depth::{
    build_graph, enumerate_triangular_cycles, find_simple_cycle, realize_path, whole_pieces,
    SimpleCycle,
};
use depthcut::geom::{ratio, Interval, Point3, Scalar, Scene};
use depthcut::partition::{
    criticality_params_in, level, partition_cut_with_planes, zero_set_params_in, PartitionParams,
    Plane, PlaneSet,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Default)]
pub struct LevelReport {
    pub cycles: usize,
    /// Triangular cycles whose path meets a plane.
    pub crossed: usize,
    pub violations: Vec<String>,
}

impl LevelReport {
    pub fn absorb(&mut self, other: LevelReport) {
        self.cycles += other.cycles;
        self.crossed += other.crossed;
        self.violations.extend(other.violations);
    }
}

/// Every lifted crossing point of the scene: both heights above each
/// projected crossing.
fn crossing_lifts(scene: &Scene) -> Vec<Point3> {
    let carriers = scene.carriers();
    let mut out = Vec::new();
    for c in depthcut::geom::scene_crossings(scene).unwrap() {
        out.push(carriers[c.a].point_at(&c.crossing.ta));
        out.push(carriers[c.b].point_at(&c.crossing.tb));
    }
    out
}

/// `d` random non-vertical planes, each through the midpoint of a random
/// vertical jump of the scene, avoiding every lifted crossing.
pub fn random_planes(scene: &Scene, d: usize, rng: &mut ChaCha8Rng) -> PlaneSet {
    let lifts = crossing_lifts(scene);
    assert!(lifts.len() >= 2, "scene needs a crossing");
    loop {
        let mut planes = Vec::with_capacity(d);
        for _ in 0..d {
            let k = rng.gen_range(0..lifts.len() / 2);
            let (p, q) = (&lifts[2 * k], &lifts[2 * k + 1]);
            let mz = (&p.z + &q.z) / ratio(2, 1);
            let sa = ratio(rng.gen_range(-16..=16), 8);
            let sb = ratio(rng.gen_range(-16..=16), 8);
            let dd = &sa * &p.x + &sb * &p.y - &mz;
            planes.push(Plane::new(-sa, -sb, ratio(1, 1), dd).unwrap());
        }
        let Ok(set) = PlaneSet::new(planes) else {
            continue;
        };
        if lifts.iter().all(|q| level(q, &set).is_ok()) {
            return set;
        }
    }
}

fn between(a: &Scalar, b: &Scalar) -> Interval {
    if a < b {
        Interval::finite(a.clone(), b.clone())
    } else {
        Interval::finite(b.clone(), a.clone())
    }
}

/// Simple cycles of the uncut scene: every triangular cycle plus whatever
/// the cycle search returns.
pub fn input_cycles(scene: &Scene) -> (Vec<SimpleCycle>, usize) {
    let mut cycles = enumerate_triangular_cycles(scene).unwrap();
    let triangular = cycles.len();
    let pieces = whole_pieces(scene);
    let g = build_graph(scene, &pieces).unwrap();
    if let Some(c) = find_simple_cycle(&g, scene, &pieces) {
        if c.len() > 3 {
            cycles.push(c);
        }
    }
    (cycles, triangular)
}

/// Checks level constancy, jump monotonicity, closure and the elimination
/// witness for every input cycle against one top-level plane set.
pub fn check(scene: &Scene, planes: &PlaneSet, params: &PartitionParams) -> LevelReport {
    let mut report = LevelReport::default();
    let carriers = scene.carriers();
    let pieces = whole_pieces(scene);
    let outcome = partition_cut_with_planes(scene, planes, params).unwrap();
    let cuts = &outcome.cuts;
    let (cycles, triangular) = input_cycles(scene);
    let lv = |q: &Point3| level(q, planes).ok();

    for (ci, c) in cycles.iter().enumerate() {
        report.cycles += 1;
        let path = realize_path(c, scene, &pieces).unwrap();
        let mut total: i64 = 0;
        let mut meets_plane = false;
        let mut fail = |msg: String| {
            report
                .violations
                .push(format!("cycle {:?}: {msg}", c.pieces))
        };

        for i in 0..c.len() {
            let obj = pieces[c.pieces[i]].parent_index;
            let carrier = &carriers[obj];
            let id = scene.objects()[obj].id();
            let (t_in, t_out) = c.edge_params(i);
            let range = between(t_in, t_out);
            let mut events = zero_set_params_in(carrier, &range, planes);
            let zero_set = events.clone();
            events.extend(criticality_params_in(carrier, &range, planes));
            events.sort();
            events.dedup();
            if !zero_set.is_empty() {
                meets_plane = true;
            }

            let mut marks = vec![range.lo.clone().unwrap()];
            marks.extend(events.iter().cloned());
            marks.push(range.hi.clone().unwrap());
            let mut piece_levels = Vec::new();
            for w in marks.windows(2) {
                let samples: Vec<Option<usize>> = [ratio(1, 4), ratio(1, 2), ratio(3, 4)]
                    .iter()
                    .map(|f| lv(&carrier.point_at(&(&w[0] + (&w[1] - &w[0]) * f))))
                    .collect();
                if samples.iter().any(|s| s.is_none() || *s != samples[0]) {
                    fail(format!(
                        "level not constant on edge {i} between {} and {}",
                        w[0], w[1]
                    ));
                }
                piece_levels.push(samples[0].unwrap_or(0) as i64);
            }
            for (k, t) in events.iter().enumerate() {
                if piece_levels[k] != piece_levels[k + 1] && !cuts.contains(id, t) {
                    fail(format!(
                        "level changes at t={t} on edge {i} without a cut there"
                    ));
                }
            }
            let (v_in, v_out) = path.edge(i);
            let (Some(l_in), Some(l_out)) = (lv(v_in), lv(v_out)) else {
                fail(format!("edge {i} ends on a plane"));
                continue;
            };
            let (first, last) = if t_in < t_out {
                (piece_levels[0], *piece_levels.last().unwrap())
            } else {
                (*piece_levels.last().unwrap(), piece_levels[0])
            };
            if first != l_in as i64 || last != l_out as i64 {
                fail(format!("edge {i} end levels disagree with its interior"));
            }
            total += last - first;

            let (bottom, top) = path.jump(i);
            if top.z <= bottom.z {
                fail(format!("jump {i} does not go up"));
            }
            let crossed = planes
                .planes()
                .iter()
                .filter(|p| {
                    let h = p.height_at(&bottom.x, &bottom.y);
                    bottom.z < h && h < top.z
                })
                .count();
            if crossed > 0 {
                meets_plane = true;
            }
            match (lv(bottom), lv(top)) {
                (Some(lo), Some(hi)) => {
                    if hi < lo {
                        fail(format!("level drops along jump {i}"));
                    } else if hi - lo != crossed {
                        fail(format!(
                            "jump {i} rises by {} but crosses {crossed} planes",
                            hi - lo
                        ));
                    }
                    total += hi as i64 - lo as i64;
                }
                _ => fail(format!("jump {i} ends on a plane")),
            }
        }
        if total != 0 {
            fail(format!("total level change {total}"));
        }

        if ci < triangular && meets_plane {
            report.crossed += 1;
            let hit = (0..c.len()).any(|i| {
                let obj = pieces[c.pieces[i]].parent_index;
                let (a, b) = c.edge_params(i);
                let range = between(a, b);
                cuts.params_of(scene.objects()[obj].id())
                    .any(|t| range.contains(t))
            });
            if !hit {
                report.violations.push(format!(
                    "cycle {:?} meets a plane but no edge is cut",
                    c.pieces
                ));
            }
        }
    }
    report
}
