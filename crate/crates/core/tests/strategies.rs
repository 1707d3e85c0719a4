mod common;

use depthcut::cutters::{
    greedy_cycle_cut, naive_cut, run_strategy, segment_sensitive_cut_traced, verify_cuts,
    CutterError, SegmentRegime, Strategy,
};
use depthcut::geom::{int, ratio, validate_scene, ObjectId, Point3, Scene, Segment3};
use depthcut::io::scene_to_json;
use depthcut::partition::PartitionParams;
use depthcut::scenes::{
    elementary_triangular_cycles, gen_grid_lower_bound, gen_grid_pattern, gen_random,
    gen_random_segments, generate, scene_stats, triangle_scene, triangles_pairwise_disjoint,
    GeneratorKind, GeneratorSpec,
};

fn line_strategies() -> Vec<Strategy> {
    let mut out = vec![Strategy::Naive, Strategy::Greedy];
    for degree in [1, 2, 4, 6] {
        out.push(Strategy::Partition(PartitionParams {
            degree,
            ..Default::default()
        }));
    }
    out
}

fn segment(id: u64, a: (i64, i64, i64), b: (i64, i64, i64)) -> Segment3 {
    Segment3::new(
        ObjectId(id),
        Point3::from_ints(a.0, a.1, a.2),
        Point3::from_ints(b.0, b.1, b.2),
    )
}

#[test]
fn every_strategy_orders_the_corpus() {
    for (name, scene) in common::corpus() {
        let mut strategies = line_strategies();
        if scene.kind() == depthcut::geom::SceneKind::Segments {
            strategies.push(Strategy::SegmentSensitive(PartitionParams::default()));
        }
        for strategy in &strategies {
            let cuts = run_strategy(&scene, strategy).unwrap();
            assert!(
                verify_cuts(&scene, &cuts).unwrap(),
                "{name}: {} left a cycle",
                strategy.name()
            );
        }
    }
}

#[test]
fn naive_cuts_every_crossing_on_both_lines() {
    for (n, seed) in [(0, 0), (1, 0), (2, 1), (17, 2), (50, 3)] {
        let s = gen_random(n, seed, &int(1000)).unwrap();
        assert_eq!(naive_cut(&s).unwrap().len(), n * n.saturating_sub(1));
    }
    assert_eq!(naive_cut(&triangle_scene()).unwrap().len(), 6);
}

#[test]
fn greedy_needs_one_cut_on_the_triangle() {
    assert_eq!(greedy_cycle_cut(&triangle_scene()).unwrap().len(), 1);
}

#[test]
fn greedy_never_exceeds_naive() {
    for (name, scene) in common::corpus() {
        let greedy = greedy_cycle_cut(&scene).unwrap().len();
        let naive = naive_cut(&scene).unwrap().len();
        assert!(greedy <= naive, "{name}: greedy {greedy} > naive {naive}");
    }
}

#[test]
fn grid_scenes_have_m_cubed_disjoint_cycles() {
    for m in 1..=4usize {
        let grid = gen_grid_lower_bound(m, m as u64, &ratio(1, 64)).unwrap();
        let scene = &grid.scene;
        assert_eq!(scene.len(), 3 * m * m);
        assert!(validate_scene(scene).ok);
        let elementary = elementary_triangular_cycles(scene).unwrap();
        assert_eq!(elementary.len(), m * m * m, "m={m}");
        assert!(triangles_pairwise_disjoint(&elementary));
        assert_eq!(grid.joint_cycles.len(), m * m * m);
        assert!(triangles_pairwise_disjoint(&grid.joint_cycles));

        let naive = naive_cut(scene).unwrap().len();
        for strategy in line_strategies() {
            let cuts = run_strategy(scene, &strategy).unwrap();
            assert!(
                cuts.len() >= m * m * m,
                "m={m}: {} made {} cuts",
                strategy.name(),
                cuts.len()
            );
            assert!(verify_cuts(scene, &cuts).unwrap());
            if let Strategy::Greedy = strategy {
                assert!(cuts.len() <= naive);
            }
        }
    }
}

#[test]
fn disjoint_segments_need_no_cuts() {
    let s = Scene::from_segments(vec![
        segment(1, (0, 0, 0), (1, 0, 0)),
        segment(2, (0, 5, 0), (1, 6, 1)),
        segment(3, (9, 9, 3), (10, 7, 3)),
    ]);
    let out = segment_sensitive_cut_traced(&s, &PartitionParams::default()).unwrap();
    assert_eq!(out.regime, SegmentRegime::Empty);
    assert!(out.cuts.is_empty());
    assert_eq!(scene_stats(&s).unwrap().crossing_count, 0);
}

#[test]
fn two_crossings_among_four_segments_need_four_cuts() {
    let s = Scene::from_segments(vec![
        segment(1, (0, 0, 0), (4, 0, 0)),
        segment(2, (1, -1, 1), (2, 1, 1)),
        segment(3, (3, -1, 2), (3, 1, 2)),
        segment(4, (10, 10, 0), (12, 11, 5)),
    ]);
    assert!(validate_scene(&s).ok);
    assert_eq!(scene_stats(&s).unwrap().crossing_count, 2);
    let out = segment_sensitive_cut_traced(&s, &PartitionParams::default()).unwrap();
    assert_eq!(out.regime, SegmentRegime::Sparse);
    assert_eq!(out.cuts.len(), 4);
    assert!(verify_cuts(&s, &out.cuts).unwrap());
}

#[test]
fn dense_segment_scenes_are_ordered() {
    for seed in 0..4 {
        let s = gen_random_segments(40, seed, &int(1000), None).unwrap();
        let out = segment_sensitive_cut_traced(
            &s,
            &PartitionParams {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(out.regime, SegmentRegime::Dense);
        assert!(out.crossing_count > s.len());
        assert!(verify_cuts(&s, &out.cuts).unwrap());
    }
}

#[test]
fn sparse_segment_scenes_stay_within_twice_the_crossings() {
    let short = int(120);
    let mut sparse = 0;
    for seed in 0..20 {
        let s = gen_random_segments(30, seed, &int(1000), Some(&short)).unwrap();
        let out = segment_sensitive_cut_traced(&s, &PartitionParams::default()).unwrap();
        if out.crossing_count <= s.len() {
            sparse += 1;
            assert!(out.cuts.len() <= 2 * out.crossing_count);
            assert!(verify_cuts(&s, &out.cuts).unwrap());
        }
    }
    assert!(sparse >= 10, "only {sparse} sparse scenes");
}

#[test]
fn segment_strategy_rejects_lines() {
    let err = run_strategy(
        &triangle_scene(),
        &Strategy::SegmentSensitive(PartitionParams::default()),
    )
    .unwrap_err();
    assert!(matches!(err, CutterError::WrongKind { .. }));
}

#[test]
fn crossing_counts_of_known_scenes() {
    assert_eq!(scene_stats(&triangle_scene()).unwrap().crossing_count, 3);
    assert_eq!(
        scene_stats(&gen_random(50, 9, &int(1000)).unwrap())
            .unwrap()
            .crossing_count,
        1225
    );
    assert_eq!(
        scene_stats(&gen_grid_pattern(1, 0).unwrap())
            .unwrap()
            .crossing_count,
        1
    );
    assert_eq!(
        scene_stats(&gen_grid_pattern(3, 0).unwrap())
            .unwrap()
            .crossing_count,
        9
    );
}

#[test]
fn generators_are_deterministic() {
    assert!(gen_random(0, 5, &int(1000)).unwrap().is_empty());
    for kind in [
        GeneratorKind::RandomLines,
        GeneratorKind::RandomSegments,
        GeneratorKind::GridLowerBound,
        GeneratorKind::GridPattern,
    ] {
        let spec = GeneratorSpec::new(kind, 3, 42);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(scene_to_json(&a), scene_to_json(&b));
        assert!(validate_scene(&a).ok);
        let other = generate(&GeneratorSpec::new(kind, 3, 43)).unwrap();
        if kind != GeneratorKind::GridPattern {
            assert_ne!(
                scene_to_json(&a),
                scene_to_json(&other),
                "{kind:?} ignores its seed"
            );
        }
    }
}
