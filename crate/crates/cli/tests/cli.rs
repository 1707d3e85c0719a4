use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use depthcut::depth::{build_graph, depth_order};
use depthcut::geom::{apply_cuts, int, CutSet, ObjectId};
use depthcut::io::{cuts_from_json, cuts_to_json, scene_from_json, scene_to_json};
use depthcut::scenes::{gen_random, triangle_scene};
use depthcut_cli::render::render_svg;
use depthcut_cli::run_cli;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("depthcut").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn naive_cut_and_verify_on_the_triangle() {
    let dir = TempDir::new().unwrap();
    let scene = write(dir.path(), "s3.json", &scene_to_json(&triangle_scene()));
    let cuts = dir.path().join("cuts.json");
    let r = run(&["cut", s(&scene), "--strategy", "naive", "--out", s(&cuts)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stderr.contains("6 cuts"), "{}", r.stderr);
    assert_eq!(
        cuts_from_json(&fs::read_to_string(&cuts).unwrap())
            .unwrap()
            .len(),
        6
    );

    let r = run(&["verify", s(&scene), s(&cuts)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("acyclic"));
}

#[test]
fn verify_reports_the_cycle_of_an_uncut_triangle() {
    let dir = TempDir::new().unwrap();
    let scene = write(dir.path(), "s3.json", &scene_to_json(&triangle_scene()));
    let cuts = write(dir.path(), "none.json", &cuts_to_json(&CutSet::new()));
    let r = run(&["verify", s(&scene), s(&cuts)]);
    assert_ne!(r.code, 0);
    assert!(r.stdout.starts_with("cyclic"));
}

#[test]
fn cut_with_verify_flags_every_strategy() {
    let dir = TempDir::new().unwrap();
    let scene = write(
        dir.path(),
        "r.json",
        &scene_to_json(&gen_random(20, 3, &int(1000)).unwrap()),
    );
    for strategy in ["naive", "greedy", "partition"] {
        let r = run(&[
            "cut",
            s(&scene),
            "--strategy",
            strategy,
            "--verify",
            "--degree",
            "2",
        ]);
        assert_eq!(r.code, 0, "{strategy}: {}", r.stderr);
        assert!(r.stderr.contains("acyclic"), "{}", r.stderr);
        let cuts = cuts_from_json(&r.stdout).unwrap();
        assert!(
            depthcut::cutters::verify_cuts(&gen_random(20, 3, &int(1000)).unwrap(), &cuts).unwrap()
        );
    }
    let r = run(&["cut", s(&scene), "--strategy", "segment-sensitive"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error:"));
}

#[test]
fn csv_and_svg_cut_formats() {
    let dir = TempDir::new().unwrap();
    let scene = write(dir.path(), "s3.json", &scene_to_json(&triangle_scene()));
    let r = run(&["cut", s(&scene), "--strategy", "greedy", "--format", "csv"]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    let r = run(&["cut", s(&scene), "--strategy", "greedy", "--format", "svg"]);
    assert_eq!(r.code, 0);
    roxmltree::Document::parse(&r.stdout).unwrap();
}

#[test]
fn empty_scene_renders_to_an_empty_drawing() {
    let dir = TempDir::new().unwrap();
    let scene = write(dir.path(), "empty.json", r#"{"kind":"lines","objects":[]}"#);
    let out = dir.path().join("empty.svg");
    let r = run(&["render-svg", s(&scene), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = fs::read_to_string(&out).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let drawn = doc
        .descendants()
        .filter(|n| matches!(n.tag_name().name(), "line" | "path" | "polyline" | "circle"))
        .count();
    assert_eq!(drawn, 0);
}

#[test]
fn uncut_triangle_cannot_be_rendered() {
    let dir = TempDir::new().unwrap();
    let scene = write(dir.path(), "s3.json", &scene_to_json(&triangle_scene()));
    let r = run(&["render-svg", s(&scene)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("error"));
}

/// Drawing order of the pieces, read back from the document.
fn draw_order(svg: &str) -> Vec<usize> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    doc.descendants()
        .filter(|n| n.attribute("class") == Some("piece"))
        .map(|n| n.attribute("data-piece").unwrap().parse().unwrap())
        .collect()
}

#[test]
fn later_pieces_are_drawn_above_earlier_ones() {
    let mut cases = vec![(triangle_scene(), {
        let mut c = CutSet::new();
        c.insert(ObjectId(1), int(1));
        c
    })];
    for seed in 0..4 {
        let scene = gen_random(15, seed, &int(1000)).unwrap();
        let cuts = depthcut::cutters::greedy_cycle_cut(&scene).unwrap();
        cases.push((scene, cuts));
    }
    for (scene, cuts) in cases {
        let svg = render_svg(&scene, &cuts).unwrap();
        let order = draw_order(&svg);
        let pieces = apply_cuts(&scene, &cuts).unwrap();
        assert_eq!(order.len(), pieces.len());
        let mut rank = vec![usize::MAX; pieces.len()];
        for (r, &p) in order.iter().enumerate() {
            rank[p] = r;
        }
        let g = build_graph(&scene, &pieces).unwrap();
        assert!(depth_order(&g).is_some());
        for e in g.edges() {
            assert!(
                rank[e.below] < rank[e.above],
                "piece {} drawn over piece {}",
                e.below,
                e.above
            );
        }
    }
}

#[test]
fn single_object_is_one_stroke() {
    let scene = gen_random(1, 0, &int(10)).unwrap();
    assert_eq!(
        draw_order(&render_svg(&scene, &CutSet::new()).unwrap()),
        vec![0]
    );
}

#[test]
fn gen_is_deterministic_and_valid() {
    let a = run(&[
        "gen",
        "--kind",
        "random-segments",
        "-n",
        "12",
        "--seed",
        "9",
    ]);
    let b = run(&[
        "gen",
        "--kind",
        "random-segments",
        "-n",
        "12",
        "--seed",
        "9",
    ]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let scene = scene_from_json(&a.stdout).unwrap();
    assert_eq!(scene.len(), 12);

    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "g.json", &a.stdout);
    let r = run(&["validate", s(&path)]);
    assert_eq!(r.code, 0);
    let report: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report["ok"], serde_json::Value::Bool(true));

    let grid = run(&[
        "gen",
        "--kind",
        "grid-lower-bound",
        "-n",
        "2",
        "--seed",
        "1",
    ]);
    assert_eq!(scene_from_json(&grid.stdout).unwrap().len(), 12);
}

#[test]
fn validate_flags_a_degenerate_scene() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"kind":"lines","objects":[
        {"id":1,"origin":["0","0","0"],"direction":["1","0","0"]},
        {"id":2,"origin":["0","1","0"],"direction":["2","0","1"]}]}"#;
    let path = write(dir.path(), "bad.json", text);
    let r = run(&["validate", s(&path)]);
    assert_eq!(r.code, 1);
    assert!(
        r.stdout.contains("ProjectionParallel") || r.stdout.contains("projection_parallel"),
        "{}",
        r.stdout
    );
}

#[test]
fn malformed_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "junk.json", "{not json");
    let r = run(&["validate", s(&path)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error:"));
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["cut", "/nonexistent/scene.json"]).code, 2);
}

#[test]
fn bench_rows_are_sorted_acyclic_and_reproducible() {
    let args = [
        "bench",
        "--strategy",
        "naive,partition",
        "--sizes",
        "12,20",
        "--seeds",
        "2",
        "--format",
        "csv",
    ];
    let a = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert!(a.stderr.contains("fitted exponent"));
    let mut reader = csv::Reader::from_reader(a.stdout.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "n",
            "seed",
            "strategy",
            "cut_count",
            "piece_count",
            "wall_time_ms",
            "acyclic"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    let keys: Vec<(String, usize, u64)> = rows
        .iter()
        .map(|r| {
            (
                r[2].to_string(),
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(rows.iter().all(|r| &r[6] == "true"));
    for r in rows.iter().filter(|r| &r[2] == "naive") {
        let n: usize = r[0].parse().unwrap();
        assert_eq!(r[3].parse::<usize>().unwrap(), n * (n - 1));
    }

    let b = run(&args);
    let strip = |text: &str| -> Vec<String> {
        csv::Reader::from_reader(text.as_bytes())
            .records()
            .map(|r| {
                let r = r.unwrap();
                format!(
                    "{},{},{},{},{},{}",
                    &r[0], &r[1], &r[2], &r[3], &r[4], &r[6]
                )
            })
            .collect()
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn bench_writes_csv_and_scatter() {
    let dir = TempDir::new().unwrap();
    let r = run(&[
        "bench",
        "--strategy",
        "naive",
        "--sizes",
        "8,16",
        "--seeds",
        "1",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(dir.path().join("bench.csv").exists());
    let svg = fs::read_to_string(dir.path().join("bench.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let points = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("point"))
        .count();
    assert_eq!(points, 2);
    let references = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("reference"))
        .count();
    assert_eq!(references, 2);
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_depthcut"))
}

#[test]
fn seed_falls_back_to_the_environment() {
    let gen = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = binary();
        cmd.args(["gen", "-n", "5"]);
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        match env {
            Some(v) => cmd.env("DEPTHCUT_SEED", v),
            None => cmd.env_remove("DEPTHCUT_SEED"),
        };
        let out = cmd.output().unwrap();
        (
            out.status.code().unwrap(),
            String::from_utf8(out.stdout).unwrap(),
        )
    };
    let (code, from_env) = gen(Some("17"), None);
    assert_eq!(code, 0);
    assert_eq!(gen(None, Some("17")).1, from_env);
    assert_ne!(gen(None, None).1, from_env);
    assert_eq!(gen(Some("17"), Some("3")).1, gen(None, Some("3")).1);
    assert_eq!(gen(Some("seventeen"), None).0, 2);
}

#[test]
fn binary_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let scene = dir.path().join("scene.json");
    let cuts = dir.path().join("cuts.json");
    let svg = dir.path().join("out.svg");
    let status = |args: &[&str]| {
        binary()
            .args(args)
            .env_remove("DEPTHCUT_SEED")
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(
        status(&["gen", "-n", "25", "--seed", "4", "--out", s(&scene)]),
        0
    );
    assert_eq!(status(&["cut", s(&scene), "--out", s(&cuts)]), 0);
    assert_eq!(status(&["verify", s(&scene), s(&cuts)]), 0);
    assert_eq!(
        status(&["render-svg", s(&scene), s(&cuts), "--out", s(&svg)]),
        0
    );
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(
        draw_order(&text).len(),
        25 + cuts_from_json(&fs::read_to_string(&cuts).unwrap())
            .unwrap()
            .len()
    );
}
