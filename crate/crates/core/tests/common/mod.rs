//! Helpers shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

pub mod levels;
pub mod oracle;

use depthcut::geom::{int, Scene};
use depthcut::scenes::{
    gen_grid_lower_bound, gen_grid_pattern, gen_random, gen_random_segments, triangle_scene,
};

/// Small scenes of every flavour, each with a label.
pub fn corpus() -> Vec<(String, Scene)> {
    let bound = int(1000);
    let mut out = vec![("triangle".to_string(), triangle_scene())];
    for (n, seed) in [
        (0, 0),
        (1, 1),
        (2, 2),
        (5, 3),
        (12, 4),
        (25, 5),
        (40, 6),
        (60, 7),
    ] {
        out.push((
            format!("lines n={n} seed={seed}"),
            gen_random(n, seed, &bound).unwrap(),
        ));
    }
    for (n, seed) in [(3, 10), (15, 11), (40, 12), (60, 13)] {
        out.push((
            format!("segments n={n} seed={seed}"),
            gen_random_segments(n, seed, &bound, None).unwrap(),
        ));
    }
    let short = int(300);
    out.push((
        "short segments n=50".to_string(),
        gen_random_segments(50, 14, &bound, Some(&short)).unwrap(),
    ));
    for m in 1..=3 {
        out.push((
            format!("grid m={m}"),
            gen_grid_lower_bound(m, m as u64, &depthcut::geom::ratio(1, 64))
                .unwrap()
                .scene,
        ));
    }
    for k in [1, 3] {
        out.push((
            format!("grid pattern k={k}"),
            gen_grid_pattern(k, 0).unwrap(),
        ));
    }
    out
}
