//! Back-to-front SVG drawings of cut scenes.

use std::fmt::Write;

use depthcut::depth::{build_graph, depth_order};
use depthcut::geom::{apply_cuts, to_f64, CutSet, GeomError, Piece, Point2, Scene};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 24.0;
const STROKE: f64 = 2.0;
const HALO: f64 = 7.0;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("the pieces contain a depth cycle, so no back-to-front order exists")]
    CyclicInput,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Applies `cuts` and draws the resulting pieces in a depth order.
pub fn render_svg(scene: &Scene, cuts: &CutSet) -> Result<String, RenderError> {
    let pieces = apply_cuts(scene, cuts)?;
    let g = build_graph(scene, &pieces)?;
    let order = depth_order(&g).ok_or(RenderError::CyclicInput)?;
    let crossings: Vec<Point2> = g
        .edges()
        .iter()
        .map(|e| g.crossing_point(e).point)
        .collect();
    Ok(render_pieces(scene, &pieces, &order, &crossings))
}

/// Draws `pieces` in the given order, each as a white halo with a colored
/// stroke on top, so a piece drawn later visibly covers earlier ones. The
/// frame holds every finite piece end, a point of every piece and
/// `landmarks`; unbounded pieces are clipped to it.
pub fn render_pieces(
    scene: &Scene,
    pieces: &[Piece],
    order: &[usize],
    landmarks: &[Point2],
) -> String {
    let carriers = scene.carriers();
    let mut frame = Frame::default();
    for p in pieces {
        let c = &carriers[p.parent_index];
        for t in [&p.interval.lo, &p.interval.hi].into_iter().flatten() {
            frame.include(&c.xy_at(t));
        }
        frame.include(&c.xy_at(&p.interval.representative()));
    }
    for q in landmarks {
        frame.include(q);
    }
    let frame = frame.padded();
    let (w, h) = frame.size();

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for &k in order {
        let p = &pieces[k];
        let c = &carriers[p.parent_index];
        let o = [to_f64(&c.origin.x), to_f64(&c.origin.y)];
        let d = [to_f64(&c.direction.x), to_f64(&c.direction.y)];
        let lo = p.interval.lo.as_ref().map_or(f64::NEG_INFINITY, to_f64);
        let hi = p.interval.hi.as_ref().map_or(f64::INFINITY, to_f64);
        let Some((t0, t1)) = frame.clip(o, d, lo, hi) else {
            continue;
        };
        let (x0, y0) = frame.map([o[0] + t0 * d[0], o[1] + t0 * d[1]]);
        let (x1, y1) = frame.map([o[0] + t1 * d[0], o[1] + t1 * d[1]]);
        let hue = (p.parent_index * 137) % 360;
        writeln!(
            svg,
            r#"<g class="piece" data-piece="{}" data-object="{}">"#,
            p.id, p.parent
        )
        .unwrap();
        writeln!(
            svg,
            r#"  <line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="white" stroke-width="{HALO}"/>"#
        )
        .unwrap();
        writeln!(
            svg,
            r#"  <line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="hsl({hue},70%,40%)" stroke-width="{STROKE}" stroke-linecap="round"/>"#
        )
        .unwrap();
        writeln!(svg, "</g>").unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

/// World-space bounding box of the drawing.
#[derive(Clone, Copy, Debug)]
struct Frame {
    min: [f64; 2],
    max: [f64; 2],
}

impl Default for Frame {
    fn default() -> Self {
        Frame {
            min: [f64::INFINITY; 2],
            max: [f64::NEG_INFINITY; 2],
        }
    }
}

impl Frame {
    fn include(&mut self, q: &Point2) {
        let q = [to_f64(&q.x), to_f64(&q.y)];
        for (k, v) in q.into_iter().enumerate() {
            self.min[k] = self.min[k].min(v);
            self.max[k] = self.max[k].max(v);
        }
    }

    /// Adds a 10% border, at least one unit; a unit box around the origin
    /// when empty.
    fn padded(self) -> Frame {
        if self.min[0] > self.max[0] {
            return Frame {
                min: [-1.0; 2],
                max: [1.0; 2],
            };
        }
        let span = (self.max[0] - self.min[0]).max(self.max[1] - self.min[1]);
        let pad = (span * 0.1).max(1.0);
        Frame {
            min: [self.min[0] - pad, self.min[1] - pad],
            max: [self.max[0] + pad, self.max[1] + pad],
        }
    }

    fn scale(&self) -> f64 {
        (WIDTH - 2.0 * MARGIN) / (self.max[0] - self.min[0]).max(self.max[1] - self.min[1])
    }

    /// Pixel size of the image.
    fn size(&self) -> (f64, f64) {
        let s = self.scale();
        (
            (self.max[0] - self.min[0]) * s + 2.0 * MARGIN,
            (self.max[1] - self.min[1]) * s + 2.0 * MARGIN,
        )
    }

    /// World to pixel coordinates, y pointing up.
    fn map(&self, q: [f64; 2]) -> (f64, f64) {
        let s = self.scale();
        (
            MARGIN + (q[0] - self.min[0]) * s,
            MARGIN + (self.max[1] - q[1]) * s,
        )
    }

    /// Parameter range of `o + t·d`, `lo ≤ t ≤ hi`, inside the box.
    fn clip(&self, o: [f64; 2], d: [f64; 2], lo: f64, hi: f64) -> Option<(f64, f64)> {
        let (mut t0, mut t1) = (lo, hi);
        for k in 0..2 {
            if d[k] == 0.0 {
                if o[k] < self.min[k] || o[k] > self.max[k] {
                    return None;
                }
                continue;
            }
            let a = (self.min[k] - o[k]) / d[k];
            let b = (self.max[k] - o[k]) / d[k];
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t0 <= t1).then_some((t0, t1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use depthcut::geom::{int, ObjectId};
    use depthcut::scenes::triangle_scene;

    #[test]
    fn clip_bounds_a_whole_line() {
        let f = Frame {
            min: [0.0, 0.0],
            max: [2.0, 2.0],
        };
        assert_eq!(
            f.clip([0.0, 1.0], [1.0, 0.0], f64::NEG_INFINITY, f64::INFINITY),
            Some((0.0, 2.0))
        );
        assert_eq!(
            f.clip([0.0, 3.0], [1.0, 0.0], f64::NEG_INFINITY, f64::INFINITY),
            None
        );
        assert_eq!(
            f.clip([0.0, 1.0], [1.0, 0.0], 0.5, f64::INFINITY),
            Some((0.5, 2.0))
        );
    }

    #[test]
    fn uncut_triangle_is_cyclic() {
        assert!(matches!(
            render_svg(&triangle_scene(), &CutSet::new()),
            Err(RenderError::CyclicInput)
        ));
    }

    #[test]
    fn one_cut_gives_four_strokes() {
        let mut cuts = CutSet::new();
        cuts.insert(ObjectId(1), int(1));
        let svg = render_svg(&triangle_scene(), &cuts).unwrap();
        assert_eq!(svg.matches(r#"class="piece""#).count(), 4);
    }
}
