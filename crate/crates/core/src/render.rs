//! Deterministic SVG rendering of polygon decompositions.
//!
//! Output is byte-stable for fixed input: coordinates print through one
//! fixed-precision formatter, no timestamps, no randomness.

use std::fmt::Write as _;

use crate::castle::{CastleSet, Tree};
use crate::hyp::Quadrangulation;
use crate::num::PlanarVec;
use crate::surface::TranslationSurface;

const SCALE: f64 = 80.0;
const MARGIN: f64 = 20.0;
const GAP: f64 = 0.4;

fn fmt_coord(x: f64) -> String {
    // fixed decimals keep the byte output stable across platforms
    format!("{x:.4}")
}

struct Canvas {
    shapes: String,
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl Canvas {
    fn new() -> Self {
        Canvas {
            shapes: String::new(),
            min_x: f64::MAX,
            max_x: f64::MIN,
            min_y: f64::MAX,
            max_y: f64::MIN,
        }
    }

    fn see(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.max_x = self.max_x.max(x);
        self.min_y = self.min_y.min(y);
        self.max_y = self.max_y.max(y);
    }

    fn polygon(&mut self, points: &[(f64, f64)], fill: &str) {
        let mut p = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            self.see(x, y);
            let _ = write!(
                p,
                "{}{},{}",
                if i > 0 { " " } else { "" },
                fmt_coord(x),
                fmt_coord(-y)
            );
        }
        let _ = writeln!(
            self.shapes,
            "  <polygon points=\"{p}\" fill=\"{fill}\" stroke=\"#333\" stroke-width=\"0.02\"/>"
        );
    }

    fn dashed(&mut self, a: (f64, f64), b: (f64, f64)) {
        self.see(a.0, a.1);
        self.see(b.0, b.1);
        let _ = writeln!(
            self.shapes,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888\" stroke-width=\"0.015\" stroke-dasharray=\"0.05,0.05\"/>",
            fmt_coord(a.0),
            fmt_coord(-a.1),
            fmt_coord(b.0),
            fmt_coord(-b.1)
        );
    }

    fn label(&mut self, x: f64, y: f64, text: &str) {
        self.see(x, y);
        let _ = writeln!(
            self.shapes,
            "  <text x=\"{}\" y=\"{}\" font-size=\"0.12\" fill=\"#222\" text-anchor=\"middle\">{}</text>",
            fmt_coord(x),
            fmt_coord(-y),
            text
        );
    }

    fn finish(self) -> String {
        let w = (self.max_x - self.min_x).max(0.1);
        let h = (self.max_y - self.min_y).max(0.1);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">\n{}</svg>\n",
            fmt_coord(w * SCALE + 2.0 * MARGIN),
            fmt_coord(h * SCALE + 2.0 * MARGIN),
            fmt_coord(self.min_x - MARGIN / SCALE),
            fmt_coord(-self.max_y - MARGIN / SCALE),
            fmt_coord(w + 2.0 * MARGIN / SCALE),
            fmt_coord(h + 2.0 * MARGIN / SCALE),
            self.shapes
        )
    }
}

const FILLS: [&str; 6] = [
    "#cfe8f3", "#f3d9cf", "#d9f3cf", "#f3eecf", "#e4cff3", "#cff3ea",
];

/// Renders a quadrangulation: one quadrilateral per wedge, side by side,
/// forward diagonals dashed, sides labeled.
pub fn render_quadrangulation(q: &Quadrangulation) -> String {
    let mut canvas = Canvas::new();
    let mut offset = 0.0f64;
    for i in 0..q.k() {
        let w = &q.wedges[i];
        let d = q.forward_diagonal(i);
        let base = (offset - w.l.x.to_f64(), 0.0);
        let at = |v: &PlanarVec| (base.0 + v.x.to_f64(), base.1 + v.y.to_f64());
        let pts = [base, at(&w.r), at(&d), at(&w.l)];
        canvas.polygon(&pts, FILLS[i % FILLS.len()]);
        canvas.dashed(base, at(&d));
        let mid = |a: (f64, f64), b: (f64, f64)| ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
        let (lx, ly) = mid(base, at(&w.l));
        canvas.label(lx, ly, &format!("l{}", i + 1));
        let (rx, ry) = mid(base, at(&w.r));
        canvas.label(rx, ry, &format!("r{}", i + 1));
        let (tlx, tly) = mid(at(&w.l), at(&d));
        canvas.label(tlx, tly, &format!("r{}", q.pi_l.apply(i) + 1));
        let (trx, try_) = mid(at(&w.r), at(&d));
        canvas.label(trx, try_, &format!("l{}", q.pi_r.apply(i) + 1));
        offset += q.width(i).to_f64() + GAP;
    }
    canvas.finish()
}

/// Renders a castle set: each polygon with its stacked triangulation,
/// chords and the vertical through the wedge dashed.
pub fn render_castle(set: &CastleSet) -> String {
    let mut canvas = Canvas::new();
    let mut offset = 0.0f64;
    for i in 0..set.k() {
        let w = &set.wedges[i];
        let base = (offset - w.l.x.to_f64(), 0.0);
        let at = |v: &PlanarVec| (base.0 + v.x.to_f64(), base.1 + v.y.to_f64());
        let mut pts = vec![base, at(&w.r)];
        let mut upper = Vec::new();
        collect_junctions(set, &set.forest.trees[i], &w.l, &mut upper);
        let mut top_y = w.l.y.to_f64().max(w.r.y.to_f64());
        for v in upper.iter().rev() {
            pts.push(at(v));
            top_y = top_y.max(v.y.to_f64());
        }
        pts.push(at(&w.l));
        canvas.polygon(&pts, FILLS[i % FILLS.len()]);
        for v in &upper {
            canvas.dashed(base, at(v));
        }
        canvas.dashed(base, (base.0, base.1 + top_y));
        canvas.label(base.0, -0.15, &format!("p{}", i + 1));
        offset += set.width(i).to_f64() + GAP;
    }
    canvas.finish()
}

fn collect_junctions(set: &CastleSet, tree: &Tree, pos: &PlanarVec, out: &mut Vec<PlanarVec>) {
    if let Tree::Node(a, b) = tree {
        collect_junctions(set, a, pos, out);
        let junction = pos + &set.chord(a);
        out.push(junction.clone());
        collect_junctions(set, b, &junction, out);
    }
}

/// Renders the polygons of a translation surface with gluing labels.
pub fn render_surface(surface: &TranslationSurface) -> String {
    let mut canvas = Canvas::new();
    for (p, poly) in surface.polygons.iter().enumerate() {
        let pts: Vec<(f64, f64)> = poly.iter().map(|v| v.to_f64()).collect();
        canvas.polygon(&pts, FILLS[p % FILLS.len()]);
    }
    for (idx, &(a, b)) in surface.gluing.iter().enumerate() {
        let name = (b'a' + (idx % 26) as u8) as char;
        for e in [a, b] {
            let poly = &surface.polygons[e.0];
            let n = poly.len();
            let (x1, y1) = poly[e.1].to_f64();
            let (x2, y2) = poly[(e.1 + 1) % n].to_f64();
            canvas.label((x1 + x2) / 2.0, (y1 + y2) / 2.0, &name.to_string());
        }
    }
    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::castle::sqrt2_example;
    use crate::hyp::{genus_two_example, golden_torus_example};
    use crate::surface::square_torus;

    #[test]
    fn byte_identical_output() {
        let q = genus_two_example();
        assert_eq!(render_quadrangulation(&q), render_quadrangulation(&q));
        let s = sqrt2_example();
        assert_eq!(render_castle(&s), render_castle(&s));
        let t = square_torus();
        assert_eq!(render_surface(&t), render_surface(&t));
    }

    #[test]
    fn golden_quadrilateral_has_one_dashed_diagonal() {
        let svg = render_quadrangulation(&golden_torus_example());
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn h2_renders_three_quadrilaterals() {
        let svg = render_quadrangulation(&genus_two_example());
        assert_eq!(svg.matches("<polygon").count(), 3);
    }

    #[test]
    fn castle_pentagon_shapes() {
        // after one move: triangle + quadrilateral + pentagon
        let (set, _) =
            crate::castle::forward_move(&crate::castle::h000_castle_example(), 0).unwrap();
        let svg = render_castle(&set);
        assert_eq!(svg.matches("<polygon").count(), 3);
        // polygon vertex counts 3, 4, 5: one comma per vertex
        let mut sizes: Vec<usize> = svg
            .lines()
            .filter(|l| l.contains("<polygon"))
            .map(|l| l.matches(',').count())
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 4, 5]);
    }
}
