//! SVG drawings of instances: points, spanning tree in light strokes, the
//! tour (or walk) in heavy strokes, revisited vertices highlighted.
//!
//! The instance is affinely mapped onto a 1000x1000 viewbox with a 5%
//! margin, so rendering is deterministic and independent of coordinate
//! magnitudes.

use powertsp::geometry::PointSet;
use powertsp::spanning::Tree;

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 50.0;

struct Mapper {
    min: [f64; 2],
    scale: [f64; 2],
}

impl Mapper {
    fn new(points: &PointSet) -> Mapper {
        let xy = |p: &powertsp::geometry::Point, axis: usize| {
            p.coords().get(axis).copied().unwrap_or(0.0)
        };
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points.points() {
            for axis in 0..2 {
                min[axis] = min[axis].min(xy(p, axis));
                max[axis] = max[axis].max(xy(p, axis));
            }
        }
        let scale = [0, 1].map(|axis| {
            let extent = max[axis] - min[axis];
            if extent > 0.0 {
                (SIZE - 2.0 * MARGIN) / extent
            } else {
                0.0
            }
        });
        Mapper { min, scale }
    }

    fn map(&self, p: &powertsp::geometry::Point) -> (f64, f64) {
        let coord = |axis: usize| {
            let v = p.coords().get(axis).copied().unwrap_or(0.0);
            if self.scale[axis] > 0.0 {
                MARGIN + (v - self.min[axis]) * self.scale[axis]
            } else {
                SIZE / 2.0
            }
        };
        // flip y so larger coordinates draw upward
        (coord(0), SIZE - coord(1))
    }
}

/// Renders an instance with an optional spanning tree underlay and the tour
/// given as a cyclic vertex sequence. Instances must be 1- or 2-dimensional.
pub fn render(
    points: &PointSet,
    tree: Option<&Tree>,
    tour: &[usize],
    revisited: &[usize],
) -> Result<String, String> {
    if points.dim() > 2 {
        return Err(format!(
            "svg rendering needs 1- or 2-dimensional instances, got dimension {}",
            points.dim()
        ));
    }
    let mapper = Mapper::new(points);
    let mut out = String::new();
    out.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    out.push('\n');
    out.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}">"#
    ));
    out.push('\n');

    if let Some(tree) = tree {
        for e in tree.edges() {
            let (x1, y1) = mapper.map(points.point(e.u));
            let (x2, y2) = mapper.map(points.point(e.v));
            out.push_str(&format!(
                r##"  <line class="mst" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#bbbbbb" stroke-width="1.5"/>"##
            ));
            out.push('\n');
        }
    }

    if tour.len() >= 2 {
        for i in 0..tour.len() {
            let (x1, y1) = mapper.map(points.point(tour[i]));
            let (x2, y2) = mapper.map(points.point(tour[(i + 1) % tour.len()]));
            out.push_str(&format!(
                r##"  <line class="tour" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#c03030" stroke-width="3" stroke-linecap="round"/>"##
            ));
            out.push('\n');
        }
    }

    for (i, p) in points.points().iter().enumerate() {
        let (x, y) = mapper.map(p);
        let (class, fill) = if revisited.contains(&i) {
            ("pt revisit", "#e6a23c")
        } else {
            ("pt", "#1f4e8c")
        };
        out.push_str(&format!(
            r#"  <circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="5" fill="{fill}"/>"#
        ));
        out.push('\n');
    }

    out.push_str("</svg>\n");
    Ok(out)
}
