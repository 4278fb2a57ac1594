//! Standalone SVG debug drawings.

use std::fmt::Write;

use quadlab_core::geom::BoundingBox;
use quadlab_core::{MarkedQuadrilateral, Point};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub polygon: Vec<Point>,
    pub marks: Vec<Point>,
    /// Lower-left corners and side lengths of grid squares.
    pub cells: Vec<(Point, f64)>,
    pub regions: Vec<Vec<Point>>,
    pub paths: Vec<Vec<Point>>,
    pub disks: Vec<(Point, f64)>,
}

impl Scene {
    pub fn of_quad(q: &MarkedQuadrilateral) -> Self {
        Scene { polygon: q.polygon().vertices().to_vec(), marks: q.mark_points().to_vec(), ..Scene::default() }
    }

    fn bbox(&self) -> BoundingBox {
        let mut pts = self.polygon.clone();
        pts.extend(self.cells.iter().flat_map(|&(p, s)| [p, p + Point::new(s, s)]));
        pts.extend(self.disks.iter().flat_map(|&(c, r)| [c - Point::new(r, r), c + Point::new(r, r)]));
        pts.extend(self.paths.iter().flatten().copied());
        BoundingBox::of(&pts)
    }
}

fn points_attr(pts: &[Point]) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{},{}", p.x, -p.y).unwrap();
    }
    s
}

/// Renders the scene with y pointing up and a 5% margin.
pub fn render_svg(scene: &Scene) -> String {
    let bb = scene.bbox();
    let pad = 0.05 * bb.width().max(bb.height()).max(f64::MIN_POSITIVE);
    let (x0, y0) = (bb.min.x - pad, -bb.max.y - pad);
    let (w, h) = (bb.width() + 2.0 * pad, bb.height() + 2.0 * pad);
    let stroke = 0.002 * w.max(h);
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {w} {h}" width="800" height="{}">"#, (800.0 * h / w).round()).unwrap();
    out.push_str("<g id=\"polygon\">\n");
    writeln!(out, r##"<polygon points="{}" fill="#eef" stroke="black" stroke-width="{stroke}"/>"##, points_attr(&scene.polygon)).unwrap();
    for m in &scene.marks {
        writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="red"/>"#, m.x, -m.y, 3.0 * stroke).unwrap();
    }
    out.push_str("</g>\n");
    if !scene.cells.is_empty() {
        out.push_str("<g id=\"cells\" fill=\"#f99\" fill-opacity=\"0.5\">\n");
        for &(p, s) in &scene.cells {
            writeln!(out, r#"<rect x="{}" y="{}" width="{s}" height="{s}"/>"#, p.x, -(p.y + s)).unwrap();
        }
        out.push_str("</g>\n");
    }
    if !scene.regions.is_empty() {
        out.push_str("<g id=\"regions\">\n");
        let fills = ["#9c9", "#c99"];
        for (i, r) in scene.regions.iter().enumerate() {
            writeln!(out, r#"<polygon points="{}" fill="{}" fill-opacity="0.4"/>"#, points_attr(r), fills[i % 2]).unwrap();
        }
        out.push_str("</g>\n");
    }
    if !scene.paths.is_empty() {
        writeln!(out, r#"<g id="paths" fill="none" stroke="blue" stroke-width="{stroke}">"#).unwrap();
        for p in &scene.paths {
            writeln!(out, r#"<polyline points="{}"/>"#, points_attr(p)).unwrap();
        }
        out.push_str("</g>\n");
    }
    if !scene.disks.is_empty() {
        writeln!(out, r#"<g id="disks" fill="none" stroke="green" stroke-width="{stroke}">"#).unwrap();
        for &(c, r) in &scene.disks {
            writeln!(out, r#"<circle cx="{}" cy="{}" r="{r}"/>"#, c.x, -c.y).unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
