//! JSON file formats.

use std::fs;
use std::path::Path;

use quadlab_core::geodesic::GeodesicResult;
use quadlab_core::{
    mark_quadrilateral, validate_polygon, BoundaryLocation, MarkedQuadrilateral, Point, PolygonError, QuadError,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkJson {
    pub edge: usize,
    pub t: f64,
}

/// `{"vertices":[[x,y],...],"marks":[{"edge":i,"t":f},...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadJson {
    pub vertices: Vec<[f64; 2]>,
    pub marks: Vec<MarkJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid polygon: {0}")]
    Polygon(#[from] PolygonError),
    #[error("invalid marks: {0}")]
    Quad(#[from] QuadError),
    #[error("expected 4 marks, found {0}")]
    MarkCount(usize),
    #[error("mark {index} refers to a missing edge or has t outside [0, 1)")]
    MarkOutOfRange { index: usize },
    #[error("mark {index} does not lie on the normalized polygon")]
    MarkLost { index: usize },
}

impl QuadJson {
    pub fn from_quad(q: &MarkedQuadrilateral) -> Self {
        QuadJson {
            vertices: q.polygon().vertices().iter().map(|p| [p.x, p.y]).collect(),
            marks: q.marks().iter().map(|m| MarkJson { edge: m.edge, t: m.t }).collect(),
        }
    }

    /// Validates the polygon and carries the marks over to it.
    ///
    /// Marks are resolved to points on the input polygon first and located
    /// again after duplicate removal and reorientation. For clockwise input
    /// the marks are reordered so the a-sides stay the a-sides.
    pub fn to_quad(&self) -> Result<MarkedQuadrilateral, FormatError> {
        if self.marks.len() != 4 {
            return Err(FormatError::MarkCount(self.marks.len()));
        }
        let raw: Vec<Point> = self.vertices.iter().map(|&[x, y]| Point::new(x, y)).collect();
        let poly = validate_polygon(&raw)?;
        let n = raw.len();
        let mut points = [Point::new(0.0, 0.0); 4];
        for (i, m) in self.marks.iter().enumerate() {
            if m.edge >= n || !(0.0..1.0).contains(&m.t) {
                return Err(FormatError::MarkOutOfRange { index: i });
            }
            points[i] = raw[m.edge].lerp(raw[(m.edge + 1) % n], m.t);
            if m.t == 0.0 {
                points[i] = raw[m.edge];
            }
        }
        let signed: f64 = (0..n).map(|i| raw[i].cross(raw[(i + 1) % n])).sum();
        if signed < 0.0 {
            points = [points[1], points[0], points[3], points[2]];
        }
        let mut marks = [BoundaryLocation::vertex(0); 4];
        for (i, p) in points.iter().enumerate() {
            let (loc, d) = poly.nearest_location(*p);
            if d > poly.eta() {
                return Err(FormatError::MarkLost { index: i });
            }
            marks[i] = loc;
        }
        Ok(mark_quadrilateral(poly, marks)?)
    }
}

pub fn parse_quad(text: &str) -> Result<MarkedQuadrilateral, FormatError> {
    serde_json::from_str::<QuadJson>(text)?.to_quad()
}

pub fn read_quad(path: &Path) -> Result<MarkedQuadrilateral, FormatError> {
    parse_quad(&fs::read_to_string(path)?)
}

pub fn quad_to_json(q: &MarkedQuadrilateral) -> String {
    serde_json::to_string_pretty(&QuadJson::from_quad(q)).expect("plain data serializes")
}

/// `{"length":f,"path":[[x,y],...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicJson {
    pub length: f64,
    pub path: Vec<[f64; 2]>,
}

impl From<&GeodesicResult> for GeodesicJson {
    fn from(g: &GeodesicResult) -> Self {
        GeodesicJson { length: g.length, path: g.path.iter().map(|p| [p.x, p.y]).collect() }
    }
}

pub fn point_json(p: Point) -> [f64; 2] {
    [p.x, p.y]
}
