//! Random rectilinear quadrilaterals grown from a cell blob.

use std::collections::BTreeSet;

use quadlab_core::cells::{boundary_cycle, Cell};
use quadlab_core::{mark_quadrilateral, validate_polygon, MarkedQuadrilateral, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MarkPolicy {
    /// Arclength quantiles `q, q + 1/4, q + 1/2, q + 3/4` with a random phase `q`.
    RandomPhase,
    /// Same quantiles with a fixed phase in `[0, 1)`.
    Phase(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub seed: u64,
    /// The blob lives in an `n x n` grid of unit cells.
    pub n: u32,
    pub cells: usize,
    pub marks: MarkPolicy,
}

impl GeneratorParams {
    pub fn new(seed: u64, n: u32, cells: usize) -> Self {
        GeneratorParams { seed, n, cells, marks: MarkPolicy::RandomPhase }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GenerateError {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("no valid blob after {attempts} attempts")]
    GenerationFailed { attempts: u32 },
}

const ATTEMPTS: u32 = 32;

/// Grows a blob by a random walk, keeping its boundary one simple cycle, and
/// marks four boundary points at integer arclengths.
pub fn generate_random_rectilinear(p: &GeneratorParams) -> Result<MarkedQuadrilateral, GenerateError> {
    let n = p.n as i64;
    if n < 2 || p.cells < 2 || p.cells > (n * n) as usize {
        return Err(GenerateError::InvalidParams("need 2 <= cells <= n * n"));
    }
    if let MarkPolicy::Phase(q) = p.marks {
        if !(0.0..1.0).contains(&q) {
            return Err(GenerateError::InvalidParams("phase must lie in [0, 1)"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for _ in 0..ATTEMPTS {
        if let Some(q) = attempt(p, n, &mut rng) {
            return Ok(q);
        }
    }
    Err(GenerateError::GenerationFailed { attempts: ATTEMPTS })
}

fn attempt(p: &GeneratorParams, n: i64, rng: &mut ChaCha8Rng) -> Option<MarkedQuadrilateral> {
    let start = (n / 2, n / 2);
    let mut blob: BTreeSet<Cell> = BTreeSet::from([start]);
    let mut order: Vec<Cell> = vec![start];
    let mut walker = start;
    let mut stalls = 0usize;
    while blob.len() < p.cells {
        if stalls > 64 * p.cells {
            return None;
        }
        if rng.random_bool(0.1) {
            walker = order[rng.random_range(0..order.len())];
        }
        let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.random_range(0..4)];
        let next = (walker.0 + dx, walker.1 + dy);
        if next.0 < 0 || next.1 < 0 || next.0 >= n || next.1 >= n {
            stalls += 1;
            continue;
        }
        if blob.contains(&next) {
            walker = next;
            stalls += 1;
            continue;
        }
        blob.insert(next);
        if boundary_cycle(&blob).is_err() {
            blob.remove(&next);
            stalls += 1;
            continue;
        }
        order.push(next);
        walker = next;
    }
    let ring = boundary_cycle(&blob).ok()?;
    let pts: Vec<Point> = ring.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect();
    let poly = validate_polygon(&pts).ok()?;
    let per = poly.perimeter();
    let phase = match p.marks {
        MarkPolicy::RandomPhase => rng.random::<f64>(),
        MarkPolicy::Phase(q) => q,
    };
    let marks = [0.0, 0.25, 0.5, 0.75].map(|f| {
        let s = ((phase + f) * per).round() % per;
        poly.location_at(s)
    });
    mark_quadrilateral(poly, marks).ok()
}
