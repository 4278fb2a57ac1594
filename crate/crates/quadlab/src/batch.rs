//! Corpus runs over generated and file-based instances.

use std::path::{Path, PathBuf};
use std::time::Instant;

use quadlab_core::disk::{
    build_arc_frame, check_exits, construct_disk_traced, split_disk, verify_theorem, ArcFrame, TheoremMode, TraceEvent,
};
use quadlab_core::geodesic::geodesic_between_sides;
use quadlab_core::modulus::{compute_modulus, lattice_step, rengel_bounds, DEFAULT_TOLERANCE};
use quadlab_core::{MarkedQuadrilateral, Provenance, SidePair};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::read_quad;
use crate::generate::{generate_random_rectilinear, GeneratorParams, MarkPolicy};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchMode {
    /// Disk of radius `s_a / (1000 L)` with `L` the instance's own ratio.
    #[default]
    ActualRatio,
    FromL(f64),
    FromK(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratedSet {
    pub seed_start: u64,
    pub count: u64,
    pub n: u32,
    pub cells: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BatchConfig {
    pub generated: Vec<GeneratedSet>,
    /// Instance files, relative to the config file.
    pub files: Vec<PathBuf>,
    pub mode: BatchMode,
    /// Also solve for the modulus.
    pub modulus: bool,
    /// Also run the exit and split checks at this many arc positions.
    pub arc_samples: usize,
    /// Record wall-clock times per row.
    pub timings: bool,
}

enum Source {
    Generated(GeneratorParams),
    File(PathBuf),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub id: String,
    pub s_a: Option<f64>,
    pub s_b: Option<f64>,
    pub modulus: Option<f64>,
    pub modulus_error: Option<f64>,
    pub rengel_lower: Option<f64>,
    pub rengel_upper: Option<f64>,
    /// Modulus inside the Rengel bounds widened by its error estimate.
    pub rengel_ok: Option<bool>,
    pub required_radius: Option<f64>,
    pub found_radius: Option<f64>,
    pub branch: Option<String>,
    pub pass: bool,
    pub exits_ok: Option<bool>,
    pub split_ok: Option<bool>,
    pub millis: Option<u64>,
    pub error: Option<String>,
}

impl BatchRow {
    /// Every check that ran succeeded.
    pub fn all_ok(&self) -> bool {
        self.error.is_none()
            && self.pass
            && self.rengel_ok != Some(false)
            && self.exits_ok != Some(false)
            && self.split_ok != Some(false)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub rows: Vec<BatchRow>,
    pub pass_rate: f64,
    /// Share of passing rows whose disk came from the construction rather
    /// than the global search.
    pub constructive_rate: f64,
}

impl BatchReport {
    fn from_rows(rows: Vec<BatchRow>) -> Self {
        let n = rows.len().max(1) as f64;
        let passed: Vec<&BatchRow> = rows.iter().filter(|r| r.all_ok()).collect();
        let constructive = passed
            .iter()
            .filter(|r| r.branch.as_deref().is_some_and(|b| b != Provenance::GlobalSearch.to_string()))
            .count();
        BatchReport {
            pass_rate: if rows.is_empty() { 1.0 } else { passed.len() as f64 / n },
            constructive_rate: if passed.is_empty() { 1.0 } else { constructive as f64 / passed.len() as f64 },
            rows,
        }
    }

    /// 0 when everything passed, 1 on a failed check, 2 when only input errors occurred.
    pub fn exit_code(&self) -> u8 {
        if self.rows.iter().any(|r| r.error.is_none() && !r.all_ok()) {
            1
        } else if self.rows.iter().any(|r| r.error.is_some()) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).expect("flat rows serialize");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

/// Runs every instance of the config; per-instance failures become rows.
pub fn run_batch(config: &BatchConfig, base: &Path) -> BatchReport {
    let mut sources = Vec::new();
    for set in &config.generated {
        for seed in set.seed_start..set.seed_start + set.count {
            let params = GeneratorParams { seed, n: set.n, cells: set.cells, marks: MarkPolicy::RandomPhase };
            sources.push((format!("gen-{}-{}-{seed}", set.n, set.cells), Source::Generated(params)));
        }
    }
    for f in &config.files {
        sources.push((f.display().to_string(), Source::File(base.join(f))));
    }
    let rows = sources.into_par_iter().map(|(id, src)| run_one(config, id, src)).collect();
    BatchReport::from_rows(rows)
}

fn run_one(config: &BatchConfig, id: String, src: Source) -> BatchRow {
    let start = Instant::now();
    let mut row = BatchRow { id, ..BatchRow::default() };
    let q = match src {
        Source::Generated(p) => generate_random_rectilinear(&p).map_err(|e| e.to_string()),
        Source::File(path) => read_quad(&path).map_err(|e| e.to_string()),
    };
    match q {
        Ok(q) => {
            if let Err(e) = evaluate(config, &q, &mut row) {
                row.error = Some(e);
            }
        }
        Err(e) => row.error = Some(e),
    }
    if config.timings {
        row.millis = Some(start.elapsed().as_millis() as u64);
    }
    row
}

fn branch_of(trace: &[TraceEvent]) -> Option<String> {
    trace.iter().rev().find_map(|e| match e {
        TraceEvent::Branch(p) => Some(p.to_string()),
        _ => None,
    })
}

fn evaluate(config: &BatchConfig, q: &MarkedQuadrilateral, row: &mut BatchRow) -> Result<(), String> {
    let s_a = geodesic_between_sides(q, SidePair::A).length;
    let s_b = geodesic_between_sides(q, SidePair::B).length;
    row.s_a = Some(s_a);
    row.s_b = Some(s_b);
    let bounds = rengel_bounds(s_a, s_b).map_err(|e| e.to_string())?;
    row.rengel_lower = Some(bounds.lower);
    row.rengel_upper = Some(bounds.upper);
    if config.modulus {
        let m = compute_modulus(q, lattice_step(q, 64.0), DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
        row.modulus = Some(m.modulus);
        row.modulus_error = Some(m.error_estimate);
        row.rengel_ok = Some(bounds.contains(m.modulus, m.error_estimate));
    }
    match config.mode {
        BatchMode::ActualRatio => {
            let l = (s_a / s_b).max(s_b / s_a);
            let (disk, trace) = construct_disk_traced(q, l).map_err(|e| e.to_string())?;
            let required = s_a / (1000.0 * l);
            row.required_radius = Some(required);
            row.found_radius = Some(disk.radius);
            row.branch = branch_of(&trace);
            row.pass = disk.is_contained_in(q.polygon()) && disk.radius >= required - q.eta();
            if config.arc_samples > 0 {
                let frame = build_arc_frame(q, l).map_err(|e| e.to_string())?;
                let (exits, split) = arc_checks(q, &frame, config.arc_samples);
                row.exits_ok = Some(exits);
                row.split_ok = Some(split);
            }
        }
        BatchMode::FromL(l) => fill_theorem(q, TheoremMode::FromL(l), row)?,
        BatchMode::FromK(k) => fill_theorem(q, TheoremMode::FromK(k), row)?,
    }
    Ok(())
}

fn fill_theorem(q: &MarkedQuadrilateral, mode: TheoremMode, row: &mut BatchRow) -> Result<(), String> {
    let rep = verify_theorem(q, mode).map_err(|e| e.to_string())?;
    row.required_radius = Some(rep.required_radius);
    row.found_radius = Some(rep.found.radius);
    row.branch = branch_of(&rep.trace);
    row.pass = rep.pass;
    Ok(())
}

/// Exit checks over the far window and split checks over the further window.
pub fn arc_checks(q: &MarkedQuadrilateral, frame: &ArcFrame, count: usize) -> (bool, bool) {
    let exits = ArcFrame::sample(frame.far_window(), count).into_iter().all(|s| check_exits(frame, s).holds());
    let split = ArcFrame::sample(frame.further_window(), count).into_iter().all(|s| match split_disk(q, frame, s) {
        Ok(sd) => sd.has_two_components() && (sd.left.confined || sd.right.confined),
        Err(_) => false,
    });
    (exits, split)
}
