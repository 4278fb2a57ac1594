use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quadlab_core::disk::{
    build_arc_frame, largest_inscribed_disk, split_disk, verify_theorem, DiskError, TheoremMode, TheoremReport,
};
use quadlab_core::geodesic::{geodesic_between_sides, truncated_internal_distance, ExclusionSpec};
use quadlab_core::modulus::{compute_modulus, modulus_extrapolated, rengel_bounds, DEFAULT_TOLERANCE};
use quadlab_core::rectify::{grid_cover, rectify, rectify_to_tolerance, GridSpec, RectifiedQuad};
use quadlab_core::{MarkedQuadrilateral, Point, SidePair};
use quadlab::batch::{run_batch, BatchConfig};
use quadlab::format::{point_json, quad_to_json, read_quad, FormatError, GeodesicJson};
use quadlab::generate::{generate_random_rectilinear, GeneratorParams, MarkPolicy};
use quadlab::pinch::{pinch_family, window_disk_check, PinchParams};
use quadlab::svg::{render_svg, Scene};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "quadlab", version, about = "Internal distances, moduli and inscribed disks of marked quadrilaterals")]
struct Cli {
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Conformal modulus on the lattice of step h.
    Modulus {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        h: f64,
        /// Number of halved levels; more than two enables extrapolation.
        #[arg(long, default_value_t = 2)]
        levels: usize,
    },
    /// Internal distances of both side pairs.
    Distances {
        #[command(flatten)]
        input: Input,
        /// Keep endpoints this far from the marks.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Inscribed rectilinear approximation.
    Rectify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.1)]
        tau: f64,
        /// Fixed grid side instead of the halving search.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Largest inscribed disk.
    Inscribe {
        #[command(flatten)]
        input: Input,
    },
    /// Disk-radius theorem check.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long = "L", conflicts_with = "k", required_unless_present = "k")]
        l: Option<f64>,
        #[arg(long = "K")]
        k: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Random rectilinear quadrilateral.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        n: u32,
        #[arg(long, default_value_t = 60)]
        cells: usize,
        #[arg(long)]
        phase: Option<f64>,
    },
    /// Square with two tongues leaving a gap of width t.
    Pinch {
        #[arg(long)]
        t: f64,
        /// Also run the window disk check at this many positions.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Runs a JSON batch config.
    Batch { config: PathBuf },
    /// SVG with the geodesics and the largest inscribed disk.
    Render {
        #[command(flatten)]
        input: Input,
    },
}

/// Quadrilateral JSON file, positional or `--input`.
#[derive(Args)]
struct Input {
    #[arg(value_name = "FILE", required_unless_present = "input_flag", conflicts_with = "input_flag")]
    file: Option<PathBuf>,
    #[arg(long = "input", id = "input_flag", value_name = "FILE")]
    input: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<MarkedQuadrilateral, FormatError> {
        let path = self.file.as_ref().or(self.input.as_ref()).expect("clap requires a file");
        read_quad(path)
    }
}

enum Failure {
    Input(anyhow::Error),
    Invariant(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            let res = out.write_all(text.as_bytes()).and_then(|_| {
                if text.ends_with('\n') {
                    Ok(())
                } else {
                    out.write_all(b"\n")
                }
            });
            match res {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e).context("writing to stdout"),
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn rectified_json(r: &RectifiedQuad) -> Value {
    json!({
        "quad": serde_json::from_str::<Value>(&quad_to_json(&r.quad)).expect("valid json"),
        "s": r.grid.s,
        "origin": point_json(r.grid.origin),
        "covered_cells": r.covered_cells,
        "s_a_original": r.s_a_original,
        "s_b_original": r.s_b_original,
        "s_a": r.s_a,
        "s_b": r.s_b,
        "deviation_a": r.deviation_a,
        "deviation_b": r.deviation_b,
        "achieved_tau": r.achieved_tau,
    })
}

fn report_json(r: &TheoremReport) -> Value {
    json!({
        "s_a": r.s_a,
        "s_b": r.s_b,
        "modulus": r.modulus,
        "modulus_error": r.modulus_error,
        "l_tilde": r.l_tilde,
        "L": r.l,
        "delta": r.delta,
        "required_radius": r.required_radius,
        "found": {
            "center": point_json(r.found.center),
            "radius": r.found.radius,
            "provenance": r.found.provenance.to_string(),
        },
        "contained": r.contained,
        "pass": r.pass,
        "trace": r.trace.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

fn verify_scene(q: &MarkedQuadrilateral, r: &TheoremReport) -> Scene {
    let mut scene = Scene::of_quad(q);
    let target = if r.s_b > r.s_a { q.conjugate() } else { q.clone() };
    if let Ok(frame) = build_arc_frame(&target, r.l) {
        if let Ok(split) = split_disk(&target, &frame, 0.5 * frame.length) {
            scene.regions = vec![split.left.outline.clone(), split.right.outline.clone()];
            scene.disks.push((split.w0, split.big_r));
        }
        scene.paths.push(frame.path);
    }
    scene.disks.push((r.found.center, r.found.radius));
    scene
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Modulus { input, h, levels } => {
            let q = input.read()?;
            let res = if *levels > 2 {
                let hs: Vec<f64> = (0..*levels).map(|i| h * 0.5f64.powi(i as i32)).collect();
                modulus_extrapolated(&q, &hs)?
            } else {
                compute_modulus(&q, *h, DEFAULT_TOLERANCE)?
            };
            let v = json!({
                "modulus": res.modulus,
                "energy": res.energy,
                "levels": res.levels,
                "error_estimate": if res.error_estimate.is_finite() { Some(res.error_estimate) } else { None },
                "iterations": res.iterations,
                "order": res.order,
            });
            emit(cli, &pretty(&v))?;
        }
        Command::Distances { input, delta } => {
            let q = input.read()?;
            let mut v = json!({
                "a": GeodesicJson::from(&geodesic_between_sides(&q, SidePair::A)),
                "b": GeodesicJson::from(&geodesic_between_sides(&q, SidePair::B)),
            });
            if let Some(d) = delta {
                let spec = ExclusionSpec::new(&q, *d)?;
                v["a_truncated"] = json!(GeodesicJson::from(&truncated_internal_distance(&q, SidePair::A, &spec)?));
                v["b_truncated"] = json!(GeodesicJson::from(&truncated_internal_distance(&q, SidePair::B, &spec)?));
            }
            emit(cli, &pretty(&v))?;
        }
        Command::Rectify { input, tau, s, svg } => {
            let q = input.read()?;
            let r = match s {
                Some(s) => {
                    let bb = q.polygon().bbox();
                    rectify(&q, &GridSpec { s: *s, origin: bb.min + Point::new(0.5 * s, 0.5 * s) })?
                }
                None => rectify_to_tolerance(&q, *tau)?,
            };
            if let Some(path) = svg {
                let mut scene = Scene::of_quad(&q);
                scene.cells = grid_cover(q.polygon(), &r.grid)
                    .into_iter()
                    .map(|(i, j)| (r.grid.corner(i, j), r.grid.s))
                    .collect();
                scene.regions.push(r.quad.polygon().vertices().to_vec());
                fs::write(path, render_svg(&scene)).with_context(|| format!("writing {}", path.display()))?;
            }
            emit(cli, &pretty(&rectified_json(&r)))?;
            if r.achieved_tau > *tau && s.is_none() {
                return Err(Failure::Invariant(format!("achieved tau {} above {tau}", r.achieved_tau)));
            }
        }
        Command::Inscribe { input } => {
            let q = input.read()?;
            let d = largest_inscribed_disk(q.polygon());
            let v = json!({"center": point_json(d.center), "radius": d.radius, "provenance": d.provenance.to_string()});
            emit(cli, &pretty(&v))?;
        }
        Command::Verify { input, l, k, svg } => {
            let q = input.read()?;
            let mode = match (l, k) {
                (Some(l), _) => TheoremMode::FromL(*l),
                (None, Some(k)) => TheoremMode::FromK(*k),
                (None, None) => unreachable!("clap requires one of --L and --K"),
            };
            let rep = match verify_theorem(&q, mode) {
                Ok(r) => r,
                Err(DiskError::ModulusOutOfRange { modulus, bounds, k }) => {
                    let v = json!({
                        "error": "modulus_out_of_range",
                        "modulus": modulus,
                        "rengel_lower": bounds.lower,
                        "rengel_upper": bounds.upper,
                        "K": k,
                    });
                    emit(cli, &pretty(&v))?;
                    return Err(Failure::Invariant("modulus outside [1/K, K]".into()));
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(path) = svg {
                fs::write(path, render_svg(&verify_scene(&q, &rep)))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            emit(cli, &pretty(&report_json(&rep)))?;
            if !rep.pass {
                return Err(Failure::Invariant("found disk is smaller than required".into()));
            }
        }
        Command::Generate { seed, n, cells, phase } => {
            let marks = phase.map_or(MarkPolicy::RandomPhase, MarkPolicy::Phase);
            let q = generate_random_rectilinear(&GeneratorParams { seed: *seed, n: *n, cells: *cells, marks })?;
            match cli.format {
                Format::Svg => emit(cli, &render_svg(&Scene::of_quad(&q)))?,
                _ => emit(cli, &quad_to_json(&q))?,
            }
        }
        Command::Pinch { t, samples } => {
            let inst = pinch_family(&PinchParams::new(*t))?;
            if cli.format == Format::Svg {
                emit(cli, &render_svg(&Scene::of_quad(&inst.quad)))?;
                return Ok(());
            }
            let bounds = rengel_bounds(inst.s_a, inst.s_b)?;
            let mut v = json!({
                "quad": serde_json::from_str::<Value>(&quad_to_json(&inst.quad)).expect("valid json"),
                "s_a": inst.s_a,
                "s_b": inst.s_b,
                "rengel_lower": bounds.lower,
                "rengel_upper": bounds.upper,
            });
            let mut failed = false;
            if *samples > 0 {
                let check = window_disk_check(&inst.quad, inst.params.delta_test, *samples);
                failed = !check.pass();
                v["window"] = json!(check);
                v["window_pass"] = json!(check.pass());
            }
            emit(cli, &pretty(&v))?;
            if failed {
                return Err(Failure::Invariant("window disk check failed".into()));
            }
        }
        Command::Batch { config } => {
            let text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
            let cfg: BatchConfig = serde_json::from_str(&text).context("parsing batch config")?;
            let base = config.parent().unwrap_or(Path::new("."));
            let report = run_batch(&cfg, base);
            match cli.format {
                Format::Csv => emit(cli, &report.to_csv())?,
                Format::Json => emit(cli, &report.to_json())?,
                Format::Svg => return Err(Failure::Input(anyhow::anyhow!("batch reports are json or csv"))),
            }
            eprintln!(
                "{} rows, pass rate {:.4}, constructive {:.4}",
                report.rows.len(),
                report.pass_rate,
                report.constructive_rate
            );
            match report.exit_code() {
                0 => {}
                1 => return Err(Failure::Invariant("some rows failed".into())),
                _ => return Err(Failure::Input(anyhow::anyhow!("some instances could not be read"))),
            }
        }
        Command::Render { input } => {
            let q = input.read()?;
            let mut scene = Scene::of_quad(&q);
            scene.paths.push(geodesic_between_sides(&q, SidePair::A).path);
            scene.paths.push(geodesic_between_sides(&q, SidePair::B).path);
            let d = largest_inscribed_disk(q.polygon());
            scene.disks.push((d.center, d.radius));
            emit(cli, &render_svg(&scene))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
