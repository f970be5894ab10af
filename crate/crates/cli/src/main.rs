//! `sphere-forcing`: falsify forcing conditions against colorings, list
//! excluded circumradii, run finite propagation, plot plane colorings,
//! and expose the witness constructions directly.
//!
//! Exit codes: 0 when no violation or contradiction was found, 2 when a
//! certificate was produced, 1 for usage or configuration errors.

mod config;
mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use sphere_forcing::engine::{
    excluded_radii, Budgets, CenterSet, ColorSpace, FiniteConfig, QCondition,
};
use sphere_forcing::property::{witness_template, TemplateOutcome};
use sphere_forcing::sphere::{chain_construction, volume_witness, Cap};
use sphere_forcing::{
    ColoringError, EngineError, GeometryError, Point, PropagationReport, PropertyError, Report,
    Scalar, Sphere, SphereError, Tol,
};

use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Property(#[from] PropertyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Parser)]
#[command(
    name = "sphere-forcing",
    version,
    about = "Forcing conditions on hyperspheres: check, enumerate, propagate, plot"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON file with a partial run configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ambient dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Arithmetic mode, `exact` or `float` (informational; echoed).
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "budget-spheres")]
    budget_spheres: Option<usize>,
    #[arg(long = "budget-witnesses")]
    budget_witnesses: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample admissible spheres and hunt for a violation certificate.
    Check {
        #[command(flatten)]
        common: Common,
        /// Coloring spec, e.g. `strip` or `grid:1/3`.
        #[arg(long)]
        coloring: Option<String>,
        /// Property spec, e.g. `regular:2` or `edge-lengths:3:3,4,5`.
        #[arg(long)]
        property: Option<String>,
        /// Admissible radii, e.g. `(0,1)` or `3,4,5`.
        #[arg(long)]
        radii: Option<String>,
        /// Finite color space size; all integers when absent.
        #[arg(long)]
        colors: Option<u32>,
        /// Safety margin for radii with excluded points.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Center set: `all` or JSON.
        #[arg(long)]
        centers: Option<String>,
    },
    /// Circumradii of all simplices drawable from a finite length set.
    ExcludedRadii {
        /// Comma-separated edge lengths, e.g. `3,4,5`.
        #[arg(long = "S")]
        lengths: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run forcing to a fixpoint on a finite colored configuration.
    Propagate {
        #[command(flatten)]
        common: Common,
        /// JSON file: a list of `{coords: [...], color?: int}` entries.
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        property: Option<String>,
        #[arg(long)]
        radii: Option<String>,
        #[arg(long)]
        centers: Option<String>,
        /// Directory for one SVG frame per round (plane configs only).
        #[arg(long = "svg-frames")]
        svg_frames: Option<PathBuf>,
    },
    /// Render a plane coloring (optionally with a report overlay) as SVG.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        coloring: Option<String>,
        /// View box `x0,y0,x1,y1`.
        #[arg(long, default_value = "0,0,4,4", allow_hyphen_values = true)]
        view: String,
        /// Report JSON to overlay (spheres, certificate).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run one witness construction directly.
    Construct {
        #[command(flatten)]
        common: Common,
        /// `chain`, `volume`, or `witness`.
        #[arg(long)]
        kind: String,
        /// Sphere center, comma-separated; origin when absent.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Cap size in (0, 1] for `chain`.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Length set for `chain`.
        #[arg(long)]
        lengths: Option<String>,
        /// Simplex dimension for `volume`.
        #[arg(long)]
        m: Option<usize>,
        /// Target volume for `volume`.
        #[arg(long)]
        target: Option<f64>,
        /// Property spec for `witness`.
        #[arg(long)]
        property: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage problems are exit 1 here
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, contents)?,
        None => print!("{contents}"),
    }
    Ok(())
}

fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let flags = RunConfig {
        n: common.n,
        mode: common.mode.clone(),
        seed: common.seed,
        budget_spheres: common.budget_spheres,
        budget_witnesses: common.budget_witnesses,
        out: common.out.clone(),
        ..RunConfig::default()
    };
    Ok(match &common.config {
        Some(path) => flags.merged_over(RunConfig::load(path)?),
        None => flags,
    })
}

fn budgets_from(cfg: &RunConfig) -> Budgets {
    let defaults = Budgets::default();
    Budgets {
        spheres: cfg.budget_spheres.unwrap_or(defaults.spheres),
        witnesses: cfg.budget_witnesses.unwrap_or(defaults.witnesses),
    }
}

fn condition_from(cfg: &RunConfig) -> Result<QCondition, CliError> {
    let property = config::parse_property(&RunConfig::require(&cfg.property, "--property")?)?;
    let radii = config::parse_values(&RunConfig::require(&cfg.radii, "--radii")?)?;
    let centers = match &cfg.centers {
        Some(spec) => config::parse_centers(spec)?,
        None => CenterSet::All,
    };
    let colors = match cfg.colors {
        Some(k) => ColorSpace::Finite(k),
        None => ColorSpace::AllIntegers,
    };
    Ok(QCondition {
        colors,
        property,
        centers,
        radii,
        epsilon: cfg.epsilon.map(Scalar::Float),
    })
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    command: &'a str,
    config: &'a RunConfig,
    report: Report,
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Check {
            common,
            coloring,
            property,
            radii,
            colors,
            epsilon,
            centers,
        } => {
            let mut cfg = RunConfig {
                coloring,
                property,
                radii,
                colors,
                epsilon,
                centers,
                ..RunConfig::default()
            }
            .merged_over(resolve(&common)?);
            if cfg.mode.is_none() {
                cfg.mode = Some("float".into());
            }
            let n = RunConfig::require(&cfg.n, "--n")?;
            let coloring =
                config::parse_coloring(&RunConfig::require(&cfg.coloring, "--coloring")?, n)?;
            let condition = condition_from(&cfg)?;
            let budgets = budgets_from(&cfg);
            let seed = cfg.seed.unwrap_or(0);
            let report = Report::run(condition, coloring, n, budgets, seed)?;
            let violated = report.violated();
            eprintln!("{}", report.summary());
            let output = CheckOutput {
                command: "check",
                config: &cfg,
                report,
            };
            let json = serde_json::to_string_pretty(&output)?;
            emit(&cfg.out, &format!("{json}\n"))?;
            Ok(if violated { 2 } else { 0 })
        }
        Command::ExcludedRadii { lengths, n, out } => {
            let values = match config::parse_values(&lengths)? {
                sphere_forcing::AdmissibleValues::Finite(vs) => vs,
                _ => {
                    return Err(CliError::Usage(
                        "radius enumeration needs a finite length set".into(),
                    ))
                }
            };
            let radii = excluded_radii(&values, n)?;
            #[derive(Serialize)]
            struct Entry {
                value: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                exact: Option<String>,
            }
            let entries: Vec<Entry> = radii
                .iter()
                .map(|r| Entry {
                    value: r.to_f64(),
                    exact: r.is_exact().then(|| r.to_string()),
                })
                .collect();
            let json = serde_json::to_string_pretty(&entries)?;
            emit(&out, &format!("{json}\n"))?;
            Ok(0)
        }
        Command::Propagate {
            common,
            points,
            property,
            radii,
            centers,
            svg_frames,
        } => {
            let cfg = RunConfig {
                property,
                radii,
                centers,
                ..RunConfig::default()
            }
            .merged_over(resolve(&common)?);
            let text = fs::read_to_string(&points)?;
            let config: FiniteConfig = serde_json::from_str(&text)?;
            let condition = condition_from(&cfg)?;
            let report = PropagationReport::run(condition, config.clone())?;
            if let Some(dir) = &svg_frames {
                write_frames(dir, &config, &report)?;
            }
            let contradictory = report.contradictory();
            let json = serde_json::to_string_pretty(&report)?;
            emit(&cfg.out, &format!("{json}\n"))?;
            Ok(if contradictory { 2 } else { 0 })
        }
        Command::Plot {
            common,
            coloring,
            view,
            report,
        } => {
            let cfg = RunConfig {
                coloring,
                ..RunConfig::default()
            }
            .merged_over(resolve(&common)?);
            let n = cfg.n.unwrap_or(2);
            if n != 2 {
                return Err(CliError::Usage("plotting needs --n 2".into()));
            }
            let coloring =
                config::parse_coloring(&RunConfig::require(&cfg.coloring, "--coloring")?, n)?;
            let view = config::parse_view(&view)?;
            let overlay = match &report {
                Some(path) => {
                    let text = fs::read_to_string(path)?;
                    // accept either a bare report or a check output wrapper
                    let report = serde_json::from_str::<Report>(&text).or_else(|_| {
                        serde_json::from_str::<serde_json::Value>(&text)
                            .map_err(CliError::from)
                            .and_then(|v| {
                                serde_json::from_value::<Report>(
                                    v.get("report").cloned().unwrap_or(v),
                                )
                                .map_err(CliError::from)
                            })
                    })?;
                    Some(report)
                }
                None => None,
            };
            let scene = svg::render_coloring(&coloring, view, overlay.as_ref())?;
            emit(&cfg.out, &scene)?;
            Ok(0)
        }
        Command::Construct {
            common,
            kind,
            center,
            radius,
            delta,
            lengths,
            m,
            target,
            property,
        } => {
            let cfg = resolve(&common)?;
            let n = RunConfig::require(&cfg.n, "--n")?;
            let seed = cfg.seed.unwrap_or(0);
            let tol = Tol::default();
            let center: Vec<f64> = match center {
                Some(spec) => spec
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::Usage(format!("cannot parse center: {spec:?}")))?,
                None => vec![0.0; n],
            };
            if center.len() != n {
                return Err(CliError::Usage("center dimension must match --n".into()));
            }
            let sphere = Sphere::from_f64(&center, radius)?;
            let pole = sphere.sample_uniform(1, seed)[0].clone();

            #[derive(Serialize)]
            struct Construction {
                kind: String,
                outcome: String,
                vertices: Vec<Point>,
                edges: Vec<Scalar>,
                #[serde(skip_serializing_if = "Option::is_none")]
                volume: Option<f64>,
            }
            let (outcome, vertices, volume) = match kind.as_str() {
                "chain" => {
                    let lengths =
                        config::parse_values(&RunConfig::require(&lengths, "--lengths")?)?;
                    let cap = Cap::from_delta(sphere, pole, delta, &tol)?;
                    let s = chain_construction(&cap, &lengths, seed)?;
                    ("found".to_string(), s.vertices().to_vec(), None)
                }
                "volume" => {
                    let m = RunConfig::require(&m, "--m")?;
                    let target = RunConfig::require(&target, "--target")?;
                    let cap = Cap::from_delta(sphere, pole, delta, &tol)?;
                    let s = volume_witness(&cap, m, target)?;
                    let vol = s.cm_volume().to_f64();
                    ("found".to_string(), s.vertices().to_vec(), Some(vol))
                }
                "witness" => {
                    let property =
                        config::parse_property(&RunConfig::require(&property, "--property")?)?;
                    match witness_template(&property, &sphere, seed)? {
                        TemplateOutcome::Found(points) => ("found".to_string(), points, None),
                        TemplateOutcome::Exhausted => ("exhausted".to_string(), Vec::new(), None),
                        TemplateOutcome::Impossible => ("impossible".to_string(), Vec::new(), None),
                    }
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown construction kind: {other:?} (try chain, volume, witness)"
                    )))
                }
            };
            let mut edges = Vec::new();
            for i in 0..vertices.len() {
                for j in i + 1..vertices.len() {
                    edges.push(vertices[i].dist_sq(&vertices[j])?.sqrt()?);
                }
            }
            let json = serde_json::to_string_pretty(&Construction {
                kind,
                outcome,
                vertices,
                edges,
                volume,
            })?;
            emit(&cfg.out, &format!("{json}\n"))?;
            Ok(0)
        }
    }
}

fn write_frames(
    dir: &PathBuf,
    config: &FiniteConfig,
    report: &PropagationReport,
) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let points: Vec<Point> = (0..config.len()).map(|i| config.point(i).clone()).collect();
    let view = svg::fit_view(&points)?;
    let mut colors: Vec<Option<i64>> = (0..config.len()).map(|i| config.color(i)).collect();
    let last_round = report
        .propagation
        .steps
        .iter()
        .map(|s| s.round)
        .max()
        .unwrap_or(0);
    for round in 0..=last_round {
        for step in &report.propagation.steps {
            if step.round == round {
                colors[step.point] = Some(step.color);
            }
        }
        let frame = svg::render_points(&points, &colors, view)?;
        fs::write(dir.join(format!("round_{round}.svg")), frame)?;
    }
    Ok(())
}
