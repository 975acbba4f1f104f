//! `carpet`: dimensions, tangents and covers of diagonal self-affine carpets.
//!
//! Every command prints one JSON document
//! `{command, input_digest, results, diagnostics, warnings}` on stdout.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use carpet_core::closed_form::{baranski_dims_seeded, gl_dims_seeded, reduction_summary};
use carpet_core::config::{load_columns, load_system, system_config};
use carpet_core::fiber::{
    build_exceptional, gl_box_dimension, level_set_dim_seeded, pointwise_assouad_baranski, pointwise_assouad_gl,
};
use carpet_core::geometry::{
    box_count_ball, box_dim_estimate, count_squares, default_scales, log_log_slope, render_svg, scale_count_csv,
};
use carpet_core::moran::theta_window;
use carpet_core::{nonauto_assouad, window_sup, Axis, CarpetClass, CarpetSystem, Error, EventuallyPeriodicWord};

#[derive(Debug, Parser)]
#[command(name = "carpet", version, about = "Dimensions and tangents of diagonal self-affine carpets")]
struct Cli {
    /// Carpet config (JSON); standard input when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Seed for the randomized parts (optimizer restarts).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the system and report separation properties.
    Validate,
    /// Closed-form dimensions.
    Dims,
    /// Pointwise Assouad dimension at the point coded by `--gamma`.
    Pointwise {
        /// Eventually periodic word `u:(v)`, e.g. ":(0)" or "2,1:(0,3)".
        #[arg(long)]
        gamma: String,
        /// Expected slice axis (1 or 2).
        #[arg(long)]
        axis: Option<u8>,
    },
    /// Hausdorff dimension of the set of points with pointwise Assouad dimension `alpha`.
    Levelset {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Assouad dimension of a non-autonomous self-similar set given by a column file.
    Fiber {
        #[arg(long)]
        columns: PathBuf,
    },
    /// Approximate-square counts, globally or inside a ball.
    Boxcount {
        /// Comma separated scales in (0,1).
        #[arg(long)]
        scales: String,
        /// Center of the ball; global counts when omitted.
        #[arg(long)]
        gamma: Option<String>,
        /// Ball radius, used with `--gamma`.
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        /// Also write a `scale,count` CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// SVG of all cylinder rectangles of a given depth.
    Render {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Config of the 12-map Baranski family at parameter `delta` (no input read).
    ExampleBaranski {
        #[arg(long)]
        delta: f64,
    },
    /// Empirical box dimension from approximate-square counts.
    Estimate {
        /// Comma separated scales; a dense default sweep when omitted.
        #[arg(long)]
        scales: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Dims => "dims",
            Command::Pointwise { .. } => "pointwise",
            Command::Levelset { .. } => "levelset",
            Command::Fiber { .. } => "fiber",
            Command::Boxcount { .. } => "boxcount",
            Command::Render { .. } => "render",
            Command::ExampleBaranski { .. } => "example-baranski",
            Command::Estimate { .. } => "estimate",
        }
    }
}

/// What a command hands back before it is wrapped into the output document.
struct Outcome {
    results: Value,
    diagnostics: Map<String, Value>,
    warnings: Vec<String>,
    /// Nonzero exit code to use even though a document was produced.
    status: u8,
}

impl Outcome {
    fn new(results: Value) -> Self {
        Outcome { results, diagnostics: Map::new(), warnings: Vec::new(), status: 0 }
    }
}

/// Input bytes, read lazily so commands without input do not block on stdin.
struct Input {
    path: Option<PathBuf>,
    bytes: Option<Vec<u8>>,
}

impl Input {
    fn read(&mut self) -> anyhow::Result<&[u8]> {
        if self.bytes.is_none() {
            let bytes = match &self.path {
                Some(p) => fs::read(p).with_context(|| format!("reading {}", p.display()))?,
                None => {
                    let mut buf = Vec::new();
                    io::stdin().read_to_end(&mut buf).context("reading standard input")?;
                    buf
                }
            };
            self.bytes = Some(bytes);
        }
        Ok(self.bytes.as_deref().unwrap_or_default())
    }

    fn system(&mut self) -> anyhow::Result<CarpetSystem> {
        let text = String::from_utf8_lossy(self.read()?).into_owned();
        Ok(load_system(&text)?)
    }

    fn digest(&self) -> String {
        format!("{:x}", Sha256::digest(self.bytes.as_deref().unwrap_or_default()))
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_scales(list: &str) -> anyhow::Result<Vec<f64>> {
    list.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("bad scale {s:?}: {e}")).into()))
        .collect()
}

fn system_summary(system: &CarpetSystem) -> Value {
    json!({
        "class": system.class().to_string(),
        "maps": system.len(),
        "columns": system.class_count(Axis::X),
        "rows": system.class_count(Axis::Y),
        "eta1_ssc": system.eta1_ssc(),
        "eta2_ssc": system.eta2_ssc(),
        "exact": system.maps().iter().all(|m| m.is_exact()),
        "violations": system.violations(),
    })
}

fn validate_cmd(input: &mut Input) -> anyhow::Result<Outcome> {
    let system = input.system()?;
    let mut out = Outcome::new(system_summary(&system));
    out.warnings.extend(system.warnings().iter().cloned());
    if system.class() == CarpetClass::DiagonalOnly {
        out.status = 2;
    }
    Ok(out)
}

fn dims_cmd(input: &mut Input, seed: u64) -> anyhow::Result<Outcome> {
    let system = input.system()?;
    let mut out = match system.class() {
        CarpetClass::GatzourasLalley => {
            let report = gl_dims_seeded(&system, seed)?;
            let mut out = Outcome::new(to_value(&report));
            if let Value::Object(d) = to_value(&report.diagnostics) {
                out.diagnostics.extend(d);
            }
            if let Some(r) = out.results.as_object_mut() {
                r.remove("diagnostics");
            }
            out
        }
        CarpetClass::Baranski => {
            let report = baranski_dims_seeded(&system, seed)?;
            let mut results = to_value(&report);
            let r = results.as_object_mut().expect("object");
            r.insert("dim_b".into(), Value::Null);
            let mut out_warnings = vec!["box dimension of a Baranski carpet has no closed form; see `estimate`".to_string()];
            if let Ok(summary) = reduction_summary(&system) {
                let mut red = to_value(&summary);
                red.as_object_mut().expect("object").insert("dim_h".into(), json!(summary.sup_piecewise));
                r.insert("exceptional_reduction".into(), red);
                out_warnings.push("exceptional_reduction evaluates the one-parameter formulas for this 12-map shape".into());
            }
            let mut out = Outcome::new(results);
            out.warnings = out_warnings;
            out
        }
        CarpetClass::DiagonalOnly => {
            return Err(Error::WrongClass { expected: "GatzourasLalley or Baranski", found: system.class().to_string() }.into())
        }
    };
    out.results.as_object_mut().expect("object").insert("class".into(), json!(system.class().to_string()));
    out.warnings.extend(system.warnings().iter().cloned());
    Ok(out)
}

fn pointwise_cmd(input: &mut Input, gamma: &str, axis: Option<u8>) -> anyhow::Result<Outcome> {
    let system = input.system()?;
    let gamma: EventuallyPeriodicWord = gamma.parse()?;
    let report = match system.class() {
        CarpetClass::GatzourasLalley => pointwise_assouad_gl(&system, &gamma)?,
        CarpetClass::Baranski => pointwise_assouad_baranski(&system, &gamma)?,
        CarpetClass::DiagonalOnly => {
            return Err(Error::WrongClass { expected: "GatzourasLalley or Baranski", found: system.class().to_string() }.into())
        }
    };
    if let Some(j) = axis {
        Axis::from_number(j)?;
        if j != report.axis {
            return Err(Error::Unsupported(format!("the point is sliced along axis {}, not {j}", report.axis)).into());
        }
    }
    let mut out = Outcome::new(to_value(&report));
    out.results.as_object_mut().expect("object").insert("gamma".into(), json!(gamma.to_string()));
    if report.regularity_warning {
        out.warnings.push("projection is not strongly separated; the value is a lower bound".into());
    }
    out.warnings.extend(system.warnings().iter().cloned());
    Ok(out)
}

fn levelset_cmd(input: &mut Input, alpha: f64, seed: u64) -> anyhow::Result<Outcome> {
    let system = input.system()?;
    let level = level_set_dim_seeded(&system, alpha, seed)?;
    let mut results = to_value(&level);
    let r = results.as_object_mut().expect("object");
    r.insert("alpha".into(), json!(alpha));
    r.insert("empty".into(), json!(level.dim.is_none()));
    Ok(Outcome::new(results))
}

fn fiber_cmd(columns: &PathBuf) -> anyhow::Result<(Vec<u8>, Outcome)> {
    let bytes = fs::read(columns).with_context(|| format!("reading {}", columns.display()))?;
    let seq = load_columns(&String::from_utf8_lossy(&bytes))?;
    let assouad = nonauto_assouad(&seq);
    let mut sups = Map::new();
    for m in [1usize, 2, 4, 8, 16, 32, 64] {
        sups.insert(m.to_string(), json!(window_sup(&seq, m)?));
    }
    let first = theta_window(&seq.window(0, 1))?;
    let out = Outcome::new(json!({
        "assouad": assouad,
        "preperiod_len": seq.preperiod.len(),
        "period_len": seq.period.len(),
        "theta_first_step": first,
        "window_sup": sups,
    }));
    Ok((bytes, out))
}

fn boxcount_cmd(
    input: &mut Input,
    scales: &str,
    gamma: Option<&str>,
    radius: f64,
    csv: Option<&PathBuf>,
) -> anyhow::Result<Outcome> {
    let system = input.system()?;
    let scales = parse_scales(scales)?;
    let center: Option<EventuallyPeriodicWord> = gamma.map(str::parse).transpose()?;
    let mut table = Vec::with_capacity(scales.len());
    for &s in &scales {
        let n = match &center {
            Some(g) => box_count_ball(&system, g, radius, s)?,
            None => count_squares(&system, s)?,
        };
        table.push((s, n));
    }
    let slope = if table.len() >= 2 { log_log_slope(&table).ok().map(|f| f.slope) } else { None };
    if let Some(path) = csv {
        fs::write(path, scale_count_csv(&table)).with_context(|| format!("writing {}", path.display()))?;
    }
    let rows: Vec<Value> = table.iter().map(|(s, n)| json!({"scale": s, "count": n})).collect();
    let mut out = Outcome::new(json!({
        "counts": rows,
        "slope": slope,
        "center": center.as_ref().map(|g| g.to_string()),
        "radius": center.as_ref().map(|_| radius),
    }));
    if let Some(path) = csv {
        out.diagnostics.insert("csv".into(), json!(path.display().to_string()));
    }
    Ok(out)
}

fn render_cmd(input: &mut Input, depth: usize, path: &PathBuf) -> anyhow::Result<Outcome> {
    let system = input.system()?;
    let svg = render_svg(&system, depth)?;
    fs::write(path, &svg).with_context(|| format!("writing {}", path.display()))?;
    Ok(Outcome::new(json!({
        "depth": depth,
        "rects": svg.matches("<rect").count(),
        "out": path.display().to_string(),
    })))
}

fn example_cmd(delta: f64) -> anyhow::Result<Outcome> {
    let system = build_exceptional(delta)?;
    let mut results = system_summary(&system);
    let r = results.as_object_mut().expect("object");
    r.insert("delta".into(), json!(delta));
    r.insert("config".into(), system_config(&system));
    Ok(Outcome::new(results))
}

fn estimate_cmd(input: &mut Input, scales: Option<&str>) -> anyhow::Result<Outcome> {
    let system = input.system()?;
    let scales = match scales {
        Some(list) => parse_scales(list)?,
        None => default_scales(),
    };
    let est = box_dim_estimate(&system, &scales)?;
    let mut out = Outcome::new(to_value(&est));
    if system.class() == CarpetClass::GatzourasLalley {
        out.diagnostics.insert("closed_form_dim_b".into(), json!(gl_box_dimension(&system)?));
    }
    Ok(out)
}

fn run(cli: &Cli, input: &mut Input) -> anyhow::Result<(Option<Vec<u8>>, Outcome)> {
    let out = match &cli.command {
        Command::Validate => validate_cmd(input)?,
        Command::Dims => dims_cmd(input, cli.seed)?,
        Command::Pointwise { gamma, axis } => pointwise_cmd(input, gamma, *axis)?,
        Command::Levelset { alpha } => levelset_cmd(input, *alpha, cli.seed)?,
        Command::Fiber { columns } => {
            let (bytes, out) = fiber_cmd(columns)?;
            return Ok((Some(bytes), out));
        }
        Command::Boxcount { scales, gamma, radius, csv } => {
            boxcount_cmd(input, scales, gamma.as_deref(), *radius, csv.as_ref())?
        }
        Command::Render { depth, out } => render_cmd(input, *depth, out)?,
        Command::ExampleBaranski { delta } => example_cmd(*delta)?,
        Command::Estimate { scales } => estimate_cmd(input, scales.as_deref())?,
    };
    Ok((None, out))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::WrongClass { .. } | Error::WrongShape(_) | Error::Unsupported(_)) => 3,
        Some(Error::OptimizerFailure { .. }) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut input = Input { path: cli.input.clone(), bytes: None };
    match run(&cli, &mut input) {
        Ok((digest_bytes, mut out)) => {
            let digest = match digest_bytes {
                Some(bytes) => format!("{:x}", Sha256::digest(&bytes)),
                None => input.digest(),
            };
            out.diagnostics.insert("seed".into(), json!(cli.seed));
            let doc = json!({
                "command": cli.command.name(),
                "input_digest": digest,
                "results": out.results,
                "diagnostics": out.diagnostics,
                "warnings": out.warnings,
            });
            let text = serde_json::to_string_pretty(&doc).expect("json");
            // a closed pipe downstream is not our failure
            let _ = writeln!(io::stdout().lock(), "{text}");
            ExitCode::from(out.status)
        }
        Err(err) => {
            eprintln!("carpet: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
