//! `btq`: stabilizers, quotient graphs, property suites and free-product
//! reports for `GL₂(C)` acting on the Bruhat-Tits tree at `∞`.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bruhat_tits::backend::{Backend, BackendConfig, BackendKind};
use bruhat_tits::expr::parse_vertex;
use bruhat_tits::quotient::{bfs_quotient, free_product_report, takahashi, to_csv, to_dot, to_json};
use bruhat_tits::stabilizer::enumerate_stabilizer;
use bruhat_tits::verify::{run_suite, Suite};
use bruhat_tits::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "btq", version, about = "Stabilizers and quotient graphs of GL2 over function-field rings")]
struct Cli {
    /// Run configuration (TOML or JSON): a backend, or a table with
    /// `backend`, `radius`, `output_dir`, `formats`, `seed`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Backend kind when no configuration file is given.
    #[arg(long, global = true, value_enum)]
    backend: Option<KindArg>,
    /// Size of the constant field when no configuration file is given.
    #[arg(long, global = true)]
    q: Option<usize>,
    /// BFS radius; defaults to 2g + 6.
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Output directory for quotient files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output formats: dot, json, csv (comma separated). For `stab`,
    /// `json` prints the report as JSON.
    #[arg(long, global = true, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Seed for the property suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Rational,
    Elliptic,
    Quadratic,
}

impl From<KindArg> for BackendKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rational => BackendKind::RationalDelta1,
            KindArg::Elliptic => BackendKind::EllipticDelta1,
            KindArg::Quadratic => BackendKind::RationalDelta2,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The stabilizer of a vertex `n;z`, e.g. `btq stab 2 "1/pi+pi*2"`.
    Stab {
        /// Level `n` and expression `z`, or a single `n;z` or `v(...)` key.
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        spec: Vec<String>,
    },
    /// Builds the quotient graph and writes it in the chosen formats.
    Quotient,
    /// Runs a property suite.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Free-product factors from isolated CM vertices (degree-one place).
    Freepart {
        /// Instead scan every Weierstrass curve over F_q and list those with
        /// exactly one λ whose Weierstrass equation has no root.
        #[arg(long)]
        scan: bool,
    },
}

/// Exit codes: 2 usage or configuration, 3 unresolved, 4 theorem contradicted.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unresolved(_) => 3,
        Error::TheoremViolation { .. } => 4,
        Error::Io(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("btq: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => {
            let kind = cli.backend.map_or(BackendKind::RationalDelta1, BackendKind::from);
            RunConfig::new(BackendConfig::default_for(kind, cli.q.unwrap_or(2))?)
        }
    };
    if cli.config.is_some() && (cli.backend.is_some() || cli.q.is_some()) {
        return Err(Error::Config("--backend and --q cannot be combined with --config".into()));
    }
    if let Some(r) = cli.radius {
        cfg.radius = Some(r);
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(f) = &cli.format {
        cfg.formats = f.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.formats.sort();
    cfg.formats.dedup();
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = run_config(&cli)?;
    let bk = cfg.build()?;
    let mut out = std::io::stdout().lock();
    match &cli.command {
        Command::Stab { spec } => cmd_stab(&bk, &cfg, &spec.join(" "), &mut out),
        Command::Quotient => cmd_quotient(&bk, &cfg, &mut out),
        Command::Verify { suite } => cmd_verify(&bk, &cfg, suite.parse()?, &mut out),
        Command::Freepart { scan } => cmd_freepart(&bk, &cfg, *scan, &mut out),
    }
}

fn radius(bk: &Backend, cfg: &RunConfig) -> usize {
    cfg.radius.unwrap_or(2 * bk.genus() as usize + 6)
}

fn cmd_stab(bk: &Backend, cfg: &RunConfig, spec: &str, out: &mut impl Write) -> Result<u8> {
    let v = parse_vertex(bk, spec)?;
    let s = enumerate_stabilizer(bk, &v)?;
    let report = s.report(bk);
    if cfg.formats == [Format::Json] {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        return Ok(0);
    }
    writeln!(out, "backend: {}", bk.describe())?;
    writeln!(out, "vertex: {}", report.vertex)?;
    writeln!(out, "order: {}", report.order)?;
    writeln!(out, "label: {}", report.label.name())?;
    match report.dim_v {
        Some(d) => writeln!(out, "dimV: {d}")?,
        None => writeln!(out, "dimV: -")?,
    }
    writeln!(out, "inferred: {}", report.inferred)?;
    writeln!(out, "generators:")?;
    for g in &report.generators {
        writeln!(out, "  {g}")?;
    }
    Ok(0)
}

fn cmd_quotient(bk: &Backend, cfg: &RunConfig, out: &mut impl Write) -> Result<u8> {
    let q = bfs_quotient(bk, radius(bk, cfg))?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    for f in &cfg.formats {
        let text = match f {
            Format::Dot => to_dot(&q),
            Format::Json => to_json(&q)?,
            Format::Csv => to_csv(&q)?,
        };
        let path = cfg.output_dir.join(format!("quotient.{}", f.extension()));
        std::fs::write(&path, text)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    let isolated: Vec<String> = q.vertices.iter().filter(|v| v.isolated).map(|v| v.rep.to_string()).collect();
    writeln!(out, "backend: {}", bk.describe())?;
    writeln!(out, "radius: {}", q.radius)?;
    writeln!(out, "vertices: {}", q.vertices.len())?;
    writeln!(out, "edges: {}", q.edges.len())?;
    writeln!(out, "omega: {}", q.omega)?;
    writeln!(out, "rays: {}", q.rays.len())?;
    writeln!(out, "class number: {}", q.class_number)?;
    writeln!(out, "isolated: [{}]", isolated.join(", "))?;
    if q.unresolved.is_empty() {
        Ok(0)
    } else {
        for u in &q.unresolved {
            writeln!(out, "unresolved: {u}")?;
        }
        Ok(3)
    }
}

fn cmd_verify(bk: &Backend, cfg: &RunConfig, suite: Suite, out: &mut impl Write) -> Result<u8> {
    let report = run_suite(bk, suite, cfg.seed);
    if cfg.formats == [Format::Json] {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(out, "backend: {} seed: {}", report.backend, report.seed)?;
        for c in &report.checks {
            match &c.failure {
                None => writeln!(out, "PASS {}/{} ({} cases)", c.suite, c.name, c.cases)?,
                Some(f) => writeln!(out, "FAIL {}/{}: {f}", c.suite, c.name)?,
            }
        }
    }
    match report.first_failure() {
        None => Ok(0),
        Some(c) => {
            eprintln!("btq: first failure: {}/{}", c.suite, c.name);
            Ok(4)
        }
    }
}

#[derive(Serialize)]
struct ScanEntry {
    curve: String,
    config: BackendConfig,
}

fn cmd_freepart(bk: &Backend, cfg: &RunConfig, scan: bool, out: &mut impl Write) -> Result<u8> {
    if bk.delta() != 1 {
        return Err(Error::Config("the free-product report needs a place of degree one".into()));
    }
    if scan {
        let found: Vec<ScanEntry> = takahashi::single_cm_curves(bk.q())
            .into_iter()
            .map(|c| Ok(ScanEntry { curve: Backend::new(c.clone())?.describe(), config: c }))
            .collect::<Result<_>>()?;
        if cfg.formats == [Format::Json] {
            writeln!(out, "{}", serde_json::to_string_pretty(&found)?)?;
        } else {
            for e in &found {
                writeln!(out, "{}", e.curve)?;
            }
            writeln!(out, "curves: {}", found.len())?;
        }
        return Ok(0);
    }
    let q = bfs_quotient(bk, radius(bk, cfg))?;
    let r = free_product_report(bk, &q)?;
    if cfg.formats == [Format::Json] {
        writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
    } else {
        writeln!(out, "backend: {}", bk.describe())?;
        writeln!(out, "n: {}", r.n)?;
        writeln!(out, "factor: {}", r.factor)?;
        for v in &r.cm_vertices {
            writeln!(out, "cm vertex: {v}")?;
        }
        for v in &r.split_isolated {
            writeln!(out, "split isolated vertex: {v}")?;
        }
        writeln!(out, "omega: {}", r.omega)?;
    }
    Ok(if q.unresolved.is_empty() { 0 } else { 3 })
}
