//! Command-line front end.

pub mod suites;

use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::complex::{cohomology_guarded, sg_dimension, SgConfig, StabilizationReport};
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::gerst::{bracket, parse_expression, project, PropElement};
use crate::quiver::{enumerate_paths, parse_quiver, Quiver};
use suites::{run_suite, Suite, SuiteConfig, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "hhsg", version, about = "Singular Hochschild cohomology of radical square zero algebras")]
pub struct Cli {
    /// Quiver file
    #[arg(long, global = true)]
    pub quiver: Option<PathBuf>,
    /// `rational` or `fp:P`
    #[arg(long, global = true, default_value = "rational")]
    pub field: String,
    #[arg(long, global = true, default_value_t = 16)]
    pub pmax: usize,
    #[arg(long, global = true, default_value_t = 3)]
    pub window: usize,
    /// Largest pair space built before refusing
    #[arg(long, global = true, default_value_t = 200_000)]
    pub guard: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilized dimensions over a degree range
    Dims {
        /// `a..b`, inclusive
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        degrees: String,
    },
    /// HH^m(A, Ω^p A) with its two blocks
    Cohomology {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        basis: bool,
    },
    /// Paths of a given length
    Paths {
        #[arg(long)]
        length: usize,
    },
    /// Bracket of two element expressions
    Bracket {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long)]
        project: bool,
        /// Read `lhs` as the low part of its element
        #[arg(long)]
        lhs_low: bool,
        #[arg(long)]
        rhs_low: bool,
        /// Read `rhs` against a different quiver file
        #[arg(long)]
        rhs_quiver: Option<PathBuf>,
    },
    /// Named verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long, default_value_t = 20240607)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

/// Validated plumbing shared by all commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub quiver: Option<PathBuf>,
    pub field: Field,
    pub p_max: usize,
    pub window: usize,
    pub guard: usize,
    pub out: OutFormat,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let field = Field::parse(&cli.field)?;
        if cli.window == 0 || cli.pmax < cli.window + 1 {
            return Err(Error::usage("need window ≥ 1 and pmax ≥ window + 1"));
        }
        Ok(RunConfig {
            quiver: cli.quiver.clone(),
            field,
            p_max: cli.pmax,
            window: cli.window,
            guard: cli.guard,
            out: cli.out,
        })
    }

    fn sg(&self) -> SgConfig {
        SgConfig {
            field: self.field,
            window: self.window,
            p_max: self.p_max,
            guard: self.guard,
        }
    }

    fn load(&self) -> Result<Quiver> {
        match &self.quiver {
            Some(p) => load_quiver(p),
            None => Err(Error::usage("--quiver is required")),
        }
    }
}

pub fn load_quiver(path: &FsPath) -> Result<Quiver> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_quiver(&text)
}

pub fn parse_degrees(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::usage(format!("degree range '{s}' is not of the form a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Error::usage(format!("degree range '{s}' is empty")));
    }
    Ok((a, b))
}

/// Runs one command, writing to `w`. Returns whether every check passed.
pub fn run(cli: &Cli, w: &mut dyn Write) -> Result<bool> {
    let cfg = RunConfig::from_cli(cli)?;
    match &cli.command {
        Command::Dims { degrees } => {
            let q = cfg.load()?;
            let (a, b) = parse_degrees(degrees)?;
            let rows = cmd_dims(&q, a, b, &cfg)?;
            emit_dims(&rows, cfg.out, w)?;
            Ok(true)
        }
        Command::Cohomology { m, p, basis } => {
            let q = cfg.load()?;
            cmd_cohomology(&q, *m, *p, *basis, &cfg, w)?;
            Ok(true)
        }
        Command::Paths { length } => {
            let q = cfg.load()?;
            let paths: Vec<String> = enumerate_paths(&q, *length).iter().map(|p| q.display_path(p)).collect();
            match cfg.out {
                OutFormat::Json => writeln!(w, "{}", json!({ "length": length, "paths": paths }))?,
                _ => {
                    for p in paths {
                        writeln!(w, "{p}")?;
                    }
                }
            }
            Ok(true)
        }
        Command::Bracket { lhs, rhs, project, lhs_low, rhs_low, rhs_quiver } => {
            let q = cfg.load()?;
            let other = match rhs_quiver {
                Some(p) => Some(load_quiver(p)?),
                None => None,
            };
            let lhs = Operand { text: lhs, low: *lhs_low };
            let rhs = Operand { text: rhs, low: *rhs_low };
            let s = cmd_bracket(&q, other.as_ref(), cfg.field, lhs, rhs, *project)?;
            match cfg.out {
                OutFormat::Json => writeln!(w, "{}", json!({ "result": s }))?,
                _ => writeln!(w, "{s}")?,
            }
            Ok(true)
        }
        Command::Verify { suite, bound, seed, trials } => {
            let q = match &cfg.quiver {
                Some(p) => Some(load_quiver(p)?),
                None => None,
            };
            let scfg = SuiteConfig {
                field: cfg.field,
                bound: *bound,
                seed: *seed,
                trials: *trials,
            };
            let report = run_suite(*suite, q.as_ref(), &scfg)?;
            emit_report(&report, cfg.out, w)?;
            Ok(report.passed)
        }
    }
}

pub fn cmd_dims(q: &Quiver, a: i64, b: i64, cfg: &RunConfig) -> Result<Vec<StabilizationReport>> {
    let sg = cfg.sg();
    (a..=b).map(|n| sg_dimension(q, n, &sg)).collect()
}

pub fn dims_json(r: &StabilizationReport) -> serde_json::Value {
    json!({
        "degree": r.degree,
        "stages": r.stages.iter().map(|s| json!({"p": s.p, "dim": s.dim, "window_rank": s.window_rank})).collect::<Vec<_>>(),
        "stabilized": r.stabilized,
        "dim": r.value,
    })
}

pub fn emit_dims(rows: &[StabilizationReport], out: OutFormat, w: &mut dyn Write) -> Result<()> {
    match out {
        OutFormat::Json => {
            let v: Vec<_> = rows.iter().map(dims_json).collect();
            writeln!(w, "{}", serde_json::Value::Array(v))?;
        }
        OutFormat::Csv => {
            writeln!(w, "degree,stabilized,dim,window_rank")?;
            for r in rows {
                let dim = r.value.map(|d| d.to_string()).unwrap_or_default();
                let last = r.stages.last().map(|s| s.window_rank).unwrap_or(0);
                writeln!(w, "{},{},{},{}", r.degree, r.stabilized, dim, last)?;
            }
        }
        OutFormat::Text => {
            for r in rows {
                let ranks: Vec<String> = r.stages.iter().map(|s| s.window_rank.to_string()).collect();
                match r.value {
                    Some(d) => writeln!(
                        w,
                        "n = {:>3}  dim {}  (from p = {})  ranks {}",
                        r.degree,
                        d,
                        r.onset().unwrap_or(0),
                        ranks.join(" ")
                    )?,
                    None => writeln!(w, "n = {:>3}  not stabilized by p = {}  ranks {}", r.degree, r.p_max, ranks.join(" "))?,
                }
            }
        }
    }
    Ok(())
}

fn cmd_cohomology(q: &Quiver, m: usize, p: usize, basis: bool, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let g = cohomology_guarded(q, m, p, cfg.field, cfg.guard)?;
    let reps: Vec<String> = if basis {
        g.basis().iter().map(|c| c.display(q)).collect()
    } else {
        Vec::new()
    };
    match cfg.out {
        OutFormat::Json => {
            let mut v = json!({
                "m": m,
                "p": p,
                "dim": g.dim(),
                "quotient_dim": g.quotient_dim(),
                "kernel_dim": g.kernel_dim(),
            });
            if basis {
                v["basis"] = json!(reps);
            }
            writeln!(w, "{v}")?;
        }
        OutFormat::Csv => {
            writeln!(w, "m,p,dim,quotient_dim,kernel_dim")?;
            writeln!(w, "{m},{p},{},{},{}", g.dim(), g.quotient_dim(), g.kernel_dim())?;
        }
        OutFormat::Text => {
            writeln!(
                w,
                "H({m},{p}): dim {} = {} (quotient) + {} (kernel)",
                g.dim(),
                g.quotient_dim(),
                g.kernel_dim()
            )?;
            for r in reps {
                writeln!(w, "  {r}")?;
            }
        }
    }
    Ok(())
}

/// An element expression and which part of `P_A` it fills.
#[derive(Clone, Copy, Debug)]
pub struct Operand<'a> {
    pub text: &'a str,
    pub low: bool,
}

impl Operand<'_> {
    fn element(&self, q: &Quiver, field: Field) -> Result<PropElement> {
        let v = parse_expression(q, field, self.text)?;
        if self.low {
            PropElement::low(v)
        } else {
            PropElement::high(v)
        }
    }
}

pub fn cmd_bracket(
    q: &Quiver,
    rhs_quiver: Option<&Quiver>,
    field: Field,
    lhs: Operand,
    rhs: Operand,
    proj: bool,
) -> Result<String> {
    let x = lhs.element(q, field)?;
    let y = rhs.element(rhs_quiver.unwrap_or(q), field)?;
    let r = bracket(q, &x, &y)?;
    if proj {
        Ok(project(q, &r)?.display(q))
    } else {
        Ok(r.display(q))
    }
}

pub fn emit_report(r: &SuiteReport, out: OutFormat, w: &mut dyn Write) -> Result<()> {
    match out {
        OutFormat::Json => writeln!(w, "{}", serde_json::to_value(r).expect("serializable"))?,
        OutFormat::Csv => {
            writeln!(w, "check,passed,detail")?;
            for c in &r.checks {
                writeln!(w, "\"{}\",{},\"{}\"", c.name.replace('"', "\"\""), c.passed, c.detail.replace('"', "\"\""))?;
            }
        }
        OutFormat::Text => {
            for c in &r.checks {
                let tag = if c.passed { "pass" } else { "FAIL" };
                writeln!(w, "{tag}  {}: {}", c.name, c.detail)?;
            }
            let failed = r.checks.iter().filter(|c| !c.passed).count();
            writeln!(w, "{}: {} checks, {} failed", r.suite, r.checks.len(), failed)?;
        }
    }
    Ok(())
}
