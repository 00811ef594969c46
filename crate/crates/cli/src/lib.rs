//! Argument handling and report rendering for the `fischer` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fischer_core::decomp::{
    verify_decomposition, DecompositionFile, DecompositionReport, DecompositionResult, JOrder,
};
use fischer_core::operators::{relation_suite, RelationConfig, RelationSuiteReport};
use fischer_core::repdim::{graded_dim_identities, GradedDimReport};
use fischer_core::{decomp, ClPoly, FischerError, SpinorFrame, Workspace};

#[derive(Parser, Debug)]
#[command(
    name = "fischer",
    version,
    about = "Exact Fischer decompositions of spinor-valued polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check directness and spanning of the monogenic decomposition degree by degree.
    Verify(VerifyArgs),
    /// Decompose a polynomial read from a JSON file.
    Decompose(DecomposeArgs),
    /// Rebuild the polynomial from a decomposition file.
    Reassemble(FileArgs),
    /// Dimension identities per degree.
    Dims(GridArgs),
    /// Superalgebra relation suite.
    Relations(RelationArgs),
    /// Spinor frame summary for a given m.
    SpinorInfo(SpinorArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Text,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run outside the stable range m ≥ 2k; results carry no uniqueness guarantee.
    #[arg(long)]
    pub force_unstable: bool,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    /// Check only this degree.
    #[arg(long, conflicts_with = "max_degree")]
    pub degree: Option<u32>,
    /// Check degrees 0..=N.
    #[arg(long, default_value_t = 2)]
    pub max_degree: u32,
    #[command(flatten)]
    pub common: Common,
}

impl GridArgs {
    fn degrees(&self) -> std::ops::RangeInclusive<u32> {
        match self.degree {
            Some(d) => d..=d,
            None => 0..=self.max_degree,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Also run the relation suite up to this degree.
    #[arg(long)]
    pub relations_max_degree: Option<u32>,
    /// Multiply the factors of ux_J in decreasing index order.
    #[arg(long)]
    pub decreasing_j: bool,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct FileArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RelationArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub relations_max_degree: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SpinorArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const UNSTABLE: u8 = 3;
}

/// Rendered output, the destination, and the exit status.
pub struct Outcome {
    pub text: String,
    pub output: Option<PathBuf>,
    pub status: u8,
}

/// An error that ends the run with its status and message on standard error.
#[derive(Debug)]
pub struct Failure {
    pub status: u8,
    pub message: String,
}

impl From<FischerError> for Failure {
    fn from(e: FischerError) -> Self {
        let status = match e {
            FischerError::Parse { .. } => exit::PARSE,
            FischerError::OutsideStableRange { .. } => exit::UNSTABLE,
            _ => exit::FAILED,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure {
        status: exit::FAILED,
        message: format!("{}: {e}", path.display()),
    }
}

fn workspace(m: usize, k: usize, force: bool) -> Result<Workspace, Failure> {
    if m <= 2 || k == 0 {
        return Err(Failure {
            status: exit::FAILED,
            message: format!("need m > 2 and k ≥ 1, got m = {m}, k = {k}"),
        });
    }
    let ws = Workspace::new(m, k)?;
    if !ws.in_stable_range() {
        if !force {
            return Err(FischerError::OutsideStableRange { m, k }.into());
        }
        eprintln!("warning: m = {m} < 2k = {}; results are not unique", 2 * k);
    }
    Ok(ws)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct VerifyReport {
    m: usize,
    k: usize,
    degrees: Vec<DecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relations: Option<RelationSuiteReport>,
    pass: bool,
}

fn verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let g = &args.grid;
    let ws = workspace(g.m, g.k, g.common.force_unstable)?;
    let order = if args.decreasing_j {
        JOrder::Decreasing
    } else {
        JOrder::Increasing
    };
    let mut degrees = Vec::new();
    for l in g.degrees() {
        let r = verify_decomposition(&ws, l, order, g.common.force_unstable)?;
        eprintln!("degree {l}: {} ms", r.elapsed_ms);
        degrees.push(r);
    }
    let relations = match args.relations_max_degree {
        Some(d) => Some(relation_suite(&RelationConfig::new(g.m, g.k, d))?),
        None => None,
    };
    let pass = degrees.iter().all(|r| r.pass) && relations.as_ref().is_none_or(|r| r.pass);
    let report = VerifyReport {
        m: g.m,
        k: g.k,
        degrees,
        relations,
        pass,
    };
    let text = match g.common.format {
        Format::Json => json(&report),
        Format::Text => {
            let mut s = String::new();
            for r in &report.degrees {
                let _ = writeln!(
                    s,
                    "{} m={} k={} degree={} summands={} dim={} rank={} ambient={}",
                    pass_word(r.pass),
                    r.m,
                    r.k,
                    r.degree,
                    r.summands.len(),
                    r.total_dim,
                    r.rank,
                    r.ambient_dim
                );
            }
            if let Some(rel) = &report.relations {
                render_relations(&mut s, rel);
            }
            s
        }
    };
    Ok(Outcome {
        text,
        output: g.common.output.clone(),
        status: if pass { exit::OK } else { exit::FAILED },
    })
}

fn read(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn parse_error(path: &std::path::Path, e: serde_json::Error) -> Failure {
    Failure {
        status: exit::PARSE,
        message: format!(
            "{}: parse error at line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ),
    }
}

fn decompose(args: &DecomposeArgs) -> Result<Outcome, Failure> {
    let p = ClPoly::from_json(&read(&args.input)?).map_err(|e| match e {
        FischerError::Parse { position, message } => Failure {
            status: exit::PARSE,
            message: format!("{}: parse error{position}: {message}", args.input.display()),
        },
        other => other.into(),
    })?;
    let ws = workspace(p.m(), p.k(), args.common.force_unstable)?;
    let r = decomp::fischer_decompose(&ws, &p, args.common.force_unstable)?;
    if let Some(w) = &r.warning {
        eprintln!("warning: {w}");
    }
    let pass = r.residual.is_zero();
    let text = match args.common.format {
        Format::Json => json(&r.to_file()),
        Format::Text => {
            let mut s = String::new();
            for c in &r.components {
                let _ = writeln!(s, "{}: {} terms in the base factor", c.index, c.base.len());
            }
            let _ = writeln!(
                s,
                "{} residual {}",
                pass_word(pass),
                if pass { "0" } else { "nonzero" }
            );
            s
        }
    };
    Ok(Outcome {
        text,
        output: args.common.output.clone(),
        status: if pass { exit::OK } else { exit::FAILED },
    })
}

fn reassemble(args: &FileArgs) -> Result<Outcome, Failure> {
    let file: DecompositionFile =
        serde_json::from_str(&read(&args.input)?).map_err(|e| parse_error(&args.input, e))?;
    let r = DecompositionResult::from_file(&file)?;
    let mut p = r.reassemble()?;
    p = p.add(&r.residual)?;
    let mut text = p.to_json();
    text.push('\n');
    Ok(Outcome {
        text,
        output: args.output.clone(),
        status: exit::OK,
    })
}

#[derive(Serialize)]
struct DimsReport {
    m: usize,
    k: usize,
    degrees: Vec<GradedDimReport>,
    pass: bool,
}

fn dims(args: &GridArgs) -> Result<Outcome, Failure> {
    let ws = workspace(args.m, args.k, args.common.force_unstable)?;
    let degrees = args
        .degrees()
        .map(|l| graded_dim_identities(&ws, l, args.common.force_unstable))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = degrees.iter().all(|r| r.pass);
    let report = DimsReport {
        m: args.m,
        k: args.k,
        degrees,
        pass,
    };
    let text = match args.common.format {
        Format::Json => json(&report),
        Format::Text => {
            let rows: Vec<(String, &str, &str, &str)> = report
                .degrees
                .iter()
                .flat_map(|r| {
                    r.checks.iter().map(move |c| {
                        (
                            r.degree.to_string(),
                            c.name.as_str(),
                            c.lhs.as_str(),
                            c.rhs.as_str(),
                        )
                    })
                })
                .collect();
            let w = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0);
            let wl = rows.iter().map(|r| r.2.len()).max().unwrap_or(0);
            let wr = rows.iter().map(|r| r.3.len()).max().unwrap_or(0);
            let mut s = format!(
                "{:<6}  {:<w$}  {:>wl$}  {:>wr$}  result\n",
                "degree", "identity", "lhs", "rhs"
            );
            for (d, name, lhs, rhs) in rows {
                let pad = w - name.chars().count() + name.len();
                let _ = writeln!(
                    s,
                    "{d:<6}  {name:<pad$}  {lhs:>wl$}  {rhs:>wr$}  {}",
                    pass_word(lhs == rhs)
                );
            }
            s
        }
    };
    Ok(Outcome {
        text,
        output: args.common.output.clone(),
        status: if pass { exit::OK } else { exit::FAILED },
    })
}

fn render_relations(s: &mut String, r: &RelationSuiteReport) {
    for rel in &r.relations {
        let _ = writeln!(s, "{} {}", pass_word(rel.pass), rel.relation);
    }
    let failed = r.relations.iter().filter(|x| !x.pass).count();
    let _ = writeln!(
        s,
        "{} relations checked up to degree {}, {failed} failed",
        r.relations.len(),
        r.max_degree
    );
}

fn relations(args: &RelationArgs) -> Result<Outcome, Failure> {
    if args.m <= 2 || args.k == 0 {
        return Err(Failure {
            status: exit::FAILED,
            message: "need m > 2 and k ≥ 1".into(),
        });
    }
    let r = relation_suite(&RelationConfig::new(
        args.m,
        args.k,
        args.relations_max_degree,
    ))?;
    let text = match args.common.format {
        Format::Json => json(&r),
        Format::Text => {
            let mut s = String::new();
            render_relations(&mut s, &r);
            s
        }
    };
    Ok(Outcome {
        text,
        output: args.common.output.clone(),
        status: if r.pass { exit::OK } else { exit::FAILED },
    })
}

#[derive(Serialize)]
struct SpinorInfo {
    m: usize,
    dim: usize,
    idempotent: String,
    basis: Vec<SpinorEntry>,
}

#[derive(Serialize)]
struct SpinorEntry {
    element: String,
    weight: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chirality: Option<String>,
}

fn spinor_info(args: &SpinorArgs) -> Result<Outcome, Failure> {
    let frame = SpinorFrame::build(args.m)?;
    let basis = frame
        .basis()
        .iter()
        .enumerate()
        .map(|(s, b)| SpinorEntry {
            element: b.to_string(),
            weight: frame.weights()[s]
                .iter()
                .map(|&w| if w > 0 { "1/2".into() } else { "-1/2".into() })
                .collect(),
            chirality: frame.chirality(s).map(|c| format!("{c:?}").to_lowercase()),
        })
        .collect();
    let info = SpinorInfo {
        m: args.m,
        dim: frame.dim(),
        idempotent: frame.idempotent().to_string(),
        basis,
    };
    let text = match args.format {
        Format::Json => json(&info),
        Format::Text => {
            let mut s = format!(
                "m = {}, dim S = {}\nI = {}\n",
                info.m, info.dim, info.idempotent
            );
            for (i, e) in info.basis.iter().enumerate() {
                let chir = e
                    .chirality
                    .as_deref()
                    .map(|c| format!(" {c}"))
                    .unwrap_or_default();
                let _ = writeln!(
                    s,
                    "b{i} weight ({}){chir}: {}",
                    e.weight.join(", "),
                    e.element
                );
            }
            s
        }
    };
    Ok(Outcome {
        text,
        output: args.output.clone(),
        status: exit::OK,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Decompose(a) => decompose(a),
        Command::Reassemble(a) => reassemble(a),
        Command::Dims(a) => dims(a),
        Command::Relations(a) => relations(a),
        Command::SpinorInfo(a) => spinor_info(a),
    }
}
