//! `mindisc`: discrepancy bounds, cDV certificates and blow-up scripts from
//! the command line.
//!
//! Exit status: 0 success, 1 no bound found or certificate rejected,
//! 2 input error, 3 internal inconsistency.

mod input;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mindisc::blowup::run_script;
use mindisc::cdv::{certify, verify_certificate, CdvError};
use mindisc::initial::{
    theorem1_bound, weight_search_with_t, weighted_order_and_initial, InitialFormError,
    WeightAssignment,
};
use mindisc::report::{Certificate, SCHEMA_VERSION, TOOL_VERSION};
use mindisc::{render, Polynomial};
use serde_json::json;

#[derive(Parser)]
#[command(name = "mindisc", version, about = "Upper bounds for minimal discrepancies of hypersurface singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted initial form and the bound d = (a1 + ... + an) - A for given weights
    Bound {
        #[command(flatten)]
        input: InputArgs,
        /// Weights of the non-t variables, in ring order
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        /// The variable playing t (default: the last one)
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smallest bound over all weights with a1 + ... + an <= budget
    Search {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10)]
        budget: u64,
        /// Fix the variable playing t instead of trying all of them
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certify md <= 1 for a compound Du Val point f(y1,y2,y3) + t*g
    Cdv {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a blow-up script (`-` for stdin)
    Blowup {
        script: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-check a JSON certificate, against its own input or the one given
    Verify {
        certificate: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Input file: a `ring: v1,v2,...` line, then the polynomial (`-` for stdin)
    file: Option<PathBuf>,
    /// Variables, comma separated, for inline input
    #[arg(long)]
    ring: Option<String>,
    /// Polynomial for inline input
    #[arg(long, requires = "ring", allow_hyphen_values = true)]
    expr: Option<String>,
}

impl InputArgs {
    fn given(&self) -> bool {
        self.file.is_some() || self.expr.is_some()
    }

    fn load(&self) -> Result<Polynomial, Failure> {
        input::load(self.file.as_deref(), self.ring.as_deref(), self.expr.as_deref()).map_err(Failure::Input)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(anyhow::Error),
    Internal(String),
}

impl From<CdvError> for Failure {
    fn from(e: CdvError) -> Failure {
        match e {
            CdvError::Inconsistent { .. } | CdvError::InitialForm(InitialFormError::Inconsistent(_)) => {
                Failure::Internal(e.to_string())
            }
            other => Failure::Input(other.into()),
        }
    }
}

impl From<InitialFormError> for Failure {
    fn from(e: InitialFormError) -> Failure {
        match e {
            InitialFormError::Inconsistent(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

/// What to print, and whether it counts as a result.
struct Outcome {
    body: String,
    found: bool,
}

fn t_index(p: &Polynomial, t: Option<&str>) -> Result<usize, Failure> {
    let ring = p.ring();
    match t {
        None => Ok(ring.arity() - 1),
        Some(name) => ring
            .index_of(name)
            .ok_or_else(|| Failure::Input(anyhow!("--t {name}: no such variable in ring {ring}"))),
    }
}

fn certificate_output(cert: &Certificate, format: Format) -> String {
    match format {
        Format::Text => cert.to_text(),
        Format::Json => cert.to_json(),
    }
}

fn no_result(message: String, format: Format, extra: serde_json::Value) -> Outcome {
    let body = match format {
        Format::Text => format!("{message}\n"),
        Format::Json => {
            let mut doc = json!({ "schema": SCHEMA_VERSION, "tool_version": TOOL_VERSION, "result": message });
            if let (Some(d), Some(e)) = (doc.as_object_mut(), extra.as_object()) {
                d.extend(e.clone());
            }
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Outcome { body, found: false }
}

fn bound(input: &InputArgs, weights: &[u32], t: Option<&str>, format: Format) -> Result<Outcome, Failure> {
    let g = input.load()?;
    let w = WeightAssignment::new(t_index(&g, t)?, weights.to_vec());
    match theorem1_bound(&g, &w)? {
        Some(b) => Ok(Outcome {
            body: certificate_output(&Certificate::Theorem1 { input: g, bound: b }, format),
            found: true,
        }),
        None => {
            let init = weighted_order_and_initial(&g, &w)?;
            let phi = render(&init.phi);
            Ok(no_result(
                format!("hypothesis fails: phi = {phi} has no factor of multiplicity one (A={})", init.order),
                format,
                json!({ "A": init.order, "phi": phi }),
            ))
        }
    }
}

fn search(input: &InputArgs, budget: u64, t: Option<&str>, format: Format) -> Result<Outcome, Failure> {
    let g = input.load()?;
    let pinned = t.map(|_| t_index(&g, t)).transpose()?;
    match weight_search_with_t(&g, budget, pinned)? {
        Some(b) => Ok(Outcome {
            body: certificate_output(&Certificate::Theorem1 { input: g, bound: b }, format),
            found: true,
        }),
        None => Ok(no_result(
            format!("no bound found with weight sum <= {budget}"),
            format,
            json!({ "budget": budget }),
        )),
    }
}

fn cdv(input: &InputArgs, format: Format) -> Result<Outcome, Failure> {
    let g = input.load()?;
    let c = certify(&g)?;
    verify_certificate(&g, &c).map_err(|e| Failure::Internal(format!("fresh certificate fails replay: {e}")))?;
    Ok(Outcome {
        body: certificate_output(&Certificate::Cdv(c), format),
        found: true,
    })
}

fn blowup(script: &Path, format: Format) -> Result<Outcome, Failure> {
    let src = input::read_source(script).map_err(Failure::Input)?;
    let run = run_script(&src).map_err(|e| Failure::Input(anyhow!("{}: {e}", script.display())))?;
    let body = match format {
        Format::Text => run.events.iter().map(|e| format!("{e}\n")).collect(),
        Format::Json => {
            let doc = json!({ "schema": SCHEMA_VERSION, "tool_version": TOOL_VERSION, "events": run.events });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok(Outcome { body, found: true })
}

fn verify(certificate: &Path, input: &InputArgs) -> Result<Outcome, Failure> {
    let text = input::read_source(certificate).map_err(Failure::Input)?;
    let cert = Certificate::from_json(&text)
        .with_context(|| format!("reading certificate {}", certificate.display()))
        .map_err(Failure::Input)?;
    let g = if input.given() { input.load()? } else { cert.input().clone() };
    match cert.verify(&g) {
        Ok(()) => Ok(Outcome {
            body: "verified\n".into(),
            found: true,
        }),
        Err(reason) => {
            eprintln!("rejected: {reason}");
            Ok(Outcome {
                body: "rejected\n".into(),
                found: false,
            })
        }
    }
}

fn emit(body: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Input),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::Input(e.into()))
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let (outcome, out) = match &cli.command {
        Command::Bound { input, weights, t, output } => {
            (bound(input, weights, t.as_deref(), output.format)?, output.out.as_deref())
        }
        Command::Search { input, budget, t, output } => {
            (search(input, *budget, t.as_deref(), output.format)?, output.out.as_deref())
        }
        Command::Cdv { input, output } => (cdv(input, output.format)?, output.out.as_deref()),
        Command::Blowup { script, output } => (blowup(script, output.format)?, output.out.as_deref()),
        Command::Verify { certificate, input } => (verify(certificate, input)?, None),
    };
    emit(&outcome.body, out)?;
    Ok(outcome.found)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(3)
        }
    }
}
