//! Command-line front end for `bispec-core`.
//!
//! [`run`] parses arguments, executes one subcommand and returns a [`Report`]
//! whose JSON form goes to standard output.

mod commands;
mod weights;

use std::ffi::OsString;

use bispec_core::limits::set_max_degree;
use bispec_core::Error;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{Map, Value};

pub use weights::parse_weights;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "bispec",
    version,
    about = "Exact ad-condition engine for Schrödinger-type operators"
)]
pub struct Cli {
    /// Parameter names that expressions may use, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub params: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

/// An operator and eigenvalue function given inline or by catalog id.
#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// Operator, or a potential V meaning -D^2 + V.
    #[arg(long = "L", allow_hyphen_values = true)]
    pub l: Option<String>,
    /// Eigenvalue function (a polynomial or rational function of x).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Take L and theta from a catalog entry.
    #[arg(long, conflicts_with_all = ["l", "theta"])]
    pub catalog: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the identity stored with a catalog entry.
    Verify {
        id: Option<String>,
        /// Check every catalog entry.
        #[arg(long, conflicts_with = "id")]
        all: bool,
    },
    /// The iterated commutator A_j = ad_L^j(theta).
    Ad {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        j: usize,
    },
    /// All weight vectors on the given orders that annihilate sum w_j A_j.
    FitWeights {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
    },
    /// Polynomial theta of bounded degree satisfying a given identity.
    SolveTheta {
        #[arg(long = "L", allow_hyphen_values = true)]
        l: Option<String>,
        #[arg(long)]
        catalog: Option<String>,
        /// `j:w,...` pairs or a label such as `A5-5A3+4A1`; defaults to the catalog weights.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        #[arg(long)]
        deg: usize,
        /// Allow a nonzero constant term.
        #[arg(long)]
        keep_constant: bool,
    },
    /// Odd-order weights from the product of (z - (step*i)^2) over i = 1..n.
    ReachWeights {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        step: String,
    },
    /// Weights of the lower-order identity for exceptional Hermite index k.
    HermiteNewWeights {
        #[arg(long)]
        k: usize,
    },
    /// Darboux steps V -> V - 2(log psi)'' applied in order.
    Darboux {
        #[arg(long = "L", allow_hyphen_values = true)]
        l: String,
        #[arg(long, required = true, allow_hyphen_values = true)]
        seed: Vec<String>,
    },
    /// Polynomial system for the ansatz V = (P/theta')'.
    GenSystem {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        /// Stop after the forced relations.
        #[arg(long)]
        forced_only: bool,
    },
    /// Terms of exp(tL) theta exp(-tL) and their closed form.
    Heisenberg {
        #[arg(long = "catalog-id")]
        catalog_id: Option<String>,
        #[arg(long = "L", conflicts_with = "catalog_id", allow_hyphen_values = true)]
        l: Option<String>,
        #[arg(long, conflicts_with = "catalog_id", allow_hyphen_values = true)]
        theta: Option<String>,
        #[arg(long)]
        order: usize,
        /// Use this omega^2 instead of reading it from A3 = omega^2 A1.
        #[arg(long, allow_hyphen_values = true)]
        omega2: Option<String>,
    },
    /// Catalog inspection.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
}

/// One checked claim.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Verdict {
    pub claim: String,
    pub holds: bool,
    pub residual: String,
    pub assumptions: Vec<String>,
}

/// Everything a subcommand produced.
#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub results: Value,
    pub provenance: Vec<String>,
    pub error: Option<String>,
    pub exit_code: i32,
}

impl Report {
    fn new(command: &str) -> Report {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            inputs: Map::new(),
            verdicts: Vec::new(),
            results: Value::Null,
            provenance: Vec::new(),
            error: None,
            exit_code: 0,
        }
    }

    fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    fn finish(mut self) -> Report {
        self.exit_code = if self.error.is_some() {
            self.exit_code.max(1)
        } else {
            i32::from(!self.verdicts.iter().all(|v| v.holds))
        };
        self
    }

    fn failed(mut self, err: &Error) -> Report {
        self.exit_code = match err {
            Error::Parse { .. }
            | Error::UnknownCatalogId(_)
            | Error::Invalid(_)
            | Error::InvalidParam(_) => 2,
            _ => 1,
        };
        self.error = Some(err.to_string());
        self
    }

    /// Pretty JSON with object keys in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }

    /// Short human-readable account for standard error.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            out.push_str(&format!("{}: error: {e}\n", self.command));
        }
        for v in &self.verdicts {
            let mark = if v.holds { "HOLDS" } else { "FAILS" };
            out.push_str(&format!("{mark}  {}", v.claim));
            if !v.holds && !v.residual.is_empty() {
                let r: String = v.residual.chars().take(160).collect();
                out.push_str(&format!("\n       residual: {r}"));
            }
            out.push('\n');
        }
        if self.verdicts.is_empty() && self.error.is_none() {
            out.push_str(&format!("{}: done\n", self.command));
        }
        out.push_str(&format!("exit {}\n", self.exit_code));
        out
    }
}

fn apply_degree_limit() -> Result<(), Error> {
    match std::env::var("BISPEC_MAX_DEGREE") {
        Ok(s) if !s.trim().is_empty() => {
            let n = s.trim().parse::<usize>().map_err(|_| {
                Error::Invalid(format!(
                    "BISPEC_MAX_DEGREE must be a nonnegative integer, got `{s}`"
                ))
            })?;
            set_max_degree(Some(n));
        }
        _ => set_max_degree(None),
    }
    Ok(())
}

/// Parses `argv` (including the program name) and runs the subcommand.
/// Help and version requests come back as a `help` report whose
/// `results.text` holds the rendered text.
pub fn run<I, T>(argv: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(cli),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let mut r = Report::new("help");
                r.results = serde_json::json!({ "text": text });
                return r;
            }
            let mut r = Report::new("usage");
            r.error = Some(text.trim_start_matches("error: ").trim_end().to_string());
            r.exit_code = 2;
            r
        }
    }
}

pub fn execute(cli: Cli) -> Report {
    let name = command_name(&cli.command);
    let report = Report::new(name);
    if let Err(e) = apply_degree_limit() {
        return report.failed(&e);
    }
    commands::dispatch(cli, report)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Ad { .. } => "ad",
        Command::FitWeights { .. } => "fit-weights",
        Command::SolveTheta { .. } => "solve-theta",
        Command::ReachWeights { .. } => "reach-weights",
        Command::HermiteNewWeights { .. } => "hermite-new-weights",
        Command::Darboux { .. } => "darboux",
        Command::GenSystem { .. } => "gen-system",
        Command::Heisenberg { .. } => "heisenberg",
        Command::Catalog { .. } => "catalog",
    }
}
