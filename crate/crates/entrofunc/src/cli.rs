//! Command-line definitions and dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use entrofunc_core::bridge::{registry, run_bridge, Status};
use entrofunc_core::semigroup::{ElemOf, Flow};
use serde_json::Value;

use crate::report;
use crate::run::{self, Law, Visit};
use crate::spec::{self, CaseSpec, FlowSpec};
use crate::{config, load, CliError, Overrides};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Common {
    /// Number of trajectory steps.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Window for slope detection.
    #[arg(long)]
    pub window: Option<usize>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Ceiling on the size of a single element, in bits.
    #[arg(long)]
    pub cap_bits: Option<u64>,
}

#[derive(Debug, Parser)]
#[command(name = "entrofunc", version, about = "Exact entropy of flows on normed semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy report for a flow spec.
    Entropy {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Per-step table of trajectory norms.
    Trace {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Bridge checks.
    Bridge {
        #[command(subcommand)]
        action: BridgeAction,
    },
    /// Check an entropy law on a flow spec.
    Props {
        spec: PathBuf,
        /// log_law, product_max, coproduct_sum, fekete or quasi_periodic.
        #[arg(long)]
        law: String,
        /// Power for log_law.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Second flow for product_max and coproduct_sum.
        #[arg(long = "with")]
        with: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Parse and build a flow spec or bridge case, then print its canonical form.
    Validate { spec: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum BridgeAction {
    /// Run a bridge case file.
    Run {
        case: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run every built-in case.
    Registry {
        #[command(flatten)]
        common: Common,
    },
    /// Names of the built-in cases.
    List,
}

/// Text for standard output and whether a check failed (exit code 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, failed: false }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::spec(format!("{}: {e}", path.display())))
}

pub fn read_flow(path: &Path) -> Result<FlowSpec, CliError> {
    spec::parse_flow(&read(path)?).map_err(|e| CliError::spec(format!("{}: {e}", path.display())))
}

pub fn read_case(path: &Path) -> Result<CaseSpec, CliError> {
    spec::parse_case(&read(path)?).map_err(|e| CliError::spec(format!("{}: {e}", path.display())))
}

fn overrides(c: &Common, cap_mb: Option<u64>) -> Overrides {
    Overrides { n_max: c.n_max, window: c.window, cap_bits: c.cap_bits, cap_mb }
}

pub fn entropy_text(spec: &FlowSpec, common: &Common, cap_mb: Option<u64>) -> Result<String, CliError> {
    let cfg = config(spec.params(), &overrides(common, cap_mb));
    let c = run::entropy(spec, &cfg, false)?;
    Ok(match common.format.unwrap_or(Format::Json) {
        Format::Json => report::render(&report::entropy_json(spec.name(), spec.kind(), &c, &cfg)),
        Format::Tsv => report::entropy_tsv(&c),
    })
}

pub fn trace_text(spec: &FlowSpec, common: &Common, cap_mb: Option<u64>) -> Result<String, CliError> {
    let cfg = config(spec.params(), &overrides(common, cap_mb));
    let c = run::entropy(spec, &cfg, true)?;
    match common.format.unwrap_or(Format::Tsv) {
        Format::Json => Ok(report::render(&report::trace_json(&c)?)),
        Format::Tsv => report::trace_tsv(&c),
    }
}

pub fn bridge_text(case: &CaseSpec, common: &Common, cap_mb: Option<u64>) -> Result<Outcome, CliError> {
    let cfg = config(&Default::default(), &overrides(&Common { n_max: None, ..common.clone() }, cap_mb));
    let v = run::bridge(case, common.n_max, &cfg)?;
    let stdout = match common.format.unwrap_or(Format::Json) {
        Format::Json => report::render(&report::verdict_json(&v)?),
        Format::Tsv => report::verdict_tsv(&v)?,
    };
    Ok(Outcome { stdout, failed: v.status == Status::Fail })
}

fn registry_text(common: &Common, cap_mb: Option<u64>) -> Result<Outcome, CliError> {
    let cfg = config(&Default::default(), &overrides(&Common { n_max: None, ..common.clone() }, cap_mb));
    let mut failed = false;
    let mut all = Vec::new();
    let mut tsv = String::new();
    for mut c in registry() {
        if let Some(n) = common.n_max {
            c.n_max = n;
        }
        let v = run_bridge(&c, &cfg)?;
        failed |= v.status == Status::Fail;
        match common.format.unwrap_or(Format::Json) {
            Format::Json => all.push(report::verdict_json(&v)?),
            Format::Tsv => tsv.push_str(&report::verdict_tsv(&v)?),
        }
    }
    let stdout = match common.format.unwrap_or(Format::Json) {
        Format::Json => report::render(&Value::Array(all)),
        Format::Tsv => tsv,
    };
    Ok(Outcome { stdout, failed })
}

pub fn props_text(
    spec: &FlowSpec,
    law: Law,
    partner: Option<&FlowSpec>,
    common: &Common,
    cap_mb: Option<u64>,
) -> Result<Outcome, CliError> {
    let cfg = config(spec.params(), &overrides(common, cap_mb));
    let o = run::check_law(spec, law, partner, &cfg)?;
    let stdout = match common.format.unwrap_or(Format::Json) {
        Format::Json => report::render(&report::law_json(&o)),
        Format::Tsv => report::law_tsv(&o),
    };
    Ok(Outcome { stdout, failed: o.status == entrofunc_core::semigroup::laws::LawStatus::Fails })
}

struct Build;

impl Visit for Build {
    type Out = ();

    fn visit<F: Flow>(self, _: &F, _: &[ElemOf<F>]) -> Result<(), CliError> {
        Ok(())
    }
}

/// Builds every object a flow spec names without computing anything.
pub fn check_flow(spec: &FlowSpec) -> Result<(), CliError> {
    match spec {
        FlowSpec::Shift(s) => {
            let g = load::graph(&s.graph)?;
            for w in &s.witnesses {
                load::vertex_set(&g, w)?;
            }
            let k = load::group(&s.group)?;
            let dir = match s.direction {
                spec::ShiftDirection::Forward => entrofunc_core::shift::Direction::Forward,
                spec::ShiftDirection::Backward => entrofunc_core::shift::Direction::Backward,
                spec::ShiftDirection::BackwardRestricted => entrofunc_core::shift::Direction::BackwardRestricted,
            };
            entrofunc_core::shift::ShiftFlow::new(k, g, dir)?;
            Ok(())
        }
        FlowSpec::Symbolic(s) => {
            let sys = load::system(&s.system)?;
            for p in &s.witnesses {
                load::partition(sys.alphabet(), p)?;
            }
            Ok(())
        }
        FlowSpec::Selfmap(s) if s.mode == spec::SetMode::Structural => {
            let g = load::graph(&s.graph)?;
            for w in &s.witnesses {
                load::vertex_set(&g, w)?;
            }
            Ok(())
        }
        FlowSpec::Semigroup(s) => {
            let right = spec::SemigroupSpec { side: spec::TrajectorySide::Right, ..s.clone() };
            run::with_flow(&FlowSpec::Semigroup(right), Build)
        }
        _ => run::with_flow(spec, Build),
    }
}

/// Canonical form of a flow spec or bridge case, after building it.
pub fn validate_text(text: &str) -> Result<String, CliError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| CliError::spec(e.to_string()))?;
    if raw.get("case").is_some() {
        let c = spec::parse_case(text).map_err(CliError::spec)?;
        load::case(&c)?;
        Ok(spec::to_canonical(&c))
    } else {
        let f = spec::parse_flow(text).map_err(CliError::spec)?;
        check_flow(&f)?;
        Ok(spec::to_canonical(&f))
    }
}

/// Runs one command.  `cap_mb` is the memory ceiling from the environment.
pub fn execute(cli: &Cli, cap_mb: Option<u64>) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Entropy { spec, common } => Ok(Outcome::ok(entropy_text(&read_flow(spec)?, common, cap_mb)?)),
        Command::Trace { spec, common } => Ok(Outcome::ok(trace_text(&read_flow(spec)?, common, cap_mb)?)),
        Command::Bridge { action } => match action {
            BridgeAction::Run { case, common } => bridge_text(&read_case(case)?, common, cap_mb),
            BridgeAction::Registry { common } => registry_text(common, cap_mb),
            BridgeAction::List => {
                let mut s = String::new();
                for c in registry() {
                    s.push_str(&format!("{}\t{}\n", c.name, c.kind.tag()));
                }
                Ok(Outcome::ok(s))
            }
        },
        Command::Props { spec, law, k, with, common } => {
            let f = read_flow(spec)?;
            let partner = with.as_deref().map(read_flow).transpose()?;
            props_text(&f, Law::parse(law, *k)?, partner.as_ref(), common, cap_mb)
        }
        Command::Validate { spec } => Ok(Outcome::ok(validate_text(&read(spec)?)?)),
    }
}

/// `ENTROFUNC_CAP_MB`, if set to a number.
pub fn env_cap_mb() -> Result<Option<u64>, CliError> {
    match std::env::var("ENTROFUNC_CAP_MB") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::spec(format!("ENTROFUNC_CAP_MB={v:?} is not a number"))),
        Err(_) => Ok(None),
    }
}
