//! Command line front end: argument parsing, instance loading and dispatch.
//!
//! Every command writes one JSON [`ReportEnvelope`] to standard output. Exit
//! codes: 0 success, 2 input errors, 3 domain or feasibility errors, 4
//! enumeration cap exceeded.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::argmin::{Limits, ProblemInstance};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, parse_vector, Rational, Vector};
use crate::geometry::{end_set_distance_capped, Norm, VPolytope};
use crate::instance_file::{parse_instance_file, ParseMode, ParsedInstance};
use crate::report::{self, ReportEnvelope};
use crate::validator::{self, SampleConfig};
use crate::{instances, kkt, moduli, segment};

pub const ENUM_CAP_VAR: &str = "HOFFMAN_ENUM_CAP";

#[derive(Debug, Parser)]
#[command(name = "hoffman", version, about = "Exact stability constants of the LP argmin mapping under RHS perturbations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    /// Instance file, or a bundled name: instanceA, instanceB, instanceC, zeroRows.
    pub instance: String,
    /// Ignore unknown fields in the instance file.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal KKT subsets M_c, or M_{c,b} with --b.
    Kkt {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Hoffman constant with its witness (D, S, b*, x*).
    Hof {
        #[command(flatten)]
        input: InstanceArg,
        /// Also list every (D, S) term.
        #[arg(long)]
        terms: bool,
    },
    /// Calmness modulus at (b, x).
    Clm {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Lipschitz upper semicontinuity modulus at b.
    Lipusc {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Break steps and connecting subdivision along [from, to].
    Breaks {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Hoffman constant under joint (c, b) perturbations: Zero or Infinite.
    Canonical {
        #[command(flatten)]
        input: InstanceArg,
    },
    /// Seeded randomized certification of the computed constants.
    Validate {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        radius: String,
        #[arg(long, default_value_t = 4)]
        grid_denominator: u32,
        /// Also estimate the pointwise Hoffman modulus at this parameter
        /// (defaults to b_nominal from the file when present).
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Dual-norm distance from the origin to the end set of conv(points).
    Endset {
        /// Points separated by ';', coordinates by ',', e.g. "1,0;1,1".
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Norm in which the distance is measured: l1 or linf.
        #[arg(long)]
        dual_norm: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kkt { .. } => "kkt",
            Command::Hof { .. } => "hof",
            Command::Clm { .. } => "clm",
            Command::Lipusc { .. } => "lipusc",
            Command::Breaks { .. } => "breaks",
            Command::Canonical { .. } => "canonical",
            Command::Validate { .. } => "validate",
            Command::Endset { .. } => "endset",
        }
    }
}

/// Enumeration limits, honoring `HOFFMAN_ENUM_CAP` when set.
pub fn limits_from_env(value: Option<&str>) -> Result<Limits> {
    match value {
        None => Ok(Limits::default()),
        Some(text) => text
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&cap| cap > 0)
            .map(Limits::with_constraint_cap)
            .ok_or_else(|| Error::InvalidArgument(format!("{ENUM_CAP_VAR} must be a positive integer, got {text:?}"))),
    }
}

pub fn load_instance(input: &InstanceArg, limits: Limits) -> Result<ParsedInstance> {
    let mode = if input.lenient { ParseMode::Lenient } else { ParseMode::Strict };
    let path = PathBuf::from(&input.instance);
    let mut parsed = if path.exists() {
        parse_instance_file(&path, mode)?
    } else if let Some(p) = instances::bundled(&input.instance) {
        p
    } else {
        return Err(Error::Parse(format!("{}: no such file or bundled instance", input.instance)));
    };
    parsed.instance = parsed.instance.with_limits(limits);
    Ok(parsed)
}

fn flag_error(flag: &str, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("--{flag}: {msg}")),
        other => Error::Parse(format!("--{flag}: {other}")),
    }
}

fn flag_vector(flag: &str, text: &str) -> Result<Vector> {
    parse_vector(text).map_err(|e| flag_error(flag, e))
}

fn parse_points(text: &str) -> Result<Vec<Vector>> {
    text.split(';').map(|p| flag_vector("points", p.trim())).collect()
}

fn endset(points: &str, dual_norm: &str, limits: Limits) -> Result<Value> {
    let points = parse_points(points)?;
    let dim = points.first().map_or(0, Vec::len);
    if dim == 0 {
        return Err(Error::Parse("--points: at least one nonempty point is required".into()));
    }
    let norm = Norm::parse(dual_norm).map_err(|e| flag_error("dual-norm", e))?;
    let v = VPolytope::new(dim, points)?;
    let distance = end_set_distance_capped(&v, norm.dual(), limits.max_generators)?;
    Ok(report::endset_result(v.points(), norm, &distance))
}

fn execute(command: &Command, limits: Limits) -> Result<(Option<ProblemInstance>, Value)> {
    if let Command::Endset { points, dual_norm } = command {
        return Ok((None, endset(points, dual_norm, limits)?));
    }
    let input = match command {
        Command::Kkt { input, .. }
        | Command::Hof { input, .. }
        | Command::Clm { input, .. }
        | Command::Lipusc { input, .. }
        | Command::Breaks { input, .. }
        | Command::Canonical { input }
        | Command::Validate { input, .. } => input,
        Command::Endset { .. } => unreachable!(),
    };
    let parsed = load_instance(input, limits)?;
    let inst = &parsed.instance;
    let result = match command {
        Command::Kkt { b: None, .. } => report::family_result(&kkt::minimal_kkt_family(inst)?),
        Command::Kkt { b: Some(b), .. } => {
            report::family_result(&kkt::minimal_kkt_at(inst, &flag_vector("b", b)?)?)
        }
        Command::Hof { terms, .. } => {
            let mut v = report::modulus_result(&moduli::hoffman_constant(inst)?);
            if *terms {
                v["terms"] = moduli::hoffman_terms(inst)?
                    .iter()
                    .map(|t| {
                        serde_json::json!({
                            "D": t.d.labels(),
                            "S": t.s.labels(),
                            "distance": report::ExactValue::from(&t.distance),
                            "value": report::ExactValue::from(&t.value),
                        })
                    })
                    .collect();
            }
            v
        }
        Command::Clm { b, x, .. } => report::modulus_result(&moduli::calmness_modulus(
            inst,
            &flag_vector("b", b)?,
            &flag_vector("x", x)?,
        )?),
        Command::Lipusc { b, .. } => {
            report::modulus_result(&moduli::lipschitz_usc_modulus(inst, &flag_vector("b", b)?)?)
        }
        Command::Breaks { from, to, .. } => report::segment_result(&segment::connecting_subdivision(
            inst,
            &flag_vector("from", from)?,
            &flag_vector("to", to)?,
        )?),
        Command::Canonical { .. } => report::canonical_result(moduli::canonical_hoffman(inst)),
        Command::Validate { samples, seed, radius, grid_denominator, at, .. } => {
            let radius: Rational = parse_rational(radius).map_err(|e| flag_error("radius", e))?;
            let cfg = SampleConfig { seed: *seed, samples: *samples, grid_denominator: *grid_denominator, radius };
            let report = validator::validate(inst, &cfg)?;
            let mut v = report::validation_result(&report, *seed, *samples);
            let nominal = match at {
                Some(text) => Some(flag_vector("at", text)?),
                None => parsed.b_nominal.clone(),
            };
            if let Some(b) = nominal {
                let estimate = validator::empirical_hoffman_modulus_at(inst, &b, &cfg)?;
                v["pointwise"] = report::estimate_result(&estimate, &b);
            }
            v
        }
        Command::Endset { .. } => unreachable!(),
    };
    Ok((Some(parsed.instance), result))
}

/// Outcome of one invocation: the envelope (on success) or a diagnostic.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

pub fn run(cli: &Cli, enum_cap: Option<&str>) -> Outcome {
    let start = Instant::now();
    let outcome = limits_from_env(enum_cap).and_then(|limits| execute(&cli.command, limits));
    match outcome {
        Ok((inst, result)) => {
            let envelope = ReportEnvelope::new(cli.command.name(), inst.as_ref(), result, start.elapsed());
            Outcome { stdout: envelope.to_json_pretty() + "\n", stderr: String::new(), exit_code: 0 }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("hoffman: error: {e}\n"), exit_code: e.exit_code() },
    }
}
