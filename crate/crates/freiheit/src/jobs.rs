//! Batch jobs behind the CLI: one function per subcommand, from a
//! JSON payload plus config overrides to a report envelope and a
//! process exit status.
//!
//! Exit status semantics: 0 means the mathematical verdict is
//! positive (certified, consistent, monotone), 2 means it is negative
//! (refuted, obstructed, failed). Input and runtime errors surface as
//! `JobError`, which the binary maps to exit 1. A negative verdict is
//! a successful run of the program.
//!
//! Determinism: identical command, payload, and overrides produce a
//! byte-identical report. All maps serialize with sorted keys and all
//! randomness flows from the recorded seed.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{GaussianRational, Mat2};
use crate::freeness::{
    certify_schottky_with_retry, verify_schottky, FreenessError, SchottkyCertificate,
    SchottkyVerdict,
};
use crate::groupcalc::{
    chibar, deficiency, iof_free, iof_matrix, iof_quotient_check, miof_upper_bound,
    theorem_b_check, FreeWord, GroupCalcError, GroupDescriptor, IofLimits, IofReport,
    MatrixIofConfig, MiofLimits, TheoremBVerdict,
};
use crate::hyperbolic::minimize::{minimize_basepoint, MinimizeConfig};
use crate::hyperbolic::{HyperbolicError, MoebiusNumeric, ObstructionVerdict, UHPoint};
use crate::magnus::{
    certify_free_product, verify_free_product, CertifyConfig, FreeProductCertificate,
    MagnusError, Verdict,
};
use crate::{DEFAULT_SEED, DEFAULT_TOL};

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CertifyMagnus,
    CertifySchottky,
    Obstruct,
    Iof,
    MiofBound,
    Chibar,
    TheoremB,
    QuotientCheck,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CertifyMagnus,
        Command::CertifySchottky,
        Command::Obstruct,
        Command::Iof,
        Command::MiofBound,
        Command::Chibar,
        Command::TheoremB,
        Command::QuotientCheck,
    ];

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::CertifyMagnus => "certify-magnus",
            Command::CertifySchottky => "certify-schottky",
            Command::Obstruct => "obstruct",
            Command::Iof => "iof",
            Command::MiofBound => "miof-bound",
            Command::Chibar => "chibar",
            Command::TheoremB => "theorem-b",
            Command::QuotientCheck => "quotient-check",
        }
    }
}

/// Command-line knobs that override payload fields where both exist.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    /// Re-check a previously emitted certificate instead of running
    /// the search. Only the two certify commands accept this.
    pub verify: bool,
}

impl ConfigOverrides {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }
}

#[derive(Debug, Error)]
pub enum JobError {
    #[error("payload rejected at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Magnus(#[from] MagnusError),

    #[error(transparent)]
    Freeness(#[from] FreenessError),

    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),

    #[error(transparent)]
    Group(#[from] GroupCalcError),
}

#[derive(Clone, Debug)]
pub struct JobOutcome {
    /// The full report envelope, ready to serialize.
    pub report: Value,
    pub exit_code: i32,
}

fn parse_payload<T: DeserializeOwned>(payload: &Value) -> Result<T, JobError> {
    serde_path_to_error::deserialize::<_, T>(payload).map_err(|e| JobError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn envelope(
    command: Command,
    config: Value,
    input: &Value,
    result: Value,
    verdict: String,
    exit_code: i32,
) -> JobOutcome {
    let report = json!({
        "command": command.name(),
        "config": config,
        "input": input,
        "result": result,
        "verdict": verdict,
        "exit_code": exit_code,
        "tool": {
            "name": "freiheit",
            "version": env!("CARGO_PKG_VERSION"),
        },
    });
    JobOutcome { report, exit_code }
}

/// Accept a bare certificate, a `{"certificate": …}` object, or a
/// whole previous report envelope.
fn certificate_slot<'a>(payload: &'a Value, key: &str) -> &'a Value {
    if let Some(inner) = payload.get("result").and_then(|r| r.get(key)) {
        return inner;
    }
    payload.get(key).unwrap_or(payload)
}

/// Run one job. The payload is the parsed `--input` document.
pub fn run(
    command: Command,
    payload: &Value,
    overrides: &ConfigOverrides,
) -> Result<JobOutcome, JobError> {
    if overrides.verify
        && !matches!(command, Command::CertifyMagnus | Command::CertifySchottky)
    {
        return Err(JobError::Input(format!(
            "--verify re-checks stored certificates and applies only to \
             certify-magnus and certify-schottky, not {}",
            command.name()
        )));
    }
    match command {
        Command::CertifyMagnus => certify_magnus_job(payload, overrides),
        Command::CertifySchottky => certify_schottky_job(payload, overrides),
        Command::Obstruct => obstruct_job(payload, overrides),
        Command::Iof => iof_job(payload, overrides),
        Command::MiofBound => miof_job(payload, overrides),
        Command::Chibar => chibar_job(payload),
        Command::TheoremB => theorem_b_job(payload, overrides),
        Command::QuotientCheck => quotient_job(payload),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MagnusPayload {
    generators: Vec<Mat2<GaussianRational>>,
    word_length: Option<usize>,
    syllable_depth: Option<usize>,
    exponent_bound: Option<i64>,
    candidate_pool: Option<usize>,
    max_nodes: Option<u64>,
}

fn certify_magnus_job(
    payload: &Value,
    overrides: &ConfigOverrides,
) -> Result<JobOutcome, JobError> {
    if overrides.verify {
        let cert: FreeProductCertificate =
            parse_payload(certificate_slot(payload, "certificate"))?;
        let verification = verify_free_product(&cert)?;
        let exit = if verification.consistent {
            EXIT_POSITIVE
        } else {
            EXIT_NEGATIVE
        };
        let verdict = if verification.consistent {
            "verified-consistent".to_string()
        } else {
            "verification-failed".to_string()
        };
        return Ok(envelope(
            Command::CertifyMagnus,
            to_value(&cert.config),
            payload,
            json!({ "verification": verification }),
            verdict,
            exit,
        ));
    }

    let p: MagnusPayload = parse_payload(payload)?;
    let defaults = CertifyConfig::default();
    let config = CertifyConfig {
        word_length: p.word_length.unwrap_or(defaults.word_length),
        syllable_depth: overrides
            .depth
            .or(p.syllable_depth)
            .unwrap_or(defaults.syllable_depth),
        exponent_bound: p.exponent_bound.unwrap_or(defaults.exponent_bound),
        candidate_pool: p.candidate_pool.unwrap_or(defaults.candidate_pool),
        max_nodes: p.max_nodes.unwrap_or(defaults.max_nodes),
    };
    let cert = certify_free_product(&p.generators, &config)?;
    let (verdict, exit) = match cert.verdict {
        Verdict::CertifiedToDepth => ("certified-to-depth".to_string(), EXIT_POSITIVE),
        Verdict::Refuted { .. } => ("refuted".to_string(), EXIT_NEGATIVE),
    };
    Ok(envelope(
        Command::CertifyMagnus,
        to_value(&config),
        payload,
        json!({ "certificate": cert }),
        verdict,
        exit,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchottkyPayload {
    matrices: Vec<MoebiusNumeric>,
    margin: Option<f64>,
}

const DEFAULT_SCHOTTKY_MARGIN: f64 = 1e-6;

fn certify_schottky_job(
    payload: &Value,
    overrides: &ConfigOverrides,
) -> Result<JobOutcome, JobError> {
    if overrides.verify {
        let cert: SchottkyCertificate = parse_payload(certificate_slot(payload, "certificate"))?;
        let consistent = verify_schottky(&cert, overrides.tol())?;
        let exit = if consistent { EXIT_POSITIVE } else { EXIT_NEGATIVE };
        let verdict = if consistent {
            "verified-consistent".to_string()
        } else {
            "verification-failed".to_string()
        };
        return Ok(envelope(
            Command::CertifySchottky,
            json!({ "tol": overrides.tol() }),
            payload,
            json!({ "consistent": consistent }),
            verdict,
            exit,
        ));
    }

    let p: SchottkyPayload = parse_payload(payload)?;
    let margin = p.margin.unwrap_or(DEFAULT_SCHOTTKY_MARGIN);
    let config = json!({
        "margin": margin,
        "tol": overrides.tol(),
        "seed": overrides.seed(),
    });
    let cert = certify_schottky_with_retry(&p.matrices, margin, overrides.tol(), overrides.seed())?;
    let (verdict, exit) = match cert.verdict {
        SchottkyVerdict::Certified => ("certified".to_string(), EXIT_POSITIVE),
        SchottkyVerdict::Failed { .. } => ("failed".to_string(), EXIT_NEGATIVE),
    };
    Ok(envelope(
        Command::CertifySchottky,
        config,
        payload,
        json!({ "certificate": cert }),
        verdict,
        exit,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstructPayload {
    matrices: Vec<MoebiusNumeric>,
    basepoint: Option<UHPoint>,
    restarts: Option<usize>,
    max_iters: Option<usize>,
}

fn obstruct_job(payload: &Value, overrides: &ConfigOverrides) -> Result<JobOutcome, JobError> {
    let p: ObstructPayload = parse_payload(payload)?;
    let config = MinimizeConfig {
        restarts: p.restarts.unwrap_or(100),
        max_iters: p.max_iters.unwrap_or(300),
        seed: overrides.seed(),
        tol: overrides.tol(),
    };
    let basepoint = p.basepoint.unwrap_or_else(UHPoint::j);
    let outcome = minimize_basepoint(&p.matrices, &basepoint, &config)?;
    let obstructed = outcome.best.verdict == ObstructionVerdict::Obstructed;
    let (verdict, exit) = if obstructed {
        ("obstructed".to_string(), EXIT_NEGATIVE)
    } else {
        ("consistent".to_string(), EXIT_POSITIVE)
    };
    Ok(envelope(
        Command::Obstruct,
        to_value(&config),
        payload,
        json!({ "outcome": outcome }),
        verdict,
        exit,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IofPayload {
    words: Option<Vec<FreeWord>>,
    ambient_rank: Option<usize>,
    matrices: Option<Vec<MoebiusNumeric>>,
    max_set_size: Option<usize>,
}

fn iof_report_verdict(report: &IofReport) -> String {
    match (report.exact, report.upper) {
        (Some(v), _) => format!("iof = {v}"),
        (None, Some(u)) => format!("iof in [{}, {u}]", report.lower),
        (None, None) => format!("iof >= {}", report.lower),
    }
}

fn iof_job(payload: &Value, overrides: &ConfigOverrides) -> Result<JobOutcome, JobError> {
    let p: IofPayload = parse_payload(payload)?;
    let (config, report) = match (&p.words, &p.matrices) {
        (Some(words), None) => {
            let ambient = p.ambient_rank.ok_or_else(|| {
                JobError::Input("word evidence needs `ambient_rank`".to_string())
            })?;
            let limits = IofLimits {
                max_set_size: p.max_set_size.unwrap_or(IofLimits::default().max_set_size),
            };
            (to_value(&limits), iof_free(words, ambient, &limits)?)
        }
        (None, Some(mats)) => {
            if p.ambient_rank.is_some() {
                return Err(JobError::Input(
                    "`ambient_rank` only applies to word evidence".to_string(),
                ));
            }
            let config = MatrixIofConfig {
                seed: overrides.seed(),
                tol: overrides.tol(),
                max_set_size: p
                    .max_set_size
                    .unwrap_or(MatrixIofConfig::default().max_set_size),
                ..MatrixIofConfig::default()
            };
            (to_value(&config), iof_matrix(mats, &config)?)
        }
        _ => {
            return Err(JobError::Input(
                "provide exactly one of `words` or `matrices`".to_string(),
            ))
        }
    };
    let verdict = iof_report_verdict(&report);
    Ok(envelope(
        Command::Iof,
        config,
        payload,
        json!({ "iof": report }),
        verdict,
        EXIT_POSITIVE,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MiofPayload {
    rank: usize,
    depth: Option<usize>,
    max_states: Option<usize>,
    max_word_len: Option<usize>,
}

fn miof_job(payload: &Value, overrides: &ConfigOverrides) -> Result<JobOutcome, JobError> {
    let p: MiofPayload = parse_payload(payload)?;
    let depth = overrides.depth.or(p.depth).unwrap_or(2);
    let defaults = MiofLimits::default();
    let limits = MiofLimits {
        max_states: p.max_states.unwrap_or(defaults.max_states),
        max_word_len: p.max_word_len.unwrap_or(defaults.max_word_len),
    };
    let report = miof_upper_bound(p.rank, depth, &limits)?;
    let verdict = format!(
        "miof(F_{}) <= {} over generating sets within {} Nielsen moves",
        report.rank, report.min_iof, report.depth
    );
    Ok(envelope(
        Command::MiofBound,
        json!({ "depth": depth, "limits": to_value(&limits) }),
        payload,
        json!({ "bound": report }),
        verdict,
        EXIT_POSITIVE,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChibarPayload {
    group: GroupDescriptor,
}

fn chibar_job(payload: &Value) -> Result<JobOutcome, JobError> {
    let p: ChibarPayload = parse_payload(payload)?;
    p.group.validate()?;
    let cb = chibar(&p.group);
    let def = deficiency(&p.group);
    Ok(envelope(
        Command::Chibar,
        json!({}),
        payload,
        json!({ "chibar": cb, "deficiency": def }),
        format!("chibar = {cb}, deficiency = {def}"),
        EXIT_POSITIVE,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoremBPayload {
    group: GroupDescriptor,
    words: Option<Vec<FreeWord>>,
    ambient_rank: Option<usize>,
    matrices: Option<Vec<MoebiusNumeric>>,
    /// A previously computed independence report, taken as-is.
    evidence: Option<IofReport>,
}

fn theorem_b_job(payload: &Value, overrides: &ConfigOverrides) -> Result<JobOutcome, JobError> {
    let p: TheoremBPayload = parse_payload(payload)?;
    let sources =
        p.words.is_some() as u8 + p.matrices.is_some() as u8 + p.evidence.is_some() as u8;
    if sources != 1 {
        return Err(JobError::Input(
            "provide exactly one of `words`, `matrices`, or `evidence`".to_string(),
        ));
    }
    let evidence = if let Some(words) = &p.words {
        let ambient = p
            .ambient_rank
            .ok_or_else(|| JobError::Input("word evidence needs `ambient_rank`".to_string()))?;
        iof_free(words, ambient, &IofLimits::default())?
    } else if let Some(mats) = &p.matrices {
        let config = MatrixIofConfig {
            seed: overrides.seed(),
            tol: overrides.tol(),
            ..MatrixIofConfig::default()
        };
        iof_matrix(mats, &config)?
    } else {
        p.evidence.clone().expect("counted above")
    };
    let report = theorem_b_check(&p.group, &evidence)?;
    let (verdict, exit) = match report.verdict {
        TheoremBVerdict::Consistent => ("consistent".to_string(), EXIT_POSITIVE),
        TheoremBVerdict::Inconclusive => ("inconclusive".to_string(), EXIT_NEGATIVE),
        TheoremBVerdict::CandidateCounterexample => {
            ("candidate-counterexample".to_string(), EXIT_NEGATIVE)
        }
    };
    Ok(envelope(
        Command::TheoremB,
        json!({}),
        payload,
        json!({ "theorem_b": report }),
        verdict,
        exit,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotientPayload {
    words: Vec<FreeWord>,
    ambient_rank: usize,
    /// Generators to kill, as indices into `0..ambient_rank`.
    kill: Vec<usize>,
}

fn quotient_job(payload: &Value) -> Result<JobOutcome, JobError> {
    let p: QuotientPayload = parse_payload(payload)?;
    let kill: std::collections::BTreeSet<usize> = p.kill.iter().copied().collect();
    if kill.len() != p.kill.len() {
        return Err(JobError::Input("`kill` lists a generator twice".to_string()));
    }
    let report = iof_quotient_check(&p.words, p.ambient_rank, &kill, &IofLimits::default())?;
    let (verdict, exit) = if report.monotone {
        ("monotone".to_string(), EXIT_POSITIVE)
    } else {
        ("monotonicity-violated".to_string(), EXIT_NEGATIVE)
    };
    Ok(envelope(
        Command::QuotientCheck,
        json!({}),
        payload,
        json!({ "quotient_check": report }),
        verdict,
        exit,
    ))
}
