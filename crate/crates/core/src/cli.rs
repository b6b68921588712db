//! The `qframe` command-line tool. Every subcommand parses its inputs, calls
//! the library and prints JSON (or CSV where noted).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;
use serde_json::{json, Value};

use crate::bell::{
    bob_y_grid, chsh_value, estimate_chsh, eta_behavior, fine_joint_readout, lhv_membership, optimize_chsh,
    readout_behavior, sample_outcomes, sweep, sweep_csv, tsirelson_settings, BehaviorTable, ChshEstimate,
    ChshResult, ChshSettings, FrameBit, LhvMembership, OptimizeOptions,
};
use crate::crosscheck::cross_validate;
use crate::error::Error;
use crate::frame::{OutcomeIndex, FRAME_TOL};
use crate::io::{state_json, AnyState, ComplexMatrixDoc, Process, ProcessDoc, SettingsDoc, StateDoc};
use crate::oracle::{density_from_bloch, density_from_params, frame_state_of, two_qubit_frame_state_of};
use crate::process::{apply_process, negativity, MeasurementAxis, QuasiStochasticMatrix};
use crate::random::{random_settings, rng_from_seed};
use crate::two_qubit::apply_local;
use crate::{DEFAULT_SEED, SEED_ENV};

#[derive(Debug, Parser)]
#[command(name = "qframe", version, about = "Frame representation of qubits and Bell-CHSH analysis")]
pub struct Cli {
    /// RNG seed for every randomized step.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Only for `chsh --sweep` and `sample`.
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert and validate a state; JSON inline or a file path.
    State {
        #[arg(long, conflicts_with = "density")]
        state: Option<String>,
        /// A density matrix `{"re", "im"}`, 2x2 or 4x4.
        #[arg(long)]
        density: Option<String>,
    },
    /// Apply a process to a state.
    Evolve {
        #[arg(long)]
        process: String,
        /// Bob's process for two-qubit states; identity when omitted.
        #[arg(long)]
        process_b: Option<String>,
        #[arg(long)]
        state: String,
    },
    /// Measure a state with eta or the direct readout.
    Measure {
        #[arg(long, value_enum)]
        process: MeasureKind,
        /// Comma-separated unit vector.
        #[arg(long, default_value = "0,0,1", allow_hyphen_values = true)]
        axis: String,
        #[arg(long)]
        state: String,
    },
    /// CHSH correlators, value and local-realism verdict.
    Chsh {
        #[command(flatten)]
        settings: SettingsArgs,
        #[arg(long, value_enum, default_value_t = MeasureKind::Eta)]
        measurement: MeasureKind,
        /// Also estimate the correlators from this many samples per setting.
        #[arg(long)]
        samples: Option<u64>,
        /// Evaluate a grid x grid sweep of Bob's rotations about y.
        #[arg(long)]
        sweep: Option<usize>,
        /// Write the sweep CSV here.
        #[arg(long, requires = "sweep")]
        csv: Option<PathBuf>,
        /// Maximize the CHSH value starting from the given settings.
        #[arg(long)]
        optimize: bool,
    },
    /// Build the 256-entry joint distribution for the readout.
    Fine {
        #[command(flatten)]
        settings: SettingsArgs,
        /// Include all 256 entries in the output.
        #[arg(long)]
        entries: bool,
    },
    /// Draw outcomes and report estimates with standard errors.
    Sample {
        /// A distribution: `[...]`, `{"probs": [...]}` or any state document.
        #[arg(long, conflicts_with_all = ["tsirelson", "settings", "random"])]
        distribution: Option<String>,
        #[command(flatten)]
        settings: SettingsArgs,
        #[arg(long)]
        samples: u64,
    },
    /// Cross-validate the frame side against the Hilbert-space oracle.
    OracleCheck {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Eta,
    Readout,
}

#[derive(Debug, Args)]
pub struct SettingsArgs {
    /// Settings `{"O_A1","O_A2","O_B1","O_B2","axis"}`, inline or a file path.
    #[arg(long, conflicts_with_all = ["tsirelson", "random"])]
    pub settings: Option<String>,
    #[arg(long, conflicts_with = "random")]
    pub tsirelson: bool,
    /// Four random rotations drawn from the seed.
    #[arg(long)]
    pub random: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 1: a domain error from the library.
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Domain(e)
    }
}

/// What a run produced: exit code plus the text for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    body: String,
    failure: Option<String>,
}

impl Report {
    fn json(value: Value) -> Report {
        Report {
            body: pretty(&value),
            failure: None,
        }
    }

    fn failing_if(mut self, failed: bool, why: &str) -> Report {
        if failed {
            self.failure = Some(why.into());
        }
        self
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn load_json(arg: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON in {arg}: {e}")))
}

fn load<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_value(load_json(arg)?).map_err(|e| CliError::Usage(format!("bad {what} document: {e}")))
}

fn parse_axis(text: &str) -> Result<MeasurementAxis, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad axis {text}: {e}")))?;
    let [x, y, z] = parts[..] else {
        return Err(CliError::Usage(format!("axis needs three components, got {text}")));
    };
    Ok(MeasurementAxis::new(Vector3::new(x, y, z))?)
}

fn settings_from(args: &SettingsArgs, seed: u64) -> Result<ChshSettings, CliError> {
    if args.tsirelson {
        Ok(tsirelson_settings())
    } else if args.random {
        Ok(random_settings(&mut rng_from_seed(seed)))
    } else if let Some(s) = &args.settings {
        Ok(load::<SettingsDoc>(s, "settings")?.into_settings()?)
    } else {
        Err(CliError::Usage("give --settings, --tsirelson or --random".into()))
    }
}

fn settings_json(s: &ChshSettings) -> Value {
    serde_json::to_value(SettingsDoc::from(s)).expect("settings serialize")
}

fn chsh_json(r: &ChshResult) -> Value {
    json!({
        "correlators": r.correlators,
        "canonical": r.canonical,
        "max_variant": r.max_variant,
        "best_variant": r.best_variant.label(),
    })
}

fn membership_json(m: &LhvMembership) -> Value {
    json!({
        "is_local": m.is_local,
        "witness": m.witness.map(|(v, value)| json!({ "variant": v.label(), "value": value })),
        "local_model": m.model.as_ref().map(|model| model.weights.to_vec()),
    })
}

fn estimate_json(e: &ChshEstimate, seed: u64) -> Value {
    json!({
        "seed": seed,
        "samples_per_setting": e.samples_per_setting,
        "counts": e.counts,
        "correlators": e.correlators,
        "canonical": e.chsh.canonical,
        "max_variant": e.chsh.max_variant,
        "best_variant": e.chsh.best_variant.label(),
        "std_error": e.std_error,
    })
}

fn outcome_labels(n: usize) -> Vec<String> {
    match n {
        2 => vec!["+".into(), "-".into()],
        4 => OutcomeIndex::ALL.iter().map(|o| o.to_string()).collect(),
        _ => (0..n).map(|k| k.to_string()).collect(),
    }
}

fn cmd_state(state: Option<&str>, density: Option<&str>) -> Result<Report, CliError> {
    let frame = match (state, density) {
        (Some(s), None) => load::<StateDoc>(s, "state")?.into_state()?,
        (None, Some(d)) => {
            let rho = load::<ComplexMatrixDoc>(d, "density")?.into_matrix()?;
            match rho.nrows() {
                2 => AnyState::Qubit(frame_state_of(&rho)?),
                4 => AnyState::TwoQubit(two_qubit_frame_state_of(&rho)?),
                n => return Err(Error::DimensionMismatch { expected: 4, found: n }.into()),
            }
        }
        _ => return Err(CliError::Usage("give exactly one of --state or --density".into())),
    };
    let (rho, report) = match &frame {
        AnyState::Qubit(p) => {
            let rho = density_from_bloch(&p.bloch())?;
            let report = crate::oracle::validate_density(&rho);
            (rho, report)
        }
        AnyState::TwoQubit(p) => {
            let q = p.params();
            density_from_params(&q.s_a, &q.s_b, &q.t)
        }
    };
    let valid = report.is_valid();
    let mut out = state_json(&frame);
    out["quantum"] = json!(valid);
    out["density"] = serde_json::to_value(ComplexMatrixDoc::from(&rho)).expect("matrix serializes");
    out["density_report"] = serde_json::to_value(&report).expect("report serializes");
    Ok(Report::json(out))
}

fn load_process(arg: &str) -> Result<Process, CliError> {
    Ok(load::<ProcessDoc>(arg, "process")?.into_process()?)
}

fn cmd_evolve(process: &str, process_b: Option<&str>, state: &str) -> Result<Report, CliError> {
    let p = load_process(process)?;
    let state = load::<StateDoc>(state, "state")?.into_state()?;
    let mut out = json!({ "process": p.to_json() });
    match state {
        AnyState::Qubit(s) => {
            if process_b.is_some() {
                return Err(CliError::Usage("--process-b needs a two-qubit state".into()));
            }
            let v = apply_process(&p.matrix, &s)?;
            out["output"] = json!(v);
            if v.len() == 4 {
                out["state"] = state_json(&AnyState::Qubit(crate::QubitFrameState::from_slice(&v)?));
            }
        }
        AnyState::TwoQubit(s) => {
            let pb = match process_b {
                Some(arg) => load_process(arg)?.matrix,
                None => QuasiStochasticMatrix::identity(4),
            };
            let joint = apply_local(&p.matrix, &pb, &s)?;
            out["output"] = json!(joint.probs);
            if joint.n_alice == 4 && joint.n_bob == 4 {
                out["state"] = state_json(&AnyState::TwoQubit(joint.into_state()?));
            }
        }
    }
    Ok(Report::json(out))
}

fn cmd_measure(kind: MeasureKind, axis: &str, state: &str) -> Result<Report, CliError> {
    let p = match kind {
        MeasureKind::Eta => Process::eta(&parse_axis(axis)?),
        MeasureKind::Readout => Process::readout(),
    };
    let state = load::<StateDoc>(state, "state")?.into_state()?;
    let n = p.matrix.n_outputs();
    let distribution = match &state {
        AnyState::Qubit(s) => json!({ "outcomes": outcome_labels(n), "probs": apply_process(&p.matrix, s)? }),
        AnyState::TwoQubit(s) => {
            let joint = apply_local(&p.matrix, &p.matrix, s)?;
            let labels: Vec<String> = outcome_labels(n)
                .iter()
                .flat_map(|a| outcome_labels(n).into_iter().map(move |b| format!("{a},{b}")))
                .collect();
            json!({ "outcomes": labels, "probs": joint.probs })
        }
    };
    Ok(Report::json(json!({
        "process": p.to_json(),
        "negativity": negativity(&p.matrix),
        "distribution": distribution,
    })))
}

fn analyse(behavior: &BehaviorTable) -> Result<(ChshResult, LhvMembership), CliError> {
    Ok((chsh_value(behavior)?, lhv_membership(behavior)?))
}

#[allow(clippy::too_many_arguments)]
fn cmd_chsh(
    settings: &SettingsArgs,
    measurement: MeasureKind,
    samples: Option<u64>,
    grid: Option<usize>,
    csv: Option<&PathBuf>,
    do_optimize: bool,
    seed: u64,
    format: Format,
) -> Result<Report, CliError> {
    let mut settings = settings_from(settings, seed)?;
    let mut out = json!({ "measurement": measurement });

    if do_optimize {
        if measurement != MeasureKind::Eta {
            return Err(CliError::Usage("--optimize works with --measurement eta".into()));
        }
        let outcome = optimize_chsh(&settings, &OptimizeOptions { seed, ..OptimizeOptions::default() })?;
        out["optimization"] = json!({ "value": outcome.value, "evaluations": outcome.evaluations });
        settings = outcome.settings;
    }
    out["settings"] = settings_json(&settings);

    let behavior = match measurement {
        MeasureKind::Eta => eta_behavior(&settings)?,
        MeasureKind::Readout => readout_behavior(&settings, FrameBit::First)?,
    };
    let (chsh, membership) = analyse(&behavior)?;
    out["behavior"] = json!(behavior.table());
    merge(&mut out, chsh_json(&chsh));
    merge(&mut out, membership_json(&membership));

    if measurement == MeasureKind::Readout {
        let fine = fine_joint_readout(&settings)?.report(&settings);
        out["fine"] = json!({ "holds": fine.holds(FRAME_TOL), "report": fine });
        let mut bits = serde_json::Map::new();
        for bit in FrameBit::ALL {
            let (c, m) = analyse(&readout_behavior(&settings, bit)?)?;
            let mut v = chsh_json(&c);
            merge(&mut v, json!({ "is_local": m.is_local }));
            bits.insert(serde_json::to_value(bit).expect("bit").as_str().expect("name").into(), v);
        }
        out["bits"] = Value::Object(bits);
    }

    out["estimate"] = match samples {
        Some(n) => estimate_json(&estimate_chsh(&behavior, n, seed)?, seed),
        None => Value::Null,
    };

    out["sweep"] = Value::Null;
    if let Some(g) = grid {
        if g == 0 {
            return Err(CliError::Usage("--sweep needs a positive grid size".into()));
        }
        let points = sweep(&bob_y_grid(&settings, g), |s| {
            let b = match measurement {
                MeasureKind::Eta => eta_behavior(s)?,
                MeasureKind::Readout => readout_behavior(s, FrameBit::First)?,
            };
            Ok(chsh_value(&b)?.max_variant)
        })?;
        let table = sweep_csv(&points);
        if format == Format::Csv {
            return Ok(Report { body: table, failure: None });
        }
        if let Some(path) = csv {
            std::fs::write(path, &table).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        }
        let best = points.iter().max_by(|a, b| a.value.total_cmp(&b.value)).expect("non-empty grid");
        out["sweep"] = json!({
            "grid": g,
            "points": points.len(),
            "max_value": best.value,
            "argmax": best.parameters,
            "csv": csv.map(|p| p.display().to_string()),
        });
    }
    if format == Format::Csv {
        return Err(CliError::Usage("CSV output for chsh needs --sweep".into()));
    }
    Ok(Report::json(out))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn cmd_fine(settings: &SettingsArgs, entries: bool, seed: u64) -> Result<Report, CliError> {
    let settings = settings_from(settings, seed)?;
    let joint = fine_joint_readout(&settings)?;
    let report = joint.report(&settings);
    let holds = report.holds(FRAME_TOL);
    let mut out = json!({
        "settings": settings_json(&settings),
        "min_entry": report.min_entry,
        "total": report.total,
        "max_marginal_residual": report.max_marginal_residual,
        "holds": holds,
    });
    if entries {
        out["entries"] = json!(joint.entries());
    }
    Ok(Report::json(out).failing_if(!holds, "joint distribution failed its checks"))
}

fn distribution_from(value: Value) -> Result<Vec<f64>, CliError> {
    if let Value::Array(_) = value {
        return serde_json::from_value(value).map_err(|e| CliError::Usage(format!("bad distribution: {e}")));
    }
    let doc: StateDoc = serde_json::from_value(value).map_err(|e| CliError::Usage(format!("bad distribution: {e}")))?;
    match (&doc.probs, &doc.bloch, &doc.s_a) {
        (Some(p), None, None) if p.len() != 4 && p.len() != 16 => Ok(p.clone()),
        _ => Ok(match doc.into_state()? {
            AnyState::Qubit(s) => s.probs().to_vec(),
            AnyState::TwoQubit(s) => s.probs().to_vec(),
        }),
    }
}

fn cmd_sample(
    distribution: Option<&str>,
    settings: &SettingsArgs,
    n: u64,
    seed: u64,
    format: Format,
) -> Result<Report, CliError> {
    let Some(arg) = distribution else {
        let settings = settings_from(settings, seed)?;
        let estimate = estimate_chsh(&eta_behavior(&settings)?, n, seed)?;
        if format == Format::Csv {
            return Err(CliError::Usage("CSV output for sample needs --distribution".into()));
        }
        return Ok(Report::json(json!({
            "settings": settings_json(&settings),
            "estimate": estimate_json(&estimate, seed),
        })));
    };
    let dist = distribution_from(load_json(arg)?)?;
    let counts = sample_outcomes(&dist, n, seed)?;
    let labels = match dist.len() {
        16 => OutcomeIndex::ALL
            .iter()
            .flat_map(|a| OutcomeIndex::ALL.iter().map(move |b| format!("{a},{b}")))
            .collect(),
        k => outcome_labels(k),
    };
    if format == Format::Csv {
        let mut body = String::from("outcome,count\n");
        for (label, c) in labels.iter().zip(&counts) {
            body.push_str(&format!("{label},{c}\n"));
        }
        return Ok(Report { body, failure: None });
    }
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let std_errors: Vec<f64> = freq.iter().map(|f| (f * (1.0 - f) / n as f64).sqrt()).collect();
    let mut out = json!({
        "seed": seed,
        "samples": n,
        "outcomes": labels,
        "counts": counts,
        "frequencies": freq,
        "std_errors": std_errors,
    });
    if dist.len() == 16 {
        out["matching_pairs"] = json!((0..4).map(|k| counts[5 * k]).sum::<u64>());
    }
    Ok(Report::json(out))
}

fn cmd_oracle_check(cases: usize, seed: u64) -> Result<Report, CliError> {
    if cases == 0 {
        return Err(CliError::Usage("--cases must be positive".into()));
    }
    let report = cross_validate(cases, seed)?;
    let mut out = serde_json::to_value(&report).expect("report serializes");
    out["max_residual"] = json!(report.max_residual());
    out["passed"] = json!(report.passed());
    Ok(Report::json(out).failing_if(!report.passed(), "frame and Hilbert sides disagree"))
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let (seed, format) = (cli.seed, cli.format);
    let json_only = || {
        if format == Format::Csv {
            Err(CliError::Usage("CSV output is only available for chsh --sweep and sample".into()))
        } else {
            Ok(())
        }
    };
    match &cli.command {
        Command::State { state, density } => {
            json_only()?;
            cmd_state(state.as_deref(), density.as_deref())
        }
        Command::Evolve {
            process,
            process_b,
            state,
        } => {
            json_only()?;
            cmd_evolve(process, process_b.as_deref(), state)
        }
        Command::Measure { process, axis, state } => {
            json_only()?;
            cmd_measure(*process, axis, state)
        }
        Command::Chsh {
            settings,
            measurement,
            samples,
            sweep,
            csv,
            optimize,
        } => cmd_chsh(settings, *measurement, *samples, *sweep, csv.as_ref(), *optimize, seed, format),
        Command::Fine { settings, entries } => {
            json_only()?;
            cmd_fine(settings, *entries, seed)
        }
        Command::Sample {
            distribution,
            settings,
            samples,
        } => cmd_sample(distribution.as_deref(), settings, *samples, seed, format),
        Command::OracleCheck { cases } => {
            json_only()?;
            cmd_oracle_check(*cases, seed)
        }
    }
}

/// Parses `args` (program name first) and runs the command without touching
/// the process's stdout, stderr or exit status.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let (code, body, stderr) = match dispatch(&cli) {
        Ok(Report { body, failure: None }) => (0, body, String::new()),
        Ok(Report {
            body,
            failure: Some(why),
        }) => (1, body, format!("validation failed: {why}\n")),
        Err(CliError::Usage(msg)) => (2, String::new(), format!("usage error: {msg}\n")),
        Err(CliError::Domain(e)) => (1, String::new(), format!("error: {e}\n")),
    };
    match &cli.output {
        Some(path) if !body.is_empty() => match std::fs::write(path, &body) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr,
            },
            Err(e) => Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("usage error: cannot write {}: {e}\n", path.display()),
            },
        },
        _ => Outcome {
            code,
            stdout: body,
            stderr,
        },
    }
}

pub fn main() -> i32 {
    let outcome = run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.code
}
