//! Command-line front end for the `cohere` toolkit.
//!
//! [`dispatch`] does all the work and returns the exit code together with the
//! text destined for standard output and standard error, so the binary is a
//! thin wrapper and the whole grammar can be exercised in tests.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use cohere::basis_opt::{self, Objective, OptimizerConfig, DEFAULT_SEED};
use cohere::io::{read_density, read_unitary, MatrixFile};
use cohere::measures::{self, MeasureReport, DEFAULT_LOG_BASE};
use cohere::probe::{self, BlochVector, ProbeScheme};
use cohere::qmat::{c64, DensityMatrix};
use cohere::sampling::SeededStream;
use cohere::swapcirc;
use cohere::verify::{self, Suite};

/// Version of every output document layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cohere::Error),
    #[error("invariant violated: property suite {0} reported failures")]
    SuiteFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) | CliError::SuiteFailed(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cohere", version, about = "Total quantum coherence: measures, circuits and probing costs")]
pub struct Cli {
    /// Worker threads for parallel sections (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    output: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form total coherence measures of a state.
    Measure(MeasureArgs),
    /// Maximize a basis-dependent coherence objective over unitaries.
    Optimize(OptimizeArgs),
    /// Simulate the controlled-shift measurement of `Tr rho^k`.
    SwapTest(SwapTestArgs),
    /// Probe-qubit coherence cost of controlled unitaries.
    Probe(ProbeArgs),
    /// Run randomized property suites.
    Verify(VerifyArgs),
    /// Emit plot-ready tables.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct OptimizerFlags {
    /// Haar-seeded restarts (the uniform-diagonal start is always added).
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Stop a restart once one iteration gains less than this.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl OptimizerFlags {
    fn config(&self) -> Result<OptimizerConfig, CliError> {
        let cfg =
            OptimizerConfig { restarts: self.restarts, max_iters: self.max_iters, tol: self.tol, ..OptimizerConfig::with_seed(self.seed) };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// Density matrix file.
    #[arg(long)]
    state: PathBuf,
    #[arg(long, default_value_t = DEFAULT_LOG_BASE)]
    log_base: f64,
    /// Also compute the optimized l1 measure.
    #[arg(long)]
    c1: bool,
    #[command(flatten)]
    optimizer: OptimizerFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    L1,
    L1Distance,
    L2,
    Re,
    Skew,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_enum)]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = DEFAULT_LOG_BASE)]
    log_base: f64,
    #[command(flatten)]
    optimizer: OptimizerFlags,
}

#[derive(Debug, Args)]
struct SwapTestArgs {
    #[arg(long)]
    state: PathBuf,
    /// Number of copies `k` shifted by the controlled cyclic permutation.
    #[arg(long)]
    copies: usize,
    /// Sample this many measurement outcomes.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    /// Probe Bloch vector `P1,P2,P3`.
    #[arg(long, value_parser = parse_bloch, allow_hyphen_values = true)]
    bloch: Option<[f64; 3]>,
    /// System state file.
    #[arg(long, conflicts_with_all = ["dqc1", "qom"])]
    system: Option<PathBuf>,
    /// Controlled unitary files, applied in order.
    #[arg(long, num_args = 1.., conflicts_with = "qom")]
    unitary: Vec<PathBuf>,
    /// DQC1 on this many maximally mixed qubits.
    #[arg(long, conflicts_with = "qom")]
    dqc1: Option<u32>,
    /// Overlap measurement of two states.
    #[arg(long, num_args = 2, value_names = ["STATE1", "STATE2"])]
    qom: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_suites)]
    suite: SuiteSelection,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Debug)]
struct SuiteSelection(Vec<Suite>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// Overlap `Tr rho1 rho2` over `[0, 1]` against the probe cost.
    QomOverlap,
    /// Qubits `diag((1+r)/2, (1-r)/2)` for `r` over `[0, 1]`.
    Purity,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    preset: Preset,
    /// Grid points, endpoints included.
    #[arg(long, default_value_t = 11)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_LOG_BASE)]
    log_base: f64,
}

fn parse_bloch(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected P1,P2,P3, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.trim().parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

fn parse_suites(s: &str) -> Result<SuiteSelection, String> {
    if s == "all" {
        return Ok(SuiteSelection(Suite::ALL.to_vec()));
    }
    let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
    s.parse::<Suite>().map(|x| SuiteSelection(vec![x])).map_err(|_| format!("unknown suite {s:?}; expected all or one of {}", names.join(", ")))
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.exit_code() {
                0 => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    match run(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Measure(a) => measure(a, cli.output),
        Command::Optimize(a) => optimize(a, cli.output),
        Command::SwapTest(a) => swap_test(a, cli.output),
        Command::Probe(a) => probe_cmd(a, cli.output),
        Command::Verify(a) => verify_cmd(a, cli.output),
        Command::Sweep(a) => sweep(a, cli.output),
    })
}

fn check_log_base(base: f64) -> Result<(), CliError> {
    if base.is_finite() && base > 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--log-base must be a finite number > 1, got {base}")))
    }
}

/// Formats a number with at most 12 significant digits.
pub fn fmt_csv(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let a = rounded.abs();
    if rounded == 0.0 {
        "0".into()
    } else if !(1e-6..1e15).contains(&a) {
        format!("{rounded:e}")
    } else {
        rounded.to_string()
    }
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_doc(body: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    if let Value::Object(fields) = body {
        doc.extend(fields);
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("documents serialize");
    text.push('\n');
    text
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

fn measure(a: &MeasureArgs, format: Format) -> Result<String, CliError> {
    check_log_base(a.log_base)?;
    let rho = read_density(&a.state)?;
    let cfg = if a.c1 { Some(a.optimizer.config()?) } else { None };
    let report = measures::measure_report(&rho, a.log_base, cfg.as_ref())?;
    Ok(match format {
        Format::Json => json_doc(to_value(&report)),
        Format::Csv => report_csv(&[report]),
    })
}

fn report_csv(reports: &[MeasureReport]) -> String {
    let with_c1 = reports.iter().any(|r| r.c1.is_some());
    let mut header = vec!["dim", "purity", "c2", "c_re", "c_skew", "c_trace"];
    if with_c1 {
        header.push("c1");
    }
    header.push("log_base");
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let mut row = vec![r.dim.to_string(), fmt_csv(r.purity), fmt_csv(r.c2), fmt_csv(r.c_re), fmt_csv(r.c_skew), fmt_csv(r.c_trace)];
            if with_c1 {
                row.push(r.c1.map(fmt_csv).unwrap_or_default());
            }
            row.push(fmt_csv(r.log_base));
            row
        })
        .collect();
    csv_table(&header, &rows)
}

fn optimize(a: &OptimizeArgs, format: Format) -> Result<String, CliError> {
    check_log_base(a.log_base)?;
    let rho = read_density(&a.state)?;
    let cfg = a.optimizer.config()?;
    let objective = match a.objective {
        ObjectiveArg::L1 => Objective::L1,
        ObjectiveArg::L1Distance => Objective::L1Distance,
        ObjectiveArg::L2 => Objective::L2,
        ObjectiveArg::Re => Objective::RelativeEntropy { base: a.log_base },
        ObjectiveArg::Skew => Objective::Skew,
    };
    let result = basis_opt::maximize_over_basis(&rho, objective, &cfg)?;
    let closed = objective.closed_form(&rho);
    Ok(match format {
        Format::Json => json_doc(json!({
            "objective": objective.name(),
            "value": result.value,
            "closed_form": closed,
            "uniform_start_value": result.uniform_start_value,
            "restart": result.restart,
            "iterations": result.iterations,
            "converged": result.converged,
            "seed": a.optimizer.seed,
            "unitary": to_value(&MatrixFile::from_matrix(result.unitary.matrix())),
        })),
        Format::Csv => csv_table(
            &["objective", "value", "closed_form", "uniform_start_value", "restart", "iterations", "converged", "seed"],
            &[vec![
                objective.name().into(),
                fmt_csv(result.value),
                closed.map(fmt_csv).unwrap_or_default(),
                fmt_csv(result.uniform_start_value),
                result.restart.to_string(),
                result.iterations.to_string(),
                result.converged.to_string(),
                a.optimizer.seed.to_string(),
            ]],
        ),
    })
}

fn swap_test(a: &SwapTestArgs, format: Format) -> Result<String, CliError> {
    let rho = read_density(&a.state)?;
    if a.copies == 0 {
        return Err(CliError::Usage("--copies must be at least 1".into()));
    }
    let probability = swapcirc::swap_test_probability(&rho, a.copies)?;
    let moment = 2.0 * probability - 1.0;
    let record = match a.shots {
        Some(0) => return Err(CliError::Usage("--shots must be at least 1".into())),
        Some(shots) => Some(swapcirc::sample_swap_test(&rho, a.copies, shots, &mut SeededStream::new(a.seed))?),
        None => None,
    };
    Ok(match format {
        Format::Json => {
            let mut body = json!({
                "dim": rho.dim(),
                "copies": a.copies,
                "probability": probability,
                "moment": moment,
            });
            if let Some(r) = &record {
                body["seed"] = json!(a.seed);
                body["shots"] = to_value(r);
            }
            json_doc(body)
        }
        Format::Csv => {
            let mut header = vec!["dim", "copies", "probability", "moment"];
            let mut row = vec![rho.dim().to_string(), a.copies.to_string(), fmt_csv(probability), fmt_csv(moment)];
            if let Some(r) = &record {
                header.extend(["seed", "shots", "plus_count", "estimate"]);
                row.extend([a.seed.to_string(), r.shots.to_string(), r.plus_count.to_string(), fmt_csv(r.estimate)]);
            }
            csv_table(&header, &[row])
        }
    })
}

#[derive(Serialize)]
struct ProbeStep {
    /// `Tr rho_s U` as `[re, im]`.
    trace: [f64; 2],
    delta_c: f64,
}

fn probe_cmd(a: &ProbeArgs, format: Format) -> Result<String, CliError> {
    let bloch = |default: [f64; 3]| -> Result<BlochVector, CliError> {
        let [p1, p2, p3] = a.bloch.unwrap_or(default);
        Ok(BlochVector::new(p1, p2, p3)?)
    };
    let mut extra = serde_json::Map::new();
    let (mode, scheme) = if !a.qom.is_empty() {
        let (r1, r2) = (read_density(&a.qom[0])?, read_density(&a.qom[1])?);
        if a.bloch.is_some() {
            return Err(CliError::Usage("--qom fixes the probe at P = (0,0,1); drop --bloch".into()));
        }
        let (overlap, delta) = probe::qom_overlap(&r1, &r2)?;
        extra.insert("overlap".into(), json!(overlap));
        extra.insert("qom_delta_c".into(), json!(delta));
        ("qom", probe::qom_as_scheme(&r1, &r2)?)
    } else if let Some(qubits) = a.dqc1 {
        if qubits == 0 || qubits > 9 {
            return Err(CliError::Usage("--dqc1 takes 1 to 9 qubits".into()));
        }
        let n = 1usize << qubits;
        let unitaries = load_unitaries(&a.unitary)?;
        let p = bloch([0.0, 0.0, 1.0])?;
        let mut dqc1 = Vec::new();
        for u in &unitaries {
            dqc1.push(probe::dqc1_delta(u, p.components()[2])?.1);
        }
        extra.insert("dqc1_delta_c".into(), json!(dqc1));
        ("dqc1", ProbeScheme::new(p, DensityMatrix::maximally_mixed(n), unitaries)?)
    } else {
        let system = a.system.as_ref().ok_or_else(|| CliError::Usage("probe needs --system, --dqc1 or --qom".into()))?;
        let rho = read_density(system)?;
        let p = a.bloch.ok_or_else(|| CliError::Usage("--system needs --bloch P1,P2,P3".into()))?;
        let p = BlochVector::new(p[0], p[1], p[2])?;
        ("general", ProbeScheme::new(p, rho, load_unitaries(&a.unitary)?)?)
    };

    let steps: Vec<ProbeStep> = scheme
        .unitaries
        .iter()
        .zip(scheme.deltas())
        .map(|(u, delta_c)| {
            let t = probe::overlap_trace(&scheme.system, u).expect("scheme dimensions are checked");
            ProbeStep { trace: [t.re, t.im], delta_c }
        })
        .collect();
    let total = probe::probe_cost(&scheme);
    let probe_before = measures::c2(&probe::probe_state(&scheme.bloch));
    Ok(match format {
        Format::Json => {
            let mut body = serde_json::Map::new();
            body.insert("mode".into(), json!(mode));
            body.insert("bloch".into(), json!(scheme.bloch.components()));
            body.insert("system_dim".into(), json!(scheme.system.dim()));
            body.insert("probe_c2".into(), json!(probe_before));
            body.insert("steps".into(), to_value(&steps));
            body.insert("total_cost".into(), json!(total));
            body.extend(extra);
            json_doc(Value::Object(body))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = steps
                .iter()
                .enumerate()
                .map(|(i, s)| vec![i.to_string(), fmt_csv(s.trace[0]), fmt_csv(s.trace[1]), fmt_csv(s.delta_c)])
                .collect();
            csv_table(&["step", "trace_re", "trace_im", "delta_c"], &rows)
        }
    })
}

fn load_unitaries(paths: &[PathBuf]) -> Result<Vec<cohere::UnitaryMatrix>, CliError> {
    if paths.is_empty() {
        return Err(CliError::Usage("at least one --unitary file is required".into()));
    }
    paths.iter().map(|p| read_unitary(p).map_err(CliError::from)).collect()
}

fn verify_cmd(a: &VerifyArgs, format: Format) -> Result<String, CliError> {
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut reports = Vec::new();
    for suite in &a.suite.0 {
        reports.push(verify::run_suite(*suite, a.samples, a.seed)?);
    }
    let text = match format {
        Format::Json => json_doc(json!({ "suites": to_value(&reports) })),
        Format::Csv => csv_table(
            &["suite", "samples", "seed", "passed", "failed", "worst_excess"],
            &reports
                .iter()
                .map(|r| {
                    vec![r.suite.clone(), r.samples.to_string(), r.seed.to_string(), r.passed.to_string(), r.failed.to_string(), fmt_csv(r.worst_excess)]
                })
                .collect::<Vec<_>>(),
        ),
    };
    match reports.iter().find(|r| !r.ok()) {
        Some(bad) => Err(CliError::SuiteFailed(bad.to_string())),
        None => Ok(text),
    }
}

fn grid(points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    Ok((0..points).map(|i| i as f64 / (points - 1) as f64).collect())
}

fn sweep(a: &SweepArgs, format: Format) -> Result<String, CliError> {
    check_log_base(a.log_base)?;
    let xs = grid(a.points)?;
    let (header, rows): (Vec<&str>, Vec<Vec<f64>>) = match a.preset {
        Preset::QomOverlap => {
            let mut rows = Vec::new();
            for &t in &xs {
                // |0> against cos(a)|0> + sin(a)|1> has overlap cos^2(a) = t
                let first = DensityMatrix::basis_state(2, 0);
                let second = DensityMatrix::pure(&[c64(t.sqrt(), 0.0), c64((1.0 - t).max(0.0).sqrt(), 0.0)])?;
                let (overlap, delta) = probe::qom_overlap(&first, &second)?;
                let scheme_cost = probe::probe_cost(&probe::qom_as_scheme(&first, &second)?);
                rows.push(vec![overlap, delta, scheme_cost]);
            }
            (vec!["overlap", "delta_c", "scheme_cost"], rows)
        }
        Preset::Purity => {
            let mut rows = Vec::new();
            for &r in &xs {
                let rho = DensityMatrix::from_diagonal(&[(1.0 + r) / 2.0, (1.0 - r) / 2.0])?;
                let m = measures::measure_report(&rho, a.log_base, None)?;
                rows.push(vec![r, m.purity, m.c2, m.c_re, m.c_skew, m.c_trace]);
            }
            (vec!["radius", "purity", "c2", "c_re", "c_skew", "c_trace"], rows)
        }
    };
    Ok(match format {
        Format::Csv => csv_table(&header, &rows.iter().map(|r| r.iter().map(|&x| fmt_csv(x)).collect()).collect::<Vec<_>>()),
        Format::Json => {
            let rows: Vec<Value> =
                rows.iter().map(|r| Value::Object(header.iter().zip(r).map(|(h, x)| (h.to_string(), json!(x))).collect())).collect();
            json_doc(json!({ "preset": to_value(&a.preset.to_possible_value().expect("presets have names").get_name()), "rows": rows }))
        }
    })
}
