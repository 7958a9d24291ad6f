//! speeduplab command line: ground-energy solvers, Boolean-mean estimation,
//! integration demos, and speedup reports, each emitting one JSON record per
//! run. Exit codes: 0 success, 2 usage, 3 capacity, 4 non-convergence.

mod record;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use speeduplab::eigensolver::{
    dense_smallest_eigenvalue, inverse_iterate, trivial_estimate, InverseIterConfig, StartVector,
};
use speeduplab::grid::{GridHamiltonian, GridSpec};
use speeduplab::potential::{truncation_bits_for_accuracy, PotentialOracle, PotentialSpec};
use speeduplab::qsim::{
    amplitude_estimate_mean, phase_estimation, BooleanOracle, OutcomeMode,
    PhaseEstimationConfig, QueryLedger,
};
use speeduplab::speedup::{
    boolean_mean_classical_lb, integrate_classical_1d, integrate_classical_product,
    integrate_quantum_1d, s1_empirical, sawtooth_worst_case, ComplexityModel, CostLedger,
    Integrand1d, IntegrandNd,
};
use speeduplab::Error as CoreError;

use record::{dump_distribution, load_records, RunRecord};

const EXIT_USAGE: i32 = 2;
const EXIT_CAPACITY: i32 = 3;
const EXIT_NON_CONVERGENCE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "speeduplab",
    about = "Measure classical-vs-quantum query costs on ground-state energy, Boolean mean, and integration problems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate the smallest eigenvalue of -kappa*Laplacian + V.
    GroundEnergy(GroundEnergyArgs),
    /// Estimate the mean of a Boolean function by amplitude estimation.
    MeanBoolean(MeanBooleanArgs),
    /// Integration demos with exact oracle-call accounting.
    #[command(subcommand)]
    Integrate(IntegrateCmd),
    /// Evaluate the closed-form cost bounds and speedup ratios.
    SpeedupReport(SpeedupReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Inverse iteration with conjugate-gradient inner solves.
    Classical,
    /// Simulated phase estimation over the split-operator propagator.
    Quantum,
    /// The constant-cost estimate d*pi^2 + 1/2 (needs eps >= 1/d).
    Trivial,
    /// Dense symmetric eigensolve (reference; capped at 4096 points).
    Dense,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Ground,
    Random,
}

#[derive(Args)]
struct GroundEnergyArgs {
    #[arg(value_enum)]
    method: Method,
    /// Dimension of the cube.
    #[arg(long)]
    d: usize,
    /// Interior grid points per dimension.
    #[arg(long)]
    m: Option<usize>,
    /// Target relative accuracy; maps to m = ceil(1/eps) - 1 when --m is not
    /// given, and sets the oracle truncation bits.
    #[arg(long)]
    eps: Option<f64>,
    /// Potential DSL: zero | const:<c> | sep-sin | cos-mix:<a> | tab:<path>.
    #[arg(long, default_value = "zero")]
    potential: String,
    /// Kinetic prefactor.
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the dense reference even when it is feasible.
    #[arg(long)]
    no_reference: bool,

    // Classical solver knobs.
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    #[arg(long, default_value_t = 1e-8)]
    residual_tol: f64,
    #[arg(long, default_value_t = 200)]
    max_outer: usize,
    #[arg(long, default_value_t = 1e-12)]
    cg_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    cg_max_iter: usize,
    #[arg(long, value_enum, default_value_t = Start::Ground)]
    start: Start,

    // Quantum simulator knobs.
    #[arg(long, default_value_t = 8)]
    phase_bits: u32,
    #[arg(long, default_value_t = 16)]
    trotter_steps: u32,
    /// Evolution time per W; default keeps all eigenphases inside (0, 0.9).
    #[arg(long)]
    time: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Outcome draws in sampled mode (median is reported).
    #[arg(long, default_value_t = 1)]
    repetitions: u32,
    /// Write the exact outcome distribution as CSV.
    #[arg(long)]
    dump_dist: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BooleanFunction {
    Parity,
    Majority,
    Table,
    Zeros,
    Ones,
}

#[derive(Args)]
struct MeanBooleanArgs {
    /// Number of input bits (truth tables cap at n = 20).
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum)]
    function: BooleanFunction,
    /// Truth table file for --function table: 2^n characters '0'/'1'
    /// (whitespace ignored).
    #[arg(long)]
    table_file: Option<PathBuf>,
    /// Phase-estimation outcome count (power of two).
    #[arg(long, default_value_t = 64)]
    m_outcomes: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repetitions: u32,
    /// Accuracy target for the printed classical lower bound 2^(n-1)(1-eps).
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long)]
    dump_dist: Option<PathBuf>,
}

#[derive(Subcommand)]
enum IntegrateCmd {
    /// Composite midpoint rule on [0, 1].
    #[command(name = "classical-1d")]
    Classical1d {
        /// Integrand: x | sin | sq | sawtooth:<k>.
        #[arg(long)]
        f: String,
        #[arg(long)]
        n_points: usize,
    },
    /// Product midpoint rule on [0, 1]^d: m_per_dim^d oracle calls.
    Product {
        #[arg(long)]
        d: usize,
        /// Integrand: one | avg.
        #[arg(long)]
        f: String,
        #[arg(long)]
        m_per_dim: usize,
    },
    /// Amplitude-estimation integration of a [0, 1]-valued integrand.
    #[command(name = "quantum-1d")]
    Quantum1d {
        /// Integrand: x | sin | sq | sawtooth:<k>.
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 256)]
        n_points: usize,
        #[arg(long, default_value_t = 64)]
        m_outcomes: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        repetitions: u32,
        #[arg(long)]
        dump_dist: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SpeedupReportArgs {
    /// Classical lower-bound constant (> 1).
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    /// Quantum cost exponent slack (> 0).
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    eps: f64,
    /// JSON-lines record file for empirical S1.
    #[arg(long)]
    records: Option<PathBuf>,
    /// run_id of the classical cost record.
    #[arg(long)]
    classical_run: Option<String>,
    /// run_id of the quantum cost record.
    #[arg(long)]
    quantum_run: Option<String>,
    /// Also write the report as pretty JSON.
    #[arg(long)]
    dump_report: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Capacity(String),
    NonConvergence(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CapacityExceeded { .. } => CliError::Capacity(e.to_string()),
            CoreError::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_workers() {
        eprintln!("error: {e}");
        std::process::exit(EXIT_USAGE);
    }
    let outcome = match cli.command {
        Command::GroundEnergy(args) => cmd_ground_energy(args),
        Command::MeanBoolean(args) => cmd_mean_boolean(args),
        Command::Integrate(cmd) => cmd_integrate(cmd),
        Command::SpeedupReport(args) => cmd_speedup_report(args),
    };
    match outcome {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_USAGE);
        }
        Err(CliError::Capacity(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_CAPACITY);
        }
        Err(CliError::NonConvergence(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_NON_CONVERGENCE);
        }
    }
}

/// SPEEDUPLAB_WORKERS sets the rayon pool size. All parallel regions are
/// order-preserving elementwise maps, so results do not depend on it.
fn configure_workers() -> Result<(), String> {
    match std::env::var("SPEEDUPLAB_WORKERS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let workers: usize = raw
                .parse()
                .ok()
                .filter(|&w| w >= 1)
                .ok_or_else(|| format!("SPEEDUPLAB_WORKERS must be a positive integer, got `{raw}`"))?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build_global()
                .map_err(|e| e.to_string())
        }
    }
}

fn positive(name: &str, value: f64) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {value}")))
    }
}

fn in_unit_interval(name: &str, value: f64) -> Result<(), CliError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--{name} must lie in (0, 1), got {value}"
        )))
    }
}

fn resolve_grid(args: &GroundEnergyArgs) -> Result<GridSpec, CliError> {
    let spec = match (args.m, args.eps) {
        (Some(m), _) => GridSpec::with_kappa(args.d, m, args.kappa)?,
        (None, Some(eps)) => {
            in_unit_interval("eps", eps)?;
            let base = GridSpec::from_accuracy(args.d, eps)?;
            GridSpec::with_kappa(args.d, base.points_per_dim(), args.kappa)?
        }
        (None, None) => {
            return Err(CliError::Usage(
                "ground-energy needs --m or --eps to fix the grid".into(),
            ))
        }
    };
    Ok(spec)
}

fn build_oracle(args: &GroundEnergyArgs) -> Result<Arc<PotentialOracle>, CliError> {
    let spec = PotentialSpec::parse(&args.potential, args.d)?;
    let oracle = match args.eps {
        Some(eps) => PotentialOracle::with_truncation(spec, truncation_bits_for_accuracy(eps))?,
        None => PotentialOracle::new(spec),
    };
    Ok(Arc::new(oracle))
}

fn dense_reference(h: &GridHamiltonian, skip: bool) -> Option<f64> {
    if skip || h.grid().num_points() > 4096 {
        return None;
    }
    dense_smallest_eigenvalue(h).ok()
}

fn cmd_ground_energy(args: GroundEnergyArgs) -> Result<(), CliError> {
    if args.d == 0 {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    positive("kappa", args.kappa)?;
    let started = Instant::now();

    if let Method::Trivial = args.method {
        let eps = args
            .eps
            .ok_or_else(|| CliError::Usage("ground-energy trivial needs --eps".into()))?;
        in_unit_interval("eps", eps)?;
        let estimate = trivial_estimate(args.d, eps).ok_or_else(|| {
            CliError::Usage(format!(
                "trivial estimate needs eps >= 1/d (eps = {eps}, 1/d = {})",
                1.0 / args.d as f64
            ))
        })?;
        let mut rec = RunRecord::new("ground-energy trivial", args.seed);
        rec.set_param("d", args.d as u64);
        rec.set_param("eps", eps);
        rec.estimate = estimate;
        rec.wall_ms = started.elapsed().as_millis() as u64;
        rec.emit();
        return Ok(());
    }

    let grid = resolve_grid(&args)?;
    let oracle = build_oracle(&args)?;
    let h = GridHamiltonian::new(grid, Arc::clone(&oracle))?;

    let mut rec = RunRecord::new(
        match args.method {
            Method::Classical => "ground-energy classical",
            Method::Quantum => "ground-energy quantum",
            Method::Dense => "ground-energy dense",
            Method::Trivial => unreachable!(),
        },
        args.seed,
    );
    rec.set_param("d", args.d as u64);
    rec.set_param("m", grid.points_per_dim() as u64);
    rec.set_param("kappa", args.kappa);
    rec.set_param("potential", args.potential.clone());
    if let Some(eps) = args.eps {
        rec.set_param("eps", eps);
        rec.set_param("truncation_bits", oracle.truncation_bits());
    }

    match args.method {
        Method::Classical => {
            positive("residual-tol", args.residual_tol)?;
            positive("cg-tol", args.cg_tol)?;
            let cfg = InverseIterConfig {
                shift: args.shift,
                max_outer: args.max_outer,
                residual_tol: args.residual_tol,
                cg_tol: args.cg_tol,
                cg_max_iter: args.cg_max_iter,
                start: match args.start {
                    Start::Ground => StartVector::LaplacianGroundMode,
                    Start::Random => StartVector::Random,
                },
            };
            let result = inverse_iterate(&h, &cfg, args.seed)?;
            rec.estimate = result.lambda_est;
            rec.oracle_calls = result.oracle_calls;
            rec.set_param("outer_iters", result.outer_iters as u64);
            rec.set_param("total_cg_iters", result.total_cg_iters as u64);
            rec.set_param("residual", result.residual);
        }
        Method::Quantum => {
            let cfg = PhaseEstimationConfig {
                phase_bits: args.phase_bits,
                trotter_steps_per_w: args.trotter_steps,
                evolution_time: args.time,
                mode: match args.mode {
                    Mode::Exact => OutcomeMode::ExactDistribution,
                    Mode::Sampled => OutcomeMode::Sampled {
                        seed: args.seed,
                        repetitions: args.repetitions,
                    },
                },
            };
            let ledger = QueryLedger::new();
            let result = phase_estimation(&h, &cfg, &ledger)?;
            rec.estimate = result.lambda_hat;
            rec.oracle_calls = oracle.call_count();
            rec.quantum_queries = ledger.v_queries();
            rec.qubits = result.qubits;
            rec.set_param("phase_bits", args.phase_bits);
            rec.set_param("trotter_steps_per_w", args.trotter_steps);
            rec.set_param("evolution_time", result.evolution_time);
            rec.set_param("bin_width_lambda", result.bin_width_lambda);
            rec.set_param("outcome", result.outcome as u64);
            rec.set_param(
                "mode",
                match args.mode {
                    Mode::Exact => "exact",
                    Mode::Sampled => "sampled",
                },
            );
            if let Some(path) = &args.dump_dist {
                let dist = result.distribution.as_ref().ok_or_else(|| {
                    CliError::Usage("--dump-dist needs --mode exact".into())
                })?;
                dump_distribution(path, dist)?;
            }
        }
        Method::Dense => {
            rec.estimate = dense_smallest_eigenvalue(&h)?;
            rec.oracle_calls = oracle.call_count();
        }
        Method::Trivial => unreachable!(),
    }

    if !matches!(args.method, Method::Dense) {
        if let Some(reference) = dense_reference(&h, args.no_reference) {
            rec.reference = Some(reference);
            rec.set_param(
                "relative_error",
                (rec.estimate - reference).abs() / reference.abs(),
            );
        }
    }
    rec.wall_ms = started.elapsed().as_millis() as u64;
    rec.emit();
    Ok(())
}

fn cmd_mean_boolean(args: MeanBooleanArgs) -> Result<(), CliError> {
    if args.n == 0 || args.n > 20 {
        return Err(CliError::Usage(format!(
            "--n must lie in [1, 20], got {}",
            args.n
        )));
    }
    in_unit_interval("eps", args.eps)?;
    let started = Instant::now();

    let oracle = match args.function {
        BooleanFunction::Parity => BooleanOracle::parity(args.n),
        BooleanFunction::Majority => BooleanOracle::majority(args.n),
        BooleanFunction::Zeros => BooleanOracle::constant(args.n, false),
        BooleanFunction::Ones => BooleanOracle::constant(args.n, true),
        BooleanFunction::Table => {
            let path = args.table_file.as_ref().ok_or_else(|| {
                CliError::Usage("--function table needs --table-file".into())
            })?;
            let raw = std::fs::read_to_string(path)?;
            let bits: Vec<bool> = raw
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(CliError::Usage(format!(
                        "truth table may contain only 0/1, got `{other}`"
                    ))),
                })
                .collect::<Result<_, _>>()?;
            if bits.len() != 1usize << args.n {
                return Err(CliError::Usage(format!(
                    "truth table size mismatch: expected {} entries, got {}",
                    1usize << args.n,
                    bits.len()
                )));
            }
            BooleanOracle::from_table(bits)?
        }
    };

    let ledger = QueryLedger::new();
    let mode = match args.mode {
        Mode::Exact => OutcomeMode::ExactDistribution,
        Mode::Sampled => OutcomeMode::Sampled {
            seed: args.seed,
            repetitions: args.repetitions,
        },
    };
    let est = amplitude_estimate_mean(&oracle, args.m_outcomes, &ledger, mode)?;

    let mut rec = RunRecord::new("mean-boolean", args.seed);
    rec.estimate = est.a_hat;
    rec.reference = Some(oracle.mean());
    rec.quantum_queries = ledger.f_queries();
    let m_bits = args.m_outcomes.trailing_zeros();
    rec.qubits = args.n + 1 + m_bits;
    rec.set_param("n", args.n);
    rec.set_param(
        "function",
        match args.function {
            BooleanFunction::Parity => "parity",
            BooleanFunction::Majority => "majority",
            BooleanFunction::Table => "table",
            BooleanFunction::Zeros => "zeros",
            BooleanFunction::Ones => "ones",
        },
    );
    rec.set_param("m_outcomes", args.m_outcomes as u64);
    rec.set_param("outcome", est.outcome as u64);
    rec.set_param("eps", args.eps);
    rec.set_param(
        "classical_lb",
        boolean_mean_classical_lb(args.n, args.eps)?,
    );
    if let Some(path) = &args.dump_dist {
        let dist = est
            .distribution
            .as_ref()
            .ok_or_else(|| CliError::Usage("--dump-dist needs --mode exact".into()))?;
        dump_distribution(path, dist)?;
    }
    rec.wall_ms = started.elapsed().as_millis() as u64;
    rec.emit();
    Ok(())
}

type Integrand1dFn = Box<dyn Fn(f64) -> f64 + Sync>;
type IntegrandNdFn = Box<dyn Fn(&[f64]) -> f64 + Sync>;

/// Named 1D integrands: the function and its true integral.
fn integrand_1d(name: &str) -> Result<(Integrand1dFn, f64), CliError> {
    if let Some(k) = name.strip_prefix("sawtooth:") {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::Usage(format!("bad sawtooth parameter `{k}`")))?;
        if k == 0 {
            return Err(CliError::Usage("sawtooth parameter must be positive".into()));
        }
        let f = sawtooth_worst_case(k);
        return Ok((Box::new(f), 1.0 / (4.0 * k as f64)));
    }
    match name {
        "x" => Ok((Box::new(|x| x), 0.5)),
        "sin" => Ok((Box::new(|x: f64| x.sin()), 1.0 - 1f64.cos())),
        "sq" => Ok((Box::new(|x| x * x), 1.0 / 3.0)),
        other => Err(CliError::Usage(format!("unknown integrand `{other}`"))),
    }
}

fn integrand_nd(name: &str) -> Result<(IntegrandNdFn, f64), CliError> {
    match name {
        "one" => Ok((Box::new(|_: &[f64]| 1.0), 1.0)),
        "avg" => Ok((
            Box::new(|x: &[f64]| x.iter().sum::<f64>() / x.len() as f64),
            0.5,
        )),
        other => Err(CliError::Usage(format!("unknown integrand `{other}`"))),
    }
}

fn cmd_integrate(cmd: IntegrateCmd) -> Result<(), CliError> {
    let started = Instant::now();
    match cmd {
        IntegrateCmd::Classical1d { f, n_points } => {
            if n_points == 0 {
                return Err(CliError::Usage("--n-points must be at least 1".into()));
            }
            let (func, truth) = integrand_1d(&f)?;
            let oracle = Integrand1d::new(func);
            let run = integrate_classical_1d(&oracle, n_points)?;
            let mut rec = RunRecord::new("integrate classical-1d", 0);
            rec.estimate = run.estimate;
            rec.reference = Some(truth);
            rec.oracle_calls = run.calls;
            rec.set_param("f", f);
            rec.set_param("n_points", n_points as u64);
            rec.set_param("abs_error", (run.estimate - truth).abs());
            rec.wall_ms = started.elapsed().as_millis() as u64;
            rec.emit();
        }
        IntegrateCmd::Product { d, f, m_per_dim } => {
            if d == 0 {
                return Err(CliError::Usage("--d must be at least 1".into()));
            }
            if m_per_dim == 0 {
                return Err(CliError::Usage("--m-per-dim must be at least 1".into()));
            }
            let (func, truth) = integrand_nd(&f)?;
            let oracle = IntegrandNd::new(func);
            let run = integrate_classical_product(d, &oracle, m_per_dim)?;
            let mut rec = RunRecord::new("integrate product", 0);
            rec.estimate = run.estimate;
            rec.reference = Some(truth);
            rec.oracle_calls = run.calls;
            rec.set_param("d", d as u64);
            rec.set_param("f", f);
            rec.set_param("m_per_dim", m_per_dim as u64);
            rec.wall_ms = started.elapsed().as_millis() as u64;
            rec.emit();
        }
        IntegrateCmd::Quantum1d {
            f,
            n_points,
            m_outcomes,
            mode,
            seed,
            repetitions,
            dump_dist,
        } => {
            if n_points == 0 {
                return Err(CliError::Usage("--n-points must be at least 1".into()));
            }
            let (func, truth) = integrand_1d(&f)?;
            let oracle = Integrand1d::new(func);
            let ledger = QueryLedger::new();
            let mode = match mode {
                Mode::Exact => OutcomeMode::ExactDistribution,
                Mode::Sampled => OutcomeMode::Sampled { seed, repetitions },
            };
            let run = integrate_quantum_1d(&oracle, m_outcomes, n_points, &ledger, mode)?;
            let mut rec = RunRecord::new("integrate quantum-1d", seed);
            rec.estimate = run.estimate.a_hat;
            rec.reference = Some(truth);
            rec.quantum_queries = ledger.f_queries();
            let dim_bits = usize::BITS - (2 * n_points - 1).leading_zeros();
            rec.qubits = dim_bits + m_outcomes.trailing_zeros();
            rec.set_param("f", f);
            rec.set_param("n_points", n_points as u64);
            rec.set_param("m_outcomes", m_outcomes as u64);
            rec.set_param("discretized_mean", run.discretized_mean);
            rec.set_param("outcome", run.estimate.outcome as u64);
            if let Some(path) = &dump_dist {
                let dist = run.estimate.distribution.as_ref().ok_or_else(|| {
                    CliError::Usage("--dump-dist needs --mode exact".into())
                })?;
                dump_distribution(path, dist)?;
            }
            rec.wall_ms = started.elapsed().as_millis() as u64;
            rec.emit();
        }
    }
    Ok(())
}

fn cmd_speedup_report(args: SpeedupReportArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let model = ComplexityModel::new(args.c, args.delta, args.d, args.eps)?;
    let mut report = model.report();

    match (&args.records, &args.classical_run, &args.quantum_run) {
        (None, None, None) => {}
        (Some(path), Some(classical_id), Some(quantum_id)) => {
            let records = load_records(path)?;
            let find = |id: &str| -> Result<&RunRecord, CliError> {
                records
                    .iter()
                    .find(|r| r.run_id == id)
                    .ok_or_else(|| CliError::Usage(format!("unknown run id `{id}` in {}", path.display())))
            };
            let classical = find(classical_id)?;
            let quantum = find(quantum_id)?;
            let classical_ledger = CostLedger {
                label: "classical".into(),
                oracle_calls: classical.oracle_calls,
                quantum_queries: classical.quantum_queries,
                qubits: classical.qubits,
                ..Default::default()
            };
            let quantum_ledger = CostLedger {
                label: "quantum".into(),
                oracle_calls: quantum.oracle_calls,
                quantum_queries: quantum.quantum_queries,
                qubits: quantum.qubits,
                ..Default::default()
            };
            report.s1_empirical = Some(s1_empirical(&classical_ledger, &quantum_ledger)?);
            report.ledgers.push(classical_ledger);
            report.ledgers.push(quantum_ledger);
        }
        _ => {
            return Err(CliError::Usage(
                "empirical S1 needs --records, --classical-run and --quantum-run together".into(),
            ))
        }
    }

    if let Some(path) = &args.dump_report {
        std::fs::write(path, serde_json::to_string_pretty(&report).unwrap())?;
    }

    let mut rec = RunRecord::new("speedup-report", 0);
    rec.estimate = report.s2_upper;
    rec.set_param("c", args.c);
    rec.set_param("delta", args.delta);
    rec.set_param("d", args.d);
    rec.set_param("eps", args.eps);
    rec.set_param("report", serde_json::to_value(&report).unwrap());
    if report.trivial_algorithm_applicable {
        rec.set_param(
            "note",
            "eps >= 1/d: constant-cost estimate d*pi^2 + 1/2 already meets the target",
        );
    }
    rec.wall_ms = started.elapsed().as_millis() as u64;
    rec.emit();
    Ok(())
}
