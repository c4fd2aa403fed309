use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use l1_qubo::experiments::{
    build_fixed_input_gadget, default_lasso_pairs, run_continuous, run_discrete_verification,
    run_lasso_demo, summarize, write_records_csv, ExperimentConfig, LassoConfig, Solver,
};
use l1_qubo::gadgets::{AuxConfig, GadgetVariant, PenaltyConfig};
use l1_qubo::io::{ising_to_json, read_qubo, write_qubo};
use l1_qubo::{AnnealSchedule, Error};

#[derive(Parser)]
#[command(
    name = "l1qubo",
    version,
    about = "QUBO gadgets for |m|, ReLU and q-loss: experiments and model tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continuous annealing of the naive l1 objective for random m.
    Fig2(RunArgs),
    /// Continuous annealing of the reduced (t-free) l1 objective for random m.
    Reduced(RunArgs),
    /// Minimize the QUBO gadget at grid inputs and check it reproduces the target.
    Verify(VerifyArgs),
    /// Solve one-coefficient LASSO problems as QUBOs against the soft threshold.
    Lasso(LassoArgs),
    /// Convert a model between JSON and coordinate formats, or to Ising JSON.
    Convert(ConvertArgs),
    /// Write the QUBO gadget for a fixed input, plus a `.meta.json` sidecar.
    Build(BuildArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    L1Naive,
    L1Reduced,
    Relu,
}

impl From<VariantArg> for GadgetVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::L1Naive => GadgetVariant::L1Naive,
            VariantArg::L1Reduced => GadgetVariant::L1Reduced,
            VariantArg::Relu => GadgetVariant::ReluWolfe,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Continuous,
    Discrete,
    Brute,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Continuous => Solver::Continuous,
            SolverArg::Discrete => Solver::Discrete,
            SolverArg::Brute => Solver::Brute,
        }
    }
}

#[derive(Args)]
struct ScheduleArgs {
    /// Initial temperature.
    #[arg(long, default_value_t = 1000.0)]
    t1: f64,
    /// Geometric cooling ratio.
    #[arg(long, default_value_t = 0.9999)]
    ratio: f64,
    /// Stop once the temperature falls below this.
    #[arg(long, default_value_t = 1e-3)]
    t_stop: f64,
    /// Proposals per temperature level.
    #[arg(long = "moves-per-temp", default_value_t = 1)]
    moves_per_temp: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ScheduleArgs {
    fn schedule(&self) -> Result<AnnealSchedule, Error> {
        AnnealSchedule::new(self.t1, self.ratio, self.t_stop)?
            .with_moves_per_temperature(self.moves_per_temp)
    }
}

#[derive(Args)]
struct EncodingArgs {
    /// Bits of each z encoding.
    #[arg(long = "bits-z", default_value_t = 10)]
    bits_z: usize,
    /// Upper end of the z encodings.
    #[arg(long = "z-hi", default_value_t = 10.23)]
    z_hi: f64,
    /// Bits of the t encoding (naive l1 and ReLU only).
    #[arg(long = "bits-t", default_value_t = 8)]
    bits_t: usize,
}

impl EncodingArgs {
    fn aux(&self) -> AuxConfig {
        AuxConfig {
            z_hi: self.z_hi,
            z_bits: self.bits_z,
            t_bits: self.bits_t,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long = "m-lo", default_value_t = -10.0, allow_negative_numbers = true)]
    m_lo: f64,
    #[arg(long = "m-hi", default_value_t = 10.0, allow_negative_numbers = true)]
    m_hi: f64,
    /// Penalty weight M.
    #[arg(long = "penalty-M", default_value_t = 10.0)]
    penalty_m: f64,
    /// Proposal step size.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Only `continuous` is supported for these runs.
    #[arg(long, value_enum, default_value = "continuous")]
    solver: SolverArg,
    /// CSV output path (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON output path.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "l1-reduced")]
    variant: VariantArg,
    /// Number of evenly spaced grid inputs.
    #[arg(long, default_value_t = 21)]
    samples: usize,
    #[arg(long = "m-lo", default_value_t = -10.0, allow_negative_numbers = true)]
    m_lo: f64,
    #[arg(long = "m-hi", default_value_t = 10.0, allow_negative_numbers = true)]
    m_hi: f64,
    /// Penalty weight M; defaults to one large enough that no grid point leaks.
    #[arg(long = "penalty-M")]
    penalty_m: Option<f64>,
    #[command(flatten)]
    encoding: EncodingArgs,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long, value_enum, default_value = "brute")]
    solver: SolverArg,
    /// Annealing runs per grid input (discrete solver).
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    /// Allowed deviation; 0.02 for brute force, 0.05 for annealing by default.
    #[arg(long)]
    tol: Option<f64>,
    /// Report JSON path (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LassoArgs {
    /// `a,lambda` pair; repeatable. Defaults to a built-in 20-pair sweep.
    #[arg(long = "pair", value_parser = parse_pair, allow_hyphen_values = true)]
    pairs: Vec<(f64, f64)>,
    /// Coefficients are encoded on [-m_hi, m_hi].
    #[arg(long = "m-hi", default_value_t = 6.35)]
    m_hi: f64,
    #[arg(long = "bits-m", default_value_t = 7)]
    bits_m: usize,
    #[arg(long = "bits-z", default_value_t = 7)]
    bits_z: usize,
    #[arg(long = "z-hi", default_value_t = 6.35)]
    z_hi: f64,
    #[arg(long = "penalty-M")]
    penalty_m: Option<f64>,
    #[arg(long, value_enum, default_value = "brute")]
    solver: SolverArg,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    /// Input model (`.json`, anything else is the coordinate format).
    input: PathBuf,
    /// Output path; the format follows the extension.
    output: PathBuf,
    /// Write the equivalent Ising model as JSON instead.
    #[arg(long)]
    ising: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum, default_value = "l1-reduced")]
    variant: VariantArg,
    /// Fixed input value.
    #[arg(long, allow_negative_numbers = true)]
    m: f64,
    #[arg(long = "penalty-M")]
    penalty_m: Option<f64>,
    #[command(flatten)]
    encoding: EncodingArgs,
    /// Model path; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: PathBuf,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, l) = s
        .split_once(',')
        .ok_or_else(|| format!("expected a,lambda, got {s:?}"))?;
    let a = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let l = l.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, l))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } | Error::Json(_) => 2,
        _ => 1,
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<(), Error> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn penalty_or_dominant(m: Option<f64>, aux: &AuxConfig) -> Result<PenaltyConfig, Error> {
    match m {
        Some(m) => PenaltyConfig::new(m),
        None => aux.dominant_penalty(),
    }
}

fn continuous(args: &RunArgs, variant: GadgetVariant) -> Result<u8, Error> {
    if !matches!(args.solver, SolverArg::Continuous) {
        return Err(Error::Domain(
            "fig2/reduced anneal continuously; use `verify` for discrete solvers".into(),
        ));
    }
    let cfg = ExperimentConfig {
        variant,
        n_samples: args.samples,
        m_range: (args.m_lo, args.m_hi),
        penalty: args.penalty_m,
        seed: args.schedule.seed,
        solver: Solver::Continuous,
        schedule: args.schedule.schedule()?,
        step: args.step,
        ..Default::default()
    };
    let records = run_continuous(&cfg)?;
    let mut w = output(args.out.as_deref())?;
    write_records_csv(&records, variant, &mut w)?;
    w.flush()?;
    let summary = summarize(&records, &cfg);
    if let Some(p) = &args.summary {
        write_json(Some(p), &summary)?;
    }
    eprintln!(
        "{}: {} samples, max |f - |m|| = {:.4}, within 0.1: {:.1}%, aux within 0.1: {:.1}%",
        variant.as_str(),
        summary.n_samples,
        summary.max_abs_dev,
        100.0 * summary.frac_within_0_1,
        100.0 * summary.frac_aux_within_0_1
    );
    Ok(0)
}

fn verify(args: &VerifyArgs) -> Result<u8, Error> {
    let aux = args.encoding.aux();
    let solver: Solver = args.solver.into();
    let pc = penalty_or_dominant(args.penalty_m, &aux)?;
    let tol = args.tol.unwrap_or(match solver {
        Solver::Brute => 0.02,
        _ => 0.05,
    });
    let cfg = ExperimentConfig {
        variant: args.variant.into(),
        n_samples: args.samples,
        m_range: (args.m_lo, args.m_hi),
        penalty: pc.weight(),
        seed: args.schedule.seed,
        solver,
        aux,
        schedule: args.schedule.schedule()?,
        restarts: args.restarts,
        ..Default::default()
    };
    let report = run_discrete_verification(&cfg, tol)?;
    write_json(args.out.as_deref(), &report)?;
    eprintln!(
        "{} / {}: M = {}, max deviation {:.6}, within {}: {:.1}%, penalty violations {} -> {}",
        report.variant.as_str(),
        report.solver.as_str(),
        report.penalty,
        report.max_abs_dev,
        tol,
        100.0 * report.frac_within_tol,
        report.penalty_violations,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(if report.passed { 0 } else { 3 })
}

fn lasso(args: &LassoArgs) -> Result<u8, Error> {
    let mut cfg = LassoConfig::default();
    cfg.problem.m_hi = args.m_hi;
    cfg.problem.m_bits = args.bits_m;
    cfg.problem.aux.z_hi = args.z_hi;
    cfg.problem.aux.z_bits = args.bits_z;
    cfg.problem.penalty = args.penalty_m.map(PenaltyConfig::new).transpose()?;
    cfg.solver = args.solver.into();
    cfg.schedule = args.schedule.schedule()?;
    cfg.seed = args.schedule.seed;
    let pairs = if args.pairs.is_empty() {
        default_lasso_pairs()
    } else {
        args.pairs.clone()
    };
    let report = run_lasso_demo(&pairs, &cfg)?;
    write_json(args.out.as_deref(), &report)?;
    eprintln!(
        "lasso: {} pairs, max error {:.4} (resolution {:.4}) -> {}",
        report.rows.len(),
        report.max_abs_err,
        report.resolution,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(0)
}

fn convert(args: &ConvertArgs) -> Result<u8, Error> {
    let model = read_qubo(&args.input)?;
    if args.ising {
        std::fs::write(&args.output, ising_to_json(&model.to_ising()))?;
    } else {
        write_qubo(&args.output, &model)?;
    }
    Ok(0)
}

fn build(args: &BuildArgs) -> Result<u8, Error> {
    let aux = args.encoding.aux();
    let pc = penalty_or_dominant(args.penalty_m, &aux)?;
    let g = build_fixed_input_gadget(args.m, args.variant.into(), &aux, pc)?;
    write_qubo(&args.out, g.model())?;
    let mut meta = args.out.clone().into_os_string();
    meta.push(".meta.json");
    write_json(Some(Path::new(&meta)), &g.metadata())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Fig2(a) => continuous(a, GadgetVariant::L1Naive),
        Command::Reduced(a) => continuous(a, GadgetVariant::L1Reduced),
        Command::Verify(a) => verify(a),
        Command::Lasso(a) => lasso(a),
        Command::Convert(a) => convert(a),
        Command::Build(a) => build(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
