//! `selectlab`: exact laws, limit-law numerics, perfect sampling and Monte
//! Carlo experiments for the key exchanges of Hoare's Quickselect.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use selectlab_core::exact::{
    enumerate_small, expected_moves_mahmoud, expected_total_swaps, expected_total_swaps_f64,
    split_pmf, swaps_conditional_pmf,
};
use selectlab_core::experiments::{convergence_study, moves_vs_exchanges_report};
use selectlab_core::limit::{
    cdf_solve, density_solve, kappa_p, ks_rate_bound, moments, right_derivative_at_zero,
    tail_bound, tau_p, CdfConfig, DensityConfig, DerivativeMethod, DENSITY_BOUND, TABLE_COLUMNS,
};
use selectlab_core::quickselect::run_random_in;
use selectlab_core::rng::{chunked, tags, DEFAULT_SEED};
use selectlab_core::sampler::{
    alpha, coalescence_prob, kernel_histogram_chi2, kernel_update_check, sample_many,
    SampleSummary,
};
use serde_json::{json, Map, Value};

use output::{decimal, fraction, open, write_json, write_pairs, Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "selectlab", version, about = "Key exchanges of Hoare's Quickselect and their limit law")]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "SELECTLAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for simulations and solvers (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact law of the split index and of the first-pass swaps given the split.
    PartitionDist {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Random Quickselect runs on uniform permutations with uniform ranks.
    Run {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
    },
    /// Exact E[T_n], E[Y_n] and E[M_n] from the mean recurrence.
    ExactMean {
        /// Sizes to report.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,10,100")]
        n: Vec<usize>,
        /// Use the double-precision recurrence (no fractions).
        #[arg(long)]
        float: bool,
    },
    /// Data moves against twice the key exchanges.
    Moves {
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
        n: Vec<usize>,
        /// Monte Carlo runs per size for Var(2 Y_n) / n^2 (0 skips the simulation).
        #[arg(long, default_value_t = 0)]
        runs: usize,
    },
    /// Exact moments E[X^k] of the limit law.
    Moments {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// Distribution function of the limit law on a grid.
    Cdf {
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Print the 20 x 8 table F(column + row) with four decimals.
        #[arg(long = "fig1")]
        table: bool,
    },
    /// Density of the limit law on a grid.
    Density {
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 400)]
        max_iter: usize,
    },
    /// Perfect samples from the limit law.
    Sample {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Print summary statistics instead of the samples.
        #[arg(long)]
        summary: bool,
    },
    /// Checks the coupler's update against direct one-step draws.
    KernelCheck {
        #[arg(long, value_delimiter = ',', default_value = "0,0.3,1")]
        x: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        runs: usize,
        /// Histogram bins for the chi-square check.
        #[arg(long, default_value_t = 100)]
        bins: usize,
    },
    /// Kolmogorov-Smirnov distance of Y_n / n to the limit law.
    Converge {
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        runs: usize,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Sampler, rate, tail and derivative constants.
    Constants {
        /// Order p of the contraction constants.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Exponent slack of the KS rate n^(-1/2 + eps).
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = DENSITY_BOUND)]
        density_bound: f64,
        /// Tail bound P(X >= 1 - tail_eps).
        #[arg(long, default_value_t = 0.05)]
        tail_eps: f64,
        #[arg(long, default_value_t = 2)]
        tail_k: u32,
        /// Moments used by the series for f'(0+).
        #[arg(long, default_value_t = 200)]
        kmax: usize,
    },
    /// Exhaustive enumeration over all permutations and ranks.
    Enumerate {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<selectlab_core::Error> for Failure {
    fn from(e: selectlab_core::Error) -> Self {
        match e {
            selectlab_core::Error::Numeric(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("i/o error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if cli.format == Format::Bin && !matches!(cli.command, Command::Sample { summary: false, .. }) {
        return Err(Failure::Usage("--format bin is only available for sample".into()));
    }
    let mut out = open(cli.out.as_deref())?;
    let out: &mut dyn Write = &mut out;
    let format = cli.format;
    match &cli.command {
        Command::PartitionDist { n } => partition_dist(*n, format, out),
        Command::Run { n, runs } => run_records(*n, *runs, cli.seed, format, out),
        Command::ExactMean { n, float } => exact_mean(n, *float, format, out),
        Command::Moves { n, runs } => moves(n, *runs, cli.seed, format, out),
        Command::Moments { kmax } => moment_table(*kmax, format, out),
        Command::Cdf { grid, tol, max_iter, table } => {
            cdf(CdfConfig { grid: *grid, tol: *tol, max_iter: *max_iter }, *table, format, out)
        }
        Command::Density { grid, tol, max_iter } => {
            density(DensityConfig { grid: *grid, tol: *tol, max_iter: *max_iter }, format, out)
        }
        Command::Sample { count, summary } => sample(*count, *summary, cli.seed, format, out),
        Command::KernelCheck { x, runs, bins } => kernel_check(x, *runs, *bins, cli.seed, format, out),
        Command::Converge { n, runs, grid } => converge(n, *runs, *grid, cli.seed, format, out),
        Command::Constants { p, eps, density_bound, tail_eps, tail_k, kmax } => {
            constants(*p, *eps, *density_bound, *tail_eps, *tail_k, *kmax, format, out)
        }
        Command::Enumerate { n } => enumerate(*n, format, out),
    }?;
    out.flush()?;
    Ok(())
}

fn partition_dist(n: usize, format: Format, out: &mut dyn Write) -> Outcome {
    let split = split_pmf(n)?;
    let mut table = Table::new(vec!["j", "p_split", "k", "p_swaps_given_split"]);
    for (j, p) in split.iter() {
        for (k, q) in swaps_conditional_pmf(n, j as usize)?.iter() {
            table.push(vec![Cell::Int(j), Cell::Exact(p.clone()), Cell::Int(k), Cell::Exact(q.clone())]);
        }
    }
    Ok(table.write(format, out)?)
}

fn run_records(n: usize, runs: usize, seed: u64, format: Format, out: &mut dyn Write) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let records = chunked(seed, tags::QUICKSELECT, runs, |rng| {
        let mut buffer = Vec::with_capacity(n);
        run_random_in(n, rng, &mut buffer).expect("n >= 1")
    });
    let mut table = Table::new(vec!["n", "rank", "exchanges", "normalized"]);
    for r in records {
        table.push(vec![
            Cell::Int(r.n as u64),
            Cell::Int(r.rank as u64),
            Cell::Int(r.exchanges),
            Cell::Float(r.normalized),
        ]);
    }
    Ok(table.write(format, out)?)
}

fn exact_mean(ns: &[usize], float: bool, format: Format, out: &mut dyn Write) -> Outcome {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    if ns.contains(&0) || n_max == 0 {
        return Err(Failure::Usage("every n must be at least 1".into()));
    }
    let mut table = Table::new(vec!["n", "e_t", "e_y", "e_y_over_n", "e_m"]);
    if float {
        let e_y = expected_total_swaps_f64(n_max);
        for &n in ns {
            let e_t = if n >= 2 { (n as f64 + 1.0) / 6.0 } else { 0.0 };
            let e_m = selectlab_core::exact::rational_to_f64(&expected_moves_mahmoud(n)?);
            table.push(vec![
                Cell::Int(n as u64),
                Cell::Float(e_t),
                Cell::Float(e_y[n]),
                Cell::Float(e_y[n] / n as f64),
                Cell::Float(e_m),
            ]);
        }
    } else {
        let exact = expected_total_swaps(n_max)?;
        for &n in ns {
            let over_n = exact.e_y(n) / num_rational::BigRational::from_integer(n.into());
            table.push(vec![
                Cell::Int(n as u64),
                Cell::Exact(exact.e_t[n].clone()),
                Cell::Exact(exact.e_y(n).clone()),
                Cell::Exact(over_n),
                Cell::Exact(exact.e_m[n].clone()),
            ]);
        }
    }
    Ok(table.write(format, out)?)
}

fn moves(ns: &[usize], runs: usize, seed: u64, format: Format, out: &mut dyn Write) -> Outcome {
    let rows = moves_vs_exchanges_report(ns, runs, seed)?;
    let mut table = Table::new(vec![
        "n",
        "expected_moves",
        "twice_expected_exchanges",
        "difference",
        "difference_over_n",
        "var_twice_exchanges_over_n2",
        "var_std_error",
    ]);
    for r in rows {
        table.push(vec![
            Cell::Int(r.n as u64),
            Cell::Float(r.expected_moves),
            Cell::Float(r.twice_expected_exchanges),
            Cell::Float(r.difference),
            Cell::Float(r.difference_over_n),
            Cell::Float(r.var_twice_exchanges_over_n2),
            Cell::Float(r.var_std_error),
        ]);
    }
    Ok(table.write(format, out)?)
}

fn moment_table(kmax: usize, format: Format, out: &mut dyn Write) -> Outcome {
    let table = moments(kmax)?;
    match format {
        Format::Json => {
            let object: Map<String, Value> =
                (1..=kmax).map(|k| (k.to_string(), Value::from(fraction(table.get(k))))).collect();
            Ok(write_json(&Value::Object(object), out)?)
        }
        _ => {
            let mut rows = Table::new(vec!["k", "moment"]);
            for k in 1..=kmax {
                rows.push(vec![Cell::Int(k as u64), Cell::Exact(table.get(k).clone())]);
            }
            Ok(rows.write(format, out)?)
        }
    }
}

fn cdf(config: CdfConfig, layout: bool, format: Format, out: &mut dyn Write) -> Outcome {
    let grid = cdf_solve(config)?;
    if layout {
        write!(out, "t    ")?;
        for col in 0..TABLE_COLUMNS {
            write!(out, "{:>8.1}", col as f64 / 10.0)?;
        }
        writeln!(out)?;
        for (row, values) in grid.layout_table().iter().enumerate() {
            write!(out, "{:.3}", row as f64 * 0.005)?;
            for v in values {
                write!(out, "  {v:.4}")?;
            }
            writeln!(out)?;
        }
    } else if format == Format::Json {
        write_json(
            &json!({
                "grid": grid.grid_size(),
                "iterations": grid.iterations(),
                "residual": grid.residual(),
                "converged": grid.converged(),
                "t": grid.points(),
                "F": grid.values(),
            }),
            out,
        )?;
    } else {
        let mut table = Table::new(vec!["t", "F"]);
        for (t, v) in grid.points().iter().zip(grid.values()) {
            table.push(vec![Cell::Float(*t), Cell::Float(*v)]);
        }
        table.write(format, out)?;
    }
    converged(grid.converged(), grid.iterations(), grid.residual())
}

fn converged(ok: bool, iterations: usize, residual: f64) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Numeric(format!(
            "fixed-point iteration did not converge: residual {residual:e} after {iterations} iterations"
        )))
    }
}

fn density(config: DensityConfig, format: Format, out: &mut dyn Write) -> Outcome {
    let d = density_solve(config)?;
    if format == Format::Json {
        write_json(
            &json!({
                "grid": config.grid,
                "iterations": d.iterations,
                "residual": d.residual,
                "converged": d.converged,
                "mass": d.mass,
                "mean": d.mean,
                "second_moment": d.second_moment,
                "max": d.max_value(),
                "t": d.points,
                "f": d.values,
            }),
            out,
        )?;
    } else {
        let mut table = Table::new(vec!["t", "f"]);
        for (t, v) in d.points.iter().zip(&d.values) {
            table.push(vec![Cell::Float(*t), Cell::Float(*v)]);
        }
        table.write(format, out)?;
    }
    converged(d.converged, d.iterations, d.residual)
}

fn sample(count: usize, summary: bool, seed: u64, format: Format, out: &mut dyn Write) -> Outcome {
    let samples = sample_many(count, seed)?;
    if summary {
        if count < 2 {
            return Err(Failure::Usage("a summary needs at least two samples".into()));
        }
        let s = SampleSummary::of(&samples);
        return Ok(write_pairs(
            &[
                ("count", Cell::Int(s.count as u64)),
                ("mean", Cell::Float(s.mean)),
                ("variance", Cell::Float(s.variance)),
                ("min", Cell::Float(s.min)),
                ("max", Cell::Float(s.max)),
                ("mean_tau", Cell::Float(s.mean_tau)),
            ],
            format,
            out,
        )?);
    }
    match format {
        Format::Bin => {
            for s in &samples {
                out.write_all(&s.value.to_le_bytes())?;
            }
        }
        _ => {
            let mut table = Table::new(vec!["value", "tau", "draws_used"]);
            for s in &samples {
                table.push(vec![Cell::Float(s.value), Cell::Int(s.tau), Cell::Int(s.draws_used)]);
            }
            table.write(format, out)?;
        }
    }
    Ok(())
}

fn kernel_check(xs: &[f64], runs: usize, bins: usize, seed: u64, format: Format, out: &mut dyn Write) -> Outcome {
    let mut table = Table::new(vec![
        "x",
        "runs",
        "ks",
        "ks_critical",
        "chi2",
        "chi2_dof",
        "chi2_critical",
        "passed",
    ]);
    let mut all_passed = true;
    for &x in xs {
        let ks = kernel_update_check(x, runs, seed)?;
        let chi = kernel_histogram_chi2(x, runs, bins, seed)?;
        let passed = ks.passed() && chi.passed();
        all_passed &= passed;
        table.push(vec![
            Cell::Float(x),
            Cell::Int(runs as u64),
            Cell::Float(ks.ks),
            Cell::Float(ks.threshold),
            Cell::Float(chi.statistic),
            Cell::Int(chi.dof as u64),
            Cell::Float(chi.critical),
            Cell::Text(passed.to_string()),
        ]);
    }
    table.write(format, out)?;
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Numeric("kernel check rejected at significance 0.001".into()))
    }
}

fn converge(ns: &[usize], runs: usize, grid: usize, seed: u64, format: Format, out: &mut dyn Write) -> Outcome {
    let cdf = cdf_solve(CdfConfig { grid, ..CdfConfig::default() })?;
    converged(cdf.converged(), cdf.iterations(), cdf.residual())?;
    let report = convergence_study(ns, runs, seed, &cdf)?;
    let mut table = Table::new(vec!["n", "runs", "ks", "mean", "nvar"]);
    for row in &report.rows {
        table.push(vec![
            Cell::Int(row.n as u64),
            Cell::Int(row.runs as u64),
            Cell::Float(row.ks_to_limit),
            Cell::Float(row.mean_normalized),
            Cell::Float(row.var_normalized_times_n),
        ]);
    }
    Ok(table.write(format, out)?)
}

#[allow(clippy::too_many_arguments)]
fn constants(
    p: f64,
    eps: f64,
    density_bound: f64,
    tail_eps: f64,
    tail_k: u32,
    kmax: usize,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let rate = ks_rate_bound(eps, density_bound)?;
    let derivative = right_derivative_at_zero(DerivativeMethod::Series { k_max: kmax })?;
    let pairs = [
        ("alpha", Cell::Float(alpha())),
        ("coalescence_prob", Cell::Float(coalescence_prob())),
        ("mean_coalescence_time", Cell::Float(1.0 / coalescence_prob())),
        ("p", Cell::Float(p)),
        ("tau_p", Cell::Float(tau_p(p)?)),
        ("kappa_p", Cell::Float(kappa_p(p)?)),
        ("ks_eps", Cell::Float(eps)),
        ("ks_p", Cell::Float(rate.p)),
        ("ks_kappa_p", Cell::Float(rate.kappa_p)),
        ("ks_omega", Cell::Float(rate.omega_eps)),
        ("density_bound", Cell::Float(density_bound)),
        ("tail_eps", Cell::Float(tail_eps)),
        ("tail_k", Cell::Int(tail_k as u64)),
        ("tail_bound", Cell::Float(tail_bound(tail_eps, tail_k)?)),
        ("right_derivative_at_zero", Cell::Float(derivative.value)),
        ("right_derivative_error", Cell::Float(derivative.error_bar)),
        ("right_derivative_stabilized", Cell::Text(derivative.stabilized.to_string())),
    ];
    write_pairs(&pairs, format, out)?;
    if derivative.stabilized {
        Ok(())
    } else {
        Err(Failure::Numeric(format!("series for f'(0+) not stabilized at kmax = {kmax}")))
    }
}

fn enumerate(n: usize, format: Format, out: &mut dyn Write) -> Outcome {
    let e = enumerate_small(n)?;
    let law = e.exchanges_pmf()?;
    let mean = e.mean_exchanges()?;
    let recurrence = expected_total_swaps(n)?.e_y(n).clone();
    if format == Format::Json {
        let pmf: Map<String, Value> =
            law.iter().map(|(k, p)| (k.to_string(), Value::from(fraction(p)))).collect();
        let joint: Vec<Value> = e
            .split_swaps
            .iter()
            .map(|(&(j, k), &count)| json!({ "split": j, "swaps": k, "count": count }))
            .collect();
        write_json(
            &json!({
                "n": n,
                "permutations": e.permutations(),
                "exchanges_pmf": pmf,
                "mean_exchanges": fraction(&mean),
                "mean_exchanges_decimal": decimal(selectlab_core::exact::rational_to_f64(&mean)),
                "recurrence_mean": fraction(&recurrence),
                "split_swaps": joint,
            }),
            out,
        )?;
    } else {
        let mut table = Table::new(vec!["exchanges", "probability"]);
        for (k, p) in law.iter() {
            table.push(vec![Cell::Int(k), Cell::Exact(p.clone())]);
        }
        table.write(format, out)?;
    }
    Ok(())
}
