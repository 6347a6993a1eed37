//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single `PASS`/`FAIL` line before asserting.

use std::sync::OnceLock;

use num_rational::BigRational;
use selectlab_core::exact::{
    enumerate_small, expected_swaps_first_pass, expected_total_swaps, split_pmf,
    swaps_conditional_pmf,
};
use selectlab_core::experiments::{
    convergence_study, ks_distance_empirical, moves_vs_exchanges_report, variance_scaling,
};
use selectlab_core::limit::{
    cdf_solve, density_solve, ks_rate_bound, moments, right_derivative_at_zero,
    right_derivative_from_samples, tail_bound, CdfConfig, CdfGrid, DensityConfig,
    DerivativeMethod, DENSITY_BOUND,
};
use selectlab_core::rng::DEFAULT_SEED;
use selectlab_core::sampler::{
    alpha, cdf_g, kernel_update_check, quantile_g_inv, sample_many, LimitSample, SampleSummary,
};

const SEED: u64 = DEFAULT_SEED;
const PERFECT_SAMPLES: usize = 10_000_000;

/// Distribution function of the limit law, `F(column + row)`, to four decimals.
const REFERENCE_CDF: [[f64; 8]; 20] = [
    [0.0000, 0.0054, 0.0268, 0.0811, 0.2044, 0.4400, 0.7655, 0.9768],
    [0.0000, 0.0060, 0.0285, 0.0853, 0.2133, 0.4550, 0.7811, 0.9809],
    [0.0000, 0.0067, 0.0303, 0.0896, 0.2224, 0.4703, 0.7963, 0.9844],
    [0.0001, 0.0074, 0.0322, 0.0942, 0.2318, 0.4858, 0.8112, 0.9874],
    [0.0002, 0.0081, 0.0341, 0.0989, 0.2415, 0.5016, 0.8256, 0.9900],
    [0.0003, 0.0089, 0.0362, 0.1038, 0.2516, 0.5175, 0.8396, 0.9922],
    [0.0004, 0.0097, 0.0383, 0.1089, 0.2619, 0.5337, 0.8531, 0.9939],
    [0.0006, 0.0106, 0.0405, 0.1142, 0.2726, 0.5500, 0.8661, 0.9954],
    [0.0008, 0.0115, 0.0428, 0.1198, 0.2835, 0.5665, 0.8784, 0.9965],
    [0.0010, 0.0125, 0.0453, 0.1255, 0.2948, 0.5831, 0.8902, 0.9975],
    [0.0012, 0.0135, 0.0478, 0.1314, 0.3064, 0.5999, 0.9014, 0.9982],
    [0.0015, 0.0146, 0.0505, 0.1376, 0.3184, 0.6167, 0.9120, 0.9987],
    [0.0018, 0.0157, 0.0533, 0.1440, 0.3306, 0.6335, 0.9218, 0.9991],
    [0.0021, 0.0169, 0.0562, 0.1506, 0.3432, 0.6503, 0.9310, 0.9994],
    [0.0025, 0.0181, 0.0593, 0.1575, 0.3561, 0.6672, 0.9396, 0.9996],
    [0.0029, 0.0194, 0.0626, 0.1647, 0.3693, 0.6839, 0.9474, 0.9997],
    [0.0033, 0.0208, 0.0660, 0.1721, 0.3829, 0.7006, 0.9546, 0.9998],
    [0.0038, 0.0222, 0.0695, 0.1797, 0.3967, 0.7171, 0.9611, 0.9999],
    [0.0043, 0.0237, 0.0732, 0.1877, 0.4109, 0.7335, 0.9670, 0.9999],
    [0.0049, 0.0252, 0.0770, 0.1959, 0.4253, 0.7496, 0.9722, 1.0000],
];

fn verdict(id: u32, ok: bool, detail: String) {
    println!("AC{id:02} {}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "AC{id:02} failed: {detail}");
}

fn limit_cdf() -> &'static CdfGrid {
    static GRID: OnceLock<CdfGrid> = OnceLock::new();
    GRID.get_or_init(|| cdf_solve(CdfConfig::default()).expect("cdf solve"))
}

fn perfect_samples() -> &'static [LimitSample] {
    static SAMPLES: OnceLock<Vec<LimitSample>> = OnceLock::new();
    SAMPLES.get_or_init(|| sample_many(PERFECT_SAMPLES, SEED).expect("perfect sampler"))
}

fn sci(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
}

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn ac01_split_law_by_enumeration() {
    let mut mismatches = Vec::new();
    for n in 2..=8 {
        let e = enumerate_small(n).unwrap();
        let law = e.split_marginal().unwrap();
        let expected_ok = (1..n as u64)
            .all(|j| law.mass_at(j) == if j == 1 { r(2, n as i64) } else { r(1, n as i64) });
        if !expected_ok || law != split_pmf(n).unwrap() {
            mismatches.push(n);
        }
    }
    verdict(1, mismatches.is_empty(), format!("split law exact for n = 2..8, mismatches {mismatches:?}"));
}

#[test]
fn ac02_conditional_swap_law_by_enumeration() {
    let mut mismatches = Vec::new();
    for n in 2..=8 {
        let e = enumerate_small(n).unwrap();
        for j in 1..n {
            if e.swaps_given_split(j).unwrap() != swaps_conditional_pmf(n, j).unwrap() {
                mismatches.push((n, j));
            }
        }
    }
    let bernoulli = swaps_conditional_pmf(5, 1).unwrap();
    let ok = mismatches.is_empty() && bernoulli.masses() == [r(1, 2), r(1, 2)];
    verdict(2, ok, format!("conditional swap law exact for n = 2..8, mismatches {mismatches:?}"));
}

#[test]
fn ac03_exact_means() {
    let table = expected_total_swaps(7).unwrap();
    let mut mean_mismatches = Vec::new();
    for n in 2..=7 {
        let enumerated = enumerate_small(n).unwrap().mean_exchanges().unwrap();
        if &enumerated != table.e_y(n) {
            mean_mismatches.push(format!("n={n}: recurrence {} vs enumeration {enumerated}", table.e_y(n)));
        }
    }
    let first_pass_bad: Vec<usize> = (2..=10_000usize)
        .filter(|&n| expected_swaps_first_pass(n).unwrap() != r(n as i64 + 1, 6))
        .collect();
    verdict(
        3,
        mean_mismatches.is_empty() && first_pass_bad.is_empty(),
        format!(
            "E[T_n] = (n+1)/6 for n <= 1e4 (bad: {first_pass_bad:?}); E[Y_n] vs enumeration mismatches: {mean_mismatches:?}"
        ),
    );
}

#[test]
fn ac04_moments() {
    let m = moments(2).unwrap();
    let ok = m.get(1) == &r(1, 2) && m.get(2) == &r(4, 15) && m.variance() == r(1, 60);
    verdict(4, ok, format!("E[X] = {}, E[X^2] = {}, Var = {}", m.get(1), m.get(2), m.variance()));
}

#[test]
fn ac05_cdf_table() {
    let grid = limit_cdf();
    let table = grid.layout_table();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (row, reference) in table.iter().zip(REFERENCE_CDF.iter()) {
        for (ours, theirs) in row.iter().zip(reference) {
            worst = worst.max((ours - theirs).abs());
            count += 1;
        }
    }
    let headline = [(0.355, 0.1376), (0.5, 0.4400), (0.7, 0.9768)]
        .iter()
        .all(|&(t, v)| (grid.eval(t) - v).abs() <= 5e-4);
    verdict(
        5,
        grid.converged() && count == 160 && worst <= 5e-4 && headline,
        format!("{count} entries, max deviation {worst:.2e}, {} iterations", grid.iterations()),
    );
}

#[test]
fn ac06_perfect_sampler_statistics() {
    let samples = perfect_samples();
    let summary = SampleSummary::of(samples);
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let ks = ks_distance_empirical(&values, limit_cdf()).unwrap();
    let tau_target = 8.0 / alpha();
    let ok = (summary.mean - 0.5).abs() <= 5e-4
        && (summary.variance / (1.0 / 60.0) - 1.0).abs() <= 0.05
        && ks < 2e-3
        && (summary.mean_tau / tau_target - 1.0).abs() <= 0.03;
    verdict(
        6,
        ok,
        format!(
            "mean {:.6}, variance {:.6}, KS {ks:.2e}, mean tau {:.2} (target {tau_target:.2})",
            summary.mean, summary.variance, summary.mean_tau
        ),
    );
}

#[test]
fn ac07_kernel_identity() {
    let checks: Vec<_> =
        [0.0, 0.3, 1.0].iter().map(|&x| kernel_update_check(x, 1_000_000, SEED).unwrap()).collect();
    let detail = checks
        .iter()
        .map(|c| format!("x={}: KS {:.2e} < {:.2e}", c.x, c.ks, c.threshold))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(7, checks.iter().all(|c| c.passed()), detail);
}

#[test]
fn ac08_quantile_round_trip() {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let x = i as f64 / 99.0;
        for j in 0..100 {
            let t = j as f64 / 99.0;
            let back = quantile_g_inv(x, cdf_g(x, t)).unwrap();
            // Above the support end G is flat at 1 and inverts to the end.
            let target = t.min(selectlab_core::limit::kernel_support_end(x));
            worst = worst.max((back - target).abs());
        }
    }
    verdict(8, worst < 1e-9, format!("max round-trip error {worst:.2e}"));
}

#[test]
fn ac09_variance_scaling() {
    let n = 10_000;
    let runs = 100_000;
    let v = variance_scaling(n, runs, SEED).unwrap();
    let moves = moves_vs_exchanges_report(&[n], runs, SEED).unwrap();
    let twice = moves[0].var_twice_exchanges_over_n2;
    let ok = (0.0150..=0.0183).contains(&v.value) && (0.060..=0.073).contains(&twice);
    verdict(
        9,
        ok,
        format!("Var(Y)/n^2 = {:.5} (se {:.1e}), Var(2Y)/n^2 = {twice:.5}", v.value, v.std_error),
    );
}

#[test]
fn ac10_ks_convergence_trend() {
    let ns = [100, 1_000, 10_000];
    let report = convergence_study(&ns, 100_000, SEED, limit_cdf()).unwrap();
    let ks: Vec<f64> = report.rows.iter().map(|row| row.ks_to_limit).collect();
    let rate = ks_rate_bound(0.25, DENSITY_BOUND).unwrap();
    let ceilings: Vec<f64> = ns.iter().map(|&n| rate.ks_bound(n)).collect();
    let ratio = ks[0] / ks[2];
    let ok = ks.windows(2).all(|w| w[1] < w[0])
        && (5.0..=20.0).contains(&ratio)
        && ks.iter().zip(&ceilings).all(|(k, c)| k <= c);
    verdict(
        10,
        ok,
        format!("KS {}, ratio {ratio:.2}, ceilings {}", sci(&ks), sci(&ceilings)),
    );
}

#[test]
fn ac11_density_properties() {
    let d = density_solve(DensityConfig::default()).unwrap();
    let quarter = d.points.partition_point(|&t| t <= 0.25);
    let nondecreasing = d.values[..quarter].windows(2).all(|w| w[1] >= w[0]);
    let max = d.max_value();
    let ok = d.converged
        && (d.mass - 1.0).abs() <= 1e-3
        && (d.mean - 0.5).abs() <= 1e-3
        && d.values[0].abs() < 1e-9
        && d.values.last().unwrap().abs() < 1e-9
        && nondecreasing
        && (3.0..=4.0).contains(&max)
        && max <= DENSITY_BOUND;
    verdict(
        11,
        ok,
        format!(
            "mass {:.6}, mean {:.6}, f(0) {:.1e}, f(1) {:.1e}, max {max:.4}, monotone on [0,1/4]: {nondecreasing}",
            d.mass,
            d.mean,
            d.values[0],
            d.values.last().unwrap()
        ),
    );
}

#[test]
fn ac12_right_derivative() {
    let series = right_derivative_at_zero(DerivativeMethod::Series { k_max: 200 }).unwrap();
    let mc = right_derivative_from_samples(perfect_samples());
    let target = 0.911364;
    let ok = (series.value - target).abs() <= 1e-3
        && (mc.value - target).abs() <= 1e-3
        && (series.value - mc.value).abs() <= 2e-3;
    verdict(
        12,
        ok,
        format!("series {:.7} (+-{:.1e}), Monte Carlo {:.7} (+-{:.1e})", series.value, series.error_bar, mc.value, mc.error_bar),
    );
}

#[test]
fn ac13_tail_bound() {
    let samples = &perfect_samples()[..1_000_000];
    let mut lines = Vec::new();
    let mut ok = true;
    for (eps, k) in [(0.1, 2), (0.05, 2), (0.05, 4)] {
        let empirical =
            samples.iter().filter(|s| s.value >= 1.0 - eps).count() as f64 / samples.len() as f64;
        let bound = tail_bound(eps, k).unwrap();
        ok &= empirical <= bound;
        lines.push(format!("eps={eps}, k={k}: {empirical:.2e} <= {bound:.2e}"));
    }
    verdict(13, ok, lines.join("; "));
}
