//! Pilot runs behind the finite-K tolerances pinned in the test suites.
//!
//! Run: cargo run --release -p monkey-zipf --example pilot

use monkey_zipf::analysis::median;
use monkey_zipf::{
    convergence_sweep, figure1_data, figure_keyboard, fit_loglog_slope, sample_spacings,
    shao_hahn_statistic, solve_root, DistributionSpec, FigureKind, Keyboard,
};

const SEEDS: u64 = 20;

fn main() -> monkey_zipf::Result<()> {
    println!("log-spacings statistic, K = 100000, seeds 0..{SEEDS}");
    for spec in [DistributionSpec::Uniform, DistributionSpec::BetaThreeTwo] {
        let mut stats = Vec::new();
        let mut limit = 0.0;
        for seed in 0..SEEDS {
            let rep = shao_hahn_statistic(&sample_spacings(&spec, 100_000, seed)?);
            limit = rep.entropy_limit.expect("named distribution");
            stats.push(rep.statistic);
        }
        let mean = stats.iter().sum::<f64>() / stats.len() as f64;
        let worst = stats.iter().map(|s| (s - limit).abs()).fold(0.0, f64::max);
        println!(
            "  {spec:<8} limit {limit:+.6}  mean {mean:+.6}  |mean-limit| {:.2e}  worst seed {:.2e}",
            (mean - limit).abs(),
            worst
        );
    }

    println!("OLS slope vs -beta, K = 26, c = 0.82, top 475255, seeds 0..{SEEDS}");
    for kind in [FigureKind::UniformSpacings, FigureKind::Beta32Spacings] {
        let mut worst: f64 = 0.0;
        for seed in 0..SEEDS {
            let kb: Keyboard = figure_keyboard(kind, 26, 0.82, seed)?;
            let beta = solve_root(&kb)?.beta;
            let fit = fit_loglog_slope(&figure1_data::<f64>(kind, 26, 0.82, 475_255, seed)?, 2)?;
            worst = worst.max((fit.slope + beta).abs());
        }
        println!("  {kind:<8} max |slope + beta| = {worst:.4}");
    }
    let fit = fit_loglog_slope(
        &figure1_data::<f64>(FigureKind::EqualProbs, 26, 0.82, 475_255, 0)?,
        2,
    )?;
    println!("  equal    slope = {:.6}", fit.slope);

    println!("sweep medians |beta-1|, uniform, c = 0.82, seeds 0..{SEEDS}");
    let table = convergence_sweep(
        &DistributionSpec::Uniform,
        &[10, 100, 1000],
        SEEDS as usize,
        0.82,
        0,
    )?;
    for (k, m) in &table.medians {
        let mut errs: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.k == *k)
            .map(|r| r.abs_err)
            .collect();
        println!(
            "  K={k:<5} median {m:.5} (recomputed {:.5})",
            median(&mut errs).unwrap()
        );
    }
    Ok(())
}
