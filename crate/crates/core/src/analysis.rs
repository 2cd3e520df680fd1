//! Statistics on top of the model: the log-spacings limit, the mean radix-K
//! log letter probability, log-log slope fits and alphabet-size sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::enumerate::{top_n, RankedWord};
use crate::error::{Error, Result};
use crate::exponent::solve_root;
use crate::keyboard::{
    alphas, keyboard_from_spacings, miller_keyboard, sample_spacings, DistributionSpec, Keyboard,
    SpacingsSample,
};
use crate::scalar::{compensated_sum, Scalar};

/// Euler's constant λ.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Differential entropy of Beta(3,2), `9/4 - ln 12`.
#[allow(clippy::excessive_precision)]
pub const BETA32_ENTROPY: f64 = -0.234_906_649_788_000_31;

/// Generalized entropy `∫ log f` of a named cut-point distribution, where `f`
/// is the derivative of the inverse CDF. `None` for quantile tables.
pub fn generalized_entropy(spec: &DistributionSpec) -> Option<f64> {
    match spec {
        DistributionSpec::Uniform => Some(0.0),
        DistributionSpec::BetaThreeTwo => Some(BETA32_ENTROPY),
        DistributionSpec::QuantileTable(_) => None,
    }
}

/// Rank / log-rank / log-base triples for fitting and plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLogSeries<T> {
    pub ranks: Vec<usize>,
    pub log_rank: Vec<T>,
    pub log_base: Vec<T>,
    pub source: String,
}

impl<T: Scalar> LogLogSeries<T> {
    pub fn from_ranked(ranked: &[RankedWord<T>], source: impl Into<String>) -> Self {
        LogLogSeries {
            ranks: ranked.iter().map(|r| r.rank).collect(),
            log_rank: ranked.iter().map(|r| T::of_usize(r.rank).ln()).collect(),
            log_base: ranked.iter().map(|r| r.word.log_base).collect(),
            source: source.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    pub points: usize,
}

/// Least-squares line of log base value on log rank, over ranks `>= min_rank`.
pub fn fit_loglog_slope<T: Scalar>(
    series: &LogLogSeries<T>,
    min_rank: usize,
) -> Result<LineFit<T>> {
    let pts: Vec<(T, T)> = series
        .ranks
        .iter()
        .zip(series.log_rank.iter().zip(&series.log_base))
        .filter(|(&r, _)| r >= min_rank)
        .map(|(_, (&x, &y))| (x, y))
        .collect();
    if pts.len() < 10 {
        return Err(Error::DegenerateFit(format!(
            "{} points with rank >= {min_rank}, need at least 10",
            pts.len()
        )));
    }
    let n = T::of_usize(pts.len());
    let mean_x = compensated_sum(pts.iter().map(|p| p.0)) / n;
    let mean_y = compensated_sum(pts.iter().map(|p| p.1)) / n;
    let sxx = compensated_sum(pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)));
    let sxy = compensated_sum(pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)));
    let syy = compensated_sum(pts.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)));
    if !(sxx > T::zero()) {
        return Err(Error::DegenerateFit("all log ranks are equal".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy > T::zero() {
        sxy * sxy / (sxx * syy)
    } else {
        T::one()
    };
    Ok(LineFit {
        slope,
        intercept: mean_y - slope * mean_x,
        r_squared,
        points: pts.len(),
    })
}

/// Log-spacings summary of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ShaoHahnReport {
    pub k: usize,
    /// `(1/K) Σ log(K D_i)`.
    pub statistic: f64,
    /// `(1/K) Σ log_K D_i`.
    pub radix_k_mean: f64,
    /// `∫ log f - λ` when the distribution is a named one.
    pub entropy_limit: Option<f64>,
    /// `(1/K) Σ log_K q_i` once a letter mass is attached.
    pub mu_bar: Option<f64>,
    /// Letter mass used for `mu_bar`.
    pub c: Option<f64>,
}

pub fn shao_hahn_statistic(sample: &SpacingsSample) -> ShaoHahnReport {
    let k = sample.spacings.len();
    let kf = k as f64;
    let log_k = kf.ln();
    let statistic = compensated_sum(sample.spacings.iter().map(|d| (kf * d).ln())) / kf;
    let radix_k_mean = compensated_sum(sample.spacings.iter().map(|d| d.ln() / log_k)) / kf;
    ShaoHahnReport {
        k,
        statistic,
        radix_k_mean,
        entropy_limit: generalized_entropy(&sample.spec).map(|h| h - EULER_GAMMA),
        mu_bar: None,
        c: None,
    }
}

impl ShaoHahnReport {
    /// Adds `mu_bar` for the keyboard `q_i = c D_{i:K}`, evaluated directly
    /// from the letter probabilities.
    pub fn with_letter_mass(mut self, sample: &SpacingsSample, c: f64) -> Self {
        let kf = sample.sorted_spacings.len() as f64;
        let log_k = kf.ln();
        self.mu_bar =
            Some(compensated_sum(sample.sorted_spacings.iter().map(|d| (c * d).ln() / log_k)) / kf);
        self.c = Some(c);
        self
    }
}

/// `(1/K) Σ log_K q_i`.
pub fn mu_bar<T: Scalar>(kb: &Keyboard<T>) -> T {
    let kf = T::of_usize(kb.k());
    compensated_sum(kb.log_q().iter().copied()) / (kf * kf.ln())
}

/// Outcome of the check `mu_bar <= -β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop1Check<T> {
    pub mu_bar: T,
    pub minus_beta: T,
    pub holds: bool,
    /// `(Σ α_i) / (K log_{R0} K)`; at least 1 whenever the inequality holds.
    pub ratio: T,
}

pub fn verify_proposition1<T: Scalar>(kb: &Keyboard<T>) -> Result<Prop1Check<T>> {
    let report = solve_root(kb)?;
    let kf = T::of_usize(kb.k());
    let mu = mu_bar(kb);
    let alpha_sum = compensated_sum(alphas(kb));
    let ratio = alpha_sum * report.r0.ln() / (kf * kf.ln());
    let minus_beta = -report.beta;
    Ok(Prop1Check {
        mu_bar: mu,
        minus_beta,
        holds: mu <= minus_beta + T::SUM_TOL && ratio >= T::one() - T::SUM_TOL,
        ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub seed: u64,
    pub beta: f64,
    pub mu_bar: f64,
    /// `|β - 1|`.
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: DistributionSpec,
    pub c: f64,
    /// Sorted by `(k, seed)`.
    pub rows: Vec<SweepRow>,
    /// Per-K median of `|β - 1|`, in the order K was requested.
    pub medians: Vec<(usize, f64)>,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    })
}

/// Seeds used for the `i`-th replicate at every K.
pub fn sweep_seed(base_seed: u64, replicate: usize) -> u64 {
    base_seed.wrapping_add(replicate as u64)
}

/// β and `mu_bar` for every `(K, seed)` cell, computed in parallel.
///
/// Each cell also re-checks `1 < β <= -mu_bar`; a failure is reported as
/// [`Error::Invariant`].
pub fn convergence_sweep(
    spec: &DistributionSpec,
    k_list: &[usize],
    seeds_per_k: usize,
    c: f64,
    base_seed: u64,
) -> Result<SweepTable> {
    if let Some(&k) = k_list.iter().find(|&&k| k < 2) {
        return Err(Error::invalid(format!("K={k} below 2 in sweep")));
    }
    if seeds_per_k == 0 {
        return Err(Error::invalid("need at least one seed per K"));
    }
    let cells: Vec<(usize, u64)> = k_list
        .iter()
        .flat_map(|&k| (0..seeds_per_k).map(move |i| (k, sweep_seed(base_seed, i))))
        .collect();

    let mut rows = cells
        .par_iter()
        .map(|&(k, seed)| sweep_cell(spec, k, seed, c))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.k.cmp(&b.k).then(a.seed.cmp(&b.seed)));

    let medians = k_list
        .iter()
        .map(|&k| {
            let mut errs: Vec<f64> = rows
                .iter()
                .filter(|r| r.k == k)
                .map(|r| r.abs_err)
                .collect();
            (k, median(&mut errs).expect("seeds_per_k > 0"))
        })
        .collect();
    Ok(SweepTable {
        spec: spec.clone(),
        c,
        rows,
        medians,
    })
}

fn sweep_cell(spec: &DistributionSpec, k: usize, seed: u64, c: f64) -> Result<SweepRow> {
    let tag = |e: Error| match e {
        Error::Invariant(msg) => Error::Invariant(format!("K={k} seed={seed}: {msg}")),
        Error::InvalidInput(msg) => Error::InvalidInput(format!("K={k} seed={seed}: {msg}")),
        other => other,
    };
    let sample = sample_spacings(spec, k, seed).map_err(tag)?;
    let kb: Keyboard<f64> = keyboard_from_spacings(&sample, c).map_err(tag)?;
    let report = solve_root(&kb).map_err(tag)?;
    let mu = mu_bar(&kb);
    if !(report.beta > 1.0 && -report.beta >= mu - f64::SUM_TOL) {
        return Err(tag(Error::Invariant(format!(
            "expected 1 < beta <= -mu_bar, got beta={} mu_bar={mu}",
            report.beta
        ))));
    }
    Ok(SweepRow {
        k,
        seed,
        beta: report.beta,
        mu_bar: mu,
        abs_err: (report.beta - 1.0).abs(),
    })
}

/// The three keyboards behind the log-log panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    EqualProbs,
    UniformSpacings,
    Beta32Spacings,
}

impl FigureKind {
    pub const ALL: [FigureKind; 3] = [
        FigureKind::EqualProbs,
        FigureKind::UniformSpacings,
        FigureKind::Beta32Spacings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureKind::EqualProbs => "equal",
            FigureKind::UniformSpacings => "uniform",
            FigureKind::Beta32Spacings => "beta32",
        }
    }
}

impl fmt::Display for FigureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "equal" | "a" => Ok(FigureKind::EqualProbs),
            "uniform" | "b" => Ok(FigureKind::UniformSpacings),
            "beta32" | "beta" | "c" => Ok(FigureKind::Beta32Spacings),
            other => Err(Error::invalid(format!("unknown figure kind `{other}`"))),
        }
    }
}

/// Keyboard for one panel: equal letters `c/K`, or `c` times sorted spacings.
pub fn figure_keyboard<T: Scalar>(
    kind: FigureKind,
    k: usize,
    c: T,
    seed: u64,
) -> Result<Keyboard<T>> {
    match kind {
        FigureKind::EqualProbs => miller_keyboard(k, T::one() - c),
        FigureKind::UniformSpacings => {
            keyboard_from_spacings(&sample_spacings(&DistributionSpec::Uniform, k, seed)?, c)
        }
        FigureKind::Beta32Spacings => keyboard_from_spacings(
            &sample_spacings(&DistributionSpec::BetaThreeTwo, k, seed)?,
            c,
        ),
    }
}

/// Top-`n` log-log series for one panel.
pub fn figure1_data<T: Scalar>(
    kind: FigureKind,
    k: usize,
    c: T,
    n: usize,
    seed: u64,
) -> Result<LogLogSeries<T>> {
    let kb = figure_keyboard(kind, k, c, seed)?;
    let ranked = top_n(&kb, n)?;
    let source = format!("kind={kind} K={k} c={c} seed={seed}");
    Ok(LogLogSeries::from_ranked(&ranked, source))
}
