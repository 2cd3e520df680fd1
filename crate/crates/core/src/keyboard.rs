//! The typewriter keyboard: K letter probabilities plus a space probability,
//! and the random division of the unit interval used to build unequal ones.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Resamples allowed after the first draw when a zero spacing shows up.
pub const MAX_RESAMPLES: usize = 8;

/// Default share of probability mass given to the letters (s = 1 - c).
pub const DEFAULT_LETTER_MASS: f64 = 0.82;

/// Letter probabilities sorted non-increasing, plus the space probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Keyboard<T> {
    q: Vec<T>,
    s: T,
    log_q: Vec<T>,
}

impl<T: Scalar> Keyboard<T> {
    /// Builds a keyboard from letter probabilities in any order. The letters
    /// are relabelled so that `q[0] >= q[1] >= ...`.
    pub fn new(mut q: Vec<T>, s: T) -> Result<Self> {
        if q.len() < 2 {
            return Err(Error::invalid(format!(
                "need K >= 2 letters, got {}",
                q.len()
            )));
        }
        if !(s > T::zero() && s < T::one()) {
            return Err(Error::invalid(format!(
                "space probability {s} not in (0,1)"
            )));
        }
        if let Some(bad) = q.iter().find(|&&p| !(p > T::zero() && p.is_finite())) {
            return Err(Error::invalid(format!(
                "letter probability {bad} is not positive"
            )));
        }
        q.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        let log_q = q.iter().map(|p| p.ln()).collect();
        let kb = Keyboard { q, s, log_q };
        kb.check()?;
        Ok(kb)
    }

    /// Scales positive weights so that they carry mass `1 - s`.
    pub fn from_weights(weights: Vec<T>, s: T) -> Result<Self> {
        let total = compensated_sum(weights.iter().copied());
        if !(total > T::zero()) {
            return Err(Error::invalid("weights must have positive total"));
        }
        let mass = T::one() - s;
        Self::new(weights.into_iter().map(|w| w / total * mass).collect(), s)
    }

    /// Re-asserts the normalization invariant.
    pub fn check(&self) -> Result<()> {
        let total = compensated_sum(self.q.iter().copied()) + self.s;
        if (total - T::one()).abs() > T::SUM_TOL {
            return Err(Error::invalid(format!(
                "probabilities sum to {total}, expected 1 within {}",
                T::SUM_TOL
            )));
        }
        Ok(())
    }

    /// Alphabet size K.
    pub fn k(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn s(&self) -> T {
        self.s
    }

    /// Largest letter probability.
    pub fn q1(&self) -> T {
        self.q[0]
    }

    /// Natural logs of the letter probabilities, same order as `q`.
    pub fn log_q(&self) -> &[T] {
        &self.log_q
    }

    /// Total letter mass, `1 - s`.
    pub fn letter_mass(&self) -> T {
        T::one() - self.s
    }

    pub fn is_equiprobable(&self) -> bool {
        self.q.iter().all(|&p| p == self.q[0])
    }

    /// Converts to another precision, re-validating.
    pub fn cast<U: Scalar>(&self) -> Result<Keyboard<U>> {
        let q = self
            .q
            .iter()
            .map(|p| U::of(p.to_f64().expect("finite")))
            .collect();
        Keyboard::new(q, U::of(self.s.to_f64().expect("finite")))
    }
}

/// Equal letter probabilities `(1 - s) / K`.
pub fn miller_keyboard<T: Scalar>(k: usize, s: T) -> Result<Keyboard<T>> {
    if k < 2 {
        return Err(Error::invalid(format!("need K >= 2 letters, got {k}")));
    }
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::invalid(format!(
            "space probability {s} not in (0,1)"
        )));
    }
    let p = (T::one() - s) / T::of_usize(k);
    Keyboard::new(vec![p; k], s)
}

/// Letter probabilities `q_i = c * D_{i:K}` from the sorted spacings, with
/// `s = 1 - c`.
pub fn keyboard_from_spacings<T: Scalar>(sample: &SpacingsSample, c: T) -> Result<Keyboard<T>> {
    if !(c > T::zero() && c < T::one()) {
        return Err(Error::invalid(format!("letter mass c={c} not in (0,1)")));
    }
    let q = sample
        .sorted_spacings
        .iter()
        .map(|&d| c * T::of(d))
        .collect();
    Keyboard::new(q, T::one() - c)
}

/// Exponents `α_i = log q_i / log q_1`, so that `q_i = q_1^α_i`.
pub fn alphas<T: Scalar>(kb: &Keyboard<T>) -> Vec<T> {
    let log_q1 = kb.log_q[0];
    let mut out: Vec<T> = kb.log_q.iter().map(|&l| l / log_q1).collect();
    out[0] = T::one();
    out
}

/// Monotone piecewise-linear inverse CDF on [0,1], given as
/// `(probability, value)` knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct QuantileTable {
    knots: Vec<(f64, f64)>,
}

impl QuantileTable {
    /// Knots must be strictly increasing in both coordinates and run from
    /// (0,0) to (1,1).
    ///
    /// Whether the implied inverse-CDF slope stays bounded away from zero is
    /// not checked; the log-spacing limit theorem needs it.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::invalid("quantile table needs at least two knots"));
        }
        if knots[0] != (0.0, 0.0) || knots[knots.len() - 1] != (1.0, 1.0) {
            return Err(Error::invalid("quantile table must map 0->0 and 1->1"));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::invalid(format!(
                    "quantile table not strictly increasing at {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(QuantileTable { knots })
    }

    pub fn identity() -> Self {
        QuantileTable {
            knots: vec![(0.0, 0.0), (1.0, 1.0)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Parses `p,v` lines; blank lines and `#` comments are skipped.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut knots = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (p, v) = match (parts.next(), parts.next(), parts.next()) {
                (Some(p), Some(v), None) => (p, v),
                _ => {
                    return Err(Error::invalid(format!(
                        "quantile table line {}: expected `p,v`",
                        lineno + 1
                    )))
                }
            };
            let parse = |x: &str| {
                x.parse::<f64>()
                    .map_err(|e| Error::invalid(format!("quantile table line {}: {e}", lineno + 1)))
            };
            knots.push((parse(p)?, parse(v)?));
        }
        Self::new(knots)
    }

    /// Inverse CDF at `u` in [0,1].
    pub fn quantile(&self, u: f64) -> f64 {
        let hi = self
            .knots
            .partition_point(|&(p, _)| p <= u)
            .clamp(1, self.knots.len() - 1);
        let (p0, v0) = self.knots[hi - 1];
        let (p1, v1) = self.knots[hi];
        v0 + (u - p0) * (v1 - v0) / (p1 - p0)
    }
}

impl TryFrom<Vec<(f64, f64)>> for QuantileTable {
    type Error = Error;

    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self> {
        QuantileTable::new(knots)
    }
}

impl From<QuantileTable> for Vec<(f64, f64)> {
    fn from(table: QuantileTable) -> Self {
        table.knots
    }
}

/// Distribution of the K-1 cut points on the unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionSpec {
    Uniform,
    /// Beta(3,2), drawn as the 3rd smallest of 4 uniforms.
    #[serde(rename = "beta32")]
    BetaThreeTwo,
    QuantileTable(QuantileTable),
}

impl DistributionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DistributionSpec::Uniform => "uniform",
            DistributionSpec::BetaThreeTwo => "beta32",
            DistributionSpec::QuantileTable(_) => "quantile_table",
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            DistributionSpec::Uniform => rng.gen::<f64>(),
            DistributionSpec::BetaThreeTwo => {
                let mut u = [0.0f64; 4];
                for x in &mut u {
                    *x = rng.gen();
                }
                u.sort_by(f64::total_cmp);
                u[2]
            }
            DistributionSpec::QuantileTable(table) => table.quantile(rng.gen::<f64>()),
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Accepts the parameter-free kinds; quantile tables are loaded from files.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(DistributionSpec::Uniform),
            "beta32" | "beta" | "beta3-2" | "beta(3,2)" => Ok(DistributionSpec::BetaThreeTwo),
            other => Err(Error::invalid(format!("unknown distribution `{other}`"))),
        }
    }
}

/// K spacings of [0,1] cut at K-1 random points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingsSample {
    pub spec: DistributionSpec,
    pub k: usize,
    pub seed: u64,
    /// D_1..D_K in interval order (top segment first).
    pub spacings: Vec<f64>,
    /// D_{1:K} >= ... >= D_{K:K}.
    pub sorted_spacings: Vec<f64>,
}

/// `n` independent variates from `spec`, using the same stream as
/// [`sample_spacings`] with that seed.
pub fn sample_variates(spec: &DistributionSpec, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| spec.draw(&mut rng)).collect()
}

/// Broken-stick spacings from K-1 draws of `spec`. Deterministic in
/// `(spec, k, seed)`.
pub fn sample_spacings(spec: &DistributionSpec, k: usize, seed: u64) -> Result<SpacingsSample> {
    if k < 2 {
        return Err(Error::invalid(format!("need K >= 2 spacings, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts = vec![0.0f64; k - 1];
    for _ in 0..=MAX_RESAMPLES {
        for x in cuts.iter_mut() {
            *x = spec.draw(&mut rng);
        }
        cuts.sort_by(|a, b| b.total_cmp(a));

        let mut spacings = Vec::with_capacity(k);
        spacings.push(1.0 - cuts[0]);
        spacings.extend(cuts.windows(2).map(|w| w[0] - w[1]));
        spacings.push(cuts[k - 2]);
        if spacings.iter().any(|&d| !(d > 0.0)) {
            continue;
        }

        let total = compensated_sum(spacings.iter().copied());
        if (total - 1.0).abs() > f64::SUM_TOL {
            return Err(Error::Invariant(format!("spacings sum to {total}")));
        }
        let mut sorted_spacings = spacings.clone();
        sorted_spacings.sort_by(|a, b| b.total_cmp(a));
        return Ok(SpacingsSample {
            spec: spec.clone(),
            k,
            seed,
            spacings,
            sorted_spacings,
        });
    }
    Err(Error::DegenerateSample {
        attempts: MAX_RESAMPLES + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_letter_spacings_partition_the_interval() {
        let s = sample_spacings(&DistributionSpec::Uniform, 2, 99).unwrap();
        assert_eq!(s.spacings.len(), 2);
        let x = s.spacings[1];
        assert_eq!(s.spacings[0], 1.0 - x);
        assert!((s.spacings.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spacings_are_reproducible() {
        let a = sample_spacings(&DistributionSpec::Uniform, 26, 1234).unwrap();
        let b = sample_spacings(&DistributionSpec::Uniform, 26, 1234).unwrap();
        assert_eq!(a, b);
        assert!(a.spacings.iter().all(|&d| d > 0.0));
        assert!(a.sorted_spacings.windows(2).all(|w| w[0] >= w[1]));
        let c = sample_spacings(&DistributionSpec::Uniform, 26, 1235).unwrap();
        assert_ne!(a.spacings, c.spacings);
    }

    #[test]
    fn identity_table_matches_uniform_bitwise() {
        let table = DistributionSpec::QuantileTable(QuantileTable::identity());
        for seed in [0u64, 7, 42, u64::MAX] {
            let a = sample_spacings(&DistributionSpec::Uniform, 40, seed).unwrap();
            let b = sample_spacings(&table, 40, seed).unwrap();
            assert_eq!(a.spacings, b.spacings);
        }
    }

    #[test]
    fn quantile_table_rejects_bad_grids() {
        assert!(QuantileTable::new(vec![(0.0, 0.0)]).is_err());
        assert!(QuantileTable::new(vec![(0.0, 0.0), (0.5, 0.5), (0.5, 0.7), (1.0, 1.0)]).is_err());
        assert!(QuantileTable::new(vec![(0.0, 0.0), (0.5, 0.6), (0.7, 0.6), (1.0, 1.0)]).is_err());
        assert!(QuantileTable::new(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(QuantileTable::new(vec![(0.0, 0.0), (0.9, 1.0)]).is_err());
    }

    #[test]
    fn quantile_table_interpolates() {
        let t = QuantileTable::new(vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]).unwrap();
        assert_eq!(t.quantile(0.0), 0.0);
        assert!((t.quantile(0.25) - 0.125).abs() < 1e-15);
        assert!((t.quantile(0.75) - 0.625).abs() < 1e-15);
        assert_eq!(t.quantile(1.0), 1.0);
    }

    #[test]
    fn quantile_table_parses_csv() {
        let t = QuantileTable::parse_csv("# p,v\n0,0\n0.5, 0.25\n\n1,1\n").unwrap();
        assert_eq!(t.knots().len(), 3);
        assert!(QuantileTable::parse_csv("0,0\n0.5\n1,1").is_err());
        assert!(QuantileTable::parse_csv("0,0\nx,1\n1,1").is_err());
    }

    #[test]
    fn spec_names_parse() {
        assert_eq!(
            "uniform".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::Uniform
        );
        assert_eq!(
            "Beta32".parse::<DistributionSpec>().unwrap(),
            DistributionSpec::BetaThreeTwo
        );
        assert!("gamma".parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn scaling_two_equal_spacings() {
        let sample = SpacingsSample {
            spec: DistributionSpec::Uniform,
            k: 2,
            seed: 0,
            spacings: vec![0.5, 0.5],
            sorted_spacings: vec![0.5, 0.5],
        };
        let kb: Keyboard<f64> = keyboard_from_spacings(&sample, 0.82).unwrap();
        assert_eq!(kb.q(), &[0.41, 0.41]);
        assert!((kb.s() - 0.18).abs() < 1e-15);
        assert!(keyboard_from_spacings::<f64>(&sample, 1.0).is_err());
        assert!(keyboard_from_spacings::<f64>(&sample, 0.0).is_err());
    }

    #[test]
    fn half_mass_keyboard() {
        let sample = sample_spacings(&DistributionSpec::BetaThreeTwo, 30, 5).unwrap();
        let kb: Keyboard<f64> = keyboard_from_spacings(&sample, 0.5).unwrap();
        assert!((compensated_sum(kb.q().iter().copied()) - 0.5).abs() < 1e-12);
        assert_eq!(kb.s(), 0.5);
    }

    #[test]
    fn default_keyboard_from_uniform_sample() {
        let sample = sample_spacings(&DistributionSpec::Uniform, 26, 2015).unwrap();
        let kb: Keyboard<f64> = keyboard_from_spacings(&sample, 0.82).unwrap();
        assert_eq!(kb.k(), 26);
        assert!((kb.s() - 0.18).abs() < 1e-15);
        assert!(kb.q().windows(2).all(|w| w[0] >= w[1]));
        for (q, d) in kb.q().iter().zip(&sample.sorted_spacings) {
            assert_eq!(*q, 0.82 * d);
        }
    }

    #[test]
    fn miller_letters() {
        let kb: Keyboard<f64> = miller_keyboard(26, 0.18).unwrap();
        assert!(kb.q().iter().all(|&p| (p - 0.0315).abs() < 5e-5));
        assert!((compensated_sum(kb.q().iter().copied()) + kb.s() - 1.0).abs() < 1e-15);
        assert!(kb.is_equiprobable());

        let kb: Keyboard<f64> = miller_keyboard(2, 0.5).unwrap();
        assert_eq!(kb.q(), &[0.25, 0.25]);

        assert!(miller_keyboard::<f64>(1, 0.5).is_err());
        assert!(miller_keyboard::<f64>(3, 0.0).is_err());
        assert!(miller_keyboard::<f64>(3, 1.0).is_err());
    }

    #[test]
    fn keyboard_rejects_invalid() {
        assert!(Keyboard::new(vec![0.5], 0.5).is_err());
        assert!(Keyboard::new(vec![0.5, 0.0], 0.5).is_err());
        assert!(Keyboard::new(vec![0.5, -0.1], 0.6).is_err());
        assert!(Keyboard::new(vec![0.3, 0.3], 0.3).is_err());
        assert!(Keyboard::new(vec![0.25, 0.25], 0.0).is_err());
    }

    #[test]
    fn keyboard_sorts_letters() {
        let kb = Keyboard::new(vec![0.2, 0.6], 0.2).unwrap();
        assert_eq!(kb.q(), &[0.6, 0.2]);
        assert_eq!(kb.q1(), 0.6);
    }

    #[test]
    fn alphas_examples() {
        let kb: Keyboard<f64> = miller_keyboard(26, 0.18).unwrap();
        assert!(alphas(&kb).iter().all(|&a| a == 1.0));

        let kb = Keyboard::new(vec![0.5, 0.25], 0.25).unwrap();
        assert_eq!(alphas(&kb), vec![1.0, 2.0]);

        let kb = Keyboard::<f64>::new(vec![0.6, 0.2], 0.2).unwrap();
        let a = alphas(&kb);
        // independent: log 0.2 / log 0.6 = 3.150660103...
        assert!((a[1] - 3.150_660_103_087_123).abs() < 1e-12);
        assert!((0.6f64.powf(a[1]) - 0.2).abs() / 0.2 < 1e-12);
    }

    #[test]
    fn f32_keyboards_work() {
        let kb: Keyboard<f32> = miller_keyboard(26, 0.18f32).unwrap();
        assert_eq!(kb.k(), 26);
        let sample = sample_spacings(&DistributionSpec::Uniform, 26, 3).unwrap();
        let kb: Keyboard<f32> = keyboard_from_spacings(&sample, 0.82f32).unwrap();
        assert!(alphas(&kb).windows(2).all(|w| w[0] <= w[1]));
    }
}
