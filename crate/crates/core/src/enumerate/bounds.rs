use crate::error::{Error, Result};
use crate::exponent::{solve_root, ExponentReport};
use crate::keyboard::Keyboard;
use crate::scalar::Scalar;

use super::counting::CountingTable;
use super::RankedWord;

/// One row of the counting-bound check `b R0^t < N(t) <= R0^t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsiszarCheck<T> {
    pub t: T,
    pub n: u128,
    pub lower: T,
    pub upper: T,
    pub ok: bool,
}

/// Checks the counting bounds at every `t` using exact counts.
///
/// The lower bound is strict. The upper bound is attained exactly for equal
/// letter probabilities at integer `t`, so it is compared with a relative
/// slack of [`Scalar::BOUND_RTOL`].
pub fn verify_csiszar_bounds<T: Scalar>(
    kb: &Keyboard<T>,
    t_values: &[T],
) -> Result<Vec<CsiszarCheck<T>>> {
    if t_values.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(bad) = t_values.iter().find(|&&t| !(t >= T::zero())) {
        return Err(Error::invalid(format!("t={bad} must be non-negative")));
    }
    let report = solve_root(kb)?;
    let t_max = t_values.iter().copied().fold(T::zero(), T::max);
    let table = CountingTable::build(kb, t_max)?;
    csiszar_bounds_with(&report, &table, t_values)
}

/// Counting-bound check against an already solved report and counting table.
pub fn csiszar_bounds_with<T: Scalar>(
    report: &ExponentReport<T>,
    table: &CountingTable<T>,
    t_values: &[T],
) -> Result<Vec<CsiszarCheck<T>>> {
    t_values
        .iter()
        .map(|&t| {
            let n = table.n(t)?;
            let upper = report.r0.powf(t);
            let lower = report.b * upper;
            let nf = T::of_u128(n);
            Ok(CsiszarCheck {
                t,
                n,
                lower,
                upper,
                ok: nf > lower && nf <= upper * (T::one() + T::BOUND_RTOL),
            })
        })
        .collect()
}

/// One row of the rank bound `C1 B^(-1/β) < r < C2 B^(-1/β)`, in natural logs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankCheck<T> {
    pub rank: usize,
    pub log_base: T,
    /// `log(C1 B^(-1/β))`.
    pub log_lower: T,
    /// `log(C2 B^(-1/β))`.
    pub log_upper: T,
    pub ok: bool,
}

impl<T: Scalar> RankCheck<T> {
    pub fn lower(&self) -> T {
        self.log_lower.exp()
    }

    pub fn upper(&self) -> T {
        self.log_upper.exp()
    }
}

/// Checks the rank bounds for each ranked word, solving for the exponent first.
pub fn verify_rank_bounds<T: Scalar>(
    kb: &Keyboard<T>,
    ranked: &[RankedWord<T>],
) -> Result<Vec<RankCheck<T>>> {
    let report = solve_root(kb)?;
    Ok(rank_bounds_with(&report, ranked))
}

/// Rank-bound check against an already solved exponent report.
pub fn rank_bounds_with<T: Scalar>(
    report: &ExponentReport<T>,
    ranked: &[RankedWord<T>],
) -> Vec<RankCheck<T>> {
    let log_c1 = report.c1.ln();
    let log_c2 = report.c2.ln();
    ranked
        .iter()
        .map(|rw| {
            let shift = -report.u * rw.word.log_base;
            let log_lower = log_c1 + shift;
            let log_upper = log_c2 + shift;
            let log_r = T::of_usize(rw.rank).ln();
            RankCheck {
                rank: rw.rank,
                log_base: rw.word.log_base,
                log_lower,
                log_upper,
                ok: log_lower < log_r && log_r < log_upper,
            }
        })
        .collect()
}
