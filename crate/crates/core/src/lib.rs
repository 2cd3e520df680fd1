//! The monkey-at-the-typewriter model of word frequencies with arbitrary
//! letter probabilities.
//!
//! A keyboard has K letters with probabilities `q_1 >= ... >= q_K` and a space
//! with probability `s`. Words are letter strings closed by a space; ranking
//! them by probability gives a power law whose log-log slope `-β` is fixed by
//! `Σ q_i^(1/β) = 1`. This crate
//!
//! * solves for `β` and the constants of the rank bounds ([`exponent`]),
//! * enumerates words in exact rank order and counts them by base value
//!   ([`enumerate`]),
//! * builds keyboards from random divisions of the unit interval
//!   ([`keyboard`]),
//! * and measures how `-β` approaches `-1` as K grows ([`analysis`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the `f64` instantiation used by the command-line tool.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod enumerate;
pub mod error;
pub mod exponent;
pub mod io;
pub mod keyboard;
pub mod scalar;

pub use analysis::{
    convergence_sweep, figure1_data, figure_keyboard, fit_loglog_slope, mu_bar,
    shao_hahn_statistic, verify_proposition1, FigureKind, ShaoHahnReport, SweepRow, SweepTable,
    BETA32_ENTROPY, EULER_GAMMA,
};
pub use enumerate::{
    brute_force_top_n, count_n, top_n, verify_csiszar_bounds, verify_rank_bounds, CountingTable,
};
pub use error::{Error, Result};
pub use exponent::{compute_b, miller_exponent, solve_root};
pub use keyboard::{
    alphas, keyboard_from_spacings, miller_keyboard, sample_spacings, DistributionSpec,
    QuantileTable, SpacingsSample,
};
pub use scalar::Scalar;

pub type Keyboard = keyboard::Keyboard<f64>;
pub type Keyboard32 = keyboard::Keyboard<f32>;
pub type ExponentReport = exponent::ExponentReport<f64>;
pub type Word = enumerate::Word<f64>;
pub type RankedWord = enumerate::RankedWord<f64>;
pub type CountReport = enumerate::CountReport<f64>;
pub type CsiszarCheck = enumerate::CsiszarCheck<f64>;
pub type RankCheck = enumerate::RankCheck<f64>;
pub type LogLogSeries = analysis::LogLogSeries<f64>;
pub type LineFit = analysis::LineFit<f64>;
pub type Prop1Check = analysis::Prop1Check<f64>;
