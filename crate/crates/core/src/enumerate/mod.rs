//! Exact rank-ordered enumeration of word base values, and the word-counting
//! function with its bound checks.
//!
//! A word's base value is the product of its letter probabilities (its
//! probability divided by `s`). Everything here works with natural-log base
//! values, which stay finite far past the point where raw products underflow.
//!
//! Ranks follow a total order: larger base value first, ties (within
//! [`Scalar::TIE_TOL`]) broken by shorter word first, then lexicographically by
//! letter index.

mod bounds;
mod counting;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::keyboard::Keyboard;
use crate::scalar::Scalar;

pub use bounds::{
    csiszar_bounds_with, rank_bounds_with, verify_csiszar_bounds, verify_rank_bounds, CsiszarCheck,
    RankCheck,
};
pub use counting::{count_n, CountReport, CountingTable, DEFAULT_NODE_BUDGET, DEFAULT_T_CAP};

/// Default cap on the number of live frontier entries in [`top_n`].
pub const DEFAULT_FRONTIER_BUDGET: usize = 1 << 27;

/// Word count ceiling for [`brute_force_top_n`].
pub const BRUTE_FORCE_GUARD: u128 = 10_000_000;

/// A finite letter sequence ending in a space.
#[derive(Debug, Clone, PartialEq)]
pub struct Word<T> {
    /// Zero-based letter indices (index 0 is the most probable letter).
    pub letters: Vec<u32>,
    /// `Σ log q` over the letters, accumulated left to right; 0 for the null word.
    pub log_base: T,
}

impl<T: Scalar> Word<T> {
    pub fn null() -> Self {
        Word {
            letters: Vec::new(),
            log_base: T::zero(),
        }
    }

    pub fn from_letters(kb: &Keyboard<T>, letters: Vec<u32>) -> Result<Self> {
        let log_q = kb.log_q();
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= log_q.len()) {
            return Err(Error::invalid(format!(
                "letter index {bad} out of range for K={}",
                log_q.len()
            )));
        }
        let log_base = letters
            .iter()
            .fold(T::zero(), |acc, &l| acc + log_q[l as usize]);
        Ok(Word { letters, log_base })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// One-based, dot-separated letter labels; empty for the null word.
    pub fn label(&self) -> String {
        let mut out = String::with_capacity(self.letters.len() * 3);
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            out.push_str(&(l + 1).to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedWord<T> {
    /// 1-based rank; rank 1 is the null word.
    pub rank: usize,
    pub word: Word<T>,
}

/// Tie-break among equal base values: shorter first, then lexicographic.
pub fn canonical_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// `Less` when `(log_a, a)` ranks ahead of `(log_b, b)`.
pub fn rank_order<T: Scalar>(log_a: T, a: &[u32], log_b: T, b: &[u32]) -> Ordering {
    if (log_a - log_b).abs() <= T::TIE_TOL {
        canonical_cmp(a, b)
    } else if log_a > log_b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Frontier entry. `prefix_log` is the log base of the word minus its last
/// letter, which lets a sibling be priced without re-summing.
struct Pending<T> {
    log_base: T,
    prefix_log: T,
    letters: Vec<u32>,
}

impl<T: Scalar> PartialEq for Pending<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Pending<T> {}

impl<T: Scalar> PartialOrd for Pending<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Pending<T> {
    // BinaryHeap pops the maximum, so the earliest-ranked word must compare greatest.
    fn cmp(&self, other: &Self) -> Ordering {
        rank_order(other.log_base, &other.letters, self.log_base, &self.letters)
    }
}

/// The `n` highest-ranked words with the default frontier budget.
pub fn top_n<T: Scalar>(kb: &Keyboard<T>, n: usize) -> Result<Vec<RankedWord<T>>> {
    top_n_with_budget(kb, n, DEFAULT_FRONTIER_BUDGET)
}

/// Best-first enumeration of the `n` highest-ranked words.
///
/// Every non-null word has one predecessor that ranks strictly ahead of it:
/// drop the last letter if it is letter 0, otherwise step the last letter back
/// by one (never a smaller probability, and lexicographically earlier on a
/// tie). Popping a word therefore only has to push its first child `w·0` and
/// its next sibling, and the frontier never holds more than `n + 1` entries.
pub fn top_n_with_budget<T: Scalar>(
    kb: &Keyboard<T>,
    n: usize,
    frontier_budget: usize,
) -> Result<Vec<RankedWord<T>>> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let log_q = kb.log_q();
    let last_letter = (kb.k() - 1) as u32;

    let mut out = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    heap.push(Pending {
        log_base: T::zero(),
        prefix_log: T::zero(),
        letters: Vec::new(),
    });

    while out.len() < n {
        let Some(cur) = heap.pop() else {
            // the word tree is infinite, the frontier cannot drain
            unreachable!("frontier drained");
        };

        let mut child = Vec::with_capacity(cur.letters.len() + 1);
        child.extend_from_slice(&cur.letters);
        child.push(0);
        heap.push(Pending {
            log_base: cur.log_base + log_q[0],
            prefix_log: cur.log_base,
            letters: child,
        });

        if let Some(&last) = cur.letters.last() {
            if last < last_letter {
                let mut sibling = cur.letters.clone();
                *sibling.last_mut().expect("non-empty") = last + 1;
                heap.push(Pending {
                    log_base: cur.prefix_log + log_q[last as usize + 1],
                    prefix_log: cur.prefix_log,
                    letters: sibling,
                });
            }
        }

        if heap.len() > frontier_budget {
            return Err(Error::Resource {
                what: "top_n frontier",
                limit: frontier_budget as u128,
                requested: heap.len() as u128,
            });
        }

        out.push(RankedWord {
            rank: out.len() + 1,
            word: Word {
                letters: cur.letters,
                log_base: cur.log_base,
            },
        });
    }
    Ok(out)
}

/// Exhaustive oracle for [`top_n`]: every word of length `<= max_len`, fully
/// sorted, first `n` kept.
///
/// Fails with [`Error::TruncationUnsafe`] unless the rank-`n` base value
/// exceeds `q1^max_len`, which guarantees no longer word could outrank it.
pub fn brute_force_top_n<T: Scalar>(
    kb: &Keyboard<T>,
    n: usize,
    max_len: usize,
) -> Result<Vec<RankedWord<T>>> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let k = kb.k() as u128;
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(k);
    }
    if total > BRUTE_FORCE_GUARD {
        return Err(Error::Resource {
            what: "brute-force word count",
            limit: BRUTE_FORCE_GUARD,
            requested: total,
        });
    }
    if (total as usize) < n {
        return Err(Error::TruncationUnsafe { rank: n, max_len });
    }

    let mut words: Vec<Word<T>> = Vec::with_capacity(total as usize);
    words.push(Word::null());
    let mut start = 0;
    for _ in 0..max_len {
        let end = words.len();
        for idx in start..end {
            for l in 0..kb.k() as u32 {
                let mut letters = words[idx].letters.clone();
                letters.push(l);
                words.push(Word::from_letters(kb, letters)?);
            }
        }
        start = end;
    }

    words.sort_by(|a, b| rank_order(a.log_base, &a.letters, b.log_base, &b.letters));
    words.truncate(n);

    let floor = T::of_usize(max_len) * kb.log_q()[0];
    if !(words[n - 1].log_base > floor) {
        return Err(Error::TruncationUnsafe { rank: n, max_len });
    }

    Ok(words
        .into_iter()
        .enumerate()
        .map(|(i, word)| RankedWord { rank: i + 1, word })
        .collect())
}
