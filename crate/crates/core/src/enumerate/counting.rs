use crate::error::{Error, Result};
use crate::exponent::solve_root;
use crate::keyboard::{alphas, Keyboard};
use crate::scalar::Scalar;

/// Largest counting horizon accepted without an explicit override.
pub const DEFAULT_T_CAP: f64 = 30.0;

/// Maximum number of distinct letter multisets visited while counting.
pub const DEFAULT_NODE_BUDGET: usize = 50_000_000;

/// `N(t)` and `N_cum(t)` at one horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountReport<T> {
    pub t: T,
    /// Words with `log_{q1} B` in `(t-1, t]`.
    pub n: u128,
    /// Words with `log_{q1} B <= t`.
    pub n_cum: u128,
}

/// Exact distribution of `log_{q1} B = Σ α` over all words up to a horizon.
///
/// Words are grouped by their letter multiset: a multiset with counts
/// `n_1..n_K` stands for `(Σ n_j)! / Π n_j!` words sharing one α-sum. The
/// multisets are walked depth-first with letters in non-decreasing α order, so
/// a branch is cut as soon as the next letter overshoots the horizon.
#[derive(Debug, Clone)]
pub struct CountingTable<T> {
    t_max: T,
    alphas: Vec<T>,
    /// α-sums, ascending.
    sums: Vec<T>,
    /// `cum[i]` = number of words whose α-sum is among `sums[..i]`.
    cum: Vec<u128>,
}

struct Node<T> {
    sum: T,
    len: u32,
    last: usize,
    last_count: u32,
    multiplicity: u128,
}

impl<T: Scalar> CountingTable<T> {
    pub fn build(kb: &Keyboard<T>, t_max: T) -> Result<Self> {
        Self::build_with_limits(kb, t_max, T::of(DEFAULT_T_CAP), DEFAULT_NODE_BUDGET)
    }

    pub fn build_with_limits(
        kb: &Keyboard<T>,
        t_max: T,
        cap: T,
        node_budget: usize,
    ) -> Result<Self> {
        if !(t_max >= T::zero()) {
            return Err(Error::invalid(format!("t={t_max} must be non-negative")));
        }
        if t_max > cap {
            let estimate = match solve_root(kb) {
                Ok(rep) => rep.r0.powf(t_max),
                Err(_) => T::of_usize(kb.k()).powf(t_max),
            };
            return Err(Error::CountCap {
                t: t_max.to_f64().unwrap_or(f64::NAN),
                cap: cap.to_f64().unwrap_or(f64::NAN),
                estimate: estimate.to_f64().unwrap_or(f64::INFINITY),
            });
        }

        let alphas = alphas(kb);
        let limit = t_max + T::TIE_TOL;
        let mut entries: Vec<(T, u128)> = Vec::new();
        let mut stack = vec![Node {
            sum: T::zero(),
            len: 0,
            last: 0,
            last_count: 0,
            multiplicity: 1,
        }];

        while let Some(node) = stack.pop() {
            entries.push((node.sum, node.multiplicity));
            if entries.len() > node_budget {
                return Err(Error::Resource {
                    what: "counting multisets",
                    limit: node_budget as u128,
                    requested: entries.len() as u128,
                });
            }
            let first = if node.len == 0 { 0 } else { node.last };
            for (j, &a) in alphas.iter().enumerate().skip(first) {
                let sum = node.sum + a;
                if sum > limit {
                    break;
                }
                let (count, factor_num, factor_den) = if node.len > 0 && j == node.last {
                    (node.last_count + 1, node.len + 1, node.last_count + 1)
                } else {
                    (1, node.len + 1, 1)
                };
                let multiplicity = node
                    .multiplicity
                    .checked_mul(factor_num as u128)
                    .ok_or(Error::CountOverflow)?
                    / factor_den as u128;
                stack.push(Node {
                    sum,
                    len: node.len + 1,
                    last: j,
                    last_count: count,
                    multiplicity,
                });
            }
        }

        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite sums"));
        let mut cum = Vec::with_capacity(entries.len() + 1);
        cum.push(0u128);
        let mut acc = 0u128;
        for &(_, m) in &entries {
            acc = acc.checked_add(m).ok_or(Error::CountOverflow)?;
            cum.push(acc);
        }
        Ok(CountingTable {
            t_max,
            alphas,
            sums: entries.into_iter().map(|e| e.0).collect(),
            cum,
        })
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn alphas(&self) -> &[T] {
        &self.alphas
    }

    /// Number of distinct letter multisets stored.
    pub fn multisets(&self) -> usize {
        self.sums.len()
    }

    fn covers(&self, t: T) -> Result<()> {
        if t > self.t_max + T::TIE_TOL {
            return Err(Error::invalid(format!(
                "t={t} beyond table horizon {}",
                self.t_max
            )));
        }
        Ok(())
    }

    /// Words with α-sum `<= t`; 0 for negative `t`.
    pub fn n_cum(&self, t: T) -> Result<u128> {
        self.covers(t)?;
        let idx = self.sums.partition_point(|&s| s <= t + T::TIE_TOL);
        Ok(self.cum[idx])
    }

    /// Words with α-sum in `(t-1, t]`.
    pub fn n(&self, t: T) -> Result<u128> {
        Ok(self.n_cum(t)? - self.n_cum(t - T::one())?)
    }

    pub fn report(&self, t: T) -> Result<CountReport<T>> {
        Ok(CountReport {
            t,
            n: self.n(t)?,
            n_cum: self.n_cum(t)?,
        })
    }
}

/// `N(t)` and `N_cum(t)` by exact enumeration, default limits.
pub fn count_n<T: Scalar>(kb: &Keyboard<T>, t: T) -> Result<CountReport<T>> {
    CountingTable::build(kb, t)?.report(t)
}
