//! The power-law exponent -β and the constants of the counting bounds.
//!
//! The exponent is found from `Σ q_i^u = 1` with `u = 1/β`. The left side is
//! strictly decreasing in `u`, equals `K - 1 > 0` as `u -> 0` and `-s < 0` at
//! `u = 1`, so the root is bracketed in `(0, 1)` before any iteration starts.
//! The characteristic root of `Σ X^(-α_i) = 1` then follows as
//! `R0 = q_1^(-u)`.

use crate::error::{Error, Result};
use crate::keyboard::{alphas, Keyboard};
use crate::scalar::{compensated_sum, Scalar};

const MAX_BISECTIONS: usize = 200;
const MAX_NEWTON_STEPS: usize = 4;

/// Everything the exponent solver derives from a keyboard.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentReport<T> {
    /// Characteristic root, `Σ R0^(-α_i) = 1`, `R0 > 1`.
    pub r0: T,
    /// `β > 1`; the log-log slope is `-β`.
    pub beta: T,
    /// `1 / β`, the root of `Σ q_i^u = 1`.
    pub u: T,
    pub alphas: Vec<T>,
    /// Lower-bound constant of the counting function, in (0,1).
    pub b: T,
    /// `b / R0`.
    pub c1: T,
    /// `R0 / (R0 - 1)`.
    pub c2: T,
    /// `|Σ q_i^u - 1|` at the returned root.
    pub residual: T,
}

impl<T: Scalar> ExponentReport<T> {
    /// The log-log slope `-β`.
    pub fn slope(&self) -> T {
        -self.beta
    }

    /// `Σ R0^(-α_i) - 1`, the defect in the characteristic equation.
    pub fn root_defect(&self) -> T {
        let log_r0 = self.r0.ln();
        compensated_sum(self.alphas.iter().map(|&a| (-a * log_r0).exp())) - T::one()
    }
}

fn defect<T: Scalar>(log_q: &[T], u: T) -> T {
    compensated_sum(log_q.iter().map(|&l| (u * l).exp())) - T::one()
}

fn defect_slope<T: Scalar>(log_q: &[T], u: T) -> T {
    compensated_sum(log_q.iter().map(|&l| l * (u * l).exp()))
}

/// Solves for `u = 1/β`, then fills in `R0`, `b`, `C1`, `C2`.
///
/// Bisection narrows the bracket to floating-point resolution and a few Newton
/// steps polish the result; a Newton step is kept only if it stays in the
/// bracket and lowers the residual.
pub fn solve_root<T: Scalar>(kb: &Keyboard<T>) -> Result<ExponentReport<T>> {
    let log_q = kb.log_q();
    let (mut lo, mut hi) = (T::zero(), T::one());
    let two = T::of(2.0);
    for _ in 0..MAX_BISECTIONS {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if defect(log_q, mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut u = (lo + hi) / two;
    let mut residual = defect(log_q, u).abs();
    for _ in 0..MAX_NEWTON_STEPS {
        if residual == T::zero() {
            break;
        }
        let g = defect(log_q, u);
        let step = g / defect_slope(log_q, u);
        let next = u - step;
        if !(next > T::zero() && next < T::one()) {
            break;
        }
        let next_residual = defect(log_q, next).abs();
        if next_residual >= residual {
            break;
        }
        u = next;
        residual = next_residual;
    }

    let beta = T::one() / u;
    let r0 = (-u * kb.log_q()[0]).exp();
    let alphas = alphas(kb);
    let b = compute_b(r0, &alphas)?;
    let report = ExponentReport {
        r0,
        beta,
        u,
        alphas,
        b,
        c1: b / r0,
        c2: r0 / (r0 - T::one()),
        residual,
    };

    if !(report.beta > T::one()) {
        return Err(Error::Invariant(format!(
            "exponent beta={} is not strictly greater than 1",
            report.beta
        )));
    }
    let root_defect = report.root_defect();
    if root_defect.abs() > T::ROOT_TOL {
        return Err(Error::Invariant(format!(
            "characteristic equation defect {root_defect} exceeds {}",
            T::ROOT_TOL
        )));
    }
    Ok(report)
}

/// Lower-bound constant `b` of the counting function.
///
/// The sequence `b_1 = 1/R0`, `b_{i+1} = b_i Σ_{α_j <= i} R0^(-α_j)` is
/// constant once `i >= α_K` (the sum is then the full characteristic sum, 1),
/// so its limit is the finite product over `i = 1 .. ceil(α_K) - 1`.
pub fn compute_b<T: Scalar>(r0: T, alphas: &[T]) -> Result<T> {
    if !(r0 > T::one()) {
        return Err(Error::invalid(format!("R0={r0} must exceed 1")));
    }
    if alphas.first() != Some(&T::one()) {
        return Err(Error::invalid("alphas must start at 1"));
    }
    if alphas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("alphas must be non-decreasing"));
    }
    let log_r0 = r0.ln();
    let alpha_max = alphas[alphas.len() - 1];

    let mut b = T::one() / r0;
    let mut partial = T::zero();
    let mut carry = T::zero();
    let mut next = 0;
    let mut i = T::one();
    while i < alpha_max {
        while next < alphas.len() && alphas[next] <= i {
            // running Neumaier sum of R0^(-α_j) over α_j <= i
            let v = (-alphas[next] * log_r0).exp();
            let t = partial + v;
            if partial.abs() >= v {
                carry = carry + ((partial - t) + v);
            } else {
                carry = carry + ((v - t) + partial);
            }
            partial = t;
            next += 1;
        }
        b = b * (partial + carry);
        i = i + T::one();
    }
    Ok(b)
}

/// Closed-form slope `-β = log(1-s)/log K - 1` for equal letter probabilities.
pub fn miller_exponent<T: Scalar>(k: usize, s: T) -> Result<T> {
    if k < 2 {
        return Err(Error::invalid(format!("need K >= 2 letters, got {k}")));
    }
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::invalid(format!(
            "space probability {s} not in (0,1)"
        )));
    }
    Ok((T::one() - s).ln() / T::of_usize(k).ln() - T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keyboard::miller_keyboard;

    /// Plain bisection on Σ q^u = 1, no polishing, as an independent check.
    fn bisect_u(q: &[f64]) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if q.iter().map(|p| p.powf(mid)).sum::<f64>() > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn miller_26_matches_closed_form() {
        let kb = miller_keyboard(26, 0.18).unwrap();
        let rep = solve_root(&kb).unwrap();
        let closed = 0.82f64.ln() / 26f64.ln() - 1.0;
        assert!((rep.slope() - closed).abs() <= 1e-12);
        assert!((rep.slope() - (-1.0609)).abs() < 1e-4);
        assert!((rep.r0 - 26.0).abs() / 26.0 < 1e-10);
        assert!(rep.residual <= 1e-13);
        assert!((rep.b - 1.0 / 26.0).abs() < 1e-12);
    }

    #[test]
    fn golden_keyboard() {
        let kb = Keyboard::new(vec![0.5, 0.25], 0.25).unwrap();
        let rep = solve_root(&kb).unwrap();
        let x = (5f64.sqrt() - 1.0) / 2.0;
        assert!((0.5f64.powf(rep.u) - x).abs() < 1e-12);
        assert!((rep.u - bisect_u(kb.q())).abs() < 1e-12);
        assert!((rep.beta - 1.440_420_090_412_556_8).abs() < 1e-12);
        assert!((rep.r0 - 1.0 / x).abs() < 1e-12);
        assert!((rep.b - x * x).abs() < 1e-12);
        assert!((rep.c1 - x * x * x).abs() < 1e-12);
        assert!((rep.c2 - (1.0 / x) / (1.0 / x - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn b_by_direct_recursion() {
        // two explicit steps: b1 = 1/R0, b2 = b1 * R0^-1, b3 = b2 * (R0^-1 + R0^-2) = b2
        let r0 = (1.0 + 5f64.sqrt()) / 2.0;
        let b1 = 1.0 / r0;
        let b2 = b1 * r0.powf(-1.0);
        assert!((compute_b(r0, &[1.0, 2.0]).unwrap() - b2).abs() < 1e-15);
        assert!((compute_b(26.0f64, &[1.0; 26]).unwrap() - 1.0 / 26.0).abs() < 1e-15);
    }

    #[test]
    fn b_rejects_bad_input() {
        assert!(compute_b(1.0, &[1.0, 2.0]).is_err());
        assert!(compute_b(2.0, &[1.5, 2.0]).is_err());
        assert!(compute_b(2.0, &[1.0, 3.0, 2.0]).is_err());
    }

    #[test]
    fn miller_exponent_examples() {
        let v: f64 = miller_exponent(26, 0.18).unwrap();
        assert!((v - (-1.060_910_085_507_886_8)).abs() < 1e-12);
        // log(0.82)/log(1e6) - 1, evaluated independently
        let v: f64 = miller_exponent(1_000_000, 0.18).unwrap();
        assert!((v - (-1.014_364_357_936_047_3)).abs() < 1e-12);
        let v: f64 = miller_exponent(7, 1e-300).unwrap();
        assert_eq!(v, -1.0);
        assert!(miller_exponent::<f64>(1, 0.2).is_err());
        assert!(miller_exponent::<f64>(5, 1.0).is_err());
    }

    #[test]
    fn equal_probabilities_agree_with_closed_form() {
        for &k in &[2usize, 3, 5, 26, 100, 1000] {
            for &s in &[0.01, 0.18, 0.5, 0.9] {
                let kb = miller_keyboard(k, s).unwrap();
                let rep = solve_root(&kb).unwrap();
                let closed: f64 = miller_exponent(k, s).unwrap();
                assert!((rep.slope() - closed).abs() <= 1e-12, "K={k} s={s}");
                assert!((rep.r0 - k as f64).abs() / k as f64 <= 1e-10);
            }
        }
    }

    #[test]
    fn f32_solver_agrees_roughly() {
        let kb32: Keyboard<f32> = miller_keyboard(26, 0.18f32).unwrap();
        let rep = solve_root(&kb32).unwrap();
        assert!((rep.beta - 1.060_91f32).abs() < 1e-4);
    }
}
