//! Log-domain building blocks shared by both boundary cases.
//!
//! The double-summation pass is written for the ND orientation (inner sums
//! run from the left end, outer sums to the right).

use crate::exponent::Exponent;
use crate::logspace::log_add_exp;

/// Result of the double-summation pass over a function supported on `[0, end]`.
pub(crate) struct DoubleSum {
    /// `ln sum_{j=i}^{end} inner_j`, `-inf` past `end`.
    pub log_tail: Vec<f64>,
    /// `ln (nuhat_j A_j^(p*-1))` with `A_j = sum_{k<=j} mu_k f_k^(p-1)`.
    pub log_inner: Vec<f64>,
}

pub(crate) fn double_sum(
    log_mu: &[f64],
    log_nuhat: &[f64],
    log_f: &[f64],
    end: usize,
    e: &Exponent,
) -> DoubleSum {
    let len = log_f.len();
    let pm1 = e.pm1();
    let qm1 = e.pstar_m1();
    let mut log_inner = vec![f64::NEG_INFINITY; len];
    let mut acc = f64::NEG_INFINITY;
    for j in 0..=end {
        acc = log_add_exp(acc, log_mu[j] + pm1 * log_f[j]);
        log_inner[j] = log_nuhat[j] + qm1 * acc;
    }
    let mut log_tail = vec![f64::NEG_INFINITY; len];
    let mut acc = f64::NEG_INFINITY;
    for i in (0..=end).rev() {
        acc = log_add_exp(acc, log_inner[i]);
        log_tail[i] = acc;
    }
    DoubleSum {
        log_tail,
        log_inner,
    }
}

/// `ln sum_k mu_k f_k^p`.
pub(crate) fn log_mass(log_mu: &[f64], log_f: &[f64], p: f64) -> f64 {
    log_mu
        .iter()
        .zip(log_f)
        .fold(f64::NEG_INFINITY, |acc, (m, f)| log_add_exp(acc, m + p * f))
}

/// `ln sum_k nu_k step_k^p`; the steps are the exact increments of the function.
pub(crate) fn log_dirichlet(log_nu: &[f64], log_step: &[f64], p: f64) -> f64 {
    log_nu
        .iter()
        .zip(log_step)
        .fold(f64::NEG_INFINITY, |acc, (v, s)| log_add_exp(acc, v + p * s))
}

/// Shift so the largest finite entry is zero. The operators are degree-0
/// homogeneous, so this only keeps iterates well scaled.
pub(crate) fn renormalize(log_f: &mut [f64], log_step: &mut [f64]) {
    let top = log_f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top.is_finite() {
        log_f.iter_mut().for_each(|x| *x -= top);
        log_step.iter_mut().for_each(|x| *x -= top);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_two_state() {
        // mu = nu = 1, f = (1, 1), p = 2: A = (1, 2), tail = (3, 2).
        let e = Exponent::new(2.0).unwrap();
        let ds = double_sum(&[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0], 1, &e);
        assert!((ds.log_tail[0].exp() - 3.0).abs() < 1e-14);
        assert!((ds.log_tail[1].exp() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn truncated_support() {
        let e = Exponent::new(3.0).unwrap();
        let ds = double_sum(&[0.0; 3], &[0.0; 3], &[0.0, 0.0, f64::NEG_INFINITY], 1, &e);
        assert_eq!(ds.log_tail[2], f64::NEG_INFINITY);
        assert!(ds.log_tail[0].is_finite());
    }
}
