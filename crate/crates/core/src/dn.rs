//! Estimators for chains with an absorbing left end and a reflecting right end.
//!
//! Index set `{1..N}`, `f_0 = 0`, `nu_{N+1} = 0`. Positions in the weight
//! vectors are labels minus one.

use crate::chain::{Case, Chain};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::kernel::{log_dirichlet, log_mass, renormalize};
use crate::logspace::{exp_diff, log_add_exp, log_prefix};
use crate::nd::arg_extreme;
use crate::ops::{
    basic_from_sigma, has_infinite, max_value, min_value, n_max_check, side_for, Bound, Cut,
    CutSeq, DeltaSeq, Improved, OpValue, ScanOptions, Sigma, SCAN_CAP,
};
use crate::tables::{nu_hat, PartialSumTable};
use crate::testfn::{Class, Operator, Side, TestFunction};

/// `sigma_p = sup_n mu[n,N] nuhat[1,n]^(p-1)`, first maximizer on ties.
pub fn sigma(chain: &Chain, e: &Exponent) -> Result<Sigma> {
    chain.expect_case(Case::Dn)?;
    let t = PartialSumTable::new(chain, e);
    let mut best = Sigma {
        value: 0.0,
        log_value: f64::NEG_INFINITY,
        argmax: 1,
    };
    for n in 0..chain.len() {
        let v = t.log_mu_sum[n] + e.pm1() * t.log_nuhat_sum[n];
        if v > best.log_value {
            best.log_value = v;
            best.argmax = n + 1;
        }
    }
    best.value = best.log_value.exp();
    Ok(best)
}

pub fn basic_bounds(chain: &Chain, e: &Exponent) -> Result<(f64, f64)> {
    Ok(basic_from_sigma(sigma(chain, e)?.log_value, e))
}

/// Double-summation pass in this orientation:
/// `inner_j = nuhat_j (sum_{k>=j} mu_k f_k^(p-1))^(p*-1)` and
/// `cum_i = sum_{j<=i} inner_j`, both in logs.
pub(crate) fn double_sum_dn(
    log_mu: &[f64],
    log_nuhat: &[f64],
    log_f: &[f64],
    e: &Exponent,
) -> (Vec<f64>, Vec<f64>) {
    let len = log_f.len();
    let (pm1, qm1) = (e.pm1(), e.pstar_m1());
    let mut inner = vec![0.0; len];
    let mut acc = f64::NEG_INFINITY;
    for k in (0..len).rev() {
        acc = log_add_exp(acc, log_mu[k] + pm1 * log_f[k]);
        inner[k] = log_nuhat[k] + qm1 * acc;
    }
    (log_prefix(&inner), inner)
}

/// Single-summation form
/// `I_i(f) = sum_{j>=i} mu_j f_j^(p-1) / (nu_i (f_i - f_{i-1})^(p-1))`.
///
/// `f` must be positive, strictly increasing up to some state and constant
/// afterwards. Zero increments come back as [`OpValue::Infinite`].
pub fn op_i(chain: &Chain, e: &Exponent, f: &[f64]) -> Result<Vec<OpValue>> {
    chain.expect_case(Case::Dn)?;
    crate::forms::check_len(chain, f.len())?;
    if !(f[0] > 0.0 && f.iter().all(|x| x.is_finite())) {
        return Err(Error::inadmissible(
            Class::FI,
            "f must be finite with f_1 > 0",
        ));
    }
    let m = (0..f.len() - 1)
        .find(|&i| f[i + 1] == f[i])
        .unwrap_or(f.len() - 1);
    if let Some(i) = (0..m).find(|&i| f[i + 1] <= f[i]) {
        return Err(Error::inadmissible(
            Class::FI,
            format!("f is not strictly increasing at state {}", i + 2),
        ));
    }
    if let Some(i) = (m..f.len()).find(|&i| f[i] != f[m]) {
        return Err(Error::inadmissible(
            Class::FTildeI,
            format!("f is not constant after its plateau starts (state {})", i + 1),
        ));
    }
    let pm1 = e.pm1();
    let mut out = vec![OpValue::Infinite; f.len()];
    let mut acc = f64::NEG_INFINITY;
    for i in (0..f.len()).rev() {
        acc = log_add_exp(acc, chain.log_mu()[i] + pm1 * f[i].ln());
        let diff = f[i] - if i > 0 { f[i - 1] } else { 0.0 };
        if diff > 0.0 {
            out[i] = OpValue::Value((acc - chain.log_nu()[i] - pm1 * diff.ln()).exp());
        }
    }
    Ok(out)
}

/// Double-summation form; `f` must be positive everywhere.
pub fn op_ii(chain: &Chain, e: &Exponent, f: &[f64]) -> Result<Vec<OpValue>> {
    chain.expect_case(Case::Dn)?;
    crate::forms::check_len(chain, f.len())?;
    if let Some(i) = f.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::inadmissible(
            Class::FII,
            format!("f must be positive (state {})", i + 1),
        ));
    }
    let log_f: Vec<f64> = f.iter().map(|x| x.ln()).collect();
    Ok(op_ii_log(chain, e, &log_f))
}

pub(crate) fn op_ii_log(chain: &Chain, e: &Exponent, log_f: &[f64]) -> Vec<OpValue> {
    let nh = nu_hat(chain, e);
    let (cum, _) = double_sum_dn(chain.log_mu(), &nh.log_nuhat, log_f, e);
    cum.iter()
        .zip(log_f)
        .map(|(c, f)| OpValue::Value((e.pm1() * (c - f)).exp()))
        .collect()
}

fn check_ratios(w: &[f64]) -> Result<()> {
    if let Some(i) = w.iter().position(|x| !(x.is_finite() && *x >= 1.0)) {
        return Err(Error::inadmissible(
            Class::W,
            format!("ratio {} at state {} is below 1", w[i], i + 1),
        ));
    }
    if let Some(first) = w.iter().position(|x| *x == 1.0) {
        if let Some(i) = (first..w.len()).find(|&i| w[i] != 1.0) {
            return Err(Error::inadmissible(
                Class::WTilde,
                format!("ratio at state {} must stay 1 after the first 1", i + 1),
            ));
        }
    }
    Ok(())
}

fn difference_form(chain: &Chain, e: &Exponent, w: &[f64], log_mu: &[f64]) -> Vec<OpValue> {
    let pm1 = e.pm1();
    let lnu = chain.log_nu();
    let last = w.len() - 1;
    (0..w.len())
        .map(|i| {
            // w_0 = inf makes the first factor exactly 1.
            let gain = if i == 0 {
                lnu[0]
            } else {
                let v = w[i - 1];
                lnu[i] + pm1 * ((v - 1.0).ln() - v.ln())
            } - log_mu[i];
            let loss = if i == last {
                f64::NEG_INFINITY
            } else {
                lnu[i + 1] + pm1 * (w[i] - 1.0).ln() - log_mu[i]
            };
            OpValue::Value(exp_diff(gain, loss))
        })
        .collect()
}

/// Difference form
/// `R_i(w) = mu_i^-1 [nu_i (1 - 1/w_{i-1})^(p-1) - nu_{i+1} (w_i - 1)^(p-1)]`
/// with `w_0 = inf` and `nu_{N+1} = 0`.
///
/// `w >= 1` everywhere and, once it hits 1, it stays 1.
pub fn op_r(chain: &Chain, e: &Exponent, w: &[f64]) -> Result<Vec<OpValue>> {
    chain.expect_case(Case::Dn)?;
    crate::forms::check_len(chain, w.len())?;
    check_ratios(w)?;
    Ok(difference_form(chain, e, w, chain.log_mu()))
}

/// The difference form with `mu_m` replaced by `sum_{k>=m} mu_k`; `w` must
/// equal 1 from state `m` on.
pub fn op_rtilde(chain: &Chain, e: &Exponent, w: &[f64], m: usize) -> Result<Vec<OpValue>> {
    chain.expect_case(Case::Dn)?;
    crate::forms::check_len(chain, w.len())?;
    check_ratios(w)?;
    let tilde = chain.dn_tilde_mu(m)?;
    if let Some(i) = (m - 1..w.len()).find(|&i| w[i] != 1.0) {
        return Err(Error::inadmissible(
            Class::WTilde,
            format!("ratio at state {} must be 1 from the cut {m} on", i + 1),
        ));
    }
    let mut log_mu = chain.log_mu().to_vec();
    log_mu[m - 1] = tilde.log_tilde_mu_m;
    Ok(difference_form(chain, e, w, &log_mu))
}

pub fn bound_from_test_function(
    chain: &Chain,
    e: &Exponent,
    candidate: &TestFunction,
    side: Side,
) -> Result<Bound> {
    chain.expect_case(Case::Dn)?;
    side_for(candidate, side)?;
    candidate.validate(chain, e)?;
    let class = candidate.class;
    let f = &candidate.values;
    let (index, value) = match (class.operator().expect("classified"), side) {
        (Operator::Single, Side::Lower) => {
            let vals = op_i(chain, e, f)?;
            if let Some(i) = has_infinite(&vals) {
                return Err(Error::inadmissible(
                    class,
                    format!("zero increment at state {}", i + 1),
                ));
            }
            let (i, v) = max_value(&vals).expect("nonempty");
            (i, 1.0 / v)
        }
        (Operator::Single, Side::Upper) => {
            let (i, v) = min_value(&op_i(chain, e, f)?).expect("f_1 > 0");
            (i, 1.0 / v)
        }
        (Operator::Double, Side::Lower) => {
            let (i, v) = max_value(&op_ii(chain, e, f)?).expect("nonempty");
            (i, 1.0 / v)
        }
        (Operator::Double, Side::Upper) => {
            let (i, v) = min_value(&op_ii(chain, e, f)?).expect("nonempty");
            (i, 1.0 / v)
        }
        (Operator::Difference, Side::Lower) => min_value(&op_r(chain, e, f)?).expect("nonempty"),
        (Operator::Difference, Side::Upper) => {
            let m = candidate.support_end.expect("validated");
            max_value(&op_rtilde(chain, e, f, m)?).expect("nonempty")
        }
    };
    Ok(Bound {
        value,
        side,
        class,
        index: index + 1,
    })
}

/// `delta_n = sup_i II_i(f_n)` with `f_1 = nuhat[1, .]^(1/p*)`.
pub fn delta_seq(chain: &Chain, e: &Exponent, n_max: usize) -> Result<DeltaSeq> {
    chain.expect_case(Case::Dn)?;
    n_max_check(n_max)?;
    let nh = nu_hat(chain, e);
    let mut log_f: Vec<f64> = log_prefix(&nh.log_nuhat)
        .iter()
        .map(|x| x / e.pstar())
        .collect();
    let mut values = Vec::with_capacity(n_max);
    let mut argmax = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let (cum, _) = double_sum_dn(chain.log_mu(), &nh.log_nuhat, &log_f, e);
        let (i, v) = arg_extreme(cum.iter().zip(&log_f).map(|(c, f)| c - f), true);
        values.push((e.pm1() * v).exp());
        argmax.push(i + 1);
        if n + 1 < n_max {
            log_f = cum;
            let mut no_steps: [f64; 0] = [];
            renormalize(&mut log_f, &mut no_steps);
        }
    }
    Ok(DeltaSeq {
        values,
        argmax,
        final_log_f: log_f,
    })
}

/// `delta'_n` and `delta-bar_n` over `f_1^(m) = nuhat[1, . ^ m]`,
/// `f_{n+1}^(m) = (f_n II(f_n)^(p*-1))(. ^ m)`; the family has one index only.
pub fn cut_sequences(
    chain: &Chain,
    e: &Exponent,
    n_max: usize,
    opts: &ScanOptions,
) -> Result<(CutSeq, CutSeq)> {
    chain.expect_case(Case::Dn)?;
    n_max_check(n_max)?;
    opts.check(chain.n())?;
    let nh = nu_hat(chain, e);
    let (lmu, lnu, lnh) = (chain.log_mu(), chain.log_nu(), &nh.log_nuhat);
    let len = lmu.len();
    let (p, pm1) = (e.p(), e.pm1());
    let head = log_prefix(lnh);
    let mut prime = vec![(f64::NEG_INFINITY, Cut { plateau: None, cut: 1, argmin: None }); n_max];
    let mut bar = prime.clone();
    for m in opts.cuts(0, len - 1) {
        let mut log_f: Vec<f64> = (0..len).map(|i| head[i.min(m)]).collect();
        let mut log_step: Vec<f64> = (0..len)
            .map(|i| if i <= m { lnh[i] } else { f64::NEG_INFINITY })
            .collect();
        for n in 0..n_max {
            let (cum, inner) = double_sum_dn(lmu, lnh, &log_f, e);
            let (i, v) = arg_extreme(cum.iter().zip(&log_f).map(|(c, f)| c - f), false);
            let cut = Cut {
                plateau: None,
                cut: m + 1,
                argmin: Some(i + 1),
            };
            if pm1 * v > prime[n].0 {
                prime[n] = (pm1 * v, cut);
            }
            let rq = log_mass(lmu, &log_f, p) - log_dirichlet(lnu, &log_step, p);
            if rq > bar[n].0 {
                bar[n] = (rq, Cut { argmin: None, ..cut });
            }
            if n + 1 < n_max {
                log_f = (0..len).map(|i| cum[i.min(m)]).collect();
                log_step = (0..len)
                    .map(|i| if i <= m { inner[i] } else { f64::NEG_INFINITY })
                    .collect();
                renormalize(&mut log_f, &mut log_step);
            }
        }
    }
    let exhaustive = opts.stride == 1;
    let collect = |rs: Vec<(f64, Cut)>| CutSeq {
        values: rs.iter().map(|r| r.0.exp()).collect(),
        cuts: rs.iter().map(|r| r.1).collect(),
        exhaustive,
    };
    Ok((collect(prime), collect(bar)))
}

pub fn delta_prime_seq(chain: &Chain, e: &Exponent, n_max: usize) -> Result<CutSeq> {
    Ok(cut_sequences(chain, e, n_max, &ScanOptions::default())?.0)
}

pub fn delta_bar_seq(chain: &Chain, e: &Exponent, n_max: usize) -> Result<CutSeq> {
    Ok(cut_sequences(chain, e, n_max, &ScanOptions::default())?.1)
}

fn lse(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(f64::NEG_INFINITY, log_add_exp)
}

/// First-step values from the closed forms, by direct summation.
pub fn improved_estimates(chain: &Chain, e: &Exponent) -> Result<Improved> {
    chain.expect_case(Case::Dn)?;
    if chain.n() > SCAN_CAP {
        return Err(Error::TooLarge {
            n: chain.n(),
            cap: SCAN_CAP,
        });
    }
    let nh = nu_hat(chain, e);
    let (lmu, lnh) = (chain.log_mu(), &nh.log_nuhat);
    let len = lmu.len();
    let (p, q) = (e.p(), e.pstar());
    let (pm1, qm1) = (e.pm1(), e.pstar_m1());
    // psi[k] = ln nuhat[1, k]
    let psi: Vec<f64> = (0..len).map(|k| lse(lnh[..=k].iter().copied())).collect();

    let outer: Vec<f64> = (0..len)
        .map(|j| lse((j..len).map(|k| lmu[k] + pm1 / q * psi[k])))
        .collect();
    let delta1 = (0..len)
        .map(|i| {
            let s = lse((0..=i).map(|j| lnh[j] + qm1 * outer[j]));
            pm1 * (s - psi[i] / q)
        })
        .fold(f64::NEG_INFINITY, f64::max);

    let delta1_prime = (0..len)
        .map(|m| {
            let mut acc = f64::NEG_INFINITY;
            let mut s = f64::NEG_INFINITY;
            for j in (0..len).rev() {
                acc = log_add_exp(acc, lmu[j] + pm1 * psi[j.min(m)]);
                if j <= m {
                    s = log_add_exp(s, lnh[j] + qm1 * acc);
                }
            }
            pm1 * (s - psi[m])
        })
        .fold(f64::NEG_INFINITY, f64::max);

    let delta_bar1 = (0..len)
        .map(|m| lse((0..len).map(|j| lmu[j] + p * psi[j.min(m)])) - psi[m])
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(Improved {
        delta1: delta1.exp(),
        delta1_prime: delta1_prime.exp(),
        delta_bar1: delta_bar1.exp(),
    })
}
