//! Estimators for chains with a reflecting left end and an absorbing right end.
//!
//! Index set `{0..N}`, `nu_{-1} = 0`, `f_{N+1} = 0`.

use crate::chain::{Case, Chain};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::kernel::{double_sum, log_dirichlet, log_mass, renormalize};
use crate::logspace::{exp_diff, log_add_exp, log_suffix};
use crate::ops::{
    basic_from_sigma, has_infinite, max_value, min_value, n_max_check, side_for, Bound, Cut,
    CutSeq, DeltaSeq, Improved, OpValue, ScanOptions, Sigma, SCAN_CAP,
};
use crate::tables::{nu_hat, PartialSumTable};
use crate::testfn::{Class, Operator, Side, TestFunction};

/// `sigma_p = sup_n mu[0,n] nuhat[n,N]^(p-1)`, first maximizer on ties.
pub fn sigma(chain: &Chain, e: &Exponent) -> Result<Sigma> {
    chain.expect_case(Case::Nd)?;
    let t = PartialSumTable::new(chain, e);
    let mut best = Sigma {
        value: 0.0,
        log_value: f64::NEG_INFINITY,
        argmax: 0,
    };
    for n in 0..chain.len() {
        let v = t.log_mu_sum[n] + e.pm1() * t.log_nuhat_sum[n];
        if v > best.log_value {
            best.log_value = v;
            best.argmax = n;
        }
    }
    best.value = best.log_value.exp();
    Ok(best)
}

/// `((k(p) sigma_p)^-1, sigma_p^-1)`.
pub fn basic_bounds(chain: &Chain, e: &Exponent) -> Result<(f64, f64)> {
    Ok(basic_from_sigma(sigma(chain, e)?.log_value, e))
}

/// Last positive state of `f`, requiring `f > 0` on `0..=m` and `f = 0` after.
fn support_end(f: &[f64], class: Class) -> Result<usize> {
    if let Some(i) = f.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::inadmissible(
            class,
            format!("negative or non-finite value at state {i}"),
        ));
    }
    let m = match f.iter().position(|x| *x == 0.0) {
        Some(0) => {
            return Err(Error::inadmissible(class, "f vanishes at state 0"));
        }
        Some(z) => z - 1,
        None => f.len() - 1,
    };
    match (m + 1..f.len()).find(|&i| f[i] != 0.0) {
        Some(i) => Err(Error::inadmissible(
            class,
            format!("support is not an initial segment (state {i})"),
        )),
        None => Ok(m),
    }
}

/// Single-summation form
/// `I_i(f) = sum_{j<=i} mu_j f_j^(p-1) / (nu_i (f_i - f_{i+1})^(p-1))`.
///
/// `f` must be flat, then strictly decreasing, then zero. Zero denominators
/// come back as [`OpValue::Infinite`].
pub fn op_i(chain: &Chain, e: &Exponent, f: &[f64]) -> Result<Vec<OpValue>> {
    chain.expect_case(Case::Nd)?;
    crate::forms::check_len(chain, f.len())?;
    let m = support_end(f, Class::FTildeI)?;
    let n = (0..m).find(|&i| f[i] != f[i + 1]).unwrap_or(m);
    if let Some(i) = (n..m).find(|&i| f[i] <= f[i + 1]) {
        return Err(Error::inadmissible(
            Class::FI,
            format!("f is not strictly decreasing at state {i}"),
        ));
    }
    let pm1 = e.pm1();
    let mut acc = f64::NEG_INFINITY;
    let out = (0..f.len())
        .map(|i| {
            acc = log_add_exp(acc, chain.log_mu()[i] + pm1 * f[i].ln());
            let next = f.get(i + 1).copied().unwrap_or(0.0);
            let diff = f[i] - next;
            if diff <= 0.0 {
                OpValue::Infinite
            } else {
                OpValue::Value((acc - chain.log_nu()[i] - pm1 * diff.ln()).exp())
            }
        })
        .collect();
    Ok(out)
}

/// Double-summation form over `supp(f)`, which must be an initial segment.
pub fn op_ii(chain: &Chain, e: &Exponent, f: &[f64]) -> Result<Vec<OpValue>> {
    chain.expect_case(Case::Nd)?;
    crate::forms::check_len(chain, f.len())?;
    let m = support_end(f, Class::FII)?;
    let log_f: Vec<f64> = f.iter().map(|x| x.ln()).collect();
    Ok(op_ii_log(chain, e, &log_f, m))
}

pub(crate) fn op_ii_log(chain: &Chain, e: &Exponent, log_f: &[f64], m: usize) -> Vec<OpValue> {
    let nh = nu_hat(chain, e);
    let ds = double_sum(chain.log_mu(), &nh.log_nuhat, log_f, m, e);
    (0..log_f.len())
        .map(|i| {
            if i <= m {
                OpValue::Value((e.pm1() * (ds.log_tail[i] - log_f[i])).exp())
            } else {
                OpValue::OffSupport
            }
        })
        .collect()
}

/// Difference form
/// `R_i(w) = mu_i^-1 [nu_i (1-w_i)^(p-1) - nu_{i-1} (1/w_{i-1} - 1)^(p-1)]`.
///
/// `w` lies in `(0,1)` before its first zero and vanishes from there on; the
/// last entry must be 0. Entries past the first zero are
/// [`OpValue::OffSupport`].
pub fn op_r(chain: &Chain, e: &Exponent, w: &[f64]) -> Result<Vec<OpValue>> {
    chain.expect_case(Case::Nd)?;
    crate::forms::check_len(chain, w.len())?;
    let last = w.len() - 1;
    if w[last] != 0.0 {
        return Err(Error::inadmissible(
            Class::W,
            format!("the ratio at the last state {last} must be 0"),
        ));
    }
    let m = w.iter().position(|x| *x == 0.0).expect("last entry is zero");
    if let Some(i) = (0..m).find(|&i| !(w[i] > 0.0 && w[i] < 1.0)) {
        return Err(Error::inadmissible(
            Class::W,
            format!("ratio {} at state {i} is outside (0,1)", w[i]),
        ));
    }
    if let Some(i) = (m..=last).find(|&i| w[i] != 0.0) {
        return Err(Error::inadmissible(
            Class::WTilde,
            format!("ratio at state {i} must vanish after the first zero"),
        ));
    }
    let pm1 = e.pm1();
    let (lmu, lnu) = (chain.log_mu(), chain.log_nu());
    let out = (0..w.len())
        .map(|i| {
            if i > m {
                return OpValue::OffSupport;
            }
            let gain = lnu[i] + pm1 * (-w[i]).ln_1p() - lmu[i];
            let loss = if i == 0 {
                f64::NEG_INFINITY
            } else {
                let v = w[i - 1];
                lnu[i - 1] + pm1 * ((-v).ln_1p() - v.ln()) - lmu[i]
            };
            OpValue::Value(exp_diff(gain, loss))
        })
        .collect();
    Ok(out)
}

/// Evaluates the operator matching the candidate's class and returns the
/// bound it certifies.
pub fn bound_from_test_function(
    chain: &Chain,
    e: &Exponent,
    candidate: &TestFunction,
    side: Side,
) -> Result<Bound> {
    chain.expect_case(Case::Nd)?;
    side_for(candidate, side)?;
    candidate.validate(chain, e)?;
    bound_from_values(chain, e, candidate, side)
}

pub(crate) fn bound_from_values(
    chain: &Chain,
    e: &Exponent,
    candidate: &TestFunction,
    side: Side,
) -> Result<Bound> {
    let class = candidate.class;
    let f = &candidate.values;
    let (index, value) = match (class.operator().expect("classified"), side) {
        (Operator::Single, Side::Lower) => {
            let vals = op_i(chain, e, f)?;
            if let Some(i) = has_infinite(&vals) {
                return Err(Error::inadmissible(
                    class,
                    format!("zero increment at state {i}"),
                ));
            }
            let (i, v) = max_value(&vals).expect("nonempty");
            (i, 1.0 / v)
        }
        (Operator::Single, Side::Upper) | (Operator::Double, Side::Upper) => {
            let vals = if class.operator() == Some(Operator::Single) {
                op_i(chain, e, f)?
            } else {
                op_ii(chain, e, f)?
            };
            let (i, v) = min_value(&vals).expect("support is nonempty");
            (i, 1.0 / v)
        }
        (Operator::Double, Side::Lower) => {
            let (i, v) = max_value(&op_ii(chain, e, f)?).expect("nonempty");
            (i, 1.0 / v)
        }
        (Operator::Difference, Side::Lower) => min_value(&op_r(chain, e, f)?).expect("nonempty"),
        (Operator::Difference, Side::Upper) => max_value(&op_r(chain, e, f)?).expect("nonempty"),
    };
    Ok(Bound {
        value,
        side,
        class,
        index: chain.label(index),
    })
}

/// `delta_n = sup_i II_i(f_n)` with `f_1 = nuhat[., N]^(1/p*)` and
/// `f_{n+1} = f_n II(f_n)^(p*-1)`. Each `1/delta_n` is a lower bound.
pub fn delta_seq(chain: &Chain, e: &Exponent, n_max: usize) -> Result<DeltaSeq> {
    chain.expect_case(Case::Nd)?;
    n_max_check(n_max)?;
    let nh = nu_hat(chain, e);
    let last = chain.len() - 1;
    let mut log_f: Vec<f64> = log_suffix(&nh.log_nuhat)
        .iter()
        .map(|x| x / e.pstar())
        .collect();
    let mut values = Vec::with_capacity(n_max);
    let mut argmax = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let ds = double_sum(chain.log_mu(), &nh.log_nuhat, &log_f, last, e);
        let (i, v) = arg_extreme((0..=last).map(|i| ds.log_tail[i] - log_f[i]), true);
        values.push((e.pm1() * v).exp());
        argmax.push(i);
        if n + 1 < n_max {
            log_f = ds.log_tail;
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

/// First index of the max (`want_max`) or min of a sequence.
pub(crate) fn arg_extreme(xs: impl Iterator<Item = f64>, want_max: bool) -> (usize, f64) {
    let mut best = (0, if want_max { f64::NEG_INFINITY } else { f64::INFINITY });
    for (i, x) in xs.enumerate() {
        if (want_max && x > best.1) || (!want_max && x < best.1) {
            best = (i, x);
        }
    }
    best
}

struct Running {
    log_value: f64,
    cut: Cut,
}

impl Running {
    fn new() -> Self {
        Self {
            log_value: f64::NEG_INFINITY,
            cut: Cut {
                plateau: None,
                cut: 0,
                argmin: None,
            },
        }
    }

    /// Keeps the larger value; ties go to the lexicographically smaller cut.
    fn offer(&mut self, log_value: f64, cut: Cut) {
        let key = |c: &Cut| (c.plateau, c.cut);
        if log_value > self.log_value
            || (log_value == self.log_value && key(&cut) < key(&self.cut))
        {
            self.log_value = log_value;
            self.cut = cut;
        }
    }
}

/// `delta'_n` and `delta-bar_n` over the family
/// `f_1^(l,m) = nuhat[. v l, m] 1_{<= m}`, `f_{n+1} = f_n II(f_n)^(p*-1) 1_{<= m}`.
///
/// Every pair `l <= m` is scanned, including `l = m`, which also makes the
/// one-state chain well defined.
pub fn cut_sequences(
    chain: &Chain,
    e: &Exponent,
    n_max: usize,
    opts: &ScanOptions,
) -> Result<(CutSeq, CutSeq)> {
    chain.expect_case(Case::Nd)?;
    n_max_check(n_max)?;
    opts.check(chain.n())?;
    let nh = nu_hat(chain, e);
    let (lmu, lnu, lnh) = (chain.log_mu(), chain.log_nu(), &nh.log_nuhat);
    let p = e.p();
    let pm1 = e.pm1();
    let mut prime: Vec<Running> = (0..n_max).map(|_| Running::new()).collect();
    let mut bar: Vec<Running> = (0..n_max).map(|_| Running::new()).collect();
    for m in opts.cuts(0, chain.len() - 1) {
        let tail = log_suffix(&lnh[..=m]);
        for l in 0..=m {
            let mut log_f: Vec<f64> = (0..=m).map(|i| tail[i.max(l)]).collect();
            let mut log_step: Vec<f64> = (0..=m)
                .map(|i| if i >= l { lnh[i] } else { f64::NEG_INFINITY })
                .collect();
            for n in 0..n_max {
                let ds = double_sum(&lmu[..=m], &lnh[..=m], &log_f, m, e);
                let (i, v) = arg_extreme((0..=m).map(|i| ds.log_tail[i] - log_f[i]), false);
                prime[n].offer(
                    pm1 * v,
                    Cut {
                        plateau: Some(l),
                        cut: m,
                        argmin: Some(i),
                    },
                );
                let rq = log_mass(&lmu[..=m], &log_f, p) - log_dirichlet(&lnu[..=m], &log_step, p);
                bar[n].offer(
                    rq,
                    Cut {
                        plateau: Some(l),
                        cut: m,
                        argmin: None,
                    },
                );
                if n + 1 < n_max {
                    log_f = ds.log_tail;
                    log_step = ds.log_inner;
                    renormalize(&mut log_f, &mut log_step);
                }
            }
        }
    }
    let exhaustive = opts.stride == 1;
    let collect = |rs: Vec<Running>| CutSeq {
        values: rs.iter().map(|r| r.log_value.exp()).collect(),
        cuts: rs.iter().map(|r| r.cut).collect(),
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

/// First-step values `delta_1`, `delta_1'`, `delta-bar_1` from their closed
/// forms, each evaluated by direct summation.
pub fn improved_estimates(chain: &Chain, e: &Exponent) -> Result<Improved> {
    chain.expect_case(Case::Nd)?;
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
    // phi[k] = ln nuhat[k, N]
    let phi: Vec<f64> = (0..len).map(|k| lse(lnh[k..].iter().copied())).collect();

    let inner: Vec<f64> = (0..len)
        .map(|j| lse((0..=j).map(|k| lmu[k] + pm1 / q * phi[k])))
        .collect();
    let delta1 = (0..len)
        .map(|i| {
            let s = lse((i..len).map(|j| lnh[j] + qm1 * inner[j]));
            pm1 * (s - phi[i] / q)
        })
        .fold(f64::NEG_INFINITY, f64::max);

    let delta1_prime = (0..len)
        .map(|l| {
            let mut acc = f64::NEG_INFINITY;
            let mut s = f64::NEG_INFINITY;
            for j in 0..len {
                acc = log_add_exp(acc, lmu[j] + pm1 * phi[j.max(l)]);
                if j >= l {
                    s = log_add_exp(s, lnh[j] + qm1 * acc);
                }
            }
            pm1 * (s - phi[l])
        })
        .fold(f64::NEG_INFINITY, f64::max);

    let delta_bar1 = (0..len)
        .map(|m| lse((0..len).map(|j| lmu[j] + p * phi[j.max(m)])) - phi[m])
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(Improved {
        delta1: delta1.exp(),
        delta1_prime: delta1_prime.exp(),
        delta_bar1: delta_bar1.exp(),
    })
}
