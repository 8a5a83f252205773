//! Seeded random chains and random admissible candidates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{Case, Chain};
use crate::eigen::EigenSolution;
use crate::error::Result;
use crate::exponent::Exponent;
use crate::logspace::log_add_exp;
use crate::testfn::{Class, TestFunction};

/// Shape of a random chain corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusSpec {
    pub count: usize,
    /// Inclusive range for `N`.
    pub n_min: usize,
    pub n_max: usize,
    /// Weights are log-uniform on `[w_min, w_max]`.
    pub w_min: f64,
    pub w_max: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            count: 200,
            n_min: 1,
            n_max: 60,
            w_min: 1e-3,
            w_max: 1e3,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_chain<R: Rng>(rng: &mut R, case: Case, spec: &CorpusSpec) -> Result<Chain> {
    let n = rng.gen_range(spec.n_min..=spec.n_max);
    let len = n + 1 - case.first_index();
    let (lo, hi) = (spec.w_min.ln(), spec.w_max.ln());
    let mut draw = |_| rng.gen_range(lo..=hi).exp();
    let mu = (0..len).map(&mut draw).collect();
    let nu = (0..len).map(&mut draw).collect();
    Chain::new(case, mu, nu)
}

/// `spec.count` chains of one case from a fixed seed.
pub fn corpus(seed: u64, case: Case, spec: &CorpusSpec) -> Result<Vec<Chain>> {
    let mut r = rng(seed);
    (0..spec.count).map(|_| random_chain(&mut r, case, spec)).collect()
}

/// Standard normal draw by Box-Muller.
fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// Log increments: either around the eigenfunction's or fully random.
fn log_steps<R: Rng>(rng: &mut R, len: usize, eigen: Option<&EigenSolution>) -> Vec<f64> {
    match eigen {
        Some(sol) => sol.log_step.iter().map(|s| s + 0.1 * normal(rng)).collect(),
        None => (0..len).map(|_| 2.0 * normal(rng)).collect(),
    }
}

/// Positive strictly monotone function in the chain's natural direction,
/// built from log increments. ND: decreasing with `f_{N+1} = 0`.
/// DN: increasing with `f_0 = 0`.
fn monotone(case: Case, log_step: &[f64]) -> Vec<f64> {
    let len = log_step.len();
    let mut log_f = vec![0.0; len];
    match case {
        Case::Nd => {
            let mut acc = f64::NEG_INFINITY;
            for i in (0..len).rev() {
                acc = log_add_exp(acc, log_step[i]);
                log_f[i] = acc;
            }
        }
        Case::Dn => {
            let mut acc = f64::NEG_INFINITY;
            for i in 0..len {
                acc = log_add_exp(acc, log_step[i]);
                log_f[i] = acc;
            }
        }
    }
    let top = log_f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    log_f.iter().map(|x| (x - top).exp()).collect()
}

fn ratios(case: Case, f: &[f64]) -> Vec<f64> {
    let len = f.len();
    (0..len)
        .map(|i| match (case, i + 1 < len) {
            (_, true) => f[i + 1] / f[i],
            (Case::Nd, false) => 0.0,
            (Case::Dn, false) => 1.0,
        })
        .collect()
}

/// One random candidate of the class, perturbed around `eigen` when given.
/// Returns `None` when the draw fails the class predicate (possible for
/// the ratio classes, whose positivity constraint is not built in).
pub fn random_candidate<R: Rng>(
    rng: &mut R,
    chain: &Chain,
    e: &Exponent,
    class: Class,
    eigen: Option<&EigenSolution>,
) -> Option<TestFunction> {
    let case = chain.case();
    let len = chain.len();
    let first = case.first_index();
    let steps = log_steps(rng, len, eigen);
    let f = monotone(case, &steps);
    let cut = rng.gen_range(0..len);
    let jitter = |rng: &mut R, f: &[f64]| -> Vec<f64> {
        f.iter().map(|x| x * (0.5 * normal(rng)).exp()).collect()
    };
    let (values, support_end) = match (case, class) {
        (_, Class::FI) => (f, None),
        (_, Class::FII) | (_, Class::FTildePrimeII) => (jitter(rng, &f), None),
        (_, Class::W) => (ratios(case, &f), None),
        (Case::Nd, Class::FTildeI) | (Case::Nd, Class::FTildePrimeI) => {
            let plateau = if class == Class::FTildeI {
                rng.gen_range(0..=cut)
            } else {
                0
            };
            let v = monotone(case, &steps[..=cut]);
            let mut out: Vec<f64> = (0..len)
                .map(|i| if i <= cut { v[i.max(plateau)] } else { 0.0 })
                .collect();
            let top = out[0];
            out.iter_mut().for_each(|x| *x /= top);
            (out, Some(cut))
        }
        (Case::Nd, Class::FTildeII) => {
            let mut v = jitter(rng, &f);
            v[cut + 1..].iter_mut().for_each(|x| *x = 0.0);
            (v, Some(cut))
        }
        (Case::Nd, Class::WTilde) => {
            let v = monotone(case, &steps[..=cut]);
            let mut w = ratios(case, &v);
            w.resize(len, 0.0);
            (w, Some(cut))
        }
        (Case::Dn, Class::FTildeI) => {
            let v: Vec<f64> = (0..len).map(|i| f[i.min(cut)]).collect();
            (v, Some(cut + first))
        }
        (Case::Dn, Class::FTildeII) => {
            let mut v = jitter(rng, &f);
            let top = v[cut];
            v[cut..].iter_mut().for_each(|x| *x = top);
            (v, Some(cut + first))
        }
        (Case::Dn, Class::WTilde) => {
            let mut w = ratios(case, &f);
            w[cut..].iter_mut().for_each(|x| *x = 1.0);
            (w, Some(cut + first))
        }
        (Case::Dn, Class::FTildePrimeI) | (_, Class::Unclassified) => return None,
    };
    let candidate = TestFunction::new(values, class, support_end);
    candidate.validate(chain, e).ok().map(|_| candidate)
}

/// A random real function (any sign) for Rayleigh-quotient checks.
pub fn random_function<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| {
            let s = if rng.gen_bool(0.8) { 1.0 } else { -1.0 };
            s * (2.0 * normal(rng)).exp()
        })
        .collect()
}
