//! Naive reference implementations: plain linear-scale loops straight from
//! the definitions, no shared code with the library. Only for small,
//! well-scaled chains.
#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::{DMatrix, SymmetricEigen};
use plap_core::{Case, Chain};

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn conj(p: f64) -> f64 {
    p / (p - 1.0)
}

pub fn nuhat(chain: &Chain, p: f64) -> Vec<f64> {
    let q = conj(p);
    chain.nu().iter().map(|v| v.powf(1.0 - q)).collect()
}

fn sum(xs: &[f64], a: usize, b: usize) -> f64 {
    if a > b {
        0.0
    } else {
        xs[a..=b].iter().sum()
    }
}

pub fn sigma(chain: &Chain, p: f64) -> f64 {
    let (mu, nh) = (chain.mu(), nuhat(chain, p));
    let last = mu.len() - 1;
    (0..=last)
        .map(|n| match chain.case() {
            Case::Nd => sum(mu, 0, n) * sum(&nh, n, last).powf(p - 1.0),
            Case::Dn => sum(mu, n, last) * sum(&nh, 0, n).powf(p - 1.0),
        })
        .fold(0.0, f64::max)
}

/// Double-summation operator on the support `0..=m` (ND) or everywhere (DN).
pub fn op_ii(chain: &Chain, p: f64, f: &[f64], m: usize) -> Vec<f64> {
    let q = conj(p);
    let (mu, nh) = (chain.mu(), nuhat(chain, p));
    let len = mu.len();
    let mut out = Vec::new();
    match chain.case() {
        Case::Nd => {
            for i in 0..=m {
                let mut outer = 0.0;
                for j in i..=m {
                    let inner: f64 = (0..=j).map(|k| mu[k] * f[k].powf(p - 1.0)).sum();
                    outer += nh[j] * inner.powf(q - 1.0);
                }
                out.push(outer.powf(p - 1.0) / f[i].powf(p - 1.0));
            }
        }
        Case::Dn => {
            for i in 0..len {
                let mut outer = 0.0;
                for j in 0..=i {
                    let inner: f64 = (j..len).map(|k| mu[k] * f[k].powf(p - 1.0)).sum();
                    outer += nh[j] * inner.powf(q - 1.0);
                }
                out.push(outer.powf(p - 1.0) / f[i].powf(p - 1.0));
            }
        }
    }
    out
}

pub fn mass_over_energy(chain: &Chain, p: f64, f: &[f64]) -> f64 {
    let (mu, nu) = (chain.mu(), chain.nu());
    let len = f.len();
    let mut d = 0.0;
    for i in 0..len {
        let diff = match chain.case() {
            Case::Nd => f[i] - if i + 1 < len { f[i + 1] } else { 0.0 },
            Case::Dn => f[i] - if i > 0 { f[i - 1] } else { 0.0 },
        };
        d += nu[i] * diff.abs().powf(p);
    }
    let m: f64 = (0..len).map(|i| mu[i] * f[i].abs().powf(p)).sum();
    m / d
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

/// The `n`-th step of the three sequences, by explicit iteration of the
/// test functions.
pub fn sequences(chain: &Chain, p: f64, n: usize) -> (f64, f64, f64) {
    let q = conj(p);
    let nh = nuhat(chain, p);
    let len = nh.len();
    let last = len - 1;
    let step = |f: &[f64], m: usize| -> Vec<f64> {
        let ii = op_ii(chain, p, f, m);
        (0..len)
            .map(|i| if i < ii.len() { f[i] * ii[i].powf(q - 1.0) } else { 0.0 })
            .collect()
    };
    let mut f: Vec<f64> = match chain.case() {
        Case::Nd => (0..len).map(|i| sum(&nh, i, last).powf(1.0 / q)).collect(),
        Case::Dn => (0..len).map(|i| sum(&nh, 0, i).powf(1.0 / q)).collect(),
    };
    for _ in 1..n {
        f = step(&f, last);
    }
    let delta = max(&op_ii(chain, p, &f, last));

    let (mut prime, mut bar) = (0.0f64, 0.0f64);
    match chain.case() {
        Case::Nd => {
            for m in 0..len {
                for l in 0..=m {
                    let mut f: Vec<f64> = (0..len)
                        .map(|i| if i <= m { sum(&nh, i.max(l), m) } else { 0.0 })
                        .collect();
                    for _ in 1..n {
                        f = step(&f, m);
                    }
                    prime = prime.max(min(&op_ii(chain, p, &f, m)));
                    bar = bar.max(mass_over_energy(chain, p, &f));
                }
            }
        }
        Case::Dn => {
            for m in 0..len {
                let mut f: Vec<f64> = (0..len).map(|i| sum(&nh, 0, i.min(m))).collect();
                for _ in 1..n {
                    let g = step(&f, last);
                    f = (0..len).map(|i| g[i.min(m)]).collect();
                }
                prime = prime.max(min(&op_ii(chain, p, &f, last)));
                bar = bar.max(mass_over_energy(chain, p, &f));
            }
        }
    }
    (delta, prime, bar)
}

/// Smallest eigenvalue of the `p = 2` problem `L g = lambda M g` by a dense
/// symmetric eigensolver.
pub fn linear_eigenvalue(chain: &Chain) -> f64 {
    let (mu, nu) = (chain.mu(), chain.nu());
    let len = mu.len();
    let mut a = DMatrix::<f64>::zeros(len, len);
    for i in 0..len {
        let (diag, off) = match chain.case() {
            Case::Nd => (nu[i] + if i > 0 { nu[i - 1] } else { 0.0 }, nu[i]),
            Case::Dn => {
                let right = if i + 1 < len { nu[i + 1] } else { 0.0 };
                (nu[i] + right, right)
            }
        };
        a[(i, i)] = diag / mu[i];
        if i + 1 < len {
            let v = -off / (mu[i] * mu[i + 1]).sqrt();
            a[(i, i + 1)] = v;
            a[(i + 1, i)] = v;
        }
    }
    SymmetricEigen::new(a).eigenvalues.min()
}

/// Minimum of the Rayleigh quotient of a two-state chain over
/// `f = (1, t)` by golden-section search. ND: `t` in `[0, 1]`; DN: `t >= 1`.
pub fn two_state_eigenvalue(chain: &Chain, p: f64) -> f64 {
    assert_eq!(chain.len(), 2);
    let (lo, hi) = match chain.case() {
        Case::Nd => (0.0, 1.0),
        Case::Dn => (1.0, 1e3),
    };
    let r = |t: f64| mass_over_energy(chain, p, &[1.0, t]).recip();
    // Coarse grid first, then refine around the best cell.
    let grid = 2000;
    let h = (hi - lo) / grid as f64;
    let best = (0..=grid)
        .map(|k| lo + h * k as f64)
        .min_by(|a, b| r(*a).total_cmp(&r(*b)))
        .unwrap();
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if r(c) < r(d) {
            b = d;
        } else {
            a = c;
        }
    }
    r(0.5 * (a + b))
}
