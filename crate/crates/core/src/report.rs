//! One-stop summary of every estimate for a chain and exponent.

use serde::Serialize;

use crate::chain::{Case, Chain};
use crate::error::Result;
use crate::exponent::Exponent;
use crate::ops::{self, Cut, Improved, ScanOptions};

/// Where each reported extremum is attained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificates {
    /// Maximizing state of each `delta_n`.
    pub delta_argmax: Vec<usize>,
    /// Optimal member of the cut family for each `delta'_n`.
    pub delta_prime_cuts: Vec<Cut>,
    pub delta_bar_cuts: Vec<Cut>,
    /// False when the cut scans were subsampled.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub case: Case,
    pub p: f64,
    pub n: usize,
    pub sigma_p: f64,
    pub argmax_n: usize,
    pub k_p: f64,
    /// Basic bounds `(k_p sigma_p)^-1` and `sigma_p^-1`.
    pub lower: f64,
    pub upper: f64,
    /// Tightest bounds among all computed sequences.
    pub best_lower: f64,
    pub best_upper: f64,
    /// First-step values from the closed forms, absent above the scan cap.
    pub improved: Option<Improved>,
    pub delta: Vec<f64>,
    pub delta_prime: Vec<f64>,
    pub delta_bar: Vec<f64>,
    pub certificates: Certificates,
}

/// Runs `iters` steps of every sequence. The cut scans honour `opts`.
pub fn bounds_report(
    chain: &Chain,
    e: &Exponent,
    iters: usize,
    opts: &ScanOptions,
) -> Result<BoundsReport> {
    let sigma = ops::sigma(chain, e);
    let (lower, upper) = ops::basic_bounds(chain, e);
    let delta = ops::delta_seq(chain, e, iters)?;
    let (prime, bar) = ops::cut_sequences(chain, e, iters, opts)?;
    let improved = if chain.n() <= opts.max_n {
        Some(ops::improved_estimates(chain, e)?)
    } else {
        None
    };
    let best_lower = delta
        .values
        .iter()
        .map(|d| 1.0 / d)
        .fold(lower, f64::max);
    let best_upper = prime
        .values
        .iter()
        .map(|d| 1.0 / d)
        .fold(upper, f64::min);
    Ok(BoundsReport {
        case: chain.case(),
        p: e.p(),
        n: chain.n(),
        sigma_p: sigma.value,
        argmax_n: sigma.argmax,
        k_p: e.kp(),
        lower,
        upper,
        best_lower,
        best_upper,
        improved,
        delta: delta.values,
        delta_prime: prime.values,
        delta_bar: bar.values,
        certificates: Certificates {
            delta_argmax: delta.argmax,
            delta_prime_cuts: prime.cuts,
            delta_bar_cuts: bar.cuts,
            exhaustive: prime.exhaustive,
        },
    })
}
