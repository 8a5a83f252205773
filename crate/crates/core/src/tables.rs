//! Transformed edge weights and the partial sums every estimator draws on.

use serde::Serialize;

use crate::chain::{Case, Chain};
use crate::exponent::Exponent;
use crate::logspace::{log_prefix, log_suffix};

/// `nuhat_j = nu_j^(1-p*)`, kept in both scales.
///
/// The linear values overflow or underflow for strongly graded chains; the
/// log values are always exact up to rounding and are what the estimators use.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuHat {
    pub nuhat: Vec<f64>,
    pub log_nuhat: Vec<f64>,
}

pub fn nu_hat(chain: &Chain, exponent: &Exponent) -> NuHat {
    let power = 1.0 - exponent.pstar();
    let log_nuhat: Vec<f64> = chain.log_nu().iter().map(|l| power * l).collect();
    let nuhat = chain.nu().iter().map(|v| v.powf(power)).collect();
    NuHat { nuhat, log_nuhat }
}

/// Partial sums of `mu` and `nuhat` oriented the way each case needs them.
///
/// ND: `mu_sum[n] = mu[0, n]` and `nuhat_sum[n] = nuhat[n, N]`.
/// DN: `mu_sum[n] = mu[n, N]` and `nuhat_sum[n] = nuhat[1, n]`.
/// Entries are stored by position, like the chain weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumTable {
    pub case: Case,
    pub mu_sum: Vec<f64>,
    pub nuhat_sum: Vec<f64>,
    pub log_mu_sum: Vec<f64>,
    pub log_nuhat_sum: Vec<f64>,
}

impl PartialSumTable {
    pub fn new(chain: &Chain, exponent: &Exponent) -> Self {
        let nh = nu_hat(chain, exponent);
        let (log_mu_sum, log_nuhat_sum) = match chain.case() {
            Case::Nd => (log_prefix(chain.log_mu()), log_suffix(&nh.log_nuhat)),
            Case::Dn => (log_suffix(chain.log_mu()), log_prefix(&nh.log_nuhat)),
        };
        Self {
            case: chain.case(),
            mu_sum: log_mu_sum.iter().map(|l| l.exp()).collect(),
            nuhat_sum: log_nuhat_sum.iter().map(|l| l.exp()).collect(),
            log_mu_sum,
            log_nuhat_sum,
        }
    }
}
