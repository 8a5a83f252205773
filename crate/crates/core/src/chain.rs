//! Finite weighted chains with mixed boundary conditions.
//!
//! An ND chain lives on `{0, ..., N}` with a reflecting left end
//! (`nu_{-1} = 0`) and an absorbing right end (`f_{N+1} = 0`). A DN chain
//! lives on `{1, ..., N}` with `f_0 = 0` and `nu_{N+1} = 0`. The boundary
//! values are never stored; every evaluation applies them itself.
//!
//! Weights are stored by position: `mu[0]` is the weight of the first state
//! of the index set, whichever case it is.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Weight};
use crate::exponent::Exponent;

/// Default upper limit on `N` for chain construction.
pub const MAX_STATES: usize = 100_000;

/// Boundary case of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// Neumann at the left end, Dirichlet at the right end.
    Nd,
    /// Dirichlet at the left end, Neumann at the right end.
    Dn,
}

impl Case {
    /// Label of the first state of the index set.
    pub fn first_index(self) -> usize {
        match self {
            Case::Nd => 0,
            Case::Dn => 1,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::Nd => f.write_str("ND"),
            Case::Dn => f.write_str("DN"),
        }
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nd" => Ok(Case::Nd),
            "dn" => Ok(Case::Dn),
            other => Err(Error::InvalidParameter(format!(
                "unknown boundary case {other:?} (expected nd or dn)"
            ))),
        }
    }
}

/// A validated weighted chain. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    case: Case,
    mu: Vec<f64>,
    nu: Vec<f64>,
    log_mu: Vec<f64>,
    log_nu: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ChainFile {
    case: Case,
    mu: Vec<f64>,
    nu: Vec<f64>,
}

impl Chain {
    /// Validates the weights and builds the chain.
    pub fn new(case: Case, mu: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        if mu.len() != nu.len() {
            return Err(Error::LengthMismatch {
                mu: mu.len(),
                nu: nu.len(),
            });
        }
        if mu.is_empty() {
            return Err(Error::EmptyChain);
        }
        let n = match case {
            Case::Nd => mu.len() - 1,
            Case::Dn => mu.len(),
        };
        if n > MAX_STATES {
            return Err(Error::TooLarge { n, cap: MAX_STATES });
        }
        let first = case.first_index();
        for (which, xs) in [(Weight::Mu, &mu), (Weight::Nu, &nu)] {
            if let Some((pos, &value)) = xs
                .iter()
                .enumerate()
                .find(|(_, x)| !(x.is_finite() && **x > 0.0))
            {
                return Err(Error::InvalidWeight {
                    which,
                    index: pos + first,
                    value,
                });
            }
        }
        let log_mu = mu.iter().map(|x| x.ln()).collect();
        let log_nu = nu.iter().map(|x| x.ln()).collect();
        Ok(Self {
            case,
            mu,
            nu,
            log_mu,
            log_nu,
        })
    }

    /// `mu_k = r^k`, `nu_k = a r^(k+1)` over the index set of `case`.
    pub fn geometric(a: f64, r: f64, n: usize, case: Case) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "geometric chain needs a > 0, got {a}"
            )));
        }
        if !(r > 1.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "geometric chain needs r > 1, got {r}"
            )));
        }
        let ks = Self::index_range(case, n)?;
        let mu = ks.clone().map(|k| r.powi(k as i32)).collect();
        let nu = ks.map(|k| a * r.powi(k as i32 + 1)).collect();
        Self::new(case, mu, nu)
    }

    /// All weights equal to one.
    pub fn uniform(n: usize, case: Case) -> Result<Self> {
        let len = Self::index_range(case, n)?.count();
        Self::new(case, vec![1.0; len], vec![1.0; len])
    }

    fn index_range(case: Case, n: usize) -> Result<std::ops::RangeInclusive<usize>> {
        match case {
            Case::Nd => Ok(0..=n),
            Case::Dn if n >= 1 => Ok(1..=n),
            Case::Dn => Err(Error::InvalidParameter(
                "a DN chain needs N >= 1".to_string(),
            )),
        }
    }

    /// Reads the JSON chain format `{"case": "nd"|"dn", "mu": [...], "nu": [...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChainFile = serde_json::from_str(text)?;
        Self::new(file.case, file.mu, file.nu)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ChainFile {
            case: self.case,
            mu: self.mu.clone(),
            nu: self.nu.clone(),
        })
        .expect("finite weights always serialize")
    }

    pub fn case(&self) -> Case {
        self.case
    }

    /// The `N` of the index set (`{0..N}` for ND, `{1..N}` for DN).
    pub fn n(&self) -> usize {
        match self.case {
            Case::Nd => self.mu.len() - 1,
            Case::Dn => self.mu.len(),
        }
    }

    /// Number of states.
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn log_mu(&self) -> &[f64] {
        &self.log_mu
    }

    pub fn log_nu(&self) -> &[f64] {
        &self.log_nu
    }

    /// Label of the state stored at position `pos`.
    pub fn label(&self, pos: usize) -> usize {
        pos + self.case.first_index()
    }

    pub(crate) fn expect_case(&self, expected: Case) -> Result<()> {
        if self.case == expected {
            Ok(())
        } else {
            Err(Error::WrongCase {
                expected,
                found: self.case,
            })
        }
    }

    /// The ND chain restricted to `{0..m}`; the absorbing boundary moves to `m+1`.
    pub fn truncate_nd(&self, m: usize) -> Result<Self> {
        self.expect_case(Case::Nd)?;
        if m > self.n() {
            return Err(Error::InvalidParameter(format!(
                "truncation index {m} exceeds N = {}",
                self.n()
            )));
        }
        Ok(Self {
            case: Case::Nd,
            mu: self.mu[..=m].to_vec(),
            nu: self.nu[..=m].to_vec(),
            log_mu: self.log_mu[..=m].to_vec(),
            log_nu: self.log_nu[..=m].to_vec(),
        })
    }

    /// The mass folded into the cut state of a DN truncation at `m`.
    pub fn dn_tilde_mu(&self, m: usize) -> Result<DnTildeMu> {
        self.expect_case(Case::Dn)?;
        if m == 0 || m > self.n() {
            return Err(Error::InvalidParameter(format!(
                "cut index {m} outside 1..={}",
                self.n()
            )));
        }
        let tail = &self.log_mu[m - 1..];
        Ok(DnTildeMu {
            m,
            tilde_mu_m: crate::logspace::log_sum_exp(tail).exp(),
            log_tilde_mu_m: crate::logspace::log_sum_exp(tail),
        })
    }

    /// The DN chain on `{1..m}` with `mu_m` replaced by `sum_{k>=m} mu_k`
    /// (absorbing at 0, reflecting at `m+1`).
    pub fn truncate_dn(&self, m: usize) -> Result<Self> {
        let tilde = self.dn_tilde_mu(m)?;
        let mut mu = self.mu[..m].to_vec();
        let mut log_mu = self.log_mu[..m].to_vec();
        mu[m - 1] = tilde.tilde_mu_m;
        log_mu[m - 1] = tilde.log_tilde_mu_m;
        Ok(Self {
            case: Case::Dn,
            mu,
            nu: self.nu[..m].to_vec(),
            log_mu,
            log_nu: self.log_nu[..m].to_vec(),
        })
    }

    /// Builds a chain from log-weights, checking the linear values are representable.
    fn from_logs(case: Case, log_mu: Vec<f64>, log_nu: Vec<f64>) -> Result<Self> {
        let mu = log_mu.iter().map(|x| x.exp()).collect();
        let nu = log_nu.iter().map(|x| x.exp()).collect();
        let mut chain = Self::new(case, mu, nu)?;
        chain.log_mu = log_mu;
        chain.log_nu = log_nu;
        Ok(chain)
    }
}

/// The modified weight `mu~_m = sum_{k=m}^N mu_k` of a DN truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DnTildeMu {
    pub m: usize,
    pub tilde_mu_m: f64,
    pub log_tilde_mu_m: f64,
}

/// Dual of a DN chain for exponent `p`: the ND chain on `{0..N-1}` with
/// `mu'_j = nu_{j+1}^(1-p*)` and `nu'_j = mu_{j+1}^(1-p*)`.
///
/// The result is meant to be used with the conjugate exponent `p*`; the
/// principal eigenvalues then satisfy
/// `lambda_p(dn)^(-1/p) = lambda_{p*}(dual)^(-1/p*)`.
pub fn dual_chain(chain: &Chain, exponent: &Exponent) -> Result<Chain> {
    chain.expect_case(Case::Dn)?;
    let power = 1.0 - exponent.pstar();
    let log_mu = chain.log_nu.iter().map(|l| power * l).collect();
    let log_nu = chain.log_mu.iter().map(|l| power * l).collect();
    Chain::from_logs(Case::Nd, log_mu, log_nu)
}

/// Inverse of [`dual_chain`]: takes the ND dual (used with exponent `q`)
/// back to a DN chain meant for `q*`.
pub fn inverse_dual_chain(chain: &Chain, exponent: &Exponent) -> Result<Chain> {
    chain.expect_case(Case::Nd)?;
    let power = 1.0 - exponent.pstar();
    let log_mu = chain.log_nu.iter().map(|l| power * l).collect();
    let log_nu = chain.log_mu.iter().map(|l| power * l).collect();
    Chain::from_logs(Case::Dn, log_mu, log_nu)
}
