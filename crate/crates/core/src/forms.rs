//! The Dirichlet form `D_p` and the `L^p(mu)` mass, with boundary values applied.

use crate::chain::{Case, Chain};
use crate::error::{Error, Result};
use crate::exponent::Exponent;

pub(crate) fn check_len(chain: &Chain, len: usize) -> Result<()> {
    if len == chain.len() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "sequence has {len} entries, the chain has {} states",
            chain.len()
        )))
    }
}

/// `D_p(f) = sum_k nu_k |f_k - f_{k+1}|^p` (ND, `f_{N+1} = 0`) or
/// `sum_k nu_k |f_k - f_{k-1}|^p` (DN, `f_0 = 0`).
pub fn dirichlet_form(chain: &Chain, exponent: &Exponent, f: &[f64]) -> Result<f64> {
    check_len(chain, f.len())?;
    let p = exponent.p();
    let n = f.len();
    let total = chain
        .nu()
        .iter()
        .enumerate()
        .map(|(k, nu)| {
            let diff = match chain.case() {
                Case::Nd => f[k] - if k + 1 < n { f[k + 1] } else { 0.0 },
                Case::Dn => f[k] - if k > 0 { f[k - 1] } else { 0.0 },
            };
            nu * diff.abs().powf(p)
        })
        .sum();
    Ok(total)
}

/// `mu(|f|^p) = sum_k mu_k |f_k|^p`.
pub fn mu_norm_p(chain: &Chain, exponent: &Exponent, f: &[f64]) -> Result<f64> {
    check_len(chain, f.len())?;
    let p = exponent.p();
    Ok(chain
        .mu()
        .iter()
        .zip(f)
        .map(|(m, x)| m * x.abs().powf(p))
        .sum())
}

/// `D_p(f) / mu(|f|^p)`.
pub fn rayleigh_quotient(chain: &Chain, exponent: &Exponent, f: &[f64]) -> Result<f64> {
    let mass = mu_norm_p(chain, exponent, f)?;
    if mass == 0.0 {
        return Err(Error::InvalidParameter(
            "the Rayleigh quotient needs a nonzero function".into(),
        ));
    }
    Ok(dirichlet_form(chain, exponent, f)? / mass)
}
