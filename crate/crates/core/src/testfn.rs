//! Candidate functions and ratio sequences, with their admissibility classes.
//!
//! Lower-bound classes (`FI`, `FII`, `W`) live on the whole index set. The
//! upper-bound classes are cut or plateau shaped and carry the cut state in
//! `support_end`:
//!
//! * ND: `f` is positive on `0..=m` and vanishes afterwards; for `FTildeI`
//!   it is flat up to some `n <= m` and strictly decreasing on `n..=m`.
//!   `WTilde` ratios are positive before `m`, zero from `m` on, and keep every
//!   difference-form value on `0..=m` positive.
//! * DN: `f` is constant from `m` on; `WTilde` ratios equal 1 from `m` on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{Case, Chain};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::forms::check_len;

/// Admissibility class tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Class {
    FI,
    FII,
    FTildeI,
    FTildeII,
    FTildePrimeI,
    FTildePrimeII,
    W,
    WTilde,
    Unclassified,
}

/// Which side of `lambda_p` a certificate bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// The operator a class is paired with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Single,
    Double,
    Difference,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::FI => "F_I",
            Class::FII => "F_II",
            Class::FTildeI => "F~_I",
            Class::FTildeII => "F~_II",
            Class::FTildePrimeI => "F~'_I",
            Class::FTildePrimeII => "F~'_II",
            Class::W => "W",
            Class::WTilde => "W~",
            Class::Unclassified => "unclassified",
        })
    }
}

impl Class {
    pub const ALL: [Class; 8] = [
        Class::FI,
        Class::FII,
        Class::FTildeI,
        Class::FTildeII,
        Class::FTildePrimeI,
        Class::FTildePrimeII,
        Class::W,
        Class::WTilde,
    ];

    pub fn side(self) -> Option<Side> {
        match self {
            Class::FI | Class::FII | Class::W => Some(Side::Lower),
            Class::Unclassified => None,
            _ => Some(Side::Upper),
        }
    }

    pub fn operator(self) -> Option<Operator> {
        match self {
            Class::FI | Class::FTildeI | Class::FTildePrimeI => Some(Operator::Single),
            Class::FII | Class::FTildeII | Class::FTildePrimeII => Some(Operator::Double),
            Class::W | Class::WTilde => Some(Operator::Difference),
            Class::Unclassified => None,
        }
    }

    /// Classes that carry a cut state.
    pub fn needs_support_end(self) -> bool {
        matches!(
            self,
            Class::FTildeI | Class::FTildeII | Class::FTildePrimeI | Class::WTilde
        )
    }

    /// Whether the class is defined for the given boundary case.
    pub fn exists_for(self, case: Case) -> bool {
        !(case == Case::Dn && self == Class::FTildePrimeI)
    }
}

/// A candidate `f` (or ratio sequence `w`) over the chain's index set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub values: Vec<f64>,
    pub class: Class,
    /// Cut state label `m` for the cut-shaped classes.
    pub support_end: Option<usize>,
}

impl TestFunction {
    pub fn new(values: Vec<f64>, class: Class, support_end: Option<usize>) -> Self {
        Self {
            values,
            class,
            support_end,
        }
    }

    /// Checks the class predicate against the chain.
    pub fn validate(&self, chain: &Chain, e: &Exponent) -> Result<()> {
        check_len(chain, self.values.len())?;
        let class = self.class;
        if !class.exists_for(chain.case()) {
            return Err(Error::inadmissible(
                class,
                format!("class is not defined for {} chains", chain.case()),
            ));
        }
        if self.values.iter().any(|x| !x.is_finite()) {
            return Err(Error::inadmissible(class, "non-finite entry"));
        }
        let cut = match (class.needs_support_end(), self.support_end) {
            (true, None) => {
                return Err(Error::inadmissible(class, "support_end is required"));
            }
            (_, Some(m)) => {
                let first = chain.case().first_index();
                if m < first || m > chain.n() {
                    return Err(Error::inadmissible(
                        class,
                        format!("support_end {m} is outside the index set"),
                    ));
                }
                Some(m - first)
            }
            (false, None) => None,
        };
        let bad = |pos: usize, what: &str| {
            Err(Error::inadmissible(
                class,
                format!("{what} at state {}", chain.label(pos)),
            ))
        };
        let v = &self.values;
        let last = v.len() - 1;
        match (chain.case(), class) {
            (_, Class::Unclassified) => Ok(()),
            (_, Class::FII) | (_, Class::FTildePrimeII) => {
                match v.iter().position(|x| *x <= 0.0) {
                    Some(i) => bad(i, "nonpositive value"),
                    None => Ok(()),
                }
            }
            (Case::Nd, Class::FI) => {
                if let Some(i) = v.iter().position(|x| *x <= 0.0) {
                    return bad(i, "nonpositive value");
                }
                match (0..last).find(|&i| v[i] <= v[i + 1]) {
                    Some(i) => bad(i, "not strictly decreasing"),
                    None => Ok(()),
                }
            }
            (Case::Nd, Class::FTildeII) => nd_cut_support(v, cut.unwrap(), &bad),
            (Case::Nd, Class::FTildeI) | (Case::Nd, Class::FTildePrimeI) => {
                let m = cut.unwrap();
                nd_cut_support(v, m, &bad)?;
                let n = if class == Class::FTildePrimeI {
                    0
                } else {
                    (0..m).find(|&i| v[i] != v[i + 1]).unwrap_or(m)
                };
                match (n..m).find(|&i| v[i] <= v[i + 1]) {
                    Some(i) => bad(i, "not strictly decreasing on the active range"),
                    None => Ok(()),
                }
            }
            (Case::Nd, Class::W) => {
                if v[last] != 0.0 {
                    return bad(last, "the last ratio must be 0");
                }
                match (0..last).find(|&i| !(v[i] > 0.0 && v[i] < 1.0)) {
                    Some(i) => bad(i, "ratio outside (0,1)"),
                    None => Ok(()),
                }
            }
            (Case::Nd, Class::WTilde) => {
                let m = cut.unwrap();
                if let Some(i) = (0..m).find(|&i| !(v[i] > 0.0 && v[i] < 1.0)) {
                    return bad(i, "ratio outside (0,1) before the cut");
                }
                if let Some(i) = (m..=last).find(|&i| v[i] != 0.0) {
                    return bad(i, "ratio must vanish from the cut on");
                }
                let r = crate::nd::op_r(chain, e, v)?;
                match (0..=m).find(|&i| !matches!(r[i].value(), Some(x) if x > 0.0)) {
                    Some(i) => bad(i, "difference form not positive"),
                    None => Ok(()),
                }
            }
            (Case::Dn, Class::FI) => {
                if v[0] <= 0.0 {
                    return bad(0, "nonpositive value");
                }
                match (0..last).find(|&i| v[i] >= v[i + 1]) {
                    Some(i) => bad(i + 1, "not strictly increasing"),
                    None => Ok(()),
                }
            }
            (Case::Dn, Class::FTildeII) => {
                let m = cut.unwrap();
                if let Some(i) = v.iter().position(|x| *x <= 0.0) {
                    return bad(i, "nonpositive value");
                }
                match (m..last).find(|&i| v[i + 1] != v[m]) {
                    Some(i) => bad(i + 1, "not constant after the cut"),
                    None => Ok(()),
                }
            }
            (Case::Dn, Class::FTildeI) => {
                let m = cut.unwrap();
                if v[0] <= 0.0 {
                    return bad(0, "nonpositive value");
                }
                if let Some(i) = (0..m).find(|&i| v[i] >= v[i + 1]) {
                    return bad(i + 1, "not strictly increasing before the cut");
                }
                match (m..last).find(|&i| v[i + 1] != v[m]) {
                    Some(i) => bad(i + 1, "not constant after the cut"),
                    None => Ok(()),
                }
            }
            (Case::Dn, Class::W) => {
                if let Some(i) = (0..last).find(|&i| v[i] <= 1.0) {
                    return bad(i, "ratio not above 1");
                }
                if v[last] < 1.0 {
                    return bad(last, "ratio below 1");
                }
                Ok(())
            }
            (Case::Dn, Class::WTilde) => {
                let m = cut.unwrap();
                if let Some(i) = (0..m).find(|&i| v[i] <= 1.0) {
                    return bad(i, "ratio not above 1 before the cut");
                }
                if let Some(i) = (m..=last).find(|&i| v[i] != 1.0) {
                    return bad(i, "ratio must equal 1 from the cut on");
                }
                let r = crate::dn::op_rtilde(chain, e, v, chain.label(m))?;
                match (0..m).find(|&i| !matches!(r[i].value(), Some(x) if x > 0.0)) {
                    Some(i) => bad(i, "difference form not positive"),
                    None => Ok(()),
                }
            }
            (Case::Dn, Class::FTildePrimeI) => unreachable!("rejected above"),
        }
    }
}

fn nd_cut_support(
    v: &[f64],
    m: usize,
    bad: &dyn Fn(usize, &str) -> Result<()>,
) -> Result<()> {
    if let Some(i) = (0..=m).find(|&i| v[i] <= 0.0) {
        return bad(i, "nonpositive value inside the support");
    }
    match (m + 1..v.len()).find(|&i| v[i] != 0.0) {
        Some(i) => bad(i, "nonzero value past the support"),
        None => Ok(()),
    }
}
