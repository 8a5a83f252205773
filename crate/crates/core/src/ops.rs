//! Operator values, scan options and the result types shared by the two
//! estimator modules, plus case-dispatching entry points.

use serde::{Serialize, Serializer};

use crate::chain::{Case, Chain};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::testfn::{Class, Side, TestFunction};
use crate::{dn, nd};

/// Default limit on `N` for the cut scans behind the primed and barred sequences.
pub const SCAN_CAP: usize = 2000;

/// One entry of an operator evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpValue {
    Value(f64),
    /// Zero denominator (`1/0 = inf`). Excluded from suprema of reciprocals.
    Infinite,
    /// Outside the support or past the cut of the test function.
    OffSupport,
}

impl OpValue {
    pub fn value(self) -> Option<f64> {
        match self {
            OpValue::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl Serialize for OpValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OpValue::Value(v) => s.serialize_f64(*v),
            OpValue::Infinite => s.serialize_str("inf"),
            OpValue::OffSupport => s.serialize_none(),
        }
    }
}

/// Limits for the `O(N^2)`-`O(N^3)` cut scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Largest `N` accepted.
    pub max_n: usize,
    /// Scan every `stride`-th cut (the last state is always included).
    /// Anything above 1 makes the result non-exhaustive.
    pub stride: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            max_n: SCAN_CAP,
            stride: 1,
        }
    }
}

impl ScanOptions {
    pub(crate) fn check(&self, n: usize) -> Result<()> {
        if self.stride == 0 {
            return Err(Error::InvalidParameter("scan stride must be positive".into()));
        }
        if n > self.max_n {
            return Err(Error::TooLarge {
                n,
                cap: self.max_n,
            });
        }
        Ok(())
    }

    /// Cut positions `first..=last` visited by the scan.
    pub(crate) fn cuts(&self, first: usize, last: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (first..=last).step_by(self.stride).collect();
        if out.last() != Some(&last) {
            out.push(last);
        }
        out
    }
}

/// A bound on `lambda_p` backed by one test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    pub side: Side,
    pub class: Class,
    /// State where the inner infimum/supremum is attained.
    pub index: usize,
}

/// `delta_n` for `n = 1..`, with the maximizing state of each step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSeq {
    pub values: Vec<f64>,
    pub argmax: Vec<usize>,
    /// Log of the last iterate, normalized to maximum 1.
    pub final_log_f: Vec<f64>,
}

/// Identifies one member of a cut family of test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cut {
    /// Flat up to this state (ND family only).
    pub plateau: Option<usize>,
    /// ND: last state of the support. DN: the function is constant from here on.
    pub cut: usize,
    /// State attaining the inner minimum (primed sequence only).
    pub argmin: Option<usize>,
}

/// A cut-family sequence with the optimal cut of each step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutSeq {
    pub values: Vec<f64>,
    pub cuts: Vec<Cut>,
    /// False when the scan was subsampled.
    pub exhaustive: bool,
}

/// The first-step values from the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Improved {
    pub delta1: f64,
    pub delta1_prime: f64,
    pub delta_bar1: f64,
}

/// `sigma_p` and the first state attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sigma {
    pub value: f64,
    pub log_value: f64,
    pub argmax: usize,
}

pub fn sigma(chain: &Chain, e: &Exponent) -> Sigma {
    match chain.case() {
        Case::Nd => nd::sigma(chain, e).expect("case checked"),
        Case::Dn => dn::sigma(chain, e).expect("case checked"),
    }
}

pub fn basic_bounds(chain: &Chain, e: &Exponent) -> (f64, f64) {
    let s = sigma(chain, e);
    basic_from_sigma(s.log_value, e)
}

pub(crate) fn basic_from_sigma(log_sigma: f64, e: &Exponent) -> (f64, f64) {
    ((-log_sigma - e.kp().ln()).exp(), (-log_sigma).exp())
}

pub fn op_i(chain: &Chain, e: &Exponent, f: &[f64]) -> Result<Vec<OpValue>> {
    match chain.case() {
        Case::Nd => nd::op_i(chain, e, f),
        Case::Dn => dn::op_i(chain, e, f),
    }
}

pub fn op_ii(chain: &Chain, e: &Exponent, f: &[f64]) -> Result<Vec<OpValue>> {
    match chain.case() {
        Case::Nd => nd::op_ii(chain, e, f),
        Case::Dn => dn::op_ii(chain, e, f),
    }
}

pub fn op_r(chain: &Chain, e: &Exponent, w: &[f64]) -> Result<Vec<OpValue>> {
    match chain.case() {
        Case::Nd => nd::op_r(chain, e, w),
        Case::Dn => dn::op_r(chain, e, w),
    }
}

pub fn bound_from_test_function(
    chain: &Chain,
    e: &Exponent,
    candidate: &TestFunction,
    side: Side,
) -> Result<Bound> {
    match chain.case() {
        Case::Nd => nd::bound_from_test_function(chain, e, candidate, side),
        Case::Dn => dn::bound_from_test_function(chain, e, candidate, side),
    }
}

pub fn delta_seq(chain: &Chain, e: &Exponent, n_max: usize) -> Result<DeltaSeq> {
    match chain.case() {
        Case::Nd => nd::delta_seq(chain, e, n_max),
        Case::Dn => dn::delta_seq(chain, e, n_max),
    }
}

/// Primed and barred sequences from one shared scan.
pub fn cut_sequences(
    chain: &Chain,
    e: &Exponent,
    n_max: usize,
    opts: &ScanOptions,
) -> Result<(CutSeq, CutSeq)> {
    match chain.case() {
        Case::Nd => nd::cut_sequences(chain, e, n_max, opts),
        Case::Dn => dn::cut_sequences(chain, e, n_max, opts),
    }
}

pub fn improved_estimates(chain: &Chain, e: &Exponent) -> Result<Improved> {
    match chain.case() {
        Case::Nd => nd::improved_estimates(chain, e),
        Case::Dn => dn::improved_estimates(chain, e),
    }
}

/// Checks the side requested matches the class and returns the operator family.
pub(crate) fn side_for(candidate: &TestFunction, side: Side) -> Result<()> {
    match candidate.class.side() {
        Some(s) if s == side => Ok(()),
        Some(_) => Err(Error::inadmissible(
            candidate.class,
            format!("class gives {} bounds only", candidate.class.side().unwrap()),
        )),
        None => Err(Error::inadmissible(
            candidate.class,
            "an unclassified candidate certifies nothing",
        )),
    }
}

/// Smallest `Value` entry with its position; `Infinite` entries are skipped.
pub(crate) fn min_value(vals: &[OpValue]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in vals.iter().enumerate() {
        if let OpValue::Value(x) = v {
            if best.is_none_or(|(_, b)| *x < b) {
                best = Some((i, *x));
            }
        }
    }
    best
}

pub(crate) fn max_value(vals: &[OpValue]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in vals.iter().enumerate() {
        if let OpValue::Value(x) = v {
            if best.is_none_or(|(_, b)| *x > b) {
                best = Some((i, *x));
            }
        }
    }
    best
}

/// `inf_i I_i^{-1}` counts an infinite entry as `0`, so it dominates the infimum.
pub(crate) fn has_infinite(vals: &[OpValue]) -> Option<usize> {
    vals.iter().position(|v| matches!(v, OpValue::Infinite))
}

pub(crate) fn n_max_check(n_max: usize) -> Result<()> {
    if n_max == 0 {
        Err(Error::InvalidParameter(
            "the iteration count must be at least 1".into(),
        ))
    } else {
        Ok(())
    }
}
