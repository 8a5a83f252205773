//! The exponent `p`, its conjugate `p*` and the constant `k(p)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest accepted exponent.
pub const P_MIN: f64 = 1.0 + 1e-6;
/// Largest accepted exponent.
pub const P_MAX: f64 = 1e6;

/// An exponent `p > 1` together with its conjugate `p* = p / (p - 1)`.
///
/// `p - 1` and `p* - 1 = 1 / (p - 1)` are kept separately: they are the
/// powers that actually appear in every operator, and forming them from
/// `p*` directly loses digits for large `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponent {
    p: f64,
    pstar: f64,
    kp: f64,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if !(P_MIN..=P_MAX).contains(&p) {
            return Err(Error::InvalidExponent(p));
        }
        let pstar = p / (p - 1.0);
        let kp = (p.ln() + (p - 1.0) * pstar.ln()).exp();
        Ok(Self { p, pstar, kp })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pstar(&self) -> f64 {
        self.pstar
    }

    /// `k(p) = p (p*)^(p-1)`, the ratio between the basic upper and lower bounds.
    pub fn kp(&self) -> f64 {
        self.kp
    }

    /// `p - 1`.
    pub fn pm1(&self) -> f64 {
        self.p - 1.0
    }

    /// `p* - 1 = 1 / (p - 1)`.
    pub fn pstar_m1(&self) -> f64 {
        1.0 / (self.p - 1.0)
    }

    /// The conjugate exponent as an [`Exponent`] in its own right.
    pub fn conjugate(&self) -> Result<Self> {
        Exponent::new(self.pstar)
    }
}
