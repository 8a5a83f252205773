//! Principal mixed eigenvalues of the discrete p-Laplacian on finite
//! weighted chains.
//!
//! The crate computes two-sided bounds for the principal eigenvalue
//! `lambda_p` (the reciprocal of the optimal constant in a weighted discrete
//! Hardy inequality) through single-summation, double-summation and
//! difference operators, improves them with iterative approximating
//! sequences, and checks everything against a shooting eigensolver.
//!
//! Two boundary configurations are supported, see [`Case`]. All positive
//! quantities are carried in log scale internally so that chains whose
//! transformed weights span thousands of orders of magnitude still evaluate.
//!
//! ```
//! use plap_core::{Case, Chain, Exponent, eigen, nd};
//!
//! let chain = Chain::uniform(10, Case::Nd).unwrap();
//! let e = Exponent::new(2.0).unwrap();
//! let (lo, hi) = nd::basic_bounds(&chain, &e).unwrap();
//! let sol = eigen::solve(&chain, &e, eigen::DEFAULT_TOL).unwrap();
//! assert!(lo <= sol.lambda && sol.lambda <= hi);
//! ```

pub mod chain;
pub mod dn;
pub mod eigen;
pub mod error;
pub mod exponent;
pub mod forms;
mod kernel;
pub mod logspace;
pub mod nd;
pub mod ops;
pub mod random;
pub mod report;
pub mod suite;
pub mod tables;
pub mod testfn;

pub use chain::{dual_chain, inverse_dual_chain, Case, Chain, DnTildeMu, MAX_STATES};
pub use eigen::{EigenSolution, ShotResult};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use ops::{OpValue, ScanOptions};
pub use report::{bounds_report, BoundsReport};
pub use tables::{nu_hat, NuHat, PartialSumTable};
pub use testfn::{Class, Side, TestFunction};
