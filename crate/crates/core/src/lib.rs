//! Arbitrary-precision verification of exponential-sum identities for the
//! divisor functions σ_a(n), and recovery of σ_a(n) from a kernel-matrix solve.
//!
//! ```
//! use divsum_core::{arith, PrecisionContext};
//! assert_eq!(arith::sigma(1, 12).unwrap(), 28);
//! assert!(PrecisionContext::new(60).is_ok());
//! ```

pub mod arith;
pub mod complex;
pub mod error;
pub mod identities;
pub mod kernels;
pub mod mellin;
pub mod precision;
pub mod recovery;
pub mod specfun;

pub use arith::{DivisorOracle, PrimeList, SmoothSet};
pub use complex::{BigComplex, BigReal};
pub use error::{Error, Result};
pub use identities::{IdentityReport, PartialSumTable, Verdict};
pub use kernels::{KernelSpec, Variant};
pub use mellin::{LineIntegralSpec, QuadResult, XiTail};
pub use precision::PrecisionContext;
pub use recovery::{QMatrix, RecoveryResult};
