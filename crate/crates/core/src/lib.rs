//! Exact analysis of log-concavity for sequences defined by linear
//! recurrences whose coefficients are affine in the index `n`:
//!
//! ```text
//! a_{n+1} = sum_{k=0}^{d-1} (p_k n + q_k) a_{n-k},   n >= d-1
//! ```
//!
//! Everything that can decide a sign is computed over exact rationals.
//! Floating point only appears in display helpers and in the asymptotic
//! fit of [`criteria::dominant_root_profile`].

pub mod criteria;
pub mod ell;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod qform;
pub mod rational;
pub mod recurrence;
pub mod verdict;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use rational::Rational;
pub use recurrence::{RecurrenceSpec, SequenceWindow};
pub use verdict::{Certificate, Property, Scope, Status, Verdict, Witness};
