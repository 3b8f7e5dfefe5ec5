//! Exact enumeration for the generalized factor order on words over the
//! positive integers.
//!
//! A word `w` contains a pattern `u` wherever a window of `w` dominates `u`
//! entrywise. The crate computes the trivariate generating function
//! `A_u(x, y, z)` (length, weight, occurrences) by three independent routes:
//!
//! * the cluster route ([`genfun`]) built on minimal clusters ([`clusters`]),
//! * a dominance-matching automaton ([`automaton`]),
//! * brute-force enumeration ([`oracle`]),
//!
//! and uses the minimal-cluster series to recover a pattern's sorted letters
//! ([`recovery`]) and to classify patterns up to (strong) Wilf equivalence
//! ([`equiv`]).

pub mod automaton;
pub mod clusters;
pub mod equiv;
pub mod error;
pub mod genfun;
pub mod oracle;
pub mod recovery;
pub mod series;
pub mod words;

pub use error::{Error, Result};
pub use series::{Monomial, Series, Truncation, YPolynomial};
pub use words::{Partition, Word};
