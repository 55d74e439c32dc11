//! Verification toolkit for inequalities built on sub/supermodular set functions.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`setfn`]: dense set functions over a ground set of at most 24 elements,
//!   their structural predicates, the generalized Shearer inequality and the
//!   uncrossing procedure that turns any subset family into a chain.
//! - [`infomeasures`]: discrete joint distributions, Shannon measures in bits and
//!   the five information-theoretic set functions (entropy, conditional entropy,
//!   mutual information, conditional mutual information, entropy of sums).
//! - [`inequality_lab`]: the averaged subset sequences `t_k`, generalized Han
//!   inequalities, the finite-n sandwich, the projection bound and the
//!   entropy-power inequalities for sums.
//! - [`hypercube`]: confusion graphs on subsets of `{-1,1}^n`, the constants
//!   `m_d`/`l_d`, edge-count bounds and influence lower bounds.
//! - [`oracle`]: literal, single-threaded transcriptions of the definitions plus
//!   seeded instance generators, used to cross-check everything above.
//!
//! Scans over subsets and words run on rayon when the `parallel` feature is on
//! (the default). Every reduction is chunked in a fixed order, so results are
//! bit-identical with and without the feature.

pub mod combin;
pub mod error;
pub mod exec;
pub mod formats;
pub mod hypercube;
pub mod inequality_lab;
pub mod infomeasures;
pub mod oracle;
pub mod setfn;
pub mod tol;

pub use error::{Error, Result};
pub use exec::Exec;
pub use tol::{Check, Relation, DEFAULT_TOL};

/// Bitmask over a ground set: bit `i` set means element `i` (0-based) is present.
pub type Mask = u32;
