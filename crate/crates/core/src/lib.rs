//! Numerical laboratory for Ornstein–Uhlenbeck semigroups with diagonal
//! drift: semigroups, resolvents, gradient representations, rank-one
//! Gaussian reductions and a logarithmically divergent lower bound for the
//! weighted sup-norm gradient functional.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod oracle;
pub mod ousolver;
pub mod reduction;
pub mod specfun;
pub mod spectrum;
pub mod testfn;

pub use error::{Error, Result};
