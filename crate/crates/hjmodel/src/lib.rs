//! Identification toolkit for Houthakker-Johansen production models.
//!
//! Given a time series of outputs and prices, the crate decides whether the
//! data is compatible with a CES micro-level cost structure (a moment
//! problem over the cells of a line arrangement), estimates the micro-level
//! elasticity of substitution in polynomial time, builds witness capacity
//! distributions, manipulates the combinatorial shadow of the arrangement
//! (words, rhombic tilings, snakes), and numerically verifies the
//! production/profit duality identities behind the model.

pub mod aggregation;
pub mod arrangement;
pub mod cli;
pub mod cone;
pub mod duality;
pub mod elasticity;
pub mod error;
pub mod lp;
pub mod model;
pub mod moment;
pub mod perm;
pub mod quad;
pub mod series;
pub mod special;
pub mod spectrum;
pub mod tiling;
pub mod tol;

pub use error::{Error, Result};
