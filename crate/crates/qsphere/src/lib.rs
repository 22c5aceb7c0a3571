//! Numerical realisation of the isospectral Dirac geometry on the
//! orthogonal quantum 4-sphere S⁴_q.
//!
//! Every representation is a sparse operator on a truncated label space;
//! algebraic identities are checked on interior columns, infinite traces
//! are computed level by level with certified tails.

pub mod approx_rep;
pub mod basis;
pub mod dirac_zeta;
pub mod error;
pub mod fredholm;
pub mod half;
pub mod operator;
pub mod qnum;
pub mod real_structure;
pub mod report;
pub mod shift;
pub mod sphere;
pub mod sum;
pub mod uqso5;

pub use error::{Error, Result};
pub use half::Half;
pub use qnum::QContext;
