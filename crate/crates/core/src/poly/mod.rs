//! Exact polynomial arithmetic: rationals, sparse multivariate and dense
//! univariate polynomials, square-free decomposition, resultants.

mod elim;
mod multi;
mod rational;
mod uni;

pub use elim::{bareiss_det, discriminant, resultant, resultant_uni};
pub use multi::{grlex, MultiPoly};
pub use rational::{
    approximate, fmt_rational, int, parse_rational, rat, rational_sqrt, to_f64, Rational,
};
pub use uni::{squarefree_decomposition, SquareFree, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("cannot parse rational from {0:?} (expected p or p/q)")]
    Parse(String),
    #[error("variable {0} is not in the target variable list")]
    UnknownVariable(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}
