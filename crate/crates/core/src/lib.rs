//! Pole analysis of degenerate Eisenstein series on the quasi-split forms of Spin(8).
//!
//! The pipeline runs bottom-up: the D4 root datum with a triality twist, the relative
//! Weyl group and its coset representatives, torus characters, formal L-function
//! products and their Laurent expansions, Gindikin-Karpelevich factors, and finally
//! pole orders of the constant term together with the downstream L-function checks.

pub mod affine;
pub mod applications;
pub mod characters;
pub mod cli;
pub mod gk;
pub mod golden;
pub mod lfun;
pub mod poles;
pub mod root_datum;
pub mod scalar;
pub mod weyl;

pub use scalar::{Scalar, Q};

/// Series coefficients default to arbitrary-precision rationals.
pub type BigQ = num_rational::BigRational;
/// Polynomial in the formal L-value symbols.
pub type Poly = lfun::SymPoly<BigQ>;
/// Laurent series with polynomial coefficients.
pub type Series = lfun::LaurentSeries<BigQ>;
/// The same engine over machine-width rationals.
pub type SmallSeries = lfun::LaurentSeries<num_rational::Ratio<i128>>;

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("character class {0} is not defined for this form")]
    UndefinedClass(String),
    #[error("expansion depth {0} does not determine the requested coefficient")]
    DepthInsufficient(usize),
    #[error("no pole at this point")]
    NoPole,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
