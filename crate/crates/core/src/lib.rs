//! Exact Toeplitz quantization on noncommutative polynomial algebras.
//!
//! Everything is computed over the Gaussian rationals: rewriting in a
//! quadratic presentation, the symbol space `𝒜 = 𝒫𝒫*`, truncated Toeplitz
//! operators, and the commutation relations among them.

pub mod ccr;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod presentation;
pub mod quantization;
pub mod scalar;
pub mod symbol;

pub use monomial::Monomial;
pub use poly::NcPoly;
pub use presentation::{ConfluenceReport, Presentation, PresentationError, Rule};
pub use quantization::{Model, QuantError, TruncatedOperator, TruncatedSpace};
pub use scalar::Scalar;
pub use symbol::{SymbolElem, SymbolError};
