//! Exact tools for bounding minimal discrepancies of hypersurface
//! singularities.
//!
//! * [`poly`]: sparse multivariate polynomials over ℚ with gcd and
//!   squarefree decomposition.
//! * [`parse`]: the text format for polynomials.
//! * [`initial`]: weighted orders, initial forms and the discrepancy bound
//!   `d = (a₁ + ⋯ + aₙ) − A`.
//! * [`cdv`]: the case-by-case certifier for compound Du Val threefold
//!   points.
//! * [`blowup`]: combinatorial blow-ups of simple normal crossing
//!   configurations.
//! * [`report`]: JSON certificates.

pub mod blowup;
pub mod cdv;
pub mod initial;
pub mod parse;
pub mod poly;
pub mod report;

pub use parse::{parse, render, ParseError};
pub use poly::{Monomial, PolyError, Polynomial, Rational, Ring};
