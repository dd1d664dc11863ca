//! Laurent polynomials in one variable over the integers and over the
//! complex numbers, together with the numerical machinery built on them:
//! matrix determinants, root finding and exact cyclotomic resultants.

mod complex;
mod integer;
mod matrix;
mod parse;
mod resultant;
mod roots;

pub use complex::CxLaurentPoly;
pub use integer::IntLaurentPoly;
pub use matrix::{bareiss_det, complex_det, poly_det, PolyMatrix, DET_PRUNE};
pub use resultant::{resultant, resultant_with_cyclotomic_family};
pub use roots::RootSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("evaluation at zero of a polynomial with negative exponents")]
    ZeroBase,
    #[error("divisor does not divide the dividend (remainder norm {remainder:e})")]
    NotDivisible { remainder: f64 },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("root {index} failed residual certification (residual {residual:e}, bound {bound:e})")]
    RootCertification {
        index: usize,
        residual: f64,
        bound: f64,
    },
    #[error("quadrature needs a power of two >= 16 nodes, got {0}")]
    NodeCount(usize),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Conversion into the complex coefficient domain, used by every numerical
/// routine that accepts either kind of polynomial.
pub trait ToComplexPoly {
    fn to_complex(&self) -> CxLaurentPoly;
}

impl ToComplexPoly for IntLaurentPoly {
    fn to_complex(&self) -> CxLaurentPoly {
        self.to_cx()
    }
}

impl ToComplexPoly for CxLaurentPoly {
    fn to_complex(&self) -> CxLaurentPoly {
        self.clone()
    }
}
