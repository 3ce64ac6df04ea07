//! Finite-field arithmetic over GF(p^m), polynomials over such fields,
//! and exact linear algebra (Gaussian elimination, rank, inverse).
//!
//! Elements are stored in canonical polynomial-basis form, packed into a
//! `u64` code: the coefficient vector (c_0, ..., c_{m-1}) over GF(p) maps
//! to `sum c_i * p^i`. Fields of order at most 2^16 get log/antilog
//! tables; semantics are identical either way.

mod field;
mod matrix;
mod poly;

pub use field::{FieldElement, FieldSpec};
pub use matrix::{Matrix, OpCount};
pub use poly::Poly;

use std::fmt;

/// Errors from field construction, element arithmetic, and linear algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisError {
    /// The characteristic is not a prime number.
    NotPrime(u64),
    /// Extension degree must be at least 1.
    ZeroDegree,
    /// log2(p^m) exceeds the 63-bit element representation.
    FieldTooLarge { p: u64, m: usize },
    /// Modulus has the wrong degree or a zero leading coefficient.
    BadModulusShape { expected_degree: usize },
    /// Modulus factors over GF(p); the witness is a proper divisor.
    ReducibleModulus { divisor: Vec<u64> },
    /// Exhaustive checks on this field would be too expensive.
    VerificationTooExpensive,
    /// No irreducible modulus found (cannot happen for prime p, m >= 1).
    NoIrreducibleFound,
    /// Operands belong to different fields.
    FieldMismatch,
    /// Element code is outside [0, p^m).
    InvalidCode { code: u64, order: u64 },
    /// Multiplicative inverse of zero requested.
    ZeroInverse,
    /// Matrix shapes are not conformable for the operation.
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Square matrix is singular.
    Singular,
    /// Linear system has no solution.
    Inconsistent,
}

impl fmt::Display for GaloisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisError::NotPrime(p) => write!(f, "{p} is not prime"),
            GaloisError::ZeroDegree => write!(f, "extension degree must be >= 1"),
            GaloisError::FieldTooLarge { p, m } => {
                write!(f, "GF({p}^{m}) exceeds the 63-bit element representation")
            }
            GaloisError::BadModulusShape { expected_degree } => {
                write!(f, "modulus must have degree {expected_degree} with nonzero leading coefficient")
            }
            GaloisError::ReducibleModulus { divisor } => {
                write!(f, "modulus is reducible; divisor coefficients {divisor:?}")
            }
            GaloisError::VerificationTooExpensive => {
                write!(f, "irreducibility check by trial division is infeasible at this size")
            }
            GaloisError::NoIrreducibleFound => write!(f, "no irreducible modulus found"),
            GaloisError::FieldMismatch => write!(f, "operands belong to different fields"),
            GaloisError::InvalidCode { code, order } => {
                write!(f, "element code {code} outside field of order {order}")
            }
            GaloisError::ZeroInverse => write!(f, "zero has no multiplicative inverse"),
            GaloisError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {}x{} vs {}x{}", left.0, left.1, right.0, right.1)
            }
            GaloisError::Singular => write!(f, "matrix is singular"),
            GaloisError::Inconsistent => write!(f, "linear system is inconsistent"),
        }
    }
}

impl std::error::Error for GaloisError {}
