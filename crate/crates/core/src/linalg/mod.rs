//! Exact integer linear algebra: dense big-integer matrices, integer
//! polynomials, and characteristic polynomials by modular reduction.

mod charpoly;
mod matrix;
pub mod modular;
mod poly;

pub use charpoly::{char_poly_with, coefficient_bound, CharPolyOptions, CharPolyStats};
pub use matrix::IntMatrix;
pub use poly::{divides, IntPolynomial};
