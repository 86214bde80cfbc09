//! Permutations and their descent/recoil statistics, the algebra FQSym in the
//! F basis, exact integer linear algebra, and checks on the matrices `M_n`
//! with `M_n(σ, τ) = 1` iff `Rec(τ) ⊆ Des(σ)`.

pub mod error;
pub mod fqsym;
pub mod linalg;
pub mod permutation;
pub mod verify;

pub use error::{Error, Result};
pub use fqsym::FQSymElement;
pub use linalg::{IntMatrix, IntPolynomial};
pub use permutation::{Composition, DescentSet, Permutation, SymmetricGroup};
pub use verify::{Budget, DescentMatrix, VerificationReport, Verifier};
