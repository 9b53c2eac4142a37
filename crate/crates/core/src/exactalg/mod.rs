//! Exact arithmetic: prime fields and rationals, dense matrices, Laurent
//! polynomials and counting-polynomial interpolation.

pub mod field;
pub mod interp;
pub mod laurent;
pub mod matrix;

pub use field::{is_prime, sampling_primes, Field, PrimeField, Rationals};
pub use interp::{interpolate_counts, lagrange_coefficients, CountingPolynomial};
pub use laurent::{laurent_eq, Exponent, LaurentPoly};
pub use matrix::{kernel_basis, solve_linear, ExactMatrix, Rref};
