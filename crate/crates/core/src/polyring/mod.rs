//! Exact scalars and sparse polynomials in the five coordinates of P^4.
//!
//! The order-3 group acts diagonally; its action is read off the exponent
//! vectors (see [`Monomial::weight`]), so no roots of unity are ever
//! represented numerically.

mod monomial;
mod param;
mod poly;
mod scalar;

pub use monomial::{
    monomial_count, Monomial, NVARS, VAR_NAMES, VAR_WEIGHTS, W0, X1, X2, Y3, Y4,
};
pub(crate) use monomial::binomial;
pub use param::{Param, ParamMono, ParamPoly, NORMALIZED_SLOTS, NUM_PARAMS};
pub use poly::{derivative_weight_shift, Polynomial, TauImage};
pub use scalar::{is_prime, Coeff, Field, Fp, PrimeField, Rational};
