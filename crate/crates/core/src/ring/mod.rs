//! Exact coefficients, ring contexts and sparse multivariate polynomials.

mod coeff;
mod context;
mod monomial;
mod poly;

pub use coeff::{Coeff, CoeffField};
pub use context::{is_identifier, Ctx, RingContext};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{arithmetic, ArithOp, Poly};
pub(crate) use poly::{fmt_scaled, join_signed};
