//! Exact arithmetic in `F_q`, its extensions, univariate polynomials and
//! small dense linear algebra.

mod extension;
mod field;
mod matrix;
mod poly;

pub use extension::{extend_field, extend_field_with_limit, Embedding};
pub use field::{
    make_field, prime_power, ArithOp, FieldCtx, FieldElement, DEFAULT_MAX_FIELD_SIZE,
};
pub(crate) use field::gcd_u64;
pub use matrix::{rank_fq, MatrixFq};
pub use poly::{factor_degrees, Poly};
