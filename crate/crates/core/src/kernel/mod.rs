//! Exact scalars, value groups and integer linear algebra.

pub mod intmat;
mod scalar;
mod value_group;

pub use intmat::{hnf, kernel_basis, snf, solve_integer, IntMatrix};
pub use scalar::{Field, Scalar};
pub use value_group::ValueGroup;

/// Whether `x` lies in Γ; mixed scalar fields are an error.
pub fn gamma_contains(gamma: &ValueGroup, x: &Scalar) -> crate::Result<bool> {
    gamma.contains(x)
}
