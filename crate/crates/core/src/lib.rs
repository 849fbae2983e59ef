//! Exact toric geometry over rank-one valuation rings.
//!
//! Cones live in `N_ℝ × ℝ₊` with coordinates `(w, t)` and are cut out by
//! inequalities `⟨m, w⟩ + c·t >= 0` where `m` is integral and `c` lies in the
//! value group Γ. All arithmetic is exact over ℚ or a real quadratic field.

pub mod blowup;
pub mod error;
pub mod exec;
pub mod fan;
pub mod kernel;
pub mod gamma_cone;
pub mod polyhedral;
pub mod projective;
pub mod semigroup;

pub use error::{Error, Result};
pub use exec::Exec;
pub use kernel::{Field, Scalar, ValueGroup};
