//! Exact symbolic computation of CR-geometric invariants of real-analytic
//! generic submanifolds of complex space.
//!
//! Everything here works over truncated multivariate power series with
//! Gaussian-rational coefficients, so every zero test is exact:
//!
//! - [`series`]: the truncated series ring, composition, conjugation.
//! - [`manifold`]: defining expressions, complexification `Z̄ ↦ ζ`,
//!   reality and genericity validation, the CR number.
//! - [`segre`]: Segre variety mappings, iterated Segre mappings, generic
//!   rank certificates and the rank criterion for finite type.
//! - [`nondegeneracy`]: CR vector fields, Levi/k-nondegeneracy,
//!   holomorphic nondegeneracy and finite type via Lie brackets.
//! - [`maps`]: formal maps between manifolds, membership, classification,
//!   jets and the reflection computation on the Lewy hypersurface.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coeff;
pub mod error;
pub mod linalg;
pub mod manifold;
pub mod maps;
pub mod nondegeneracy;
pub mod segre;
pub mod series;

pub use coeff::GaussianRational;
pub use error::{Error, Result};
pub use manifold::{DefiningExpr, DefiningSystem, ManifoldSpec};
pub use series::{Context, Monomial, SeriesVector, TruncatedSeries, VarBlock};
