//! Exact linear algebra over the rationals and small prime fields.

pub mod ext;
pub mod field;
pub mod matrix;
pub mod subspace;

pub use ext::FieldAlgorithms;
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::Matrix;
pub use subspace::{
    enumerate_all_subspaces, enumerate_subspaces, gaussian_binomial, subspace_count, QuotientMap,
    Subspace,
};
