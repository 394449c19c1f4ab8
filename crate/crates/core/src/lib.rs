//! Exact desk-scale computations for parabolic bundles, λ-connections and
//! their moduli.

pub mod error;
pub mod exactnum;
pub mod fuchsian;
pub mod fine_moduli;
pub mod git_grass;
pub mod logops;
pub mod parabolic;
pub mod serde_rational;

pub use error::{Error, Result};

/// Default cap on enumerated objects (subspaces, group elements, ...).
pub const DEFAULT_BUDGET: u64 = 1_000_000;
