//! Module presentations over Λ and over scalar rings, Smith normal form, finite Λ-modules.

use thiserror::Error;

use crate::laurent::LaurentError;

mod lattice;
mod matrix;
mod module;
mod present;
mod snf;

pub use lattice::Lattice;
pub use matrix::IntMatrix;
pub use module::{cokernel, FiniteModule, PresentedModule, Submodule};
pub use present::{
    base_arc, finite_module_from, kernel_coords, present_kernel, present_reduced_module,
    specialize_presentation, specialize_vector, specialized_module, IntPresentation,
    LambdaPresentation,
};
pub use snf::{integer_kernel, smith_normal_form, Snf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error(transparent)]
    Ring(#[from] LaurentError),
    #[error("malformed module data: {0}")]
    Shape(String),
    #[error("t does not act invertibly")]
    NotInvertible,
    #[error("operation needs a finite module")]
    InfiniteUnsupported,
    #[error("size {0} exceeds the configured cap")]
    SizeCap(u64),
}
