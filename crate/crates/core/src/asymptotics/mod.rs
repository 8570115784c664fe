//! Asymptotic flats of the symbolic piece types, filtered to those whose
//! linear part lies in a given subspace `L`.

mod expansion;
mod flats;

use thiserror::Error;

use crate::lattice_algebra::LatticeError;

pub use expansion::{expand_at_infinity, ExpansionAtInfinity, ExpansionTerm, RemainderBound};
pub use flats::{
    affine_asymptotic_family, branch_asymptotic_flat, branch_asymptotic_flats, variety_asymptotic_flats, ScalarMode,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptoticsError {
    #[error("symbolically unsupported: {0}")]
    SymbolicUnsupported(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
