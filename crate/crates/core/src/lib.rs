//! Exact computation of Grothendieck residue symbols, traces of
//! differential forms under finite flat maps, generalized fractions and
//! Čech cohomology of line bundles on projective space.

pub mod cli;
pub mod error;
pub mod finite_trace;
pub mod forms;
pub mod fractions;
pub mod groebner;
pub mod linalg;
pub mod projective;
pub mod residue;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
