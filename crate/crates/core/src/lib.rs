//! Rank-one subshift words, Möbius sieving, and the finite-data checks used to
//! study Möbius disjointness of rank-one subshifts.

pub mod accc;
pub mod bits;
pub mod error;
pub mod katok;
pub mod klr;
pub mod mobius;
pub mod positions;
pub mod sarnak;
pub mod words;

pub use error::{Error, Result};
