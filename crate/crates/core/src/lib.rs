//! Exact screening of qutrit stabilizer codes as distillation routines for
//! the qutrit strange state.
//!
//! The stack runs bottom-up: [`gf3`] linear algebra, [`classical`] and
//! [`stabilizer`] codes, [`enumerators`] with the MacWilliams transform, the
//! [`distill`] analysis built on exact rational polynomials from [`poly`], and
//! the batch [`pipeline`]. [`oracle`] checks the enumerator formulas against
//! dense matrices at small sizes.

pub mod catalog;
pub mod classical;
pub mod distill;
pub mod enumerators;
pub mod error;
pub mod gf3;
pub mod oracle;
pub mod pipeline;
pub mod poly;
pub mod stabilizer;

pub use classical::ClassicalTernaryCode;
pub use distill::{DistillationProfile, RationalFunction, StrangeParams};
pub use enumerators::{EnumeratorKind, WeightEnumerator};
pub use error::{Error, Result};
pub use gf3::{FFMatrix, FFVector, SymplecticVector, Trit};
pub use pipeline::{ScreeningRecord, SearchReport};
pub use stabilizer::StabilizerCode;
