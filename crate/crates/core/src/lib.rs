//! Compactly generated t-structures in the derived category of a commutative
//! Noetherian ring, through their filtrations by supports of `Spec(R)`.
//!
//! The crate works on finite spectra (posets of prime labels) and on
//! finitely generated modules over `ℤ` and `ℤ/n`. It decides when the heart
//! of a t-structure is a Grothendieck category or a module category, and
//! checks the Ext-vanishing descriptions of torsion classes and of stalk
//! complexes in the heart.

pub mod arith;
pub mod classifier;
pub mod doc;
pub mod error;
pub mod filtration;
pub mod limits;
pub mod matrix;
pub mod module;
pub mod poset;
pub mod report;
pub mod ring;
pub mod verify;

pub use classifier::{grothendieck_verdict, module_verdict, HeartClassification, Verdict};
pub use doc::{parse_job, JobDoc};
pub use error::{Error, Result};
pub use filtration::{enumerate_filtrations, FiltrationShape, Level, SpFiltration};
pub use limits::Limits;
pub use poset::{Direction, PrimeId, PrimePoset, PrimeSet, SpSubset};
pub use ring::RingSpec;
