//! Rank-metric coding theory over finite principal ideal rings.
//!
//! The crate provides exact arithmetic in chain rings Z_{p^nu} and their
//! Galois extensions, Smith-normal-form linear algebra over any such ring,
//! submodule counting via module shapes, minimum-rank-distance computation
//! through socle/envelope projection, and combinatorial rank syndrome
//! decoding with trial-count estimators. Everything is exact: elements are
//! arbitrary-precision integers and counts are big integers or rationals.

pub mod codes;
pub mod error;
pub mod ext;
pub mod linalg;
mod poly;
pub mod ring;
pub mod shapes;

pub use error::{Error, Result};
pub use ext::{ExtElem, Extension};
pub use linalg::{Matrix, SmithForm, SolveOutcome};
pub use ring::{ChainRing, Zpn};
pub use shapes::Partition;
