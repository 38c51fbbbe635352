//! Finite-model workbench for Sugihara monoids, relative Stone and Gödel
//! algebras with a Boolean constant, their Esakia-style dual spaces, and
//! Urquhart relevant spaces.
//!
//! Everything here operates on explicit finite carriers (at most 64
//! elements, subsets as fixed-width bitsets). Each construction validates
//! its output against the defining axioms of its class, and the connecting
//! isomorphisms between the different representations are produced as
//! checkable witnesses rather than assumed.

pub mod algebra;
pub mod builtins;
mod error;
pub mod esakia;
pub mod hom;
pub mod natural;
pub mod order;
pub mod relevant;
pub mod report;
pub mod subset;
pub mod twist;

pub use error::{Error, Result};
pub use report::{LawCheck, ValidationReport};
