//! Open transition systems whose states and transitions carry resources and
//! resource transformations drawn from the cornering of a resource theory.
//!
//! The crate is organized around a [`theory::Theory`] trait with two built-in
//! instances: free symmetric strict monoidal categories presented by a
//! [`theory::TheorySignature`], and the thin compact closed integer theory
//! [`theory::ZTheory`]. Everything downstream (cells, spans, situated systems,
//! ledgers) is generic over the theory, with concrete aliases exported here.

pub mod accounts;
pub mod cornering;
pub mod files;
pub mod fixtures;
pub mod laws;
pub mod limits;
pub mod rgraph;
pub mod situated;
pub mod syntax;
pub mod theory;

pub use limits::Limits;
pub use theory::{FreeTheory, Theory, Verdict, ZTheory};

/// Cell of the cornering of a free presented theory.
pub type FreeCell = cornering::Cell<FreeTheory>;
/// Cell of the cornering of the integer theory.
pub type ZCell = cornering::Cell<ZTheory>;
/// Exchange over a free presented theory.
pub type FreeExchange = cornering::Exchange<FreeTheory>;
/// Exchange over the integer theory.
pub type ZExchange = cornering::Exchange<ZTheory>;
/// Situated transition system over a free presented theory.
pub type FreeSystem = situated::SituatedSystem<FreeTheory>;
/// Situated transition system over the integer theory (an account system).
pub type ZSystem = situated::SituatedSystem<ZTheory>;
