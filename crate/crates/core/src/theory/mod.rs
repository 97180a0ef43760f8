//! Resource theories: free symmetric strict monoidal categories presented by
//! signatures, and the compact closed integer theory.

mod diagram;
mod free;
mod signature;
mod word;
mod z;

pub use diagram::{Diagram, DiagramError, PortSink, PortSource};
pub use free::FreeTheory;
pub use signature::{MorphismGen, SignatureViolation, TheorySignature};
pub use word::ObjWord;
pub use z::ZTheory;

use crate::cornering::Cell;
use crate::limits::Limits;
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// Outcome of a bounded decision procedure.
///
/// `Unknown` is reported when a budget was exhausted before a verdict could be
/// reached; it is never silently collapsed to `False`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        self == Verdict::True
    }

    pub fn is_false(self) -> bool {
        self == Verdict::False
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    /// Conjunction: false dominates, then unknown.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (Unknown, _) | (_, Unknown) => Unknown,
            (True, True) => True,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum TheoryError {
    #[error("objects belong to different signatures: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("composition boundary mismatch: cod {0} != dom {1}")]
    ComposeMismatch(String, String),
    #[error("theory is not compact closed: {0}")]
    NotCompactClosed(String),
    #[error("unknown object generator {0}")]
    UnknownObject(String),
    #[error("unknown morphism generator {0}")]
    UnknownMorphism(String),
    #[error("diagram error: {0}")]
    Diagram(#[from] DiagramError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A resource theory: a symmetric strict monoidal category with decidable (at
/// desk scale, possibly three-valued) equality of objects and morphisms.
///
/// Objects form a monoid under `tensor` with `unit` as neutral element.
/// Morphisms compose sequentially and in parallel. Compact closed structure is
/// optional and queried through `dual` / `duality_unit` / `duality_counit`.
pub trait Theory: Clone + Debug {
    type Obj: Clone + PartialEq + Eq + Hash + Debug + Display;
    type Mor: Clone + Debug + PartialEq;

    fn unit(&self) -> Self::Obj;
    fn tensor(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;

    fn mor_dom(&self, m: &Self::Mor) -> Self::Obj;
    fn mor_cod(&self, m: &Self::Mor) -> Self::Obj;
    fn mor_identity(&self, a: &Self::Obj) -> Self::Mor;
    fn mor_is_identity(&self, m: &Self::Mor) -> bool;
    fn mor_compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, TheoryError>;
    fn mor_tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn mor_equal(&self, f: &Self::Mor, g: &Self::Mor, limits: &Limits) -> Verdict;
    /// The symmetry `σ_{a,b} : a ⊗ b → b ⊗ a`.
    fn mor_symmetry(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;

    fn is_compact_closed(&self) -> bool;
    /// Dual object. For words this reverses and dualizes letterwise, so that
    /// `(a ⊗ b)* = b* ⊗ a*`; for integers it negates.
    fn dual(&self, a: &Self::Obj) -> Result<Self::Obj, TheoryError>;
    /// The unit `η_a : I → a ⊗ a*` of the duality on `a`.
    fn duality_unit(&self, a: &Self::Obj) -> Result<Self::Mor, TheoryError>;
    /// The counit `ε_a : a* ⊗ a → I` of the duality on `a`.
    fn duality_counit(&self, a: &Self::Obj) -> Result<Self::Mor, TheoryError>;

    /// Isomorphisms `a → b` worth trying as components of a natural iso of
    /// situations. Thin theories return at most the identity; free theories
    /// return permutation diagrams.
    fn iso_candidates(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;

    /// Equality of cells of the cornering of this theory.
    fn cell_equal(&self, c1: &Cell<Self>, c2: &Cell<Self>, limits: &Limits) -> Verdict
    where
        Self: Sized;

    /// Canonical text form of an object, parseable by `parse_obj`.
    fn print_obj(&self, a: &Self::Obj) -> String;
    fn parse_obj(&self, s: &str) -> Result<Self::Obj, TheoryError>;
    fn print_mor(&self, m: &Self::Mor) -> String;
    fn parse_mor(&self, s: &str) -> Result<Self::Mor, TheoryError>;
}
