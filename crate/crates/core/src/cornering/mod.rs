//! The free cornering of a resource theory: exchanges, cells, boundaries,
//! yanking normalization, crossing cells, tensor, flow semantics over the
//! integer theory, and compact closed witnesses.

mod dual;
mod equal;
mod flow;
pub(crate) mod normalize;

pub use dual::{exchange_dual, h_dual_witness, lemma1_witness};
pub use equal::cell_equal_free;
pub use flow::{eval_flow, z_cell, FlowError, FlowSummary};

use crate::theory::Theory;
use std::fmt;

/// Direction a resource crosses a vertical boundary.
///
/// `Out` (written `a°`) flows left to right; `In` (written `a•`) flows right
/// to left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Out,
    In,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Out => Polarity::In,
            Polarity::In => Polarity::Out,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::Out => "o",
            Polarity::In => "*",
        }
    }
}

/// An element of the exchange monoid: a finite sequence of polarized objects.
///
/// The monoid is free; entries are never merged or reordered.
#[derive(Debug, Clone)]
pub struct Exchange<T: Theory>(pub Vec<(T::Obj, Polarity)>);

// Manual impls: a derive would demand `T: PartialEq`, which the theory
// itself need not satisfy.
impl<T: Theory> PartialEq for Exchange<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<T: Theory> Eq for Exchange<T> {}

impl<T: Theory> Exchange<T> {
    pub fn empty() -> Self {
        Exchange(Vec::new())
    }

    pub fn single(obj: T::Obj, pol: Polarity) -> Self {
        Exchange(vec![(obj, pol)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[(T::Obj, Polarity)] {
        &self.0
    }

    /// Concatenation.
    pub fn tensor(&self, other: &Exchange<T>) -> Exchange<T> {
        let mut entries = self.0.clone();
        entries.extend(other.0.iter().cloned());
        Exchange(entries)
    }
}

impl<T: Theory> fmt::Display for Exchange<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "i");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(o, p)| format!("{}^{}", o, p.symbol()))
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

/// The four-sided boundary of a cell: object words on top and bottom,
/// exchanges on the left and right.
#[derive(Debug, Clone)]
pub struct CellBoundary<T: Theory> {
    pub top: T::Obj,
    pub bottom: T::Obj,
    pub left: Exchange<T>,
    pub right: Exchange<T>,
}

impl<T: Theory> PartialEq for CellBoundary<T> {
    fn eq(&self, other: &Self) -> bool {
        self.top == other.top
            && self.bottom == other.bottom
            && self.left == other.left
            && self.right == other.right
    }
}

impl<T: Theory> Eq for CellBoundary<T> {}

impl<T: Theory> fmt::Display for CellBoundary<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(top {}, bottom {}, left {}, right {})",
            self.top, self.bottom, self.left, self.right
        )
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CellError {
    #[error("vertical composition mismatch: bottom {0} != top {1}")]
    VMismatch(String, String),
    #[error("horizontal composition mismatch: right {0} != left {1}")]
    HMismatch(String, String),
    #[error("ill-composed subterm: {0}")]
    IllComposed(String),
    #[error("theory error: {0}")]
    Theory(#[from] crate::theory::TheoryError),
}

/// A term of the free cornering: corners, lifted morphisms, identities and
/// crossings, closed under vertical and horizontal composition.
#[derive(Debug, Clone)]
pub enum Cell<T: Theory> {
    /// A lifted morphism of the ambient theory; trivial left/right boundary.
    Mor(T::Mor),
    /// Vertical identity on an object (trivial edge of the cell graph).
    VId(T::Obj),
    /// Horizontal identity on an exchange.
    HId(Exchange<T>),
    /// Top `a`, right `a°`: the resource leaves to the right.
    EmitRight(T::Obj),
    /// Left `a°`, bottom `a`: the resource arrives from the left.
    AbsorbLeft(T::Obj),
    /// Top `a`, left `a•`: the resource leaves to the left.
    EmitLeft(T::Obj),
    /// Right `a•`, bottom `a`: the resource arrives from the right.
    AbsorbRight(T::Obj),
    /// An exchange passes over a resident object unchanged.
    Crossing(T::Obj, Exchange<T>),
    VComp(Box<Cell<T>>, Box<Cell<T>>),
    HComp(Box<Cell<T>>, Box<Cell<T>>),
}

impl<T: Theory> PartialEq for Cell<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Cell::Mor(a), Cell::Mor(b)) => a == b,
            (Cell::VId(a), Cell::VId(b)) => a == b,
            (Cell::HId(a), Cell::HId(b)) => a == b,
            (Cell::EmitRight(a), Cell::EmitRight(b)) => a == b,
            (Cell::AbsorbLeft(a), Cell::AbsorbLeft(b)) => a == b,
            (Cell::EmitLeft(a), Cell::EmitLeft(b)) => a == b,
            (Cell::AbsorbRight(a), Cell::AbsorbRight(b)) => a == b,
            (Cell::Crossing(a, x), Cell::Crossing(b, y)) => a == b && x == y,
            (Cell::VComp(a, b), Cell::VComp(c, d)) => a == c && b == d,
            (Cell::HComp(a, b), Cell::HComp(c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl<T: Theory> Cell<T> {
    /// Number of constructors in the term.
    pub fn size(&self) -> usize {
        match self {
            Cell::VComp(a, b) | Cell::HComp(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

/// Boundary of a cell by structural recursion; fails on ill-composed terms,
/// naming the offending subterm.
pub fn boundary<T: Theory>(th: &T, cell: &Cell<T>) -> Result<CellBoundary<T>, CellError> {
    match cell {
        Cell::Mor(m) => Ok(CellBoundary {
            top: th.mor_dom(m),
            bottom: th.mor_cod(m),
            left: Exchange::empty(),
            right: Exchange::empty(),
        }),
        Cell::VId(a) => Ok(CellBoundary {
            top: a.clone(),
            bottom: a.clone(),
            left: Exchange::empty(),
            right: Exchange::empty(),
        }),
        Cell::HId(x) => Ok(CellBoundary {
            top: th.unit(),
            bottom: th.unit(),
            left: x.clone(),
            right: x.clone(),
        }),
        Cell::EmitRight(a) => Ok(CellBoundary {
            top: a.clone(),
            bottom: th.unit(),
            left: Exchange::empty(),
            right: Exchange::single(a.clone(), Polarity::Out),
        }),
        Cell::AbsorbLeft(a) => Ok(CellBoundary {
            top: th.unit(),
            bottom: a.clone(),
            left: Exchange::single(a.clone(), Polarity::Out),
            right: Exchange::empty(),
        }),
        Cell::EmitLeft(a) => Ok(CellBoundary {
            top: a.clone(),
            bottom: th.unit(),
            left: Exchange::single(a.clone(), Polarity::In),
            right: Exchange::empty(),
        }),
        Cell::AbsorbRight(a) => Ok(CellBoundary {
            top: th.unit(),
            bottom: a.clone(),
            left: Exchange::empty(),
            right: Exchange::single(a.clone(), Polarity::In),
        }),
        Cell::Crossing(b, x) => Ok(CellBoundary {
            top: b.clone(),
            bottom: b.clone(),
            left: x.clone(),
            right: x.clone(),
        }),
        Cell::VComp(c1, c2) => {
            let b1 = boundary(th, c1)?;
            let b2 = boundary(th, c2)?;
            if b1.bottom != b2.top {
                return Err(CellError::VMismatch(
                    b1.bottom.to_string(),
                    b2.top.to_string(),
                ));
            }
            Ok(CellBoundary {
                top: b1.top,
                bottom: b2.bottom,
                left: b1.left.tensor(&b2.left),
                right: b1.right.tensor(&b2.right),
            })
        }
        Cell::HComp(c1, c2) => {
            let b1 = boundary(th, c1)?;
            let b2 = boundary(th, c2)?;
            if b1.right != b2.left {
                return Err(CellError::HMismatch(
                    b1.right.to_string(),
                    b2.left.to_string(),
                ));
            }
            Ok(CellBoundary {
                top: th.tensor(&b1.top, &b2.top),
                bottom: th.tensor(&b1.bottom, &b2.bottom),
                left: b1.left,
                right: b2.right,
            })
        }
    }
}

/// Vertical composition with a boundary compatibility check.
pub fn vcomp<T: Theory>(th: &T, c1: Cell<T>, c2: Cell<T>) -> Result<Cell<T>, CellError> {
    let b1 = boundary(th, &c1)?;
    let b2 = boundary(th, &c2)?;
    if b1.bottom != b2.top {
        return Err(CellError::VMismatch(
            b1.bottom.to_string(),
            b2.top.to_string(),
        ));
    }
    Ok(Cell::VComp(Box::new(c1), Box::new(c2)))
}

/// Horizontal composition with a boundary compatibility check.
pub fn hcomp<T: Theory>(th: &T, c1: Cell<T>, c2: Cell<T>) -> Result<Cell<T>, CellError> {
    let b1 = boundary(th, &c1)?;
    let b2 = boundary(th, &c2)?;
    if b1.right != b2.left {
        return Err(CellError::HMismatch(
            b1.right.to_string(),
            b2.left.to_string(),
        ));
    }
    Ok(Cell::HComp(Box::new(c1), Box::new(c2)))
}

/// Vertical composition of a nonempty sequence.
pub fn vcomp_all<T: Theory>(th: &T, cells: Vec<Cell<T>>) -> Result<Cell<T>, CellError> {
    let mut iter = cells.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| CellError::IllComposed("empty vertical composite".into()))?;
    iter.try_fold(first, |acc, c| vcomp(th, acc, c))
}

/// The crossing cell `χ_{b,x}` with boundary `(b, b, x, x)`.
pub fn crossing<T: Theory>(b: T::Obj, x: Exchange<T>) -> Cell<T> {
    Cell::Crossing(b, x)
}

/// Exhaustive rewriting to normal form: yanking redexes collapse to identity
/// cells, identity cells are absorbed, vertically adjacent lifted morphisms
/// fuse, crossings commute past corners. The boundary is preserved.
pub fn yank_normalize<T: Theory>(th: &T, cell: &Cell<T>) -> Result<Cell<T>, CellError> {
    let n = normalize::normalize(th, cell)?;
    Ok(normalize::to_cell(th, &n))
}

/// Tensor product of cells via the 2x2 crossing grid: `c2`'s left exchange is
/// routed past `c1`'s bottom word and `c1`'s right exchange past `c2`'s top
/// word.
pub fn cell_tensor<T: Theory>(th: &T, c1: &Cell<T>, c2: &Cell<T>) -> Result<Cell<T>, CellError> {
    let b1 = boundary(th, c1)?;
    let b2 = boundary(th, c2)?;
    let row1 = hcomp(
        th,
        c1.clone(),
        Cell::Crossing(b2.top.clone(), b1.right.clone()),
    )?;
    let row2 = hcomp(
        th,
        Cell::Crossing(b1.bottom.clone(), b2.left.clone()),
        c2.clone(),
    )?;
    vcomp(th, row1, row2)
}
