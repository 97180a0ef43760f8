//! Conservation-of-value semantics for cells over the integer theory.
//!
//! Every boundary entry posts a signed amount into the cell: an outgoing
//! entry (`k°`) posts `+k` on the left and `-k` on the right, an incoming
//! entry (`k•`) posts `-k` on the left and `+k` on the right. Well-formed
//! cells conserve value: bottom = top + sum of postings. Over a thin theory
//! a cell is determined by its boundary, so the flow summary decides
//! equality.

use super::{boundary, Cell, CellError, Polarity};
use crate::theory::ZTheory;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FlowError {
    #[error("{0}")]
    Cell(#[from] CellError),
    #[error("conservation violated: bottom {bottom} != top {top} + postings {net}")]
    Conservation { top: i64, bottom: i64, net: i64 },
}

/// Boundary of an integer cell together with its posting structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSummary {
    pub top: i64,
    pub bottom: i64,
    pub left: Vec<(i64, Polarity)>,
    pub right: Vec<(i64, Polarity)>,
}

/// Signed amount a boundary entry contributes to the cell interior.
pub fn posting(entry: (i64, Polarity), on_left: bool) -> i64 {
    let (k, pol) = entry;
    match (pol, on_left) {
        (Polarity::Out, true) => k,
        (Polarity::Out, false) => -k,
        (Polarity::In, true) => -k,
        (Polarity::In, false) => k,
    }
}

impl FlowSummary {
    pub fn left_postings(&self) -> Vec<i64> {
        self.left.iter().map(|&e| posting(e, true)).collect()
    }

    pub fn right_postings(&self) -> Vec<i64> {
        self.right.iter().map(|&e| posting(e, false)).collect()
    }

    /// Net value posted across both sides.
    pub fn net_postings(&self) -> i64 {
        self.left_postings().iter().sum::<i64>() + self.right_postings().iter().sum::<i64>()
    }
}

/// Evaluate an integer cell to its flow summary, checking seam compatibility
/// and conservation.
pub fn eval_flow(th: &ZTheory, cell: &Cell<ZTheory>) -> Result<FlowSummary, FlowError> {
    let b = boundary(th, cell)?;
    let summary = FlowSummary {
        top: b.top,
        bottom: b.bottom,
        left: b.left.0,
        right: b.right.0,
    };
    let net = summary.net_postings();
    if summary.bottom != summary.top + net {
        return Err(FlowError::Conservation {
            top: summary.top,
            bottom: summary.bottom,
            net,
        });
    }
    Ok(summary)
}

/// The canonical integer cell with the given top edge and boundary
/// exchanges. The bottom edge is forced by conservation. Left entries are
/// realized first (top to bottom), then right entries.
pub fn z_cell(top: i64, left: &[(i64, Polarity)], right: &[(i64, Polarity)]) -> Cell<ZTheory> {
    let mut stock = top;
    let mut rows: Vec<Cell<ZTheory>> = Vec::new();
    for &(k, pol) in left {
        let row = match pol {
            // k arrives from the left: stock grows by k.
            Polarity::Out => Cell::HComp(
                Box::new(Cell::AbsorbLeft(k)),
                Box::new(Cell::VId(stock)),
            ),
            // k departs to the left: stock shrinks by k.
            Polarity::In => Cell::HComp(
                Box::new(Cell::EmitLeft(k)),
                Box::new(Cell::VId(stock - k)),
            ),
        };
        stock += posting((k, pol), true);
        rows.push(row);
    }
    for &(k, pol) in right {
        let row = match pol {
            Polarity::Out => Cell::HComp(
                Box::new(Cell::VId(stock - k)),
                Box::new(Cell::EmitRight(k)),
            ),
            Polarity::In => Cell::HComp(
                Box::new(Cell::VId(stock)),
                Box::new(Cell::AbsorbRight(k)),
            ),
        };
        stock += posting((k, pol), false);
        rows.push(row);
    }
    let mut iter = rows.into_iter();
    match iter.next() {
        None => Cell::VId(top),
        Some(first) => iter.fold(first, |acc, row| Cell::VComp(Box::new(acc), Box::new(row))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::theory::{Theory, Verdict};

    #[test]
    fn postings_sign_convention() {
        assert_eq!(posting((5, Polarity::Out), true), 5);
        assert_eq!(posting((5, Polarity::Out), false), -5);
        assert_eq!(posting((5, Polarity::In), true), -5);
        assert_eq!(posting((5, Polarity::In), false), 5);
    }

    #[test]
    fn corners_conserve() {
        let th = ZTheory;
        for cell in [
            Cell::EmitRight(7),
            Cell::AbsorbLeft(7),
            Cell::EmitLeft(-3),
            Cell::AbsorbRight(-3),
            Cell::VId(11),
            Cell::Mor(4),
        ] {
            let f = eval_flow(&th, &cell).unwrap();
            assert_eq!(f.bottom, f.top + f.net_postings());
        }
    }

    #[test]
    fn z_cell_realizes_boundary() {
        let th = ZTheory;
        let left = [(5, Polarity::Out), (2, Polarity::In)];
        let right = [(4, Polarity::Out), (-1, Polarity::In)];
        let c = z_cell(10, &left, &right);
        let f = eval_flow(&th, &c).unwrap();
        assert_eq!(f.top, 10);
        assert_eq!(f.left, left.to_vec());
        assert_eq!(f.right, right.to_vec());
        // 10 + 5 - 2 - 4 - 1
        assert_eq!(f.bottom, 8);
    }

    #[test]
    fn flow_equality_ignores_interleaving() {
        // Receiving on the left before or after emitting on the right gives
        // the same cell.
        let th = ZTheory;
        let a = Cell::VComp(
            Box::new(Cell::HComp(
                Box::new(Cell::AbsorbLeft(3)),
                Box::new(Cell::VId(1)),
            )),
            Box::new(Cell::HComp(
                Box::new(Cell::VId(0)),
                Box::new(Cell::EmitRight(4)),
            )),
        );
        let b = Cell::VComp(
            Box::new(Cell::HComp(
                Box::new(Cell::VId(-3)),
                Box::new(Cell::EmitRight(4)),
            )),
            Box::new(Cell::HComp(
                Box::new(Cell::AbsorbLeft(3)),
                Box::new(Cell::VId(-3)),
            )),
        );
        assert_eq!(th.cell_equal(&a, &b, &Limits::default()), Verdict::True);
    }

    #[test]
    fn ill_formed_rejected() {
        let th = ZTheory;
        let bad = Cell::VComp(Box::new(Cell::VId(1)), Box::new(Cell::VId(2)));
        assert!(eval_flow(&th, &bad).is_err());
    }
}
