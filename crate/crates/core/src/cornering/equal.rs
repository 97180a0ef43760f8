//! Equality of cells over a free theory.
//!
//! Both cells are normalized, then a bidirectional breadth-first search
//! applies interchange transpositions (a grid of rows becomes a grid of
//! columns and vice versa) looking for a common form. A boundary mismatch is
//! a definite `False`; exhausting the move set or the budget without a match
//! is `Unknown`, since the move set is not complete for every presentation.

use super::normalize::{nboundary, norm, normalize, NCell};
use super::{boundary, Cell};
use crate::limits::Limits;
use crate::theory::{Theory, Verdict};
use std::collections::VecDeque;

pub fn cell_equal_free<T: Theory>(
    th: &T,
    c1: &Cell<T>,
    c2: &Cell<T>,
    limits: &Limits,
) -> Verdict {
    let (b1, b2) = match (boundary(th, c1), boundary(th, c2)) {
        (Ok(b1), Ok(b2)) => (b1, b2),
        _ => return Verdict::False,
    };
    if b1 != b2 {
        return Verdict::False;
    }
    let n1 = match normalize(th, c1) {
        Ok(n) => n,
        Err(_) => return Verdict::False,
    };
    let n2 = match normalize(th, c2) {
        Ok(n) => n,
        Err(_) => return Verdict::False,
    };
    search(th, n1, n2, limits)
}

fn search<T: Theory>(th: &T, n1: NCell<T>, n2: NCell<T>, limits: &Limits) -> Verdict {
    if ncell_eq(th, &n1, &n2, limits).is_true() {
        return Verdict::True;
    }
    let mut left = vec![n1];
    let mut right = vec![n2];
    let mut lq: VecDeque<usize> = [0].into();
    let mut rq: VecDeque<usize> = [0].into();
    loop {
        if left.len() + right.len() >= limits.cell_search_budget {
            return Verdict::Unknown;
        }
        let mut advanced = false;
        if let Some(i) = lq.pop_front() {
            let host = left[i].clone();
            for m in transpose_moves(th, &host) {
                if left.iter().any(|s| *s == m) {
                    continue;
                }
                if right.iter().any(|s| ncell_eq(th, s, &m, limits).is_true()) {
                    return Verdict::True;
                }
                left.push(m);
                lq.push_back(left.len() - 1);
            }
            advanced = true;
        }
        if let Some(i) = rq.pop_front() {
            let host = right[i].clone();
            for m in transpose_moves(th, &host) {
                if right.iter().any(|s| *s == m) {
                    continue;
                }
                if left.iter().any(|s| ncell_eq(th, s, &m, limits).is_true()) {
                    return Verdict::True;
                }
                right.push(m);
                rq.push_back(right.len() - 1);
            }
            advanced = true;
        }
        if !advanced {
            return Verdict::Unknown;
        }
    }
}

/// Structural equality of normal forms; lifted morphisms are compared by the
/// theory's (possibly three-valued) morphism equality.
pub(crate) fn ncell_eq<T: Theory>(
    th: &T,
    a: &NCell<T>,
    b: &NCell<T>,
    limits: &Limits,
) -> Verdict {
    match (a, b) {
        (NCell::Mor(f), NCell::Mor(g)) => th.mor_equal(f, g, limits),
        (NCell::VId(x), NCell::VId(y)) => Verdict::from_bool(x == y),
        (NCell::HId(x), NCell::HId(y)) => Verdict::from_bool(x == y),
        (NCell::EmitR(x), NCell::EmitR(y))
        | (NCell::AbsL(x), NCell::AbsL(y))
        | (NCell::EmitL(x), NCell::EmitL(y))
        | (NCell::AbsR(x), NCell::AbsR(y)) => Verdict::from_bool(x == y),
        (NCell::Cross(b1, e1), NCell::Cross(b2, e2)) => {
            Verdict::from_bool(b1 == b2 && e1 == e2)
        }
        (NCell::V(xs), NCell::V(ys)) | (NCell::H(xs), NCell::H(ys)) => {
            if xs.len() != ys.len() {
                return Verdict::False;
            }
            xs.iter()
                .zip(ys)
                .map(|(x, y)| ncell_eq(th, x, y, limits))
                .fold(Verdict::True, Verdict::and)
        }
        _ => Verdict::False,
    }
}

/// All single interchange transpositions of `n`, each renormalized.
fn transpose_moves<T: Theory>(th: &T, n: &NCell<T>) -> Vec<NCell<T>> {
    subterm_moves(th, n)
        .into_iter()
        .map(|m| norm(th, m))
        .collect()
}

fn subterm_moves<T: Theory>(th: &T, n: &NCell<T>) -> Vec<NCell<T>> {
    let mut out = Vec::new();
    match n {
        NCell::V(children) => {
            list_moves(th, children, true, &mut out, |items| NCell::V(items));
            for (i, c) in children.iter().enumerate() {
                for m in subterm_moves(th, c) {
                    let mut items = children.clone();
                    items[i] = m;
                    out.push(NCell::V(items));
                }
            }
        }
        NCell::H(children) => {
            list_moves(th, children, false, &mut out, |items| NCell::H(items));
            for (i, c) in children.iter().enumerate() {
                for m in subterm_moves(th, c) {
                    let mut items = children.clone();
                    items[i] = m;
                    out.push(NCell::H(items));
                }
            }
        }
        _ => {}
    }
    out
}

/// How many padded alignments to try per window at most.
const PAD_CAP: usize = 128;

/// Windows of a V list whose members are H rows (or dually) transpose into a
/// single node of the other kind. Members that are leaves count as rows of
/// length one; rows shorter than the longest in the window are padded with
/// identity cells at every seam-consistent position.
fn list_moves<T: Theory>(
    th: &T,
    children: &[NCell<T>],
    vertical: bool,
    out: &mut Vec<NCell<T>>,
    rebuild: impl Fn(Vec<NCell<T>>) -> NCell<T>,
) {
    let row_of = |c: &NCell<T>| -> Vec<NCell<T>> {
        match (vertical, c) {
            (true, NCell::H(items)) | (false, NCell::V(items)) => items.clone(),
            _ => vec![c.clone()],
        }
    };
    let n = children.len();
    for i in 0..n {
        for j in i + 1..n {
            let rows: Vec<Vec<NCell<T>>> = children[i..=j].iter().map(&row_of).collect();
            let arity = rows.iter().map(Vec::len).max().unwrap();
            if arity < 2 {
                continue;
            }
            for grid in padded_grids(th, &rows, arity, vertical) {
                if !aligned(th, &grid, vertical) {
                    continue;
                }
                let transposed: Vec<NCell<T>> = (0..arity)
                    .map(|k| {
                        let line: Vec<NCell<T>> =
                            grid.iter().map(|r| r[k].clone()).collect();
                        if vertical {
                            NCell::V(line)
                        } else {
                            NCell::H(line)
                        }
                    })
                    .collect();
                let node = if vertical {
                    NCell::H(transposed)
                } else {
                    NCell::V(transposed)
                };
                let mut items: Vec<NCell<T>> = Vec::new();
                items.extend_from_slice(&children[..i]);
                items.push(node);
                items.extend_from_slice(&children[j + 1..]);
                out.push(rebuild(items));
            }
        }
    }
}

/// All combinations of identity paddings bringing every row to `arity`
/// members, capped at `PAD_CAP` grids.
fn padded_grids<T: Theory>(
    th: &T,
    rows: &[Vec<NCell<T>>],
    arity: usize,
    vertical: bool,
) -> Vec<Vec<Vec<NCell<T>>>> {
    let mut grids: Vec<Vec<Vec<NCell<T>>>> = vec![Vec::new()];
    for row in rows {
        let variants = paddings(th, row, arity, vertical);
        let mut next = Vec::new();
        for g in &grids {
            for v in &variants {
                if next.len() >= PAD_CAP {
                    return next;
                }
                let mut g2 = g.clone();
                g2.push(v.clone());
                next.push(g2);
            }
        }
        grids = next;
    }
    grids
}

/// All ways to insert `arity - row.len()` identity cells into `row`. The
/// identity inserted at a seam takes that seam's boundary, so the padded row
/// denotes the same cell.
fn paddings<T: Theory>(
    th: &T,
    row: &[NCell<T>],
    arity: usize,
    vertical: bool,
) -> Vec<Vec<NCell<T>>> {
    let pad_at = |slot: usize| -> NCell<T> {
        if vertical {
            // Rows compose horizontally; pad with the seam's exchange.
            if slot < row.len() {
                NCell::HId(nboundary(th, &row[slot]).left)
            } else {
                NCell::HId(nboundary(th, &row[row.len() - 1]).right)
            }
        } else {
            // Columns compose vertically; pad with the seam's object.
            if slot < row.len() {
                NCell::VId(nboundary(th, &row[slot]).top)
            } else {
                NCell::VId(nboundary(th, &row[row.len() - 1]).bottom)
            }
        }
    };
    let mut out = Vec::new();
    // `acc` holds a partial row; `slot` is the next original index.
    fn rec<T: Theory>(
        row: &[NCell<T>],
        slot: usize,
        pads_left: usize,
        acc: &mut Vec<NCell<T>>,
        pad_at: &impl Fn(usize) -> NCell<T>,
        out: &mut Vec<Vec<NCell<T>>>,
    ) {
        if out.len() >= PAD_CAP {
            return;
        }
        if slot == row.len() {
            let mut done = acc.clone();
            done.extend((0..pads_left).map(|_| pad_at(slot)));
            out.push(done);
            return;
        }
        for k in 0..=pads_left {
            let base = acc.len();
            acc.extend((0..k).map(|_| pad_at(slot)));
            acc.push(row[slot].clone());
            rec(row, slot + 1, pads_left - k, acc, pad_at, out);
            acc.truncate(base);
        }
    }
    rec(row, 0, arity - row.len(), &mut Vec::new(), &pad_at, &mut out);
    out
}

/// The seams between consecutive window members must agree entrywise, not
/// just in the aggregate, for the transposition to be valid.
fn aligned<T: Theory>(th: &T, rows: &[Vec<NCell<T>>], vertical: bool) -> bool {
    for pair in rows.windows(2) {
        for (x, y) in pair[0].iter().zip(&pair[1]) {
            let bx = nboundary(th, x);
            let by = nboundary(th, y);
            if vertical {
                if bx.bottom != by.top {
                    return false;
                }
            } else if bx.right != by.left {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cornering::{cell_tensor, Exchange, Polarity};
    use crate::theory::{ObjWord, TheorySignature};
    use crate::FreeTheory;

    fn th() -> FreeTheory {
        FreeTheory::new(
            TheorySignature::new("bread")
                .with_objects(["bread", "dough", "flour", "oven"])
                .with_morphism("knead", ObjWord::letter("flour"), ObjWord::letter("dough"))
                .with_morphism(
                    "bake",
                    ObjWord::from_letters(["dough", "oven"]),
                    ObjWord::from_letters(["bread", "oven"]),
                )
                .with_morphism("eat", ObjWord::letter("bread"), ObjWord::empty()),
        )
    }

    fn w(s: &str) -> ObjWord {
        ObjWord::letter(s)
    }

    #[test]
    fn interchange_instance() {
        let th = th();
        let limits = Limits::default();
        // (EmitR f | AbsL f) ; (1_i | knead)  =  (EmitR f ; 1_i) | (AbsL f ; knead)
        let knead = th.generator("knead").unwrap();
        let lhs = Cell::VComp(
            Box::new(Cell::HComp(
                Box::new(Cell::EmitRight(w("flour"))),
                Box::new(Cell::AbsorbLeft(w("flour"))),
            )),
            Box::new(Cell::HComp(
                Box::new(Cell::VId(ObjWord::empty())),
                Box::new(Cell::Mor(knead.clone())),
            )),
        );
        let rhs = Cell::HComp(
            Box::new(Cell::VComp(
                Box::new(Cell::EmitRight(w("flour"))),
                Box::new(Cell::VId(ObjWord::empty())),
            )),
            Box::new(Cell::VComp(
                Box::new(Cell::AbsorbLeft(w("flour"))),
                Box::new(Cell::Mor(knead)),
            )),
        );
        assert_eq!(cell_equal_free(&th, &lhs, &rhs, &limits), Verdict::True);
    }

    #[test]
    fn yanking_snakes() {
        // The companion snake equations are exactly the yanking identities.
        let th = th();
        let limits = Limits::default();
        let a = w("dough");
        let emit_absorb = Cell::HComp(
            Box::new(Cell::EmitRight(a.clone())),
            Box::new(Cell::AbsorbLeft(a.clone())),
        );
        assert_eq!(
            cell_equal_free(&th, &emit_absorb, &Cell::VId(a.clone()), &limits),
            Verdict::True
        );
        let absorb_emit = Cell::VComp(
            Box::new(Cell::AbsorbLeft(a.clone())),
            Box::new(Cell::EmitRight(a.clone())),
        );
        assert_eq!(
            cell_equal_free(
                &th,
                &absorb_emit,
                &Cell::HId(Exchange::single(a.clone(), Polarity::Out)),
                &limits
            ),
            Verdict::True
        );
    }

    #[test]
    fn zigzag_needs_transposition() {
        // Emitting and re-absorbing with explicit identity padding equals the
        // bare emit/absorb loop; finding this requires an interchange
        // transposition, not just normalization.
        let th = th();
        let limits = Limits::default();
        let a = w("dough");
        let x = Exchange::single(a.clone(), Polarity::Out);
        let padded = Cell::HComp(
            Box::new(Cell::VComp(
                Box::new(Cell::EmitRight(a.clone())),
                Box::new(Cell::HId(x.clone())),
            )),
            Box::new(Cell::VComp(
                Box::new(Cell::HId(x.clone())),
                Box::new(Cell::AbsorbLeft(a.clone())),
            )),
        );
        let bare = Cell::VComp(
            Box::new(Cell::EmitRight(a.clone())),
            Box::new(Cell::AbsorbLeft(a.clone())),
        );
        assert_eq!(cell_equal_free(&th, &padded, &bare, &limits), Verdict::True);
    }

    #[test]
    fn distinct_corners_not_confused() {
        let th = th();
        let limits = Limits::default();
        // Different boundaries: definite False.
        assert_eq!(
            cell_equal_free(
                &th,
                &Cell::EmitRight(w("flour")),
                &Cell::EmitLeft(w("flour")),
                &limits
            ),
            Verdict::False
        );
    }

    #[test]
    fn same_boundary_distinct_cells_unknown_not_true() {
        let th = th();
        let limits = Limits::default();
        // A crossing and an emit-then-reabsorb loop share a boundary but are
        // genuinely different cells; the verdict must not be True.
        let c1 = Cell::Crossing(w("flour"), Exchange::single(w("flour"), Polarity::Out));
        let c2 = Cell::VComp(
            Box::new(Cell::EmitRight(w("flour"))),
            Box::new(Cell::AbsorbLeft(w("flour"))),
        );
        assert!(!cell_equal_free(&th, &c1, &c2, &limits).is_true());
    }

    #[test]
    fn tensor_boundary_matches_componentwise() {
        let th = th();
        let c1 = Cell::EmitRight(w("flour"));
        let c2 = Cell::AbsorbRight(w("bread"));
        let t = cell_tensor(&th, &c1, &c2).unwrap();
        let b = super::super::boundary(&th, &t).unwrap();
        assert_eq!(b.top, w("flour"));
        assert_eq!(b.bottom, w("bread"));
        assert!(b.left.is_empty());
        assert_eq!(
            b.right,
            Exchange(vec![
                (w("flour"), Polarity::Out),
                (w("bread"), Polarity::In)
            ])
        );
    }
}
