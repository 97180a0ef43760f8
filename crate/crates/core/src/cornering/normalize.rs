//! Rewriting cells to a normal form.
//!
//! Normal forms are rose trees of alternating vertical and horizontal
//! composite lists. The rewrite rules applied exhaustively are: identity
//! absorption, fusion of adjacent lifted morphisms, the four yanking
//! identities between corner cells, fusion of adjacent crossings, splitting
//! of multi-entry crossings, and commutation of crossings past corners
//! (which emits a lifted symmetry).

use super::{Cell, CellBoundary, CellError, Exchange, Polarity};
use crate::theory::Theory;

/// A cell in (or en route to) normal form. `V` and `H` lists have at least
/// two elements and never directly contain a node of the same kind.
#[derive(Debug, Clone)]
pub(crate) enum NCell<T: Theory> {
    /// A lifted non-identity morphism.
    Mor(T::Mor),
    VId(T::Obj),
    HId(Exchange<T>),
    EmitR(T::Obj),
    AbsL(T::Obj),
    EmitL(T::Obj),
    AbsR(T::Obj),
    /// Single-entry crossing over a non-unit resident object.
    Cross(T::Obj, (T::Obj, Polarity)),
    V(Vec<NCell<T>>),
    H(Vec<NCell<T>>),
}

impl<T: Theory> PartialEq for NCell<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (NCell::Mor(a), NCell::Mor(b)) => a == b,
            (NCell::VId(a), NCell::VId(b)) => a == b,
            (NCell::HId(a), NCell::HId(b)) => a == b,
            (NCell::EmitR(a), NCell::EmitR(b)) => a == b,
            (NCell::AbsL(a), NCell::AbsL(b)) => a == b,
            (NCell::EmitL(a), NCell::EmitL(b)) => a == b,
            (NCell::AbsR(a), NCell::AbsR(b)) => a == b,
            (NCell::Cross(a, x), NCell::Cross(b, y)) => a == b && x == y,
            (NCell::V(a), NCell::V(b)) | (NCell::H(a), NCell::H(b)) => a == b,
            _ => false,
        }
    }
}

/// Boundary of a (well-formed) normal form, computed without seam checks.
pub(crate) fn nboundary<T: Theory>(th: &T, n: &NCell<T>) -> CellBoundary<T> {
    match n {
        NCell::Mor(m) => CellBoundary {
            top: th.mor_dom(m),
            bottom: th.mor_cod(m),
            left: Exchange::empty(),
            right: Exchange::empty(),
        },
        NCell::VId(a) => CellBoundary {
            top: a.clone(),
            bottom: a.clone(),
            left: Exchange::empty(),
            right: Exchange::empty(),
        },
        NCell::HId(x) => CellBoundary {
            top: th.unit(),
            bottom: th.unit(),
            left: x.clone(),
            right: x.clone(),
        },
        NCell::EmitR(a) => CellBoundary {
            top: a.clone(),
            bottom: th.unit(),
            left: Exchange::empty(),
            right: Exchange::single(a.clone(), Polarity::Out),
        },
        NCell::AbsL(a) => CellBoundary {
            top: th.unit(),
            bottom: a.clone(),
            left: Exchange::single(a.clone(), Polarity::Out),
            right: Exchange::empty(),
        },
        NCell::EmitL(a) => CellBoundary {
            top: a.clone(),
            bottom: th.unit(),
            left: Exchange::single(a.clone(), Polarity::In),
            right: Exchange::empty(),
        },
        NCell::AbsR(a) => CellBoundary {
            top: th.unit(),
            bottom: a.clone(),
            left: Exchange::empty(),
            right: Exchange::single(a.clone(), Polarity::In),
        },
        NCell::Cross(b, e) => CellBoundary {
            top: b.clone(),
            bottom: b.clone(),
            left: Exchange(vec![e.clone()]),
            right: Exchange(vec![e.clone()]),
        },
        NCell::V(children) => {
            let bs: Vec<_> = children.iter().map(|c| nboundary(th, c)).collect();
            let mut left = Exchange::empty();
            let mut right = Exchange::empty();
            for b in &bs {
                left = left.tensor(&b.left);
                right = right.tensor(&b.right);
            }
            CellBoundary {
                top: bs.first().map(|b| b.top.clone()).unwrap_or_else(|| th.unit()),
                bottom: bs.last().map(|b| b.bottom.clone()).unwrap_or_else(|| th.unit()),
                left,
                right,
            }
        }
        NCell::H(children) => {
            let bs: Vec<_> = children.iter().map(|c| nboundary(th, c)).collect();
            let mut top = th.unit();
            let mut bottom = th.unit();
            for b in &bs {
                top = th.tensor(&top, &b.top);
                bottom = th.tensor(&bottom, &b.bottom);
            }
            CellBoundary {
                top,
                bottom,
                left: bs.first().map(|b| b.left.clone()).unwrap_or_else(Exchange::empty),
                right: bs.last().map(|b| b.right.clone()).unwrap_or_else(Exchange::empty),
            }
        }
    }
}

/// The identity cell on the monoidal unit, in either of its guises.
pub(crate) fn is_empty_cell<T: Theory>(th: &T, c: &NCell<T>) -> bool {
    match c {
        NCell::VId(a) => *a == th.unit(),
        NCell::HId(x) => x.is_empty(),
        _ => false,
    }
}

/// Wrap a morphism, collapsing identities.
fn mk_mor<T: Theory>(th: &T, m: T::Mor) -> NCell<T> {
    if th.mor_is_identity(&m) {
        NCell::VId(th.mor_dom(&m))
    } else {
        NCell::Mor(m)
    }
}

fn convert<T: Theory>(th: &T, cell: &Cell<T>) -> NCell<T> {
    match cell {
        Cell::Mor(m) => mk_mor(th, m.clone()),
        Cell::VId(a) => NCell::VId(a.clone()),
        Cell::HId(x) => {
            if x.is_empty() {
                NCell::VId(th.unit())
            } else {
                NCell::HId(x.clone())
            }
        }
        Cell::EmitRight(a) => NCell::EmitR(a.clone()),
        Cell::AbsorbLeft(a) => NCell::AbsL(a.clone()),
        Cell::EmitLeft(a) => NCell::EmitL(a.clone()),
        Cell::AbsorbRight(a) => NCell::AbsR(a.clone()),
        Cell::Crossing(b, x) => {
            if *b == th.unit() {
                return convert(th, &Cell::HId(x.clone()));
            }
            match x.0.len() {
                0 => NCell::VId(b.clone()),
                1 => NCell::Cross(b.clone(), x.0[0].clone()),
                _ => NCell::V(
                    x.0.iter()
                        .map(|e| NCell::Cross(b.clone(), e.clone()))
                        .collect(),
                ),
            }
        }
        Cell::VComp(c1, c2) => NCell::V(vec![convert(th, c1), convert(th, c2)]),
        Cell::HComp(c1, c2) => NCell::H(vec![convert(th, c1), convert(th, c2)]),
    }
}

/// Normalize a cell term. The input is boundary-checked first; normalization
/// itself preserves boundaries.
pub(crate) fn normalize<T: Theory>(th: &T, cell: &Cell<T>) -> Result<NCell<T>, CellError> {
    super::boundary(th, cell)?;
    Ok(norm(th, convert(th, cell)))
}

/// Re-normalize an already well-formed normal-form candidate (used after
/// structural moves during equality search).
pub(crate) fn norm<T: Theory>(th: &T, n: NCell<T>) -> NCell<T> {
    match n {
        NCell::V(children) => {
            let bnd = nboundary(th, &NCell::V(children.clone()));
            let mut items = Vec::new();
            for c in children {
                match norm(th, c) {
                    NCell::V(inner) => items.extend(inner),
                    other => items.push(other),
                }
            }
            reduce_v(th, items, bnd)
        }
        NCell::H(children) => {
            let bnd = nboundary(th, &NCell::H(children.clone()));
            let mut items = Vec::new();
            for c in children {
                match norm(th, c) {
                    NCell::H(inner) => items.extend(inner),
                    other => items.push(other),
                }
            }
            reduce_h(th, items, bnd)
        }
        leaf => leaf,
    }
}

fn finish_v<T: Theory>(th: &T, mut items: Vec<NCell<T>>, bnd: CellBoundary<T>) -> NCell<T> {
    match items.len() {
        0 => NCell::VId(bnd.top),
        1 => items.pop().unwrap(),
        _ => {
            let _ = th;
            NCell::V(items)
        }
    }
}

fn reduce_v<T: Theory>(th: &T, mut items: Vec<NCell<T>>, bnd: CellBoundary<T>) -> NCell<T> {
    let mut steps = 0usize;
    loop {
        steps += 1;
        debug_assert!(steps < 100_000, "vertical normalization diverged");
        // Vertical identities are always absorbable, as is the empty cell
        // in either of its guises.
        let before = items.len();
        items.retain(|c| !matches!(c, NCell::VId(_)) && !is_empty_cell(th, c));
        let mut changed = before != items.len();

        let mut i = 0;
        while i + 1 < items.len() {
            let fused: Option<NCell<T>> = match (&items[i], &items[i + 1]) {
                (NCell::Mor(f), NCell::Mor(g)) => {
                    let m = th
                        .mor_compose(f, g)
                        .expect("seam-checked morphisms must compose");
                    Some(mk_mor(th, m))
                }
                (NCell::HId(x), NCell::HId(y)) => Some(NCell::HId(x.tensor(y))),
                (NCell::AbsL(a), NCell::EmitR(b)) if a == b => {
                    Some(NCell::HId(Exchange::single(a.clone(), Polarity::Out)))
                }
                (NCell::AbsR(a), NCell::EmitL(b)) if a == b => {
                    Some(NCell::HId(Exchange::single(a.clone(), Polarity::In)))
                }
                _ => None,
            };
            if let Some(c) = fused {
                items.splice(i..i + 2, [c]);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            return finish_v(th, items, bnd);
        }
    }
}

fn reduce_h<T: Theory>(th: &T, mut items: Vec<NCell<T>>, bnd: CellBoundary<T>) -> NCell<T> {
    let mut steps = 0usize;
    loop {
        steps += 1;
        debug_assert!(steps < 100_000, "horizontal normalization diverged");
        // Horizontal identities are always absorbable, as is the empty cell.
        let before = items.len();
        items.retain(|c| !matches!(c, NCell::HId(_)) && !is_empty_cell(th, c));
        let mut changed = before != items.len();

        let mut i = 0;
        while i + 1 < items.len() {
            let fused: Option<NCell<T>> = match (&items[i], &items[i + 1]) {
                // Lifted morphisms (identities included) tensor together.
                (l @ (NCell::Mor(_) | NCell::VId(_)), r @ (NCell::Mor(_) | NCell::VId(_))) => {
                    let as_mor = |c: &NCell<T>| match c {
                        NCell::Mor(m) => m.clone(),
                        NCell::VId(a) => th.mor_identity(a),
                        _ => unreachable!(),
                    };
                    Some(mk_mor(th, th.mor_tensor(&as_mor(l), &as_mor(r))))
                }
                // Yanking: emit then absorb on either side is the identity.
                (NCell::EmitR(a), NCell::AbsL(b)) if a == b => Some(NCell::VId(a.clone())),
                (NCell::AbsR(a), NCell::EmitL(b)) if a == b => Some(NCell::VId(a.clone())),
                // Consecutive crossings of one entry fuse.
                (NCell::Cross(b1, e1), NCell::Cross(b2, e2)) if e1 == e2 => {
                    Some(NCell::Cross(th.tensor(b1, b2), e1.clone()))
                }
                // A crossing followed by a left absorption: absorb first,
                // then swap past the resident with a symmetry.
                (NCell::Cross(b, (a, Polarity::Out)), NCell::AbsL(a2)) if a == a2 => {
                    Some(norm(
                        th,
                        NCell::V(vec![
                            NCell::H(vec![NCell::AbsL(a.clone()), NCell::VId(b.clone())]),
                            mk_mor(th, th.mor_symmetry(a, b)),
                        ]),
                    ))
                }
                // A right emission into a crossing: swap first, then emit.
                (NCell::EmitR(a), NCell::Cross(b, (a2, Polarity::Out))) if a == a2 => {
                    Some(norm(
                        th,
                        NCell::V(vec![
                            mk_mor(th, th.mor_symmetry(a, b)),
                            NCell::H(vec![NCell::VId(b.clone()), NCell::EmitR(a.clone())]),
                        ]),
                    ))
                }
                // A crossing followed by a left emission: swap, then emit.
                (NCell::Cross(b, (a, Polarity::In)), NCell::EmitL(a2)) if a == a2 => {
                    Some(norm(
                        th,
                        NCell::V(vec![
                            mk_mor(th, th.mor_symmetry(b, a)),
                            NCell::H(vec![NCell::EmitL(a.clone()), NCell::VId(b.clone())]),
                        ]),
                    ))
                }
                // A right absorption into a crossing: absorb, then swap.
                (NCell::AbsR(a), NCell::Cross(b, (a2, Polarity::In))) if a == a2 => {
                    Some(norm(
                        th,
                        NCell::V(vec![
                            NCell::H(vec![NCell::VId(b.clone()), NCell::AbsR(a.clone())]),
                            mk_mor(th, th.mor_symmetry(b, a)),
                        ]),
                    ))
                }
                _ => None,
            };
            if let Some(c) = fused {
                items.splice(i..i + 2, [c]);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    match items.len() {
        0 => {
            if bnd.left.is_empty() {
                NCell::VId(th.unit())
            } else {
                NCell::HId(bnd.left)
            }
        }
        1 => items.pop().unwrap(),
        _ => NCell::H(items),
    }
}

/// Rebuild a plain cell term from a normal form.
pub(crate) fn to_cell<T: Theory>(th: &T, n: &NCell<T>) -> Cell<T> {
    match n {
        NCell::Mor(m) => Cell::Mor(m.clone()),
        NCell::VId(a) => Cell::VId(a.clone()),
        NCell::HId(x) => Cell::HId(x.clone()),
        NCell::EmitR(a) => Cell::EmitRight(a.clone()),
        NCell::AbsL(a) => Cell::AbsorbLeft(a.clone()),
        NCell::EmitL(a) => Cell::EmitLeft(a.clone()),
        NCell::AbsR(a) => Cell::AbsorbRight(a.clone()),
        NCell::Cross(b, e) => Cell::Crossing(b.clone(), Exchange(vec![e.clone()])),
        NCell::V(children) => {
            let mut iter = children.iter().map(|c| to_cell(th, c));
            let first = iter.next().expect("normal V lists are nonempty");
            iter.fold(first, |acc, c| Cell::VComp(Box::new(acc), Box::new(c)))
        }
        NCell::H(children) => {
            let mut iter = children.iter().map(|c| to_cell(th, c));
            let first = iter.next().expect("normal H lists are nonempty");
            iter.fold(first, |acc, c| Cell::HComp(Box::new(acc), Box::new(c)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{ObjWord, TheorySignature};
    use crate::FreeTheory;

    fn th() -> FreeTheory {
        FreeTheory::new(
            TheorySignature::new("bread")
                .with_objects(["bread", "dough", "flour", "oven"])
                .with_morphism("knead", ObjWord::letter("flour"), ObjWord::letter("dough")),
        )
    }

    fn w(s: &str) -> ObjWord {
        ObjWord::letter(s)
    }

    #[test]
    fn yank_emit_then_absorb() {
        let th = th();
        let c = Cell::HComp(
            Box::new(Cell::EmitRight(w("bread"))),
            Box::new(Cell::AbsorbLeft(w("bread"))),
        );
        assert_eq!(normalize(&th, &c).unwrap(), NCell::VId(w("bread")));
        let c = Cell::HComp(
            Box::new(Cell::AbsorbRight(w("bread"))),
            Box::new(Cell::EmitLeft(w("bread"))),
        );
        assert_eq!(normalize(&th, &c).unwrap(), NCell::VId(w("bread")));
    }

    #[test]
    fn yank_vertical() {
        let th = th();
        let c = Cell::VComp(
            Box::new(Cell::AbsorbLeft(w("oven"))),
            Box::new(Cell::EmitRight(w("oven"))),
        );
        assert_eq!(
            normalize(&th, &c).unwrap(),
            NCell::HId(Exchange::single(w("oven"), Polarity::Out))
        );
        let c = Cell::VComp(
            Box::new(Cell::AbsorbRight(w("oven"))),
            Box::new(Cell::EmitLeft(w("oven"))),
        );
        assert_eq!(
            normalize(&th, &c).unwrap(),
            NCell::HId(Exchange::single(w("oven"), Polarity::In))
        );
    }

    #[test]
    fn identity_absorption_and_fusion() {
        let th = th();
        let knead = th.generator("knead").unwrap();
        // (id ; knead) ; id normalizes to the bare lifted morphism.
        let c = Cell::VComp(
            Box::new(Cell::VComp(
                Box::new(Cell::VId(w("flour"))),
                Box::new(Cell::Mor(knead.clone())),
            )),
            Box::new(Cell::VId(w("dough"))),
        );
        assert_eq!(normalize(&th, &c).unwrap(), NCell::Mor(knead));
    }

    #[test]
    fn crossing_past_corner_emits_symmetry() {
        let th = th();
        // An oven resident lets flour pass from left to right underneath:
        // absorbing afterwards equals absorbing first and swapping.
        let c = Cell::HComp(
            Box::new(Cell::Crossing(
                w("oven"),
                Exchange::single(w("flour"), Polarity::Out),
            )),
            Box::new(Cell::AbsorbLeft(w("flour"))),
        );
        let n = normalize(&th, &c).unwrap();
        let b = nboundary(&th, &n);
        assert_eq!(b.top, w("oven"));
        assert_eq!(b.bottom, ObjWord::from_letters(["oven", "flour"]));
        assert_eq!(b.left, Exchange::single(w("flour"), Polarity::Out));
        assert!(b.right.is_empty());
        // The normal form is an H-row then a symmetry morphism.
        match n {
            NCell::V(children) => {
                assert_eq!(children.len(), 2);
                assert!(matches!(children[1], NCell::Mor(_)));
            }
            other => panic!("expected a vertical composite, got {other:?}"),
        }
    }

    #[test]
    fn multi_entry_crossing_splits() {
        let th = th();
        let x = Exchange(vec![
            (w("flour"), Polarity::Out),
            (w("bread"), Polarity::In),
        ]);
        let n = normalize(&th, &Cell::Crossing(w("oven"), x.clone())).unwrap();
        assert_eq!(
            n,
            NCell::V(vec![
                NCell::Cross(w("oven"), (w("flour"), Polarity::Out)),
                NCell::Cross(w("oven"), (w("bread"), Polarity::In)),
            ])
        );
        let b = nboundary(&th, &n);
        assert_eq!(b.left, x);
    }

    #[test]
    fn boundary_preserved() {
        let th = th();
        let c = Cell::VComp(
            Box::new(Cell::HComp(
                Box::new(Cell::AbsorbLeft(w("flour"))),
                Box::new(Cell::VId(w("oven"))),
            )),
            Box::new(Cell::HComp(
                Box::new(Cell::VId(ObjWord::from_letters(["flour", "oven"]))),
                Box::new(Cell::AbsorbRight(w("bread"))),
            )),
        );
        let want = super::super::boundary(&th, &c).unwrap();
        let n = normalize(&th, &c).unwrap();
        assert_eq!(nboundary(&th, &n), want);
        let back = to_cell(&th, &n);
        assert_eq!(super::super::boundary(&th, &back).unwrap(), want);
    }
}
