//! Compact closed structure on the horizontal category of exchanges.
//!
//! The dual of an exchange reverses the entry order and flips each polarity.
//! Units and counits are built entrywise: outgoing entries only need the
//! corner cells (yanking provides their snakes), incoming entries borrow the
//! ambient theory's duality.

use super::{Cell, CellError, Exchange, Polarity};
use crate::theory::Theory;

/// `x† = reverse(x)` with every polarity flipped. Objects are untouched.
pub fn exchange_dual<T: Theory>(x: &Exchange<T>) -> Exchange<T> {
    Exchange(
        x.0.iter()
            .rev()
            .map(|(o, p)| (o.clone(), p.flip()))
            .collect(),
    )
}

/// Duality witnesses for an exchange: the unit `η_x : i → x† ⊗ x` and counit
/// `ε_x : x ⊗ x† → i`, as cells with unit top and bottom edges.
///
/// Incoming entries require the theory to be compact closed; for a theory
/// without duals an exchange of only outgoing entries still has witnesses.
pub fn h_dual_witness<T: Theory>(
    th: &T,
    x: &Exchange<T>,
) -> Result<(Exchange<T>, Cell<T>, Cell<T>), CellError> {
    let dual = exchange_dual(x);
    let unit = build_unit(th, x.entries())?;
    let counit = build_counit(th, x.entries())?;
    Ok((dual, unit, counit))
}

/// Stack morphisms of the exchange category (cells with unit top and
/// bottom); their left/right boundaries concatenate.
fn vstack<T: Theory>(cells: Vec<Cell<T>>) -> Cell<T> {
    let mut iter = cells.into_iter();
    let first = iter.next().expect("nonempty stack");
    iter.fold(first, |acc, c| Cell::VComp(Box::new(acc), Box::new(c)))
}

fn entry_unit<T: Theory>(th: &T, (a, pol): &(T::Obj, Polarity)) -> Result<Cell<T>, CellError> {
    match pol {
        // i → a• ⊗ a°: absorb from the right, then give it back rightwards.
        Polarity::Out => Ok(vstack(vec![
            Cell::AbsorbRight(a.clone()),
            Cell::EmitRight(a.clone()),
        ])),
        // i → a° ⊗ a•: conjure a ⊗ a* from the theory unit, emit the a
        // rightwards across the resident a*, absorb a replacement, and
        // cancel against a*.
        Polarity::In => {
            let eta = th.duality_unit(a)?;
            let eps = th.duality_counit(a)?;
            let a_dual = th.dual(a)?;
            Ok(vstack(vec![
                Cell::Mor(eta),
                Cell::HComp(
                    Box::new(Cell::EmitRight(a.clone())),
                    Box::new(Cell::Crossing(
                        a_dual.clone(),
                        Exchange::single(a.clone(), Polarity::Out),
                    )),
                ),
                Cell::HComp(
                    Box::new(Cell::VId(a_dual)),
                    Box::new(Cell::AbsorbRight(a.clone())),
                ),
                Cell::Mor(eps),
            ]))
        }
    }
}

fn entry_counit<T: Theory>(th: &T, (a, pol): &(T::Obj, Polarity)) -> Result<Cell<T>, CellError> {
    match pol {
        // a° ⊗ a• → i: absorb from the left, then give it back leftwards.
        Polarity::Out => Ok(vstack(vec![
            Cell::AbsorbLeft(a.clone()),
            Cell::EmitLeft(a.clone()),
        ])),
        // a• ⊗ a° → i: conjure a ⊗ a*, emit the a leftwards, absorb a
        // replacement, and cancel.
        Polarity::In => {
            let eta = th.duality_unit(a)?;
            let eps = th.duality_counit(a)?;
            let a_dual = th.dual(a)?;
            let swap = th.mor_symmetry(a, &a_dual);
            Ok(vstack(vec![
                Cell::Mor(eta),
                Cell::HComp(
                    Box::new(Cell::EmitLeft(a.clone())),
                    Box::new(Cell::VId(a_dual.clone())),
                ),
                Cell::HComp(
                    Box::new(Cell::AbsorbLeft(a.clone())),
                    Box::new(Cell::VId(a_dual)),
                ),
                Cell::Mor(swap),
                Cell::Mor(eps),
            ]))
        }
    }
}

/// `η_x : i → x† ⊗ x` by peeling the last entry: for `x = y ⊗ e`,
/// `η_x = η_e ; (1_{e†} ⊗ η_y ⊗ 1_e)`.
fn build_unit<T: Theory>(th: &T, entries: &[(T::Obj, Polarity)]) -> Result<Cell<T>, CellError> {
    match entries.split_last() {
        None => Ok(Cell::VId(th.unit())),
        Some((e, rest)) => {
            let eta_e = entry_unit(th, e)?;
            let eta_rest = build_unit(th, rest)?;
            let flipped = (e.0.clone(), e.1.flip());
            super::hcomp(
                th,
                eta_e,
                vstack(vec![
                    Cell::HId(Exchange(vec![flipped])),
                    eta_rest,
                    Cell::HId(Exchange(vec![e.clone()])),
                ]),
            )
        }
    }
}

/// `ε_x : x ⊗ x† → i` dually: for `x = y ⊗ e`,
/// `ε_x = (1_y ⊗ ε_e ⊗ 1_{y†}) ; ε_y`.
fn build_counit<T: Theory>(th: &T, entries: &[(T::Obj, Polarity)]) -> Result<Cell<T>, CellError> {
    match entries.split_last() {
        None => Ok(Cell::VId(th.unit())),
        Some((e, rest)) => {
            let eps_e = entry_counit(th, e)?;
            let eps_rest = build_counit(th, rest)?;
            let y = Exchange::<T>(rest.to_vec());
            let y_dual = exchange_dual(&y);
            let mut stack = Vec::new();
            if !y.is_empty() {
                stack.push(Cell::HId(y));
            }
            stack.push(eps_e);
            if !y_dual.is_empty() {
                stack.push(Cell::HId(y_dual));
            }
            super::hcomp(th, vstack(stack), eps_rest)
        }
    }
}

/// Witnesses for the isomorphism `k° ≅ (-k)•` of integer exchanges: a pair
/// of mutually inverse cells between the two single-entry exchanges.
pub fn lemma1_witness(k: i64) -> (Cell<crate::ZTheory>, Cell<crate::ZTheory>) {
    use super::flow::z_cell;
    let fwd = z_cell(0, &[(k, Polarity::Out)], &[(-k, Polarity::In)]);
    let back = z_cell(0, &[(-k, Polarity::In)], &[(k, Polarity::Out)]);
    (fwd, back)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cornering::{boundary, eval_flow, hcomp};
    use crate::limits::Limits;
    use crate::theory::{Verdict, ZTheory};

    fn ex(entries: &[(i64, Polarity)]) -> Exchange<ZTheory> {
        Exchange(entries.to_vec())
    }

    #[test]
    fn dual_reverses_and_flips() {
        let x = ex(&[(3, Polarity::Out), (5, Polarity::In)]);
        assert_eq!(
            exchange_dual(&x),
            ex(&[(5, Polarity::Out), (3, Polarity::In)])
        );
        // Involution.
        assert_eq!(exchange_dual(&exchange_dual(&x)), x);
    }

    #[test]
    fn witness_boundaries() {
        let th = ZTheory;
        let x = ex(&[(3, Polarity::Out), (5, Polarity::In)]);
        let (dual, unit, counit) = h_dual_witness(&th, &x).unwrap();
        let bu = boundary(&th, &unit).unwrap();
        assert_eq!(bu.top, 0);
        assert_eq!(bu.bottom, 0);
        assert!(bu.left.is_empty());
        assert_eq!(bu.right, dual.tensor(&x));
        let bc = boundary(&th, &counit).unwrap();
        assert!(bc.right.is_empty());
        assert_eq!(bc.left, x.tensor(&dual));
    }

    #[test]
    fn snakes_hold_in_z() {
        let th = ZTheory;
        let limits = Limits::default();
        let x = ex(&[(2, Polarity::Out), (-7, Polarity::In), (4, Polarity::In)]);
        let (dual, unit, counit) = h_dual_witness(&th, &x).unwrap();
        // (1_x ⊗ η) ; (ε ⊗ 1_x) = 1_x
        let lhs = hcomp(
            &th,
            Cell::VComp(Box::new(Cell::HId(x.clone())), Box::new(unit.clone())),
            Cell::VComp(Box::new(counit.clone()), Box::new(Cell::HId(x.clone()))),
        )
        .unwrap();
        assert_eq!(
            crate::theory::Theory::cell_equal(&th, &lhs, &Cell::HId(x.clone()), &limits),
            Verdict::True
        );
        // (η ⊗ 1_{x†}) ; (1_{x†} ⊗ ε) = 1_{x†}
        let rhs = hcomp(
            &th,
            Cell::VComp(Box::new(unit), Box::new(Cell::HId(dual.clone()))),
            Cell::VComp(Box::new(Cell::HId(dual.clone())), Box::new(counit)),
        )
        .unwrap();
        assert_eq!(
            crate::theory::Theory::cell_equal(&th, &rhs, &Cell::HId(dual), &limits),
            Verdict::True
        );
    }

    #[test]
    fn lemma1_inverse_pair() {
        use crate::theory::Theory;
        let th = ZTheory;
        let limits = Limits::default();
        for k in [0, 1, -4, 9] {
            let (fwd, back) = lemma1_witness(k);
            let there = hcomp(&th, fwd.clone(), back.clone()).unwrap();
            assert_eq!(
                th.cell_equal(&there, &Cell::HId(ex(&[(k, Polarity::Out)])), &limits),
                Verdict::True
            );
            let back_there = hcomp(&th, back, fwd).unwrap();
            assert_eq!(
                th.cell_equal(&back_there, &Cell::HId(ex(&[(-k, Polarity::In)])), &limits),
                Verdict::True
            );
            // The witnesses themselves conserve value.
            let (f, b) = lemma1_witness(k);
            assert!(eval_flow(&th, &f).is_ok());
            assert!(eval_flow(&th, &b).is_ok());
        }
    }
}
