//! The running examples: the bread resource theory, the Gear span, the
//! Baker/Eater systems (plain spans and their situated refinements), and a
//! small integer account.

use crate::accounts::{mk_account, Move, Side};
use crate::cornering::{Cell, Exchange, Polarity};
use crate::rgraph::{GraphHom, RGraph, Span};
use crate::situated::{SituatedBoundary, SituatedSystem};
use crate::theory::{FreeTheory, ObjWord, TheorySignature, ZTheory};
use std::collections::BTreeMap;

fn w(s: &str) -> ObjWord {
    if s.is_empty() {
        ObjWord::empty()
    } else {
        ObjWord::from_letters(s.split('*'))
    }
}

/// The resource theory of bread: knead flour into dough, bake dough in an
/// oven, eat bread.
pub fn bread_signature() -> TheorySignature {
    TheorySignature::new("bread")
        .with_objects(["bread", "dough", "flour", "oven"])
        .with_morphism("knead", w("flour"), w("dough"))
        .with_morphism("bake", w("dough*oven"), w("bread*oven"))
        .with_morphism("eat", w("bread"), ObjWord::empty())
}

pub fn bread_theory() -> FreeTheory {
    FreeTheory::new(bread_signature())
}

/// The bread theory extended with an idempotent sifting step, the smallest
/// example of a presented equation.
pub fn bread_sift_theory() -> FreeTheory {
    let mut sig = bread_signature().with_morphism("sift", w("flour"), w("flour"));
    let th = FreeTheory::new(sig.clone());
    let sift = th.generator("sift").unwrap();
    sig.equations
        .push((sift.compose(&sift).unwrap(), sift));
    FreeTheory::new(sig)
}

/// A hom whose every edge maps to the boundary's trivial edge except for
/// the listed overrides.
fn collapse_hom(apex: &RGraph, boundary: &RGraph, overrides: &[(&str, &str)]) -> GraphHom {
    let v = boundary
        .vertices
        .iter()
        .next()
        .expect("nonempty boundary")
        .clone();
    let trivial = boundary.trivial[&v].clone();
    GraphHom {
        vmap: apex.vertices.iter().map(|x| (x.clone(), v.clone())).collect(),
        emap: apex
            .edges
            .keys()
            .map(|e| {
                let img = overrides
                    .iter()
                    .find(|(k, _)| k == e)
                    .map(|(_, v)| v.to_string())
                    .unwrap_or_else(|| trivial.clone());
                (e.clone(), img)
            })
            .collect(),
    }
}

/// The boundary `M`: one vertex whose teeth may move `up` or `down`.
pub fn gear_m() -> RGraph {
    RGraph::new(["m"], [("up", "m", "m"), ("down", "m", "m")]).unwrap()
}

/// The Gear span `M → M`: rotating clockwise moves the left teeth up and
/// the right teeth down; counterclockwise is the reverse.
pub fn gear() -> Span {
    let m = gear_m();
    let apex = RGraph::new(["g"], [("cw", "g", "g"), ("ccw", "g", "g")]).unwrap();
    Span {
        leg0: collapse_hom(&apex, &m, &[("cw", "up"), ("ccw", "down")]),
        leg1: collapse_hom(&apex, &m, &[("cw", "down"), ("ccw", "up")]),
        left_boundary: m.clone(),
        apex,
        right_boundary: m,
    }
}

/// The boundary with one vertex and one nontrivial event `x` (obtaining
/// ingredients).
pub fn boundary_u() -> RGraph {
    RGraph::new(["u"], [("x", "u", "u")]).unwrap()
}

/// The boundary with one vertex and one nontrivial event `y` (selling
/// bread).
pub fn boundary_v() -> RGraph {
    RGraph::new(["u"], [("y", "u", "u")]).unwrap()
}

/// The plain Baker span `U → V`: open or closed for business; when open it
/// may bake (event `x` on the left) or sell (event `y` on the right).
pub fn baker_span() -> Span {
    let apex = RGraph::new(
        ["open", "closed"],
        [
            ("open", "closed", "open"),
            ("close", "open", "closed"),
            ("bake", "open", "open"),
            ("sell", "open", "open"),
        ],
    )
    .unwrap();
    Span {
        leg0: collapse_hom(&apex, &boundary_u(), &[("bake", "x")]),
        leg1: collapse_hom(&apex, &boundary_v(), &[("sell", "y")]),
        left_boundary: boundary_u(),
        apex,
        right_boundary: boundary_v(),
    }
}

/// The plain Eater span `V → 1`: hungry or full; when hungry it may buy
/// (event `y` on the left) or eat; when full it may digest.
pub fn eater_span() -> Span {
    let apex = RGraph::new(
        ["hungry", "full"],
        [
            ("eat", "hungry", "full"),
            ("digest", "full", "hungry"),
            ("buy", "hungry", "hungry"),
        ],
    )
    .unwrap();
    Span {
        leg0: collapse_hom(&apex, &boundary_v(), &[("buy", "y")]),
        leg1: collapse_hom(&apex, &RGraph::unit(), &[]),
        left_boundary: boundary_v(),
        apex,
        right_boundary: RGraph::unit(),
    }
}

/// The `flour°` interface of the situated Baker.
pub fn flour_boundary() -> SituatedBoundary<FreeTheory> {
    let graph = boundary_u();
    SituatedBoundary {
        labels: [
            ("x".to_string(), Exchange::single(w("flour"), Polarity::Out)),
            ("eps:u".to_string(), Exchange::empty()),
        ]
        .into(),
        graph,
    }
}

/// The `bread°` interface shared by the situated Baker and Eater.
pub fn bread_boundary() -> SituatedBoundary<FreeTheory> {
    let graph = boundary_v();
    SituatedBoundary {
        labels: [
            ("y".to_string(), Exchange::single(w("bread"), Polarity::Out)),
            ("eps:u".to_string(), Exchange::empty()),
        ]
        .into(),
        graph,
    }
}

fn stock_word(n: usize) -> ObjWord {
    w("oven").tensor(&w("bread").pow(n))
}

/// The material effect of baking with `n` loaves in stock: flour enters
/// from the left, is kneaded and baked, and the new loaf joins the stores.
fn bake_cell(th: &FreeTheory, n: usize) -> Cell<FreeTheory> {
    let absorb = Cell::HComp(
        Box::new(Cell::AbsorbLeft(w("flour"))),
        Box::new(Cell::VId(stock_word(n))),
    );
    let knead = th.generator("knead").unwrap();
    let bake = th.generator("bake").unwrap();
    let rest = crate::theory::Diagram::identity(&w("bread").pow(n));
    let process = knead
        .tensor(&crate::theory::Diagram::identity(&stock_word(n)))
        .compose(&bake.tensor(&rest))
        .unwrap()
        .compose(
            &crate::theory::Diagram::symmetry(&w("bread"), &w("oven")).tensor(&rest),
        )
        .unwrap();
    Cell::VComp(Box::new(absorb), Box::new(Cell::Mor(process)))
}

/// Selling with `n ≥ 1` loaves in stock: one loaf leaves to the right.
fn sell_cell(n: usize) -> Cell<FreeTheory> {
    Cell::HComp(
        Box::new(Cell::VId(stock_word(n - 1))),
        Box::new(Cell::EmitRight(w("bread"))),
    )
}

/// The situated Baker `flour° → bread°`, truncated at `capacity` loaves.
pub fn situated_baker(capacity: usize) -> SituatedSystem<FreeTheory> {
    let th = bread_theory();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut vlabels = BTreeMap::new();
    let mut elabels: BTreeMap<String, Cell<FreeTheory>> = BTreeMap::new();
    let mut leg0_over: Vec<(String, &str)> = Vec::new();
    let mut leg1_over: Vec<(String, &str)> = Vec::new();
    for n in 0..=capacity {
        for state in ["open", "closed"] {
            vertices.push(format!("{state}_{n}"));
            vlabels.insert(format!("{state}_{n}"), stock_word(n));
        }
        edges.push((format!("open_{n}"), format!("closed_{n}"), format!("open_{n}")));
        edges.push((format!("close_{n}"), format!("open_{n}"), format!("closed_{n}")));
        elabels.insert(format!("open_{n}"), Cell::VId(stock_word(n)));
        elabels.insert(format!("close_{n}"), Cell::VId(stock_word(n)));
        if n < capacity {
            edges.push((format!("bake_{n}"), format!("open_{n}"), format!("open_{}", n + 1)));
            elabels.insert(format!("bake_{n}"), bake_cell(&th, n));
            leg0_over.push((format!("bake_{n}"), "x"));
        }
        if n >= 1 {
            edges.push((format!("sell_{n}"), format!("open_{n}"), format!("open_{}", n - 1)));
            elabels.insert(format!("sell_{n}"), sell_cell(n));
            leg1_over.push((format!("sell_{n}"), "y"));
        }
    }
    let apex = RGraph::new(vertices, edges).unwrap();
    for (v, tr) in &apex.trivial {
        elabels.insert(tr.clone(), Cell::VId(vlabels[v].clone()));
    }
    let leg0_pairs: Vec<(&str, &str)> =
        leg0_over.iter().map(|(a, b)| (a.as_str(), *b)).collect();
    let leg1_pairs: Vec<(&str, &str)> =
        leg1_over.iter().map(|(a, b)| (a.as_str(), *b)).collect();
    let span = Span {
        leg0: collapse_hom(&apex, &boundary_u(), &leg0_pairs),
        leg1: collapse_hom(&apex, &boundary_v(), &leg1_pairs),
        left_boundary: boundary_u(),
        apex,
        right_boundary: boundary_v(),
    };
    SituatedSystem {
        theory: th,
        span,
        vlabels,
        elabels,
        src_boundary: flour_boundary(),
        tgt_boundary: bread_boundary(),
    }
}

/// The situated Eater `bread° → I`, truncated at `capacity` loaves.
pub fn situated_eater(capacity: usize) -> SituatedSystem<FreeTheory> {
    let th = bread_theory();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut vlabels = BTreeMap::new();
    let mut elabels: BTreeMap<String, Cell<FreeTheory>> = BTreeMap::new();
    let mut leg0_over: Vec<(String, &str)> = Vec::new();
    for n in 0..=capacity {
        for state in ["hungry", "full"] {
            vertices.push(format!("{state}_{n}"));
            vlabels.insert(format!("{state}_{n}"), w("bread").pow(n));
        }
        edges.push((format!("digest_{n}"), format!("full_{n}"), format!("hungry_{n}")));
        elabels.insert(format!("digest_{n}"), Cell::VId(w("bread").pow(n)));
        if n >= 1 {
            edges.push((format!("eat_{n}"), format!("hungry_{n}"), format!("full_{}", n - 1)));
            let eat = crate::theory::Diagram::identity(&w("bread").pow(n - 1))
                .tensor(&th.generator("eat").unwrap());
            elabels.insert(format!("eat_{n}"), Cell::Mor(eat));
        }
        if n < capacity {
            edges.push((format!("buy_{n}"), format!("hungry_{n}"), format!("hungry_{}", n + 1)));
            elabels.insert(
                format!("buy_{n}"),
                Cell::HComp(
                    Box::new(Cell::AbsorbLeft(w("bread"))),
                    Box::new(Cell::VId(w("bread").pow(n))),
                ),
            );
            leg0_over.push((format!("buy_{n}"), "y"));
        }
    }
    let apex = RGraph::new(vertices, edges).unwrap();
    for (v, tr) in &apex.trivial {
        elabels.insert(tr.clone(), Cell::VId(vlabels[v].clone()));
    }
    let leg0_pairs: Vec<(&str, &str)> =
        leg0_over.iter().map(|(a, b)| (a.as_str(), *b)).collect();
    let span = Span {
        leg0: collapse_hom(&apex, &boundary_v(), &leg0_pairs),
        leg1: collapse_hom(&apex, &RGraph::unit(), &[]),
        left_boundary: boundary_v(),
        apex,
        right_boundary: RGraph::unit(),
    };
    SituatedSystem {
        theory: th,
        span,
        vlabels,
        elabels,
        src_boundary: bread_boundary(),
        tgt_boundary: SituatedBoundary::unit(),
    }
}

/// The story of §3, starting from one loaf in stock and a hungry eater:
/// the Baker sells, the Eater eats, the Baker bakes, the Eater digests (so
/// it may buy again), and the Baker sells once more.
pub fn scenario_pairs() -> Vec<(String, String)> {
    [
        ("sell_1", "buy_0"),
        ("eps:open_0", "eat_1"),
        ("bake_0", "eps:full_0"),
        ("eps:open_1", "digest_0"),
        ("sell_1", "buy_0"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

/// A small account over `0..=5`: a deposit of 5 arrives on the left, a
/// withdrawal of 3 leaves on the left.
pub fn account() -> SituatedSystem<ZTheory> {
    mk_account(
        0,
        5,
        &[
            Move::new("deposit", Side::Left, 5),
            Move::new("withdraw", Side::Left, -3),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accounts::ledger_of_run;
    use crate::limits::Limits;
    use crate::situated::{compositionality_check, run, s_compose, validate_situated};
    use crate::theory::{Theory, Verdict};

    #[test]
    fn fixtures_are_coherent() {
        let limits = Limits::default();
        assert!(gear().validate().is_ok());
        assert!(baker_span().validate().is_ok());
        assert!(eater_span().validate().is_ok());
        assert_eq!(validate_situated(&situated_baker(3), &limits), Vec::new());
        assert_eq!(validate_situated(&situated_eater(3), &limits), Vec::new());
        assert_eq!(validate_situated(&account(), &limits), Vec::new());
    }

    #[test]
    fn baker_counts() {
        let b = situated_baker(3);
        assert_eq!(b.span.apex.vertices.len(), 8);
        // 4 open/close pairs, 3 bakes, 3 sells.
        assert_eq!(b.span.apex.nontrivial_edges().count(), 14);
    }

    #[test]
    fn scenario_history_composes() {
        let limits = Limits::default();
        let baker = situated_baker(3);
        let eater = situated_eater(3);
        let verdict = compositionality_check(&baker, &eater, &scenario_pairs(), &limits).unwrap();
        assert_eq!(verdict, Verdict::True);
    }

    #[test]
    fn baker_history_boundary() {
        let th = bread_theory();
        let baker = situated_baker(3);
        let path: Vec<String> = ["sell_1", "bake_0", "sell_1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let hist = run(&baker, &path, None).unwrap();
        let b = crate::cornering::boundary(&th, &hist).unwrap();
        assert_eq!(b.top, stock_word(1));
        assert_eq!(b.bottom, stock_word(0));
        assert_eq!(b.left, Exchange::single(w("flour"), Polarity::Out));
        assert_eq!(
            b.right,
            Exchange::single(w("bread"), Polarity::Out)
                .tensor(&Exchange::single(w("bread"), Polarity::Out))
        );
    }

    #[test]
    fn composite_synchronizes_trade() {
        let baker = situated_baker(1);
        let eater = situated_eater(1);
        let c = s_compose(&baker, &eater).unwrap();
        // sell must pair with buy; sell alone is not a composite edge.
        assert!(c
            .span
            .apex
            .edges
            .contains_key(&crate::rgraph::pair_name("sell_1", "buy_0")));
        assert!(!c
            .span
            .apex
            .edges
            .keys()
            .any(|e| e.contains("sell_1") && e.contains("eps:hungry")));
    }

    #[test]
    fn account_ledger_example() {
        let sys = account();
        let led = ledger_of_run(
            &sys,
            &["deposit@0".into(), "withdraw@5".into()],
            Some("b0"),
        )
        .unwrap();
        assert_eq!(led.opening, 0);
        assert_eq!(led.closing, 2);
        assert_eq!(led.rows[0].left_postings, vec![5]);
        assert_eq!(led.rows[1].left_postings, vec![-3]);
    }

    #[test]
    fn sift_equation_collapses() {
        let th = bread_sift_theory();
        let sift = th.generator("sift").unwrap();
        let twice = sift.compose(&sift).unwrap();
        assert!(th.mor_equal(&twice, &sift, &Limits::default()).is_true());
        // The plain bread theory has no sift generator at all.
        assert!(bread_theory().generator("sift").is_err());
    }
}
