//! Seeded property suites behind `check-laws`: yanking, span algebra,
//! situated category/monoidal laws, and compact closure.

use crate::accounts::{ledger_of_run, mk_account, Move, Side};
use crate::cornering::{h_dual_witness, hcomp, lemma1_witness, yank_normalize, Cell, Exchange, Polarity};
use crate::fixtures;
use crate::limits::Limits;
use crate::rgraph::{product, span_compose, span_iso, Span};
use crate::situated::{
    compositionality_check, s_compose, s_equiv, s_identity, snake_left_holds, snake_right_holds,
    validate_situated, SituatedSystem,
};
use crate::theory::{ObjWord, Theory, Verdict, ZTheory};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Outcome counts for one law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawResult {
    pub law: String,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

impl LawResult {
    fn new(law: impl Into<String>) -> Self {
        LawResult {
            law: law.into(),
            pass: 0,
            fail: 0,
            unknown: 0,
        }
    }

    fn record(&mut self, v: Verdict) {
        match v {
            Verdict::True => self.pass += 1,
            Verdict::False => self.fail += 1,
            Verdict::Unknown => self.unknown += 1,
        }
    }

    fn check(&mut self, ok: bool) {
        self.record(Verdict::from_bool(ok));
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub laws: Vec<LawResult>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.laws.iter().all(|l| l.fail == 0)
    }
}

pub const SUITES: [&str; 4] = ["yanking", "span", "situated", "compact"];

/// Run one named suite; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64, samples: usize, limits: &Limits) -> Option<SuiteReport> {
    match name {
        "yanking" => Some(suite_yanking(limits)),
        "span" => Some(suite_span(limits)),
        "situated" => Some(suite_situated(seed, samples, limits)),
        "compact" => Some(suite_compact(seed, samples, limits)),
        _ => None,
    }
}

pub fn all_suites(seed: u64, samples: usize, limits: &Limits) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s, seed, samples, limits).unwrap())
        .collect()
}

// ---------------------------------------------------------------------------
// Yanking
// ---------------------------------------------------------------------------

/// Both zig-zag redexes over each polarity normalize to identities, for all
/// bread-theory words of length ≤ 2.
pub fn suite_yanking(_limits: &Limits) -> SuiteReport {
    let th = fixtures::bread_theory();
    let mut h_yanks = LawResult::new("horizontal yanks normalize to vertical identities");
    let mut v_yanks = LawResult::new("vertical yanks normalize to horizontal identities");
    for word in bread_words(2) {
        let out = Exchange::single(word.clone(), Polarity::Out);
        let inn = Exchange::single(word.clone(), Polarity::In);
        let zig = hcomp(
            &th,
            Cell::EmitRight(word.clone()),
            Cell::AbsorbLeft(word.clone()),
        )
        .unwrap();
        h_yanks.check(yank_normalize(&th, &zig).unwrap() == Cell::VId(word.clone()));
        let zag = hcomp(
            &th,
            Cell::AbsorbRight(word.clone()),
            Cell::EmitLeft(word.clone()),
        )
        .unwrap();
        h_yanks.check(yank_normalize(&th, &zag).unwrap() == Cell::VId(word.clone()));
        let loop_out = Cell::VComp(
            Box::new(Cell::AbsorbLeft(word.clone())),
            Box::new(Cell::EmitRight(word.clone())),
        );
        v_yanks.check(yank_normalize(&th, &loop_out).unwrap() == Cell::HId(out));
        let loop_in = Cell::VComp(
            Box::new(Cell::AbsorbRight(word.clone())),
            Box::new(Cell::EmitLeft(word.clone())),
        );
        v_yanks.check(yank_normalize(&th, &loop_in).unwrap() == Cell::HId(inn));
    }
    SuiteReport {
        suite: "yanking".into(),
        laws: vec![h_yanks, v_yanks],
    }
}

/// All words over the bread objects of length ≤ `max_len` (the unit
/// included).
pub fn bread_words(max_len: usize) -> Vec<ObjWord> {
    let letters = ["bread", "dough", "flour", "oven"];
    let mut out = vec![ObjWord::empty()];
    let mut frontier = vec![ObjWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in letters {
                let w2 = w.tensor(&ObjWord::from_letters([l]));
                out.push(w2.clone());
                next.push(w2);
            }
        }
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Span algebra
// ---------------------------------------------------------------------------

pub fn suite_span(limits: &Limits) -> SuiteReport {
    let mut gear_law = LawResult::new("Gear composed with Gear is the identity on M");
    let mut counts = LawResult::new("product and pullback counts");
    let mut snake = LawResult::new("span snake equations for M");

    let m = fixtures::gear_m();
    let gear = fixtures::gear();
    let gg = span_compose(&gear, &gear).unwrap();
    gear_law.check(gg.apex.vertices.len() == 1);
    gear_law.check(gg.apex.nontrivial_edges().count() == 2);
    gear_law.check(span_iso(&gg, &Span::identity(&m), limits).unwrap().is_some());

    let (mm, _, _) = product(&m, &m);
    counts.check(mm.vertices.len() == 1);
    counts.check(mm.edges.len() == 9);
    let be = span_compose(&fixtures::baker_span(), &fixtures::eater_span()).unwrap();
    counts.check(be.apex.vertices.len() == 4);

    for held in [span_snake_left(&m, limits), span_snake_right(&m, limits)] {
        snake.check(held);
    }

    SuiteReport {
        suite: "span".into(),
        laws: vec![gear_law, counts, snake],
    }
}

/// `(1 ⊗ η) ; (ε ⊗ 1) ≅ 1` at span level, via the discrete situation
/// (which reuses the situated unitors).
pub fn span_snake_left(g: &crate::rgraph::RGraph, limits: &Limits) -> bool {
    let b = crate::situated::SituatedBoundary::<ZTheory>::discrete(g.clone());
    snake_left_holds(&ZTheory, &b, limits).unwrap_or(false)
}

pub fn span_snake_right(g: &crate::rgraph::RGraph, limits: &Limits) -> bool {
    let b = crate::situated::SituatedBoundary::<ZTheory>::discrete(g.clone());
    snake_right_holds(&ZTheory, &b, limits).unwrap_or(false)
}

// ---------------------------------------------------------------------------
// Random integer systems
// ---------------------------------------------------------------------------

/// A chain of `len` composable accounts with distinct seam denominations,
/// so the chain composes left to right.
pub fn random_account_chain(rng: &mut ChaCha8Rng, len: usize) -> Vec<SituatedSystem<ZTheory>> {
    // Seam i carries denomination seams[i]; account i receives seams[i] on
    // the left and pays seams[i+1] on the right.
    let seams: Vec<i64> = (0..=len).map(|i| 1 + (i as i64 + rng.gen_range(0..2)) % 3).collect();
    (0..len)
        .map(|i| {
            let hi = rng.gen_range(1..=2).max(seams[i].max(seams[i + 1]));
            mk_account(
                0,
                hi,
                &[
                    Move::new("in", Side::Left, seams[i]),
                    Move::new("out", Side::Right, -seams[i + 1]),
                ],
            )
            .unwrap()
        })
        .collect()
}

/// A random walk of up to `max_len` synchronized steps on the composite of
/// `r` and `s`, as (left edge, right edge) pairs.
pub fn random_pair_path(
    r: &SituatedSystem<ZTheory>,
    s: &SituatedSystem<ZTheory>,
    rng: &mut ChaCha8Rng,
    max_len: usize,
) -> Vec<(String, String)> {
    let Ok(c) = s_compose(r, s) else {
        return Vec::new();
    };
    let mut at = {
        let verts: Vec<&String> = c.span.apex.vertices.iter().collect();
        verts[rng.gen_range(0..verts.len())].clone()
    };
    let mut out = Vec::new();
    for _ in 0..max_len {
        let outgoing: Vec<(&String, &String)> = c
            .span
            .apex
            .edges
            .iter()
            .filter(|(_, (src, _))| *src == at)
            .map(|(e, (_, tgt))| (e, tgt))
            .collect();
        if outgoing.is_empty() {
            break;
        }
        let (e, tgt) = outgoing[rng.gen_range(0..outgoing.len())];
        // Composite edge ids are flat pairs; recover the components from
        // the projections implicit in the labels.
        let left = c.span.leg0.emap.contains_key(e);
        let _ = left;
        out.push(split_pair(e));
        at = tgt.clone();
    }
    out
}

/// Split a flat pair name `(a,b)` produced by composing two systems whose
/// own edge ids contain no commas.
fn split_pair(e: &str) -> (String, String) {
    let inner = e.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(e);
    let (a, b) = inner.split_once(',').expect("composite edge id");
    (a.to_string(), b.to_string())
}

// ---------------------------------------------------------------------------
// Situated laws
// ---------------------------------------------------------------------------

pub fn suite_situated(seed: u64, samples: usize, limits: &Limits) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut closure = LawResult::new("operation outputs stay coherent");
    let mut assoc = LawResult::new("composition associative up to equivalence");
    let mut unital = LawResult::new("identities are units up to equivalence");
    let mut compositional = LawResult::new("composite history equals composite of histories");
    let mut conservation = LawResult::new("run ledgers conserve value");

    for _ in 0..samples {
        let chain = random_account_chain(&mut rng, 3);
        let (r, s, t) = (&chain[0], &chain[1], &chain[2]);
        let rs = s_compose(r, s).unwrap();
        closure.check(validate_situated(&rs, limits).is_empty());

        let lhs = s_compose(&rs, t).unwrap();
        let rhs = s_compose(r, &s_compose(s, t).unwrap()).unwrap();
        assoc.check(s_equiv(&lhs, &rhs, limits).unwrap().is_some());

        let left_unit = s_compose(&s_identity(&r.theory, &r.src_boundary), r).unwrap();
        let right_unit = s_compose(r, &s_identity(&r.theory, &r.tgt_boundary)).unwrap();
        unital.check(s_equiv(&left_unit, r, limits).unwrap().is_some());
        unital.check(s_equiv(&right_unit, r, limits).unwrap().is_some());

        let pairs = random_pair_path(r, s, &mut rng, 5);
        if !pairs.is_empty() {
            compositional.record(compositionality_check(r, s, &pairs, limits).unwrap());
            let path: Vec<String> = pairs
                .iter()
                .map(|(a, b)| crate::rgraph::pair_name(a, b))
                .collect();
            let led = ledger_of_run(&rs, &path, None).unwrap();
            conservation.check(led.delta() == led.net_postings());
            conservation.check(led.rows.windows(2).all(|w| w[0].closing == w[1].opening));
        }
    }

    SuiteReport {
        suite: "situated".into(),
        laws: vec![closure, assoc, unital, compositional, conservation],
    }
}

// ---------------------------------------------------------------------------
// Compact closure
// ---------------------------------------------------------------------------

/// A random integer interface: one vertex, up to two nontrivial edges with
/// single-entry labels and postings in [-3, 3].
pub fn random_z_boundary(rng: &mut ChaCha8Rng) -> crate::situated::SituatedBoundary<ZTheory> {
    let n_edges = rng.gen_range(1..=2);
    let graph = crate::rgraph::RGraph::new(
        ["u"],
        (0..n_edges)
            .map(|i| (format!("e{i}"), "u".to_string(), "u".to_string()))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let labels = graph
        .edges
        .keys()
        .map(|e| {
            let x = if graph.is_trivial(e) {
                Exchange::empty()
            } else {
                let k = rng.gen_range(-3..=3);
                let pol = if rng.gen_bool(0.5) {
                    Polarity::Out
                } else {
                    Polarity::In
                };
                Exchange::single(k, pol)
            };
            (e.clone(), x)
        })
        .collect();
    crate::situated::SituatedBoundary { graph, labels }
}

pub fn suite_compact(seed: u64, samples: usize, limits: &Limits) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let th = ZTheory;
    let mut lemma1 = LawResult::new("k-out and (-k)-in exchanges are isomorphic");
    let mut cell_snakes = LawResult::new("exchange duals satisfy the snake equations");
    let mut sys_snakes = LawResult::new("interface duals satisfy the snake equations");

    for k in -5..=5 {
        let (fwd, back) = lemma1_witness(k);
        let out = Exchange::single(k, Polarity::Out);
        let inn = Exchange::single(-k, Polarity::In);
        lemma1.record(th.cell_equal(
            &hcomp(&th, fwd.clone(), back.clone()).unwrap(),
            &Cell::HId(out),
            limits,
        ));
        lemma1.record(th.cell_equal(&hcomp(&th, back, fwd).unwrap(), &Cell::HId(inn), limits));
    }

    for _ in 0..samples {
        let n = rng.gen_range(1..=3);
        let x = Exchange::<ZTheory>(
            (0..n)
                .map(|_| {
                    let k = rng.gen_range(-3..=3);
                    let pol = if rng.gen_bool(0.5) {
                        Polarity::Out
                    } else {
                        Polarity::In
                    };
                    (k, pol)
                })
                .collect(),
        );
        let (dual, unit, counit) = h_dual_witness(&th, &x).unwrap();
        let lhs = hcomp(
            &th,
            Cell::VComp(Box::new(Cell::HId(x.clone())), Box::new(unit.clone())),
            Cell::VComp(Box::new(counit.clone()), Box::new(Cell::HId(x.clone()))),
        )
        .unwrap();
        cell_snakes.record(th.cell_equal(&lhs, &Cell::HId(x.clone()), limits));
        let rhs = hcomp(
            &th,
            Cell::VComp(Box::new(unit), Box::new(Cell::HId(dual.clone()))),
            Cell::VComp(Box::new(Cell::HId(dual.clone())), Box::new(counit)),
        )
        .unwrap();
        cell_snakes.record(th.cell_equal(&rhs, &Cell::HId(dual), limits));

        let b = random_z_boundary(&mut rng);
        sys_snakes.check(snake_left_holds(&th, &b, limits).unwrap());
        sys_snakes.check(snake_right_holds(&th, &b, limits).unwrap());
    }

    SuiteReport {
        suite: "compact".into(),
        laws: vec![lemma1, cell_snakes, sys_snakes],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_with_default_budgets() {
        let limits = Limits::default();
        for report in all_suites(7, 5, &limits) {
            assert!(report.ok(), "suite {} failed: {:?}", report.suite, report.laws);
            for law in &report.laws {
                assert!(law.pass > 0, "law `{}` never ran", law.law);
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let limits = Limits::default();
        assert_eq!(all_suites(42, 4, &limits), all_suites(42, 4, &limits));
    }
}
