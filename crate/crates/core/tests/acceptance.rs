//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible under `--nocapture`).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use situ::accounts::{ledger_of_run, trial_balance};
use situ::cornering::{
    boundary, hcomp, lemma1_witness, vcomp_all, yank_normalize, Cell, Exchange, Polarity,
};
use situ::fixtures;
use situ::laws::{random_account_chain, random_pair_path};
use situ::limits::Limits;
use situ::rgraph::{pair_name, span_compose, span_iso, Span};
use situ::situated::{
    compositionality_check, s_compose, s_equiv, s_identity, s_tensor, snake_left_holds,
    snake_right_holds, SituatedBoundary,
};
use situ::theory::{FreeTheory, ObjWord, Theory, TheorySignature, Verdict, ZTheory};
use std::collections::{BTreeMap, BTreeSet};

fn report(n: usize, name: &str, ok: bool) {
    println!("criterion {n} ({name}): {}", if ok { "pass" } else { "fail" });
    assert!(ok, "criterion {n} ({name}) failed");
}

/// All words of length ≤ `max_len` over the given letters.
fn words(letters: &[&str], max_len: usize) -> Vec<ObjWord> {
    let mut out = vec![ObjWord::empty()];
    let mut frontier = vec![ObjWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in letters {
                let w2 = w.tensor(&ObjWord::letter(*l));
                out.push(w2.clone());
                next.push(w2);
            }
        }
        frontier = next;
    }
    out
}

#[test]
fn criterion_1_yanking_identities() {
    let th = FreeTheory::new(
        TheorySignature::new("three").with_objects(["a", "b", "c"]),
    );
    let mut ok = true;
    for w in words(&["a", "b", "c"], 4) {
        let zig = hcomp(&th, Cell::EmitRight(w.clone()), Cell::AbsorbLeft(w.clone())).unwrap();
        ok &= yank_normalize(&th, &zig).unwrap() == Cell::VId(w.clone());
        let zag = hcomp(&th, Cell::AbsorbRight(w.clone()), Cell::EmitLeft(w.clone())).unwrap();
        ok &= yank_normalize(&th, &zag).unwrap() == Cell::VId(w.clone());
        let loop_out = Cell::VComp(
            Box::new(Cell::AbsorbLeft(w.clone())),
            Box::new(Cell::EmitRight(w.clone())),
        );
        ok &= yank_normalize(&th, &loop_out).unwrap()
            == Cell::HId(Exchange::single(w.clone(), Polarity::Out));
        let loop_in = Cell::VComp(
            Box::new(Cell::AbsorbRight(w.clone())),
            Box::new(Cell::EmitLeft(w.clone())),
        );
        ok &= yank_normalize(&th, &loop_in).unwrap()
            == Cell::HId(Exchange::single(w, Polarity::In));
    }
    report(1, "yanking identities", ok);
}

#[test]
fn criterion_2_gear_law() {
    let limits = Limits::default();
    let m = fixtures::gear_m();
    let gear = fixtures::gear();
    let gg = span_compose(&gear, &gear).unwrap();
    let ok = gg.apex.vertices.len() == 1
        && gg.apex.nontrivial_edges().count() == 2
        && span_iso(&gg, &Span::identity(&m), &limits).unwrap().is_some();
    report(2, "Gear composed with Gear is the identity on M", ok);
}

/// Brute-force pullback: every pair of apex vertices/edges whose boundary
/// images agree, named as flat tuples.
fn oracle_pullback(r: &Span, s: &Span) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut vertices = BTreeSet::new();
    for p in &r.apex.vertices {
        for q in &s.apex.vertices {
            if r.leg1.vmap[p] == s.leg0.vmap[q] {
                vertices.insert(pair_name(p, q));
            }
        }
    }
    let trivial_pairs: BTreeSet<(String, String)> = r
        .apex
        .trivial
        .values()
        .flat_map(|e| s.apex.trivial.values().map(move |f| (e.clone(), f.clone())))
        .collect();
    let mut edges = BTreeSet::new();
    for (e, (esrc, _)) in &r.apex.edges {
        for (f, (fsrc, _)) in &s.apex.edges {
            if r.leg1.emap[e] == s.leg0.emap[f]
                && r.leg1.vmap[esrc] == s.leg0.vmap[fsrc]
                && !trivial_pairs.contains(&(e.clone(), f.clone()))
            {
                edges.insert(pair_name(e, f));
            }
        }
    }
    (vertices, edges)
}

#[test]
fn criterion_3_baker_eater_pullback() {
    let r = fixtures::baker_span();
    let s = fixtures::eater_span();
    let composite = span_compose(&r, &s).unwrap();
    let got_vertices: BTreeSet<String> = composite.apex.vertices.iter().cloned().collect();
    let got_edges: BTreeSet<String> = composite.apex.nontrivial_edges().cloned().collect();
    let (want_vertices, want_edges) = oracle_pullback(&r, &s);
    let ok = got_vertices.len() == 4
        && got_vertices == want_vertices
        && got_edges == want_edges
        && got_edges.contains(&pair_name("sell", "buy"));
    report(3, "Baker/Eater pullback matches the pair-enumeration oracle", ok);
}

#[test]
fn criterion_4_composite_history_compositionality() {
    let limits = Limits::default();
    let baker = fixtures::situated_baker(3);
    let eater = fixtures::situated_eater(3);
    let mut ok = compositionality_check(&baker, &eater, &fixtures::scenario_pairs(), &limits)
        .unwrap()
        == Verdict::True;

    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0usize;
    while checked < 200 {
        let chain = random_account_chain(&mut rng, 2);
        let (r, s) = (&chain[0], &chain[1]);
        let pairs = random_pair_path(r, s, &mut rng, 6);
        if pairs.is_empty() {
            continue;
        }
        // Over the integer theory equality is decided by flow, so the
        // verdict must be outright true: neither false nor unknown.
        ok &= compositionality_check(r, s, &pairs, &limits).unwrap() == Verdict::True;
        checked += 1;
    }
    report(4, "composite history equals composite of histories", ok);
}

#[test]
fn criterion_5_category_and_monoidal_laws() {
    let limits = Limits::default().with_iso_size_cap(512);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut ok = true;
    for _ in 0..50 {
        // Associativity and units on a composable triple.
        let chain = random_account_chain(&mut rng, 3);
        let (r, s, t) = (&chain[0], &chain[1], &chain[2]);
        let lhs = s_compose(&s_compose(r, s).unwrap(), t).unwrap();
        let rhs = s_compose(r, &s_compose(s, t).unwrap()).unwrap();
        ok &= s_equiv(&lhs, &rhs, &limits).unwrap().is_some();
        let left_unit = s_compose(&s_identity(&r.theory, &r.src_boundary), r).unwrap();
        let right_unit = s_compose(r, &s_identity(&r.theory, &r.tgt_boundary)).unwrap();
        ok &= s_equiv(&left_unit, r, &limits).unwrap().is_some();
        ok &= s_equiv(&right_unit, r, &limits).unwrap().is_some();

        // Interchange on a quadruple: two parallel composable pairs.
        let c1 = random_account_chain(&mut rng, 2);
        let c2 = random_account_chain(&mut rng, 2);
        let (a, b) = (&c1[0], &c1[1]);
        let (c, d) = (&c2[0], &c2[1]);
        let tensored =
            s_compose(&s_tensor(a, c).unwrap(), &s_tensor(b, d).unwrap()).unwrap();
        let composed =
            s_tensor(&s_compose(a, b).unwrap(), &s_compose(c, d).unwrap()).unwrap();
        ok &= s_equiv(&tensored, &composed, &limits).unwrap().is_some();
    }
    report(5, "associativity, units, and interchange up to equivalence", ok);
}

#[test]
fn criterion_6_lemma_1_over_z() {
    let th = ZTheory;
    let limits = Limits::default();
    let mut ok = true;
    for k in -5..=5 {
        let (fwd, back) = lemma1_witness(k);
        let out = Exchange::single(k, Polarity::Out);
        let inn = Exchange::single(-k, Polarity::In);
        ok &= th.cell_equal(
            &hcomp(&th, fwd.clone(), back.clone()).unwrap(),
            &Cell::HId(out),
            &limits,
        ) == Verdict::True;
        ok &= th.cell_equal(&hcomp(&th, back, fwd).unwrap(), &Cell::HId(inn), &limits)
            == Verdict::True;
    }
    report(6, "k-out and (-k)-in exchanges are isomorphic", ok);
}

/// Every single-vertex integer interface with the given nontrivial loops.
fn z_boundary(labels: &[Exchange<ZTheory>]) -> SituatedBoundary<ZTheory> {
    let graph = situ::rgraph::RGraph::new(
        ["u"],
        labels
            .iter()
            .enumerate()
            .map(|(i, _)| (format!("e{i}"), "u".to_string(), "u".to_string()))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let mut map: BTreeMap<String, Exchange<ZTheory>> = graph
        .edges
        .keys()
        .map(|e| (e.clone(), Exchange::empty()))
        .collect();
    for (i, x) in labels.iter().enumerate() {
        map.insert(format!("e{i}"), x.clone());
    }
    SituatedBoundary { graph, labels: map }
}

#[test]
fn criterion_7_s_z_is_compact_closed() {
    let th = ZTheory;
    let limits = Limits::default();
    let singles: Vec<Exchange<ZTheory>> = (-3..=3)
        .flat_map(|k| [Polarity::Out, Polarity::In].map(|p| Exchange::single(k, p)))
        .collect();
    let mut boundaries = vec![z_boundary(&[])];
    for x in &singles {
        boundaries.push(z_boundary(std::slice::from_ref(x)));
    }
    for x in &singles {
        for y in &singles {
            boundaries.push(z_boundary(&[x.clone(), y.clone()]));
        }
    }
    let mut ok = true;
    for b in &boundaries {
        ok &= snake_left_holds(&th, b, &limits).unwrap();
        ok &= snake_right_holds(&th, b, &limits).unwrap();
    }
    report(7, "snake equations hold in situated integer systems", ok);
}

#[test]
fn criterion_8_conservation_and_double_entry() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut ok = true;
    let mut checked = 0usize;
    while checked < 100 {
        let chain = random_account_chain(&mut rng, 2);
        let (r, s) = (&chain[0], &chain[1]);
        let pairs = random_pair_path(r, s, &mut rng, 6);
        if pairs.is_empty() {
            continue;
        }
        let tb = trial_balance(r, s, &pairs).unwrap();
        ok &= tb.balanced;
        ok &= tb.cancellation.iter().all(|row| row.net() == 0);
        let composite = s_compose(r, s).unwrap();
        let path: Vec<String> = pairs.iter().map(|(a, b)| pair_name(a, b)).collect();
        let ledger = ledger_of_run(&composite, &path, None).unwrap();
        // bottom = top + Σ postings, rowwise and in total.
        ok &= ledger.rows.iter().all(|row| {
            row.closing
                == row.opening
                    + row.left_postings.iter().sum::<i64>()
                    + row.right_postings.iter().sum::<i64>()
        });
        ok &= ledger.delta() == ledger.net_postings();
        ok &= ledger.rows.windows(2).all(|w| w[0].closing == w[1].opening);
        checked += 1;
    }
    report(8, "ledgers conserve value and seams cancel", ok);
}

// ---------------------------------------------------------------------------
// Criterion 9: asymmetry witness
// ---------------------------------------------------------------------------

type FreeCell = Cell<FreeTheory>;

/// Horizontal chain of cells; seams must already match.
fn hchain(cells: Vec<FreeCell>) -> FreeCell {
    let mut iter = cells.into_iter();
    let first = iter.next().expect("nonempty row");
    iter.fold(first, |acc, c| Cell::HComp(Box::new(acc), Box::new(c)))
}

/// Enumerate exchange-category cells `left → right` as stacks of at most
/// `max_gens` rows; each row is one corner or lifted morphism, with the
/// crossings and identities needed to route its boundary entry through the
/// interior word. By interchange, every cell reduces to such a stack.
/// Interior words are capped at 4 letters.
fn enumerate_exchange_cells(
    th: &FreeTheory,
    left: &[(ObjWord, Polarity)],
    right: &[(ObjWord, Polarity)],
    max_gens: usize,
) -> Vec<FreeCell> {
    let objects: Vec<ObjWord> = ["bread", "dough", "flour", "oven"]
        .iter()
        .map(|l| ObjWord::letter(*l))
        .collect();
    let gens: Vec<situ::theory::Diagram> = th
        .signature()
        .morphism_generators
        .keys()
        .map(|name| th.generator(name).unwrap())
        .collect();

    struct State {
        word: ObjWord,
        li: usize,
        ri: usize,
        rows: Vec<FreeCell>,
    }

    // The entry comes from (or leaves by) the left boundary and crosses the
    // first `p` letters before its corner; the rest rides identities.
    fn left_row(letters: &[String], p: usize, skip: usize, corner: FreeCell, x: Exchange<FreeTheory>) -> FreeCell {
        let mut cells: Vec<FreeCell> = letters[..p]
            .iter()
            .map(|l| Cell::Crossing(ObjWord::letter(l.clone()), x.clone()))
            .collect();
        cells.push(corner);
        if letters.len() > p + skip {
            cells.push(Cell::VId(ObjWord::from_letters(
                letters[p + skip..].iter().cloned(),
            )));
        }
        hchain(cells)
    }

    // Mirrored: the entry crosses the letters after position `p`.
    fn right_row(letters: &[String], p: usize, skip: usize, corner: FreeCell, x: Exchange<FreeTheory>) -> FreeCell {
        let mut cells: Vec<FreeCell> = Vec::new();
        if p > 0 {
            cells.push(Cell::VId(ObjWord::from_letters(letters[..p].iter().cloned())));
        }
        cells.push(corner);
        cells.extend(
            letters[p + skip..]
                .iter()
                .map(|l| Cell::Crossing(ObjWord::letter(l.clone()), x.clone())),
        );
        hchain(cells)
    }

    let mut found = Vec::new();
    let mut stack = vec![State {
        word: ObjWord::empty(),
        li: 0,
        ri: 0,
        rows: Vec::new(),
    }];
    while let Some(st) = stack.pop() {
        if st.word.is_empty() && st.li == left.len() && st.ri == right.len() && !st.rows.is_empty()
        {
            found.push(vcomp_all(th, st.rows.clone()).unwrap());
        }
        if st.rows.len() == max_gens {
            continue;
        }
        let letters = st.word.letters().to_vec();
        let mut push = |word: ObjWord, li: usize, ri: usize, row: FreeCell| {
            if word.len() <= 4 {
                let mut rows = st.rows.clone();
                rows.push(row);
                stack.push(State { word, li, ri, rows });
            }
        };
        let insert_at = |p: usize, o: &ObjWord| {
            let mut w = letters[..p].to_vec();
            w.extend(o.letters().iter().cloned());
            w.extend(letters[p..].iter().cloned());
            ObjWord::from_letters(w)
        };
        // Absorbing corners insert an object into the interior word.
        for p in 0..=letters.len() {
            for o in &objects {
                if left.get(st.li) == Some(&(o.clone(), Polarity::Out)) {
                    let x = Exchange::single(o.clone(), Polarity::Out);
                    push(
                        insert_at(p, o),
                        st.li + 1,
                        st.ri,
                        left_row(&letters, p, 0, Cell::AbsorbLeft(o.clone()), x),
                    );
                }
                if right.get(st.ri) == Some(&(o.clone(), Polarity::In)) {
                    let x = Exchange::single(o.clone(), Polarity::In);
                    push(
                        insert_at(p, o),
                        st.li,
                        st.ri + 1,
                        right_row(&letters, p, 0, Cell::AbsorbRight(o.clone()), x),
                    );
                }
            }
        }
        // Emitting corners remove a letter of the interior word.
        for p in 0..letters.len() {
            let o = ObjWord::letter(letters[p].clone());
            let removed = ObjWord::from_letters(
                letters[..p].iter().chain(&letters[p + 1..]).cloned(),
            );
            if left.get(st.li) == Some(&(o.clone(), Polarity::In)) {
                let x = Exchange::single(o.clone(), Polarity::In);
                push(
                    removed.clone(),
                    st.li + 1,
                    st.ri,
                    left_row(&letters, p, 1, Cell::EmitLeft(o.clone()), x),
                );
            }
            if right.get(st.ri) == Some(&(o.clone(), Polarity::Out)) {
                let x = Exchange::single(o.clone(), Polarity::Out);
                push(
                    removed,
                    st.li,
                    st.ri + 1,
                    right_row(&letters, p, 1, Cell::EmitRight(o), x),
                );
            }
        }
        // A through-crossing: one entry passes over the whole interior word,
        // appearing on both boundaries.
        if let (Some(l), Some(r)) = (left.get(st.li), right.get(st.ri)) {
            if l == r {
                let x = Exchange(vec![l.clone()]);
                let row = if letters.is_empty() {
                    Cell::HId(x)
                } else {
                    hchain(
                        letters
                            .iter()
                            .map(|ltr| Cell::Crossing(ObjWord::letter(ltr.clone()), x.clone()))
                            .collect(),
                    )
                };
                push(st.word.clone(), st.li + 1, st.ri + 1, row);
            }
        }
        // Lifted morphism generators rewriting a contiguous subword.
        for g in &gens {
            let dom = th.mor_dom(g);
            let n = dom.len();
            if n > letters.len() {
                continue;
            }
            for p in 0..=letters.len() - n {
                if letters[p..p + n] != *dom.letters() {
                    continue;
                }
                let mut w = letters[..p].to_vec();
                w.extend(th.mor_cod(g).letters().iter().cloned());
                w.extend(letters[p + n..].iter().cloned());
                let mut cells = Vec::new();
                if p > 0 {
                    cells.push(Cell::VId(ObjWord::from_letters(letters[..p].iter().cloned())));
                }
                cells.push(Cell::Mor(g.clone()));
                if p + n < letters.len() {
                    cells.push(Cell::VId(ObjWord::from_letters(
                        letters[p + n..].iter().cloned(),
                    )));
                }
                push(ObjWord::from_letters(w), st.li, st.ri, hchain(cells));
            }
        }
    }
    found
}

#[test]
fn criterion_9_asymmetry_witness_no_inverse_within_8_generators() {
    let th = fixtures::bread_theory();
    let limits = Limits::default();
    let a = ObjWord::letter("bread");
    let b = ObjWord::letter("dough");
    let x = vec![(a.clone(), Polarity::Out), (b.clone(), Polarity::In)];
    let y = vec![(b.clone(), Polarity::In), (a.clone(), Polarity::Out)];
    let x_ex = Exchange::<FreeTheory>(x.clone());
    let y_ex = Exchange::<FreeTheory>(y.clone());

    // The canonical cell a° ⊗ b• → b• ⊗ a° exists and is well-formed.
    let canonical: FreeCell = vcomp_all(
        &th,
        vec![
            Cell::AbsorbLeft(a.clone()),
            Cell::Crossing(a.clone(), Exchange::single(b.clone(), Polarity::In)),
            Cell::EmitRight(a.clone()),
        ],
    )
    .unwrap();
    let cb = boundary(&th, &canonical).unwrap();
    let mut ok = cb.left == x_ex && cb.right == y_ex && cb.top.is_empty() && cb.bottom.is_empty();

    // Sanity for the search itself: it rediscovers the forward direction.
    let forward = enumerate_exchange_cells(&th, &x, &y, 8);
    ok &= !forward.is_empty();

    // The bounded search for a reverse cell finds no candidate at all, so in
    // particular no two-sided inverse.
    let candidates = enumerate_exchange_cells(&th, &y, &x, 8);
    let inverse_found = candidates.iter().any(|d| {
        let there = Cell::VComp(Box::new(canonical.clone()), Box::new(d.clone()));
        let back = Cell::VComp(Box::new(d.clone()), Box::new(canonical.clone()));
        th.cell_equal(&there, &Cell::HId(x_ex.clone()), &limits) == Verdict::True
            && th.cell_equal(&back, &Cell::HId(y_ex.clone()), &limits) == Verdict::True
    });
    ok &= !inverse_found;
    report(9, "exchange swap cell has no two-sided inverse", ok);
}
