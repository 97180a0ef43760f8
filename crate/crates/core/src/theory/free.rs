use super::diagram::{Diagram, PortSink, PortSource};
use super::signature::TheorySignature;
use super::word::ObjWord;
use super::{Theory, TheoryError, Verdict};
use crate::cornering::Cell;
use crate::limits::Limits;
use std::collections::BTreeSet;
use std::sync::Arc;

/// The free symmetric strict monoidal category presented by a signature,
/// with objects as generator words and morphisms as port-graph diagrams.
#[derive(Debug, Clone)]
pub struct FreeTheory {
    sig: Arc<TheorySignature>,
}

impl PartialEq for FreeTheory {
    fn eq(&self, other: &Self) -> bool {
        self.sig.name == other.sig.name
    }
}

impl FreeTheory {
    pub fn new(sig: TheorySignature) -> Self {
        FreeTheory { sig: Arc::new(sig) }
    }

    pub fn signature(&self) -> &TheorySignature {
        &self.sig
    }

    /// Diagram for a morphism generator.
    pub fn generator(&self, name: &str) -> Result<Diagram, TheoryError> {
        let g = self
            .sig
            .morphism(name)
            .ok_or_else(|| TheoryError::UnknownMorphism(name.to_string()))?;
        Ok(Diagram::generator(&g.name, g.dom.clone(), g.cod.clone()))
    }

    pub fn word(&self, letters: &str) -> Result<ObjWord, TheoryError> {
        self.parse_obj(letters)
    }

    fn check_word(&self, w: &ObjWord) -> Result<(), TheoryError> {
        for l in w.letters() {
            if !self.sig.has_object(l) {
                return Err(TheoryError::UnknownObject(l.clone()));
            }
        }
        Ok(())
    }
}

impl Theory for FreeTheory {
    type Obj = ObjWord;
    type Mor = Diagram;

    fn unit(&self) -> ObjWord {
        ObjWord::empty()
    }

    fn tensor(&self, a: &ObjWord, b: &ObjWord) -> ObjWord {
        a.tensor(b)
    }

    fn mor_dom(&self, m: &Diagram) -> ObjWord {
        m.dom.clone()
    }

    fn mor_cod(&self, m: &Diagram) -> ObjWord {
        m.cod.clone()
    }

    fn mor_identity(&self, a: &ObjWord) -> Diagram {
        Diagram::identity(a)
    }

    fn mor_is_identity(&self, m: &Diagram) -> bool {
        m.is_identity()
    }

    fn mor_compose(&self, f: &Diagram, g: &Diagram) -> Result<Diagram, TheoryError> {
        Ok(f.compose(g)?)
    }

    fn mor_tensor(&self, f: &Diagram, g: &Diagram) -> Diagram {
        f.tensor(g)
    }

    fn mor_equal(&self, f: &Diagram, g: &Diagram, limits: &Limits) -> Verdict {
        diagram_equal(&self.sig, f, g, limits)
    }

    fn mor_symmetry(&self, a: &ObjWord, b: &ObjWord) -> Diagram {
        Diagram::symmetry(a, b)
    }

    fn is_compact_closed(&self) -> bool {
        self.sig.duals.is_some()
    }

    fn dual(&self, a: &ObjWord) -> Result<ObjWord, TheoryError> {
        let duals = self
            .sig
            .duals
            .as_ref()
            .ok_or_else(|| TheoryError::NotCompactClosed(self.sig.name.clone()))?;
        let mut out = ObjWord::empty();
        for letter in a.letters().iter().rev() {
            let d = duals
                .get(letter)
                .ok_or_else(|| TheoryError::UnknownObject(letter.clone()))?;
            out = out.tensor(d);
        }
        Ok(out)
    }

    fn duality_unit(&self, a: &ObjWord) -> Result<Diagram, TheoryError> {
        // Built from per-generator units by nesting: η_{x⊗y} routes η_x inside
        // η_y. Generator-level units are named cells `eta:<g>` which a compact
        // closed signature is expected to provide as morphism generators; we
        // synthesize a generic box when it does not.
        let _ = self.dual(a)?;
        if a.is_empty() {
            return Ok(Diagram::identity(&ObjWord::empty()));
        }
        let dual = self.dual(a)?;
        let name = format!("eta:{a}");
        if self.sig.morphism(&name).is_some() {
            self.generator(&name)
        } else {
            Ok(Diagram::generator(name, ObjWord::empty(), a.tensor(&dual)))
        }
    }

    fn duality_counit(&self, a: &ObjWord) -> Result<Diagram, TheoryError> {
        let dual = self.dual(a)?;
        if a.is_empty() {
            return Ok(Diagram::identity(&ObjWord::empty()));
        }
        let name = format!("eps:{a}");
        if self.sig.morphism(&name).is_some() {
            self.generator(&name)
        } else {
            Ok(Diagram::generator(name, dual.tensor(a), ObjWord::empty()))
        }
    }

    fn iso_candidates(&self, a: &ObjWord, b: &ObjWord) -> Vec<Diagram> {
        permutation_isos(a, b)
    }

    fn cell_equal(&self, c1: &Cell<Self>, c2: &Cell<Self>, limits: &Limits) -> Verdict {
        crate::cornering::cell_equal_free(self, c1, c2, limits)
    }

    fn print_obj(&self, a: &ObjWord) -> String {
        a.to_string()
    }

    fn parse_obj(&self, s: &str) -> Result<ObjWord, TheoryError> {
        let s = s.trim();
        if s.is_empty() || s == "I" {
            return Ok(ObjWord::empty());
        }
        let w = ObjWord::from_letters(s.split('*').map(str::trim));
        self.check_word(&w)?;
        Ok(w)
    }

    fn print_mor(&self, m: &Diagram) -> String {
        crate::syntax::print_diagram(m)
    }

    fn parse_mor(&self, s: &str) -> Result<Diagram, TheoryError> {
        crate::syntax::parse_diagram(self, s)
            .map_err(|e| TheoryError::UnknownMorphism(format!("{s}: {e}")))
    }
}

/// Letter-preserving position bijections `a → b`, as permutation diagrams.
/// Words longer than 6 letters only yield the identity (when `a == b`);
/// exhaustive enumeration is restricted to keep the search bounded.
pub fn permutation_isos(a: &ObjWord, b: &ObjWord) -> Vec<Diagram> {
    if a.len() != b.len() {
        return Vec::new();
    }
    if a == b && a.len() > 6 {
        return vec![Diagram::identity(a)];
    }
    if a.len() > 6 {
        return Vec::new();
    }
    let n = a.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    fn rec(
        a: &ObjWord,
        b: &ObjWord,
        perm: &mut Vec<usize>,
        taken: &mut Vec<bool>,
        i: usize,
        out: &mut Vec<Diagram>,
    ) {
        let n = a.len();
        if i == n {
            out.push(Diagram::permutation(a, perm).expect("bijection"));
            return;
        }
        for j in 0..n {
            if !taken[j] && a.letters()[i] == b.letters()[j] {
                perm[i] = j;
                taken[j] = true;
                rec(a, b, perm, taken, i + 1, out);
                perm[i] = usize::MAX;
                taken[j] = false;
            }
        }
    }
    rec(a, b, &mut perm, &mut taken, 0, &mut out);
    out
}

/// Morphism equality in a presented theory.
///
/// Equation-free signatures: boundary-preserving isomorphism (complete).
/// With equations: bidirectional bounded rewriting; the closures of both
/// diagrams are expanded breadth-first and intersected. Exhausting the budget
/// yields `Unknown`, never a silent `False`.
pub fn diagram_equal(
    sig: &TheorySignature,
    d1: &Diagram,
    d2: &Diagram,
    limits: &Limits,
) -> Verdict {
    if d1.dom != d2.dom || d1.cod != d2.cod {
        return Verdict::False;
    }
    if d1.iso_equal(d2) {
        return Verdict::True;
    }
    if sig.equations.is_empty() {
        return Verdict::False;
    }
    let mut left = RewriteClosure::new(d1.clone());
    let mut right = RewriteClosure::new(d2.clone());
    loop {
        let progress_left = left.step(sig, limits);
        if let Some(d) = left.last_added() {
            if right.contains(d) {
                return Verdict::True;
            }
        }
        let progress_right = right.step(sig, limits);
        if let Some(d) = right.last_added() {
            if left.contains(d) {
                return Verdict::True;
            }
        }
        match (progress_left, progress_right) {
            (Progress::Exhausted, Progress::Exhausted) => return Verdict::False,
            (Progress::Budget, _) | (_, Progress::Budget) => return Verdict::Unknown,
            _ => {}
        }
    }
}

#[derive(PartialEq)]
enum Progress {
    Added,
    Exhausted,
    Budget,
}

struct RewriteClosure {
    seen: Vec<Diagram>,
    frontier: std::collections::VecDeque<usize>,
    pending: std::collections::VecDeque<Diagram>,
    added_last: bool,
}

impl RewriteClosure {
    fn new(start: Diagram) -> Self {
        RewriteClosure {
            seen: vec![start],
            frontier: [0].into(),
            pending: Default::default(),
            added_last: false,
        }
    }

    fn contains(&self, d: &Diagram) -> bool {
        self.seen.iter().any(|s| s.iso_equal(d))
    }

    fn last_added(&self) -> Option<&Diagram> {
        if self.added_last {
            self.seen.last()
        } else {
            None
        }
    }

    /// Admit one new diagram into the closure (or report exhaustion/budget).
    fn step(&mut self, sig: &TheorySignature, limits: &Limits) -> Progress {
        self.added_last = false;
        loop {
            if let Some(d) = self.pending.pop_front() {
                if d.boxes.len() > limits.max_boxes || self.contains(&d) {
                    continue;
                }
                if self.seen.len() >= limits.rewrite_budget {
                    return Progress::Budget;
                }
                self.seen.push(d);
                self.frontier.push_back(self.seen.len() - 1);
                self.added_last = true;
                return Progress::Added;
            }
            let Some(idx) = self.frontier.pop_front() else {
                return Progress::Exhausted;
            };
            let host = self.seen[idx].clone();
            for (lhs, rhs) in &sig.equations {
                self.pending.extend(apply_equation(&host, lhs, rhs));
                self.pending.extend(apply_equation(&host, rhs, lhs));
            }
        }
    }
}

/// All results of replacing one occurrence of `lhs` in `host` by `rhs`.
///
/// Pattern sides must be box-anchored (every boundary port adjacent to a box);
/// matches whose attachment wires run between matched boxes are rejected, so
/// rewriting is sound but may miss exotic overlaps. That incompleteness is
/// covered by the `Unknown` verdict upstream.
pub fn apply_equation(host: &Diagram, lhs: &Diagram, rhs: &Diagram) -> Vec<Diagram> {
    if lhs.boxes.is_empty() {
        return Vec::new();
    }
    // Anchoring requirement on the pattern.
    for (src, snk) in &lhs.wires {
        if matches!(
            (src, snk),
            (PortSource::Input(_), PortSink::Output(_))
        ) {
            return Vec::new();
        }
    }
    let mut results = Vec::new();
    let mut mapping: Vec<Option<usize>> = vec![None; lhs.boxes.len()];
    let mut used = vec![false; host.boxes.len()];
    match_boxes(host, lhs, rhs, &mut mapping, &mut used, 0, &mut results);
    results
}

fn match_boxes(
    host: &Diagram,
    lhs: &Diagram,
    rhs: &Diagram,
    mapping: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    next: usize,
    results: &mut Vec<Diagram>,
) {
    if next == lhs.boxes.len() {
        if let Some(d) = try_replace(host, lhs, rhs, mapping) {
            results.push(d);
        }
        return;
    }
    for cand in 0..host.boxes.len() {
        if used[cand] || host.boxes[cand].gen != lhs.boxes[next].gen {
            continue;
        }
        mapping[next] = Some(cand);
        used[cand] = true;
        match_boxes(host, lhs, rhs, mapping, used, next + 1, results);
        mapping[next] = None;
        used[cand] = false;
    }
}

fn try_replace(
    host: &Diagram,
    lhs: &Diagram,
    rhs: &Diagram,
    mapping: &[Option<usize>],
) -> Option<Diagram> {
    let matched: BTreeSet<usize> = mapping.iter().map(|m| m.unwrap()).collect();
    let map_bx = |bx: usize| mapping[bx].unwrap();

    // Host wire lookup by endpoint.
    let wire_by_sink = |snk: PortSink| host.wires.iter().find(|(_, s)| *s == snk);
    let wire_by_source = |src: PortSource| host.wires.iter().find(|(s, _)| *s == src);

    // Internal pattern wires must map onto host wires; boundary pattern wires
    // determine the attachment ports.
    let mut attach_src: Vec<Option<PortSource>> = vec![None; lhs.dom.len()];
    let mut attach_snk: Vec<Option<PortSink>> = vec![None; lhs.cod.len()];
    for (src, snk) in &lhs.wires {
        match (src, snk) {
            (PortSource::BoxOut { bx: a, port: p }, PortSink::BoxIn { bx: b, port: q }) => {
                let want = (
                    PortSource::BoxOut {
                        bx: map_bx(*a),
                        port: *p,
                    },
                    PortSink::BoxIn {
                        bx: map_bx(*b),
                        port: *q,
                    },
                );
                if !host.wires.contains(&want) {
                    return None;
                }
            }
            (PortSource::Input(i), PortSink::BoxIn { bx, port }) => {
                let (hsrc, _) = wire_by_sink(PortSink::BoxIn {
                    bx: map_bx(*bx),
                    port: *port,
                })?;
                if let PortSource::BoxOut { bx: hb, .. } = hsrc {
                    if matched.contains(hb) {
                        return None;
                    }
                }
                attach_src[*i] = Some(*hsrc);
            }
            (PortSource::BoxOut { bx, port }, PortSink::Output(j)) => {
                let (_, hsnk) = wire_by_source(PortSource::BoxOut {
                    bx: map_bx(*bx),
                    port: *port,
                })?;
                if let PortSink::BoxIn { bx: hb, .. } = hsnk {
                    if matched.contains(hb) {
                        return None;
                    }
                }
                attach_snk[*j] = Some(*hsnk);
            }
            (PortSource::Input(_), PortSink::Output(_)) => return None,
        }
    }
    let attach_src: Vec<PortSource> = attach_src.into_iter().collect::<Option<_>>()?;
    let attach_snk: Vec<PortSink> = attach_snk.into_iter().collect::<Option<_>>()?;

    // Reindex surviving host boxes, append rhs boxes.
    let mut new_index = vec![usize::MAX; host.boxes.len()];
    let mut boxes = Vec::new();
    for (i, b) in host.boxes.iter().enumerate() {
        if !matched.contains(&i) {
            new_index[i] = boxes.len();
            boxes.push(b.clone());
        }
    }
    let rhs_base = boxes.len();
    boxes.extend(rhs.boxes.iter().cloned());

    let remap_src = |src: &PortSource| -> Option<PortSource> {
        match src {
            PortSource::Input(i) => Some(PortSource::Input(*i)),
            PortSource::BoxOut { bx, port } => {
                if matched.contains(bx) {
                    None
                } else {
                    Some(PortSource::BoxOut {
                        bx: new_index[*bx],
                        port: *port,
                    })
                }
            }
        }
    };
    let remap_snk = |snk: &PortSink| -> Option<PortSink> {
        match snk {
            PortSink::Output(j) => Some(PortSink::Output(*j)),
            PortSink::BoxIn { bx, port } => {
                if matched.contains(bx) {
                    None
                } else {
                    Some(PortSink::BoxIn {
                        bx: new_index[*bx],
                        port: *port,
                    })
                }
            }
        }
    };

    let mut wires = Vec::new();
    for (src, snk) in &host.wires {
        match (remap_src(src), remap_snk(snk)) {
            (Some(s), Some(t)) => wires.push((s, t)),
            // Wires adjacent to matched boxes are re-created from the rhs.
            _ => {}
        }
    }
    for (src, snk) in &rhs.wires {
        let s = match src {
            PortSource::Input(i) => remap_src(&attach_src[*i])?,
            PortSource::BoxOut { bx, port } => PortSource::BoxOut {
                bx: rhs_base + bx,
                port: *port,
            },
        };
        let t = match snk {
            PortSink::Output(j) => remap_snk(&attach_snk[*j])?,
            PortSink::BoxIn { bx, port } => PortSink::BoxIn {
                bx: rhs_base + bx,
                port: *port,
            },
        };
        wires.push((s, t));
    }
    let mut d = Diagram {
        dom: host.dom.clone(),
        cod: host.cod.clone(),
        boxes,
        wires,
    };
    d.wires.sort();
    if d.validate().is_err() {
        return None;
    }
    Some(d)
}
