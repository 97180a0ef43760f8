//! Situated transition systems: open transition systems whose states carry
//! resource labels and whose transitions carry cells of the free cornering,
//! coherent with exchange-labeled boundary interfaces.

use crate::cornering::{
    boundary, cell_tensor, exchange_dual, h_dual_witness, Cell, CellError, Exchange,
};
use crate::limits::Limits;
use crate::rgraph::{
    cc_counit, cc_unit, pair_name, span_isos_visit, span_compose_proj, span_tensor_proj,
    GraphHom, RGraph, RGraphError, Span,
};
use crate::theory::{Theory, TheoryError, Verdict};
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SituatedError {
    #[error("{0}")]
    Graph(#[from] RGraphError),
    #[error("{0}")]
    Cell(#[from] CellError),
    #[error("{0}")]
    Theory(#[from] TheoryError),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("invalid path: {0}")]
    Path(String),
    #[error("theory is not compact closed")]
    NotCompactClosed,
}

/// A coherence failure, located by vertex or edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn violation(path: impl Into<String>, message: impl Into<String>) -> Violation {
    Violation {
        path: path.into(),
        message: message.into(),
    }
}

/// An interface: a reflexive graph whose edges carry exchanges. Trivial
/// edges always carry the empty exchange.
#[derive(Debug, Clone)]
pub struct SituatedBoundary<T: Theory> {
    pub graph: RGraph,
    pub labels: BTreeMap<String, Exchange<T>>,
}

impl<T: Theory> PartialEq for SituatedBoundary<T> {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.labels == other.labels
    }
}

impl<T: Theory> Eq for SituatedBoundary<T> {}

impl<T: Theory> SituatedBoundary<T> {
    /// All edges labeled with the empty exchange.
    pub fn discrete(graph: RGraph) -> Self {
        let labels = graph
            .edges
            .keys()
            .map(|e| (e.clone(), Exchange::empty()))
            .collect();
        SituatedBoundary { graph, labels }
    }

    /// The tensor unit: the one-vertex graph, trivially labeled.
    pub fn unit() -> Self {
        SituatedBoundary::discrete(RGraph::unit())
    }

    pub fn label(&self, edge: &str) -> Exchange<T> {
        self.labels.get(edge).cloned().unwrap_or_else(Exchange::empty)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(e) = self.graph.validate() {
            out.push(violation("graph", e.to_string()));
        }
        for e in self.graph.edges.keys() {
            if !self.labels.contains_key(e) {
                out.push(violation(format!("labels/{e}"), "edge has no label"));
            }
        }
        for e in self.labels.keys() {
            if !self.graph.edges.contains_key(e) {
                out.push(violation(format!("labels/{e}"), "label for unknown edge"));
            }
        }
        for tr in self.graph.trivial.values() {
            if !self.label(tr).is_empty() {
                out.push(violation(
                    format!("labels/{tr}"),
                    "trivial edge must carry the empty exchange",
                ));
            }
        }
        out
    }

    /// Product interface with tensored labels.
    pub fn tensor(&self, other: &SituatedBoundary<T>) -> SituatedBoundary<T> {
        let (graph, p0, p1) = crate::rgraph::product(&self.graph, &other.graph);
        let labels = graph
            .edges
            .keys()
            .map(|e| {
                (
                    e.clone(),
                    self.label(&p0.emap[e]).tensor(&other.label(&p1.emap[e])),
                )
            })
            .collect();
        SituatedBoundary { graph, labels }
    }
}

/// The dual interface: same graph, each label replaced by its exchange dual.
pub fn s_dual<T: Theory>(
    th: &T,
    b: &SituatedBoundary<T>,
) -> Result<SituatedBoundary<T>, SituatedError> {
    if !th.is_compact_closed() {
        return Err(SituatedError::NotCompactClosed);
    }
    Ok(SituatedBoundary {
        graph: b.graph.clone(),
        labels: b
            .labels
            .iter()
            .map(|(e, x)| (e.clone(), exchange_dual(x)))
            .collect(),
    })
}

/// A situated transition system (Definition 2): a span of reflexive graphs
/// whose apex states carry objects and apex transitions carry cells,
/// coherent with the boundary labels.
#[derive(Debug, Clone)]
pub struct SituatedSystem<T: Theory> {
    pub theory: T,
    pub span: Span,
    pub vlabels: BTreeMap<String, T::Obj>,
    pub elabels: BTreeMap<String, Cell<T>>,
    pub src_boundary: SituatedBoundary<T>,
    pub tgt_boundary: SituatedBoundary<T>,
}

/// A witness that two systems are the same up to reorganization: a span
/// isomorphism together with a natural family of label isomorphisms.
#[derive(Debug, Clone)]
pub struct SituatedEquivalence<T: Theory> {
    pub alpha: GraphHom,
    pub iota: BTreeMap<String, T::Mor>,
}

/// All coherence violations of the system; empty iff well-formed.
pub fn validate_situated<T: Theory>(sys: &SituatedSystem<T>, limits: &Limits) -> Vec<Violation> {
    let th = &sys.theory;
    let mut out = Vec::new();
    if let Err(e) = sys.span.validate() {
        out.push(violation("span", e.to_string()));
    }
    out.extend(sys.src_boundary.validate().into_iter().map(|mut v| {
        v.path = format!("src_boundary/{}", v.path);
        v
    }));
    out.extend(sys.tgt_boundary.validate().into_iter().map(|mut v| {
        v.path = format!("tgt_boundary/{}", v.path);
        v
    }));
    if sys.src_boundary.graph != sys.span.left_boundary {
        out.push(violation(
            "src_boundary",
            "boundary graph differs from the span's left boundary",
        ));
    }
    if sys.tgt_boundary.graph != sys.span.right_boundary {
        out.push(violation(
            "tgt_boundary",
            "boundary graph differs from the span's right boundary",
        ));
    }
    if !out.is_empty() {
        return out;
    }
    for v in &sys.span.apex.vertices {
        if !sys.vlabels.contains_key(v) {
            out.push(violation(format!("vlabels/{v}"), "vertex has no label"));
        }
    }
    for e in sys.span.apex.edges.keys() {
        if !sys.elabels.contains_key(e) {
            out.push(violation(format!("elabels/{e}"), "edge has no cell"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    // The coherence square, edge by edge.
    for (e, (src, tgt)) in &sys.span.apex.edges {
        let cell = &sys.elabels[e];
        let b = match boundary(th, cell) {
            Ok(b) => b,
            Err(err) => {
                out.push(violation(format!("elabels/{e}"), err.to_string()));
                continue;
            }
        };
        if b.top != sys.vlabels[src] {
            out.push(violation(
                format!("elabels/{e}"),
                format!(
                    "top boundary {} differs from source label {}",
                    b.top, sys.vlabels[src]
                ),
            ));
        }
        if b.bottom != sys.vlabels[tgt] {
            out.push(violation(
                format!("elabels/{e}"),
                format!(
                    "bottom boundary {} differs from target label {}",
                    b.bottom, sys.vlabels[tgt]
                ),
            ));
        }
        let want_left = sys.src_boundary.label(&sys.span.leg0.emap[e]);
        if b.left != want_left {
            out.push(violation(
                format!("elabels/{e}"),
                format!("left boundary {} differs from source-interface label {want_left}", b.left),
            ));
        }
        let want_right = sys.tgt_boundary.label(&sys.span.leg1.emap[e]);
        if b.right != want_right {
            out.push(violation(
                format!("elabels/{e}"),
                format!(
                    "right boundary {} differs from target-interface label {want_right}",
                    b.right
                ),
            ));
        }
    }
    // Trivial edges carry vertical identities.
    for (v, tr) in &sys.span.apex.trivial {
        let want = Cell::VId(sys.vlabels[v].clone());
        if !th.cell_equal(&sys.elabels[tr], &want, limits).is_true() {
            out.push(violation(
                format!("elabels/{tr}"),
                format!("trivial edge is not the vertical identity on {}", sys.vlabels[v]),
            ));
        }
    }
    out
}

/// Lift a plain span to a situated system with the trivial situation:
/// every label is the unit and every cell the vertical identity on it.
pub fn s_discrete<T: Theory>(th: &T, span: &Span) -> SituatedSystem<T> {
    let vlabels = span
        .apex
        .vertices
        .iter()
        .map(|v| (v.clone(), th.unit()))
        .collect();
    let elabels = span
        .apex
        .edges
        .keys()
        .map(|e| (e.clone(), Cell::VId(th.unit())))
        .collect();
    SituatedSystem {
        theory: th.clone(),
        vlabels,
        elabels,
        src_boundary: SituatedBoundary::discrete(span.left_boundary.clone()),
        tgt_boundary: SituatedBoundary::discrete(span.right_boundary.clone()),
        span: span.clone(),
    }
}

/// The identity system on an interface: every transition is the horizontal
/// identity cell on its exchange.
pub fn s_identity<T: Theory>(th: &T, b: &SituatedBoundary<T>) -> SituatedSystem<T> {
    let span = Span::identity(&b.graph);
    let vlabels = b
        .graph
        .vertices
        .iter()
        .map(|v| (v.clone(), th.unit()))
        .collect();
    let elabels = b
        .graph
        .edges
        .keys()
        .map(|e| {
            let x = b.label(e);
            let cell = if x.is_empty() {
                Cell::VId(th.unit())
            } else {
                Cell::HId(x)
            };
            (e.clone(), cell)
        })
        .collect();
    SituatedSystem {
        theory: th.clone(),
        span,
        vlabels,
        elabels,
        src_boundary: b.clone(),
        tgt_boundary: b.clone(),
    }
}

/// Composite system: synchronized transitions carry the horizontal
/// composite of the component cells; composite states carry the tensor of
/// the component labels.
pub fn s_compose<T: Theory>(
    r: &SituatedSystem<T>,
    s: &SituatedSystem<T>,
) -> Result<SituatedSystem<T>, SituatedError> {
    if r.tgt_boundary != s.src_boundary {
        return Err(SituatedError::BoundaryMismatch(
            "target interface of the first system differs from source interface of the second"
                .into(),
        ));
    }
    let th = &r.theory;
    let (span, p0, p1) = span_compose_proj(&r.span, &s.span)?;
    let vlabels = span
        .apex
        .vertices
        .iter()
        .map(|v| {
            (
                v.clone(),
                th.tensor(&r.vlabels[&p0.vmap[v]], &s.vlabels[&p1.vmap[v]]),
            )
        })
        .collect();
    let mut elabels = BTreeMap::new();
    for e in span.apex.edges.keys() {
        let c = crate::cornering::hcomp(
            th,
            r.elabels[&p0.emap[e]].clone(),
            s.elabels[&p1.emap[e]].clone(),
        )?;
        elabels.insert(e.clone(), c);
    }
    Ok(SituatedSystem {
        theory: th.clone(),
        span,
        vlabels,
        elabels,
        src_boundary: r.src_boundary.clone(),
        tgt_boundary: s.tgt_boundary.clone(),
    })
}

/// Parallel composite: product span, tensored labels, cell tensor on
/// transitions.
pub fn s_tensor<T: Theory>(
    r: &SituatedSystem<T>,
    s: &SituatedSystem<T>,
) -> Result<SituatedSystem<T>, SituatedError> {
    let th = &r.theory;
    let (span, p0, p1) = span_tensor_proj(&r.span, &s.span);
    let vlabels = span
        .apex
        .vertices
        .iter()
        .map(|v| {
            (
                v.clone(),
                th.tensor(&r.vlabels[&p0.vmap[v]], &s.vlabels[&p1.vmap[v]]),
            )
        })
        .collect();
    let mut elabels = BTreeMap::new();
    for e in span.apex.edges.keys() {
        let c = cell_tensor(th, &r.elabels[&p0.emap[e]], &s.elabels[&p1.emap[e]])?;
        elabels.insert(e.clone(), c);
    }
    Ok(SituatedSystem {
        theory: th.clone(),
        span,
        vlabels,
        elabels,
        src_boundary: r.src_boundary.tensor(&s.src_boundary),
        tgt_boundary: r.tgt_boundary.tensor(&s.tgt_boundary),
    })
}

/// Equivalence up to coherent isomorphism: a span isomorphism `α` plus a
/// natural family `ι` of label isomorphisms (Remark 1). For each candidate
/// `α`, per-vertex witnesses are drawn from the theory's `iso_candidates`
/// and every naturality square is checked by cell equality; `unknown`
/// comparisons reject the candidate.
pub fn s_equiv<T: Theory>(
    r: &SituatedSystem<T>,
    s: &SituatedSystem<T>,
    limits: &Limits,
) -> Result<Option<SituatedEquivalence<T>>, SituatedError> {
    if r.src_boundary != s.src_boundary || r.tgt_boundary != s.tgt_boundary {
        return Err(SituatedError::BoundaryMismatch(
            "equivalence requires equal situated boundaries".into(),
        ));
    }
    let th = &r.theory;
    let mut found = None;
    span_isos_visit(&r.span, &s.span, limits, &mut |alpha| {
        let vertices: Vec<&String> = r.span.apex.vertices.iter().collect();
        let mut iota: BTreeMap<String, T::Mor> = BTreeMap::new();
        if assign_iota(th, r, s, &alpha, &vertices, 0, &mut iota, limits) {
            found = Some(SituatedEquivalence { alpha, iota });
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

fn assign_iota<T: Theory>(
    th: &T,
    r: &SituatedSystem<T>,
    s: &SituatedSystem<T>,
    alpha: &GraphHom,
    vertices: &[&String],
    next: usize,
    iota: &mut BTreeMap<String, T::Mor>,
    limits: &Limits,
) -> bool {
    if next == vertices.len() {
        return true;
    }
    let v = vertices[next];
    let target = &alpha.vmap[v];
    for cand in th.iso_candidates(&r.vlabels[v], &s.vlabels[target]) {
        iota.insert(v.clone(), cand);
        if naturality_holds(th, r, s, alpha, iota, limits)
            && assign_iota(th, r, s, alpha, vertices, next + 1, iota, limits)
        {
            return true;
        }
        iota.remove(v);
    }
    false
}

/// Check every naturality square whose corners are already assigned:
/// `φ_R(t) ; ⌜ι_B⌝  =  ⌜ι_A⌝ ; φ_S(α t)` for `t : A → B`.
fn naturality_holds<T: Theory>(
    th: &T,
    r: &SituatedSystem<T>,
    s: &SituatedSystem<T>,
    alpha: &GraphHom,
    iota: &BTreeMap<String, T::Mor>,
    limits: &Limits,
) -> bool {
    for (e, (src, tgt)) in &r.span.apex.edges {
        let (Some(i_src), Some(i_tgt)) = (iota.get(src), iota.get(tgt)) else {
            continue;
        };
        let lhs = Cell::VComp(
            Box::new(r.elabels[e].clone()),
            Box::new(Cell::Mor(i_tgt.clone())),
        );
        let rhs = Cell::VComp(
            Box::new(Cell::Mor(i_src.clone())),
            Box::new(s.elabels[&alpha.emap[e]].clone()),
        );
        if !th.cell_equal(&lhs, &rhs, limits).is_true() {
            return false;
        }
    }
    true
}

/// Material history of a path: the vertical composite of its cells. An
/// empty path needs an explicit vertex and yields the vertical identity.
pub fn run<T: Theory>(
    sys: &SituatedSystem<T>,
    path: &[String],
    start: Option<&str>,
) -> Result<Cell<T>, SituatedError> {
    if path.is_empty() {
        let v = start.ok_or_else(|| {
            SituatedError::Path("an empty path needs a start vertex".into())
        })?;
        let label = sys
            .vlabels
            .get(v)
            .ok_or_else(|| SituatedError::Path(format!("unknown vertex `{v}`")))?;
        return Ok(Cell::VId(label.clone()));
    }
    let mut cells = Vec::new();
    let mut at: Option<&String> = None;
    if let Some(v) = start {
        at = Some(
            sys.span
                .apex
                .vertices
                .get(v)
                .ok_or_else(|| SituatedError::Path(format!("unknown vertex `{v}`")))?,
        );
    }
    for e in path {
        let Some((src, tgt)) = sys.span.apex.edges.get(e) else {
            return Err(SituatedError::Path(format!("unknown edge `{e}`")));
        };
        if let Some(prev) = at {
            if prev != src {
                return Err(SituatedError::Path(format!(
                    "path breaks at `{e}`: expected source `{prev}`, found `{src}`"
                )));
            }
        }
        at = Some(tgt);
        cells.push(sys.elabels[e].clone());
    }
    Ok(crate::cornering::vcomp_all(&sys.theory, cells)?)
}

/// Compare the composite history of a synchronized path against the
/// horizontal composite of the component histories.
pub fn compositionality_check<T: Theory>(
    r: &SituatedSystem<T>,
    s: &SituatedSystem<T>,
    pairs: &[(String, String)],
    limits: &Limits,
) -> Result<Verdict, SituatedError> {
    if pairs.is_empty() {
        return Err(SituatedError::Path("empty synchronized path".into()));
    }
    let composite = s_compose(r, s)?;
    let path: Vec<String> = pairs.iter().map(|(a, b)| pair_name(a, b)).collect();
    let lhs = run(&composite, &path, None)?;
    let left: Vec<String> = pairs.iter().map(|(a, _)| a.clone()).collect();
    let right: Vec<String> = pairs.iter().map(|(_, b)| b.clone()).collect();
    let rhs = crate::cornering::hcomp(
        &r.theory,
        run(r, &left, None)?,
        run(s, &right, None)?,
    )?;
    Ok(r.theory.cell_equal(&lhs, &rhs, limits))
}

/// Duality unit system on an interface `b`: the span `1 ← U → U×U` where
/// each transition emits its exchange's duality witness, so the right
/// interface is `b† ⊗ b`.
pub fn s_cc_unit<T: Theory>(
    th: &T,
    b: &SituatedBoundary<T>,
) -> Result<SituatedSystem<T>, SituatedError> {
    let dual = s_dual(th, b)?;
    let span = cc_unit(&b.graph);
    let vlabels = b
        .graph
        .vertices
        .iter()
        .map(|v| (v.clone(), th.unit()))
        .collect();
    let mut elabels = BTreeMap::new();
    for e in b.graph.edges.keys() {
        let (_, unit_cell, _) = h_dual_witness(th, &b.label(e))?;
        elabels.insert(e.clone(), unit_cell);
    }
    Ok(SituatedSystem {
        theory: th.clone(),
        span,
        vlabels,
        elabels,
        src_boundary: SituatedBoundary::unit(),
        tgt_boundary: dual.tensor(b),
    })
}

/// Duality counit system: the span `U×U ← U → 1`, with left interface
/// `b ⊗ b†`.
pub fn s_cc_counit<T: Theory>(
    th: &T,
    b: &SituatedBoundary<T>,
) -> Result<SituatedSystem<T>, SituatedError> {
    let dual = s_dual(th, b)?;
    let span = cc_counit(&b.graph);
    let vlabels = b
        .graph
        .vertices
        .iter()
        .map(|v| (v.clone(), th.unit()))
        .collect();
    let mut elabels = BTreeMap::new();
    for e in b.graph.edges.keys() {
        let (_, _, counit_cell) = h_dual_witness(th, &b.label(e))?;
        elabels.insert(e.clone(), counit_cell);
    }
    Ok(SituatedSystem {
        theory: th.clone(),
        span,
        vlabels,
        elabels,
        src_boundary: b.tensor(&dual),
        tgt_boundary: SituatedBoundary::unit(),
    })
}

/// The graph isomorphism `g ≅ g × 1` induced by flat pair naming.
pub fn pad_right_iso(g: &RGraph) -> GraphHom {
    GraphHom {
        vmap: g
            .vertices
            .iter()
            .map(|v| (v.clone(), pair_name(v, "pt")))
            .collect(),
        emap: g
            .edges
            .keys()
            .map(|e| (e.clone(), pair_name(e, "eps:pt")))
            .collect(),
    }
}

/// The graph isomorphism `g ≅ 1 × g`.
pub fn pad_left_iso(g: &RGraph) -> GraphHom {
    GraphHom {
        vmap: g
            .vertices
            .iter()
            .map(|v| (v.clone(), pair_name("pt", v)))
            .collect(),
        emap: g
            .edges
            .keys()
            .map(|e| (e.clone(), pair_name("eps:pt", e)))
            .collect(),
    }
}

/// The snake `(1_b ⊗ η) ; (ε ⊗ 1_b) ~ 1_b`, checked up to equivalence
/// after the structural unitor rewirings.
pub fn snake_left_holds<T: Theory>(
    th: &T,
    b: &SituatedBoundary<T>,
    limits: &Limits,
) -> Result<bool, SituatedError> {
    let id = s_identity(th, b);
    let t1 = s_tensor(&id, &s_cc_unit(th, b)?)?;
    let t2 = s_tensor(&s_cc_counit(th, b)?, &id)?;
    let snake = s_compose(&t1, &t2)?;
    let lam_inv = s_wiring(th, b, &b.tensor(&SituatedBoundary::unit()), &pad_right_iso(&b.graph))?;
    let rho = s_wiring(
        th,
        &SituatedBoundary::unit().tensor(b),
        b,
        &pad_left_iso(&b.graph).inverse(),
    )?;
    let full = s_compose(&s_compose(&lam_inv, &snake)?, &rho)?;
    Ok(s_equiv(&full, &id, limits)?.is_some())
}

/// The other snake, `(η ⊗ 1_{b†}) ; (1_{b†} ⊗ ε) ~ 1_{b†}`.
pub fn snake_right_holds<T: Theory>(
    th: &T,
    b: &SituatedBoundary<T>,
    limits: &Limits,
) -> Result<bool, SituatedError> {
    let d = s_dual(th, b)?;
    let id_d = s_identity(th, &d);
    let t1 = s_tensor(&s_cc_unit(th, b)?, &id_d)?;
    let t2 = s_tensor(&id_d, &s_cc_counit(th, b)?)?;
    let snake = s_compose(&t1, &t2)?;
    let lam_inv = s_wiring(th, &d, &SituatedBoundary::unit().tensor(&d), &pad_left_iso(&d.graph))?;
    let rho = s_wiring(
        th,
        &d.tensor(&SituatedBoundary::unit()),
        &d,
        &pad_right_iso(&d.graph).inverse(),
    )?;
    let full = s_compose(&s_compose(&lam_inv, &snake)?, &rho)?;
    Ok(s_equiv(&full, &id_d, limits)?.is_some())
}

/// An invertible rewiring between two interfaces related by a
/// label-preserving graph isomorphism; used for the structural unitors.
pub fn s_wiring<T: Theory>(
    th: &T,
    from: &SituatedBoundary<T>,
    to: &SituatedBoundary<T>,
    iso: &GraphHom,
) -> Result<SituatedSystem<T>, SituatedError> {
    iso.validate(&from.graph, &to.graph)?;
    if !iso.is_bijection(&from.graph, &to.graph) {
        return Err(SituatedError::Invalid("rewiring must be a bijection".into()));
    }
    for e in from.graph.edges.keys() {
        if from.label(e) != to.label(&iso.emap[e]) {
            return Err(SituatedError::Invalid(format!(
                "rewiring does not preserve the label of `{e}`"
            )));
        }
    }
    let span = Span {
        left_boundary: from.graph.clone(),
        apex: from.graph.clone(),
        right_boundary: to.graph.clone(),
        leg0: GraphHom::identity(&from.graph),
        leg1: iso.clone(),
    };
    let vlabels = from
        .graph
        .vertices
        .iter()
        .map(|v| (v.clone(), th.unit()))
        .collect();
    let elabels = from
        .graph
        .edges
        .keys()
        .map(|e| {
            let x = from.label(e);
            let cell = if x.is_empty() {
                Cell::VId(th.unit())
            } else {
                Cell::HId(x)
            };
            (e.clone(), cell)
        })
        .collect();
    Ok(SituatedSystem {
        theory: th.clone(),
        span,
        vlabels,
        elabels,
        src_boundary: from.clone(),
        tgt_boundary: to.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cornering::{z_cell, Polarity};
    use crate::theory::ZTheory;

    /// A two-state Z system: a held balance that can receive 5 from the
    /// left or pass 5 to the right.
    fn small_account() -> SituatedSystem<ZTheory> {
        let apex = RGraph::new(
            ["lo", "hi"],
            [("recv", "lo", "hi"), ("send", "hi", "lo")],
        )
        .unwrap();
        let iface = RGraph::new(["u"], [("x5", "u", "u")]).unwrap();
        let left = SituatedBoundary {
            graph: iface.clone(),
            labels: [
                ("x5".to_string(), Exchange::single(5, Polarity::Out)),
                ("eps:u".to_string(), Exchange::empty()),
            ]
            .into(),
        };
        let right = left.clone();
        let leg0 = GraphHom {
            vmap: [("lo".into(), "u".into()), ("hi".into(), "u".into())].into(),
            emap: [
                ("recv".into(), "x5".into()),
                ("send".into(), "eps:u".into()),
                ("eps:lo".into(), "eps:u".into()),
                ("eps:hi".into(), "eps:u".into()),
            ]
            .into(),
        };
        let leg1 = GraphHom {
            vmap: leg0.vmap.clone(),
            emap: [
                ("recv".into(), "eps:u".into()),
                ("send".into(), "x5".into()),
                ("eps:lo".into(), "eps:u".into()),
                ("eps:hi".into(), "eps:u".into()),
            ]
            .into(),
        };
        let span = Span {
            left_boundary: iface.clone(),
            apex,
            right_boundary: iface,
            leg0,
            leg1,
        };
        let vlabels = [("lo".to_string(), 0i64), ("hi".to_string(), 5i64)].into();
        let elabels = [
            (
                "recv".to_string(),
                z_cell(0, &[(5, Polarity::Out)], &[]),
            ),
            (
                "send".to_string(),
                z_cell(5, &[], &[(5, Polarity::Out)]),
            ),
            ("eps:lo".to_string(), Cell::VId(0)),
            ("eps:hi".to_string(), Cell::VId(5)),
        ]
        .into();
        SituatedSystem {
            theory: ZTheory,
            span,
            vlabels,
            elabels,
            src_boundary: left,
            tgt_boundary: right,
        }
    }

    #[test]
    fn small_account_is_coherent() {
        let sys = small_account();
        assert_eq!(validate_situated(&sys, &Limits::default()), Vec::new());
    }

    #[test]
    fn broken_label_is_reported() {
        let mut sys = small_account();
        sys.elabels.insert("recv".into(), Cell::VId(0));
        let violations = validate_situated(&sys, &Limits::default());
        assert!(violations.iter().any(|v| v.path == "elabels/recv"));
    }

    #[test]
    fn identity_system_validates_and_absorbs() {
        let sys = small_account();
        let limits = Limits::default();
        let id = s_identity(&ZTheory, &sys.tgt_boundary);
        assert_eq!(validate_situated(&id, &limits), Vec::new());
        let c = s_compose(&sys, &id).unwrap();
        assert_eq!(validate_situated(&c, &limits), Vec::new());
        assert!(s_equiv(&c, &sys, &limits).unwrap().is_some());
    }

    #[test]
    fn composed_accounts_synchronize_transfers() {
        let sys = small_account();
        let limits = Limits::default();
        let c = s_compose(&sys, &sys).unwrap();
        assert_eq!(validate_situated(&c, &limits), Vec::new());
        // hi.send synchronizes with lo.recv: the 5 crosses the seam.
        let e = pair_name("send", "recv");
        assert!(c.elabels.contains_key(&e));
        let f = crate::cornering::eval_flow(&ZTheory, &c.elabels[&e]).unwrap();
        assert_eq!(f.top, 5);
        assert_eq!(f.bottom, 5);
        assert!(f.left.is_empty() && f.right.is_empty());
        // send without a matching recv is not a composite transition.
        assert!(!c.elabels.contains_key(&pair_name("send", "send")));
    }

    #[test]
    fn run_folds_histories() {
        let sys = small_account();
        let hist = run(
            &sys,
            &["recv".to_string(), "send".to_string(), "recv".to_string()],
            Some("lo"),
        )
        .unwrap();
        let f = crate::cornering::eval_flow(&ZTheory, &hist).unwrap();
        assert_eq!(f.top, 0);
        assert_eq!(f.bottom, 5);
        assert_eq!(f.left, vec![(5, Polarity::Out), (5, Polarity::Out)]);
        assert_eq!(f.right, vec![(5, Polarity::Out)]);
        // Broken path reported.
        let err = run(&sys, &["recv".into(), "recv".into()], None);
        assert!(matches!(err, Err(SituatedError::Path(_))));
        // Empty path is the vertical identity at the start vertex.
        let idh = run(&sys, &[], Some("hi")).unwrap();
        assert_eq!(idh, Cell::VId(5));
    }

    #[test]
    fn compositionality_on_transfer_path() {
        let sys = small_account();
        let limits = Limits::default();
        let pairs = vec![
            ("recv".to_string(), "eps:lo".to_string()),
            ("send".to_string(), "recv".to_string()),
            ("eps:lo".to_string(), "send".to_string()),
        ];
        assert_eq!(
            compositionality_check(&sys, &sys, &pairs, &limits).unwrap(),
            Verdict::True
        );
    }

    #[test]
    fn snake_equations_for_z_interfaces() {
        let th = ZTheory;
        let limits = Limits::default();
        let b = small_account().src_boundary;
        let unit_sys = s_cc_unit(&th, &b).unwrap();
        let counit_sys = s_cc_counit(&th, &b).unwrap();
        assert_eq!(validate_situated(&unit_sys, &limits), Vec::new());
        assert_eq!(validate_situated(&counit_sys, &limits), Vec::new());
        assert!(snake_left_holds(&th, &b, &limits).unwrap());
        assert!(snake_right_holds(&th, &b, &limits).unwrap());
    }
}
