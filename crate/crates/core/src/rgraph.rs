//! Reflexive graphs (transition systems), their homomorphisms, products and
//! pullbacks, spans composed by pullback, and the compact closed structure of
//! the span category.
//!
//! Product vertices and edges are named as flat tuples `(a,b,...)`; pairing
//! flattens nested tuples so that the product is strictly associative on
//! names. All collections are ordered, so every construction and search is
//! deterministic.

use crate::limits::Limits;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, thiserror::Error)]
pub enum RGraphError {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("apex size {0} exceeds the configured cap {1}")]
    SizeCap(usize, usize),
}

/// A finite reflexive graph: each vertex has a distinguished trivial
/// (do-nothing) edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RGraph {
    pub vertices: BTreeSet<String>,
    /// edge id → (src, tgt)
    pub edges: BTreeMap<String, (String, String)>,
    /// vertex → its trivial edge id
    pub trivial: BTreeMap<String, String>,
}

impl RGraph {
    /// Build a graph from vertices and nontrivial edges; trivial edges are
    /// generated as `eps:<vertex>`.
    pub fn new<V, E, S1, S2, S3, S4>(vertices: V, edges: E) -> Result<RGraph, RGraphError>
    where
        V: IntoIterator<Item = S1>,
        E: IntoIterator<Item = (S2, S3, S4)>,
        S1: Into<String>,
        S2: Into<String>,
        S3: Into<String>,
        S4: Into<String>,
    {
        let vertices: BTreeSet<String> = vertices.into_iter().map(Into::into).collect();
        let mut edge_map = BTreeMap::new();
        let mut trivial = BTreeMap::new();
        for v in &vertices {
            let id = format!("eps:{v}");
            edge_map.insert(id.clone(), (v.clone(), v.clone()));
            trivial.insert(v.clone(), id);
        }
        for (id, src, tgt) in edges {
            let (id, src, tgt) = (id.into(), src.into(), tgt.into());
            if edge_map.insert(id.clone(), (src, tgt)).is_some() {
                return Err(RGraphError::Invalid(format!("duplicate edge id `{id}`")));
            }
        }
        let g = RGraph {
            vertices,
            edges: edge_map,
            trivial,
        };
        g.validate()?;
        Ok(g)
    }

    /// The one-vertex graph with only its trivial edge: the tensor unit.
    pub fn unit() -> RGraph {
        RGraph::new(["pt"], std::iter::empty::<(String, String, String)>()).unwrap()
    }

    pub fn validate(&self) -> Result<(), RGraphError> {
        for (id, (src, tgt)) in &self.edges {
            if !self.vertices.contains(src) || !self.vertices.contains(tgt) {
                return Err(RGraphError::Invalid(format!(
                    "edge `{id}` has endpoint outside the vertex set"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            let Some(e) = self.trivial.get(v) else {
                return Err(RGraphError::Invalid(format!(
                    "vertex `{v}` has no trivial edge"
                )));
            };
            match self.edges.get(e) {
                Some((s, t)) if s == v && t == v => {}
                _ => {
                    return Err(RGraphError::Invalid(format!(
                        "trivial edge `{e}` of `{v}` is not a loop at `{v}`"
                    )))
                }
            }
            if !seen.insert(e.clone()) {
                return Err(RGraphError::Invalid(format!(
                    "trivial edge `{e}` shared by two vertices"
                )));
            }
        }
        for v in self.trivial.keys() {
            if !self.vertices.contains(v) {
                return Err(RGraphError::Invalid(format!(
                    "trivial entry for unknown vertex `{v}`"
                )));
            }
        }
        Ok(())
    }

    pub fn is_trivial(&self, edge: &str) -> bool {
        self.trivial.values().any(|e| e == edge)
    }

    /// Nontrivial edge ids in order.
    pub fn nontrivial_edges(&self) -> impl Iterator<Item = &String> {
        self.edges.keys().filter(|e| !self.is_trivial(e))
    }

    pub fn src(&self, edge: &str) -> Option<&String> {
        self.edges.get(edge).map(|(s, _)| s)
    }

    pub fn tgt(&self, edge: &str) -> Option<&String> {
        self.edges.get(edge).map(|(_, t)| t)
    }
}

/// Split a flat tuple name into components; non-tuple names are singletons.
fn components(name: &str) -> Vec<String> {
    let Some(inner) = name.strip_prefix('(').and_then(|r| r.strip_suffix(')')) else {
        return vec![name.to_string()];
    };
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out
}

/// Flat tuple pairing: `pair("(a,b)", "c") = "(a,b,c)"`.
pub fn pair_name(a: &str, b: &str) -> String {
    let mut parts = components(a);
    parts.extend(components(b));
    format!("({})", parts.join(","))
}

/// A reflexive graph homomorphism, stored as plain tables; validity is
/// relative to a domain and codomain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphHom {
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
}

impl GraphHom {
    pub fn identity(g: &RGraph) -> GraphHom {
        GraphHom {
            vmap: g.vertices.iter().map(|v| (v.clone(), v.clone())).collect(),
            emap: g.edges.keys().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    /// The unique map to the one-vertex graph.
    pub fn bang(g: &RGraph) -> GraphHom {
        GraphHom {
            vmap: g
                .vertices
                .iter()
                .map(|v| (v.clone(), "pt".to_string()))
                .collect(),
            emap: g
                .edges
                .keys()
                .map(|e| (e.clone(), "eps:pt".to_string()))
                .collect(),
        }
    }

    /// The diagonal into the self-product.
    pub fn diagonal(g: &RGraph) -> GraphHom {
        GraphHom {
            vmap: g
                .vertices
                .iter()
                .map(|v| (v.clone(), pair_name(v, v)))
                .collect(),
            emap: g
                .edges
                .keys()
                .map(|e| (e.clone(), pair_name(e, e)))
                .collect(),
        }
    }

    pub fn validate(&self, dom: &RGraph, cod: &RGraph) -> Result<(), RGraphError> {
        for v in &dom.vertices {
            let Some(w) = self.vmap.get(v) else {
                return Err(RGraphError::InvalidHom(format!("vertex `{v}` unmapped")));
            };
            if !cod.vertices.contains(w) {
                return Err(RGraphError::InvalidHom(format!(
                    "vertex `{v}` maps outside the codomain"
                )));
            }
        }
        for (e, (s, t)) in &dom.edges {
            let Some(f) = self.emap.get(e) else {
                return Err(RGraphError::InvalidHom(format!("edge `{e}` unmapped")));
            };
            let Some((fs, ft)) = cod.edges.get(f) else {
                return Err(RGraphError::InvalidHom(format!(
                    "edge `{e}` maps to unknown edge `{f}`"
                )));
            };
            if fs != &self.vmap[s] || ft != &self.vmap[t] {
                return Err(RGraphError::InvalidHom(format!(
                    "edge `{e}` does not commute with src/tgt"
                )));
            }
        }
        for (v, e) in &dom.trivial {
            if self.emap.get(e) != cod.trivial.get(&self.vmap[v]) {
                return Err(RGraphError::InvalidHom(format!(
                    "trivial edge of `{v}` not preserved"
                )));
            }
        }
        Ok(())
    }

    /// `self ; other` (apply `self` first).
    pub fn then(&self, other: &GraphHom) -> GraphHom {
        GraphHom {
            vmap: self
                .vmap
                .iter()
                .map(|(k, v)| (k.clone(), other.vmap[v].clone()))
                .collect(),
            emap: self
                .emap
                .iter()
                .map(|(k, v)| (k.clone(), other.emap[v].clone()))
                .collect(),
        }
    }

    pub fn is_bijection(&self, dom: &RGraph, cod: &RGraph) -> bool {
        let vimg: BTreeSet<&String> = self.vmap.values().collect();
        let eimg: BTreeSet<&String> = self.emap.values().collect();
        vimg.len() == dom.vertices.len()
            && vimg.len() == cod.vertices.len()
            && eimg.len() == dom.edges.len()
            && eimg.len() == cod.edges.len()
    }

    pub fn inverse(&self) -> GraphHom {
        GraphHom {
            vmap: self.vmap.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
            emap: self.emap.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        }
    }
}

/// Product graph with its two projections.
pub fn product(g: &RGraph, h: &RGraph) -> (RGraph, GraphHom, GraphHom) {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeMap::new();
    let mut trivial = BTreeMap::new();
    let mut proj0 = GraphHom {
        vmap: BTreeMap::new(),
        emap: BTreeMap::new(),
    };
    let mut proj1 = proj0.clone();
    for u in &g.vertices {
        for v in &h.vertices {
            let name = pair_name(u, v);
            proj0.vmap.insert(name.clone(), u.clone());
            proj1.vmap.insert(name.clone(), v.clone());
            vertices.insert(name);
        }
    }
    for (e, (es, et)) in &g.edges {
        for (f, (fs, ft)) in &h.edges {
            let name = pair_name(e, f);
            edges.insert(name.clone(), (pair_name(es, fs), pair_name(et, ft)));
            proj0.emap.insert(name.clone(), e.clone());
            proj1.emap.insert(name, f.clone());
        }
    }
    for (u, eu) in &g.trivial {
        for (v, ev) in &h.trivial {
            trivial.insert(pair_name(u, v), pair_name(eu, ev));
        }
    }
    (
        RGraph {
            vertices,
            edges,
            trivial,
        },
        proj0,
        proj1,
    )
}

/// Pullback of `f : R → V ← S : g`, with projections to `R` and `S`.
pub fn pullback(
    r: &RGraph,
    f: &GraphHom,
    s: &RGraph,
    g: &GraphHom,
) -> (RGraph, GraphHom, GraphHom) {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeMap::new();
    let mut trivial = BTreeMap::new();
    let mut proj0 = GraphHom {
        vmap: BTreeMap::new(),
        emap: BTreeMap::new(),
    };
    let mut proj1 = proj0.clone();
    for u in &r.vertices {
        for v in &s.vertices {
            if f.vmap[u] != g.vmap[v] {
                continue;
            }
            let name = pair_name(u, v);
            proj0.vmap.insert(name.clone(), u.clone());
            proj1.vmap.insert(name.clone(), v.clone());
            vertices.insert(name);
        }
    }
    for (e, (es, et)) in &r.edges {
        for (h, (hs, ht)) in &s.edges {
            if f.emap[e] != g.emap[h] {
                continue;
            }
            let name = pair_name(e, h);
            edges.insert(name.clone(), (pair_name(es, hs), pair_name(et, ht)));
            proj0.emap.insert(name.clone(), e.clone());
            proj1.emap.insert(name, h.clone());
        }
    }
    for (u, eu) in &r.trivial {
        for (v, ev) in &s.trivial {
            if f.vmap[u] == g.vmap[v] {
                trivial.insert(pair_name(u, v), pair_name(eu, ev));
            }
        }
    }
    (
        RGraph {
            vertices,
            edges,
            trivial,
        },
        proj0,
        proj1,
    )
}

/// An open transition system: an apex graph with two boundary interfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub left_boundary: RGraph,
    pub apex: RGraph,
    pub right_boundary: RGraph,
    pub leg0: GraphHom,
    pub leg1: GraphHom,
}

impl Span {
    pub fn validate(&self) -> Result<(), RGraphError> {
        self.left_boundary.validate()?;
        self.apex.validate()?;
        self.right_boundary.validate()?;
        self.leg0.validate(&self.apex, &self.left_boundary)?;
        self.leg1.validate(&self.apex, &self.right_boundary)
    }

    pub fn identity(g: &RGraph) -> Span {
        Span {
            left_boundary: g.clone(),
            apex: g.clone(),
            right_boundary: g.clone(),
            leg0: GraphHom::identity(g),
            leg1: GraphHom::identity(g),
        }
    }
}

/// Composition by pullback: synchronizes the shared-boundary events.
pub fn span_compose(r: &Span, s: &Span) -> Result<Span, RGraphError> {
    span_compose_proj(r, s).map(|(span, _, _)| span)
}

/// Composition, also returning the apex projections onto the factors.
pub fn span_compose_proj(
    r: &Span,
    s: &Span,
) -> Result<(Span, GraphHom, GraphHom), RGraphError> {
    if r.right_boundary != s.left_boundary {
        return Err(RGraphError::BoundaryMismatch(
            "right boundary of the first span differs from left boundary of the second".into(),
        ));
    }
    let (apex, p0, p1) = pullback(&r.apex, &r.leg1, &s.apex, &s.leg0);
    let span = Span {
        left_boundary: r.left_boundary.clone(),
        apex,
        right_boundary: s.right_boundary.clone(),
        leg0: p0.then(&r.leg0),
        leg1: p1.then(&s.leg1),
    };
    Ok((span, p0, p1))
}

/// Tensor: componentwise product of boundaries, apex, and legs.
pub fn span_tensor(r: &Span, s: &Span) -> Span {
    span_tensor_proj(r, s).0
}

/// Tensor, also returning the apex projections onto the factors.
pub fn span_tensor_proj(r: &Span, s: &Span) -> (Span, GraphHom, GraphHom) {
    let (left, _, _) = product(&r.left_boundary, &s.left_boundary);
    let (apex, a0, a1) = product(&r.apex, &s.apex);
    let (right, _, _) = product(&r.right_boundary, &s.right_boundary);
    let pair_hom = |f: &GraphHom, g: &GraphHom| GraphHom {
        vmap: a0
            .vmap
            .iter()
            .map(|(v, rv)| (v.clone(), pair_name(&f.vmap[rv], &g.vmap[&a1.vmap[v]])))
            .collect(),
        emap: a0
            .emap
            .iter()
            .map(|(e, re)| (e.clone(), pair_name(&f.emap[re], &g.emap[&a1.emap[e]])))
            .collect(),
    };
    let span = Span {
        leg0: pair_hom(&r.leg0, &s.leg0),
        leg1: pair_hom(&r.leg1, &s.leg1),
        left_boundary: left,
        apex,
        right_boundary: right,
    };
    (span, a0, a1)
}

/// Visit apex isomorphisms between two spans with equal boundaries, in
/// lexicographic order of the vertex assignment, until the visitor returns
/// `true`. Returns whether the visitor stopped the enumeration.
pub fn span_isos_visit(
    r: &Span,
    s: &Span,
    limits: &Limits,
    visitor: &mut dyn FnMut(GraphHom) -> bool,
) -> Result<bool, RGraphError> {
    if r.left_boundary != s.left_boundary || r.right_boundary != s.right_boundary {
        return Err(RGraphError::BoundaryMismatch(
            "span isomorphism requires equal boundary graphs".into(),
        ));
    }
    let n = r.apex.vertices.len().max(s.apex.vertices.len());
    if n > limits.iso_size_cap {
        return Err(RGraphError::SizeCap(n, limits.iso_size_cap));
    }
    if r.apex.vertices.len() != s.apex.vertices.len()
        || r.apex.edges.len() != s.apex.edges.len()
    {
        return Ok(false);
    }
    let rv: Vec<&String> = r.apex.vertices.iter().collect();
    let sv: Vec<&String> = s.apex.vertices.iter().collect();
    let r_pairs = pair_classes(r);
    let s_pairs = pair_classes(s);
    let r_sigs = vertex_signatures(r);
    let s_sigs = vertex_signatures(s);
    let mut assign: Vec<Option<usize>> = vec![None; rv.len()];
    let mut used = vec![false; sv.len()];
    struct Ctx<'a> {
        r: &'a Span,
        s: &'a Span,
        rv: &'a [&'a String],
        sv: &'a [&'a String],
        r_pairs: &'a PairClasses,
        s_pairs: &'a PairClasses,
        r_sigs: &'a BTreeMap<String, VertexSig>,
        s_sigs: &'a BTreeMap<String, VertexSig>,
        visitor: &'a mut dyn FnMut(GraphHom) -> bool,
    }
    // Returns true when the enumeration should stop.
    fn rec(
        ctx: &mut Ctx<'_>,
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        i: usize,
    ) -> bool {
        if i == ctx.rv.len() {
            if let Some(iso) = edge_extension(ctx.r, ctx.s, ctx.rv, ctx.sv, assign) {
                return (ctx.visitor)(iso);
            }
            return false;
        }
        for j in 0..ctx.sv.len() {
            if used[j] {
                continue;
            }
            // Legs must commute on vertices.
            if ctx.r.leg0.vmap[ctx.rv[i]] != ctx.s.leg0.vmap[ctx.sv[j]]
                || ctx.r.leg1.vmap[ctx.rv[i]] != ctx.s.leg1.vmap[ctx.sv[j]]
            {
                continue;
            }
            // Incident-edge structure must agree.
            if ctx.r_sigs[ctx.rv[i]] != ctx.s_sigs[ctx.sv[j]] {
                continue;
            }
            // Edges to and from already-assigned vertices must correspond
            // class by class.
            let consistent = (0..i).all(|k| {
                let sk = ctx.sv[assign[k].unwrap()];
                ctx.r_pairs.get(&(ctx.rv[i].clone(), ctx.rv[k].clone()))
                    == ctx.s_pairs.get(&(ctx.sv[j].clone(), sk.clone()))
                    && ctx.r_pairs.get(&(ctx.rv[k].clone(), ctx.rv[i].clone()))
                        == ctx.s_pairs.get(&(sk.clone(), ctx.sv[j].clone()))
            });
            if !consistent {
                continue;
            }
            assign[i] = Some(j);
            used[j] = true;
            let stop = rec(ctx, assign, used, i + 1);
            assign[i] = None;
            used[j] = false;
            if stop {
                return true;
            }
        }
        false
    }
    let mut ctx = Ctx {
        r,
        s,
        rv: &rv,
        sv: &sv,
        r_pairs: &r_pairs,
        s_pairs: &s_pairs,
        r_sigs: &r_sigs,
        s_sigs: &s_sigs,
        visitor,
    };
    Ok(rec(&mut ctx, &mut assign, &mut used, 0))
}

/// All apex isomorphisms between two spans with equal boundaries, in
/// lexicographic order of the vertex assignment. Prefer `span_isos_visit`
/// when only some isomorphisms are needed; symmetric apexes can have very
/// many.
pub fn enumerate_span_isos(
    r: &Span,
    s: &Span,
    limits: &Limits,
) -> Result<Vec<GraphHom>, RGraphError> {
    let mut out = Vec::new();
    span_isos_visit(r, s, limits, &mut |iso| {
        out.push(iso);
        false
    })?;
    Ok(out)
}

/// Class of an edge as far as a span isomorphism is concerned: its leg
/// images and whether it is trivial.
type EdgeClass = (String, String, bool);
/// Directed vertex pair → multiset of classes of the edges between them.
type PairClasses = BTreeMap<(String, String), BTreeMap<EdgeClass, usize>>;
/// Sorted incidence profile of a vertex: (direction, edge class) counts,
/// where direction is 0 = outgoing, 1 = incoming, 2 = self-loop.
type VertexSig = BTreeMap<(u8, EdgeClass), usize>;

fn edge_class(span: &Span, e: &str) -> EdgeClass {
    (
        span.leg0.emap[e].clone(),
        span.leg1.emap[e].clone(),
        span.apex.is_trivial(e),
    )
}

fn pair_classes(span: &Span) -> PairClasses {
    let mut out = PairClasses::new();
    for (e, (src, tgt)) in &span.apex.edges {
        *out.entry((src.clone(), tgt.clone()))
            .or_default()
            .entry(edge_class(span, e))
            .or_insert(0) += 1;
    }
    out
}

fn vertex_signatures(span: &Span) -> BTreeMap<String, VertexSig> {
    let mut out: BTreeMap<String, VertexSig> = span
        .apex
        .vertices
        .iter()
        .map(|v| (v.clone(), VertexSig::new()))
        .collect();
    for (e, (src, tgt)) in &span.apex.edges {
        let class = edge_class(span, e);
        if src == tgt {
            *out.get_mut(src).unwrap().entry((2, class)).or_insert(0) += 1;
        } else {
            *out.get_mut(src).unwrap().entry((0, class.clone())).or_insert(0) += 1;
            *out.get_mut(tgt).unwrap().entry((1, class)).or_insert(0) += 1;
        }
    }
    out
}

/// Extend a vertex bijection to edges: edges are grouped by
/// (src, tgt, leg images, triviality); classes must correspond exactly, and
/// edges within a class are paired in id order.
fn edge_extension(
    r: &Span,
    s: &Span,
    rv: &[&String],
    sv: &[&String],
    assign: &[Option<usize>],
) -> Option<GraphHom> {
    let vmap: BTreeMap<String, String> = rv
        .iter()
        .enumerate()
        .map(|(i, v)| ((*v).clone(), sv[assign[i].unwrap()].clone()))
        .collect();
    type Key = (String, String, String, String, bool);
    let classify = |span: &Span, mapped_src: &dyn Fn(&str) -> String| {
        let mut classes: BTreeMap<Key, Vec<String>> = BTreeMap::new();
        for (e, (src, tgt)) in &span.apex.edges {
            let key = (
                mapped_src(src),
                mapped_src(tgt),
                span.leg0.emap[e].clone(),
                span.leg1.emap[e].clone(),
                span.apex.is_trivial(e),
            );
            classes.entry(key).or_default().push(e.clone());
        }
        classes
    };
    let map_v = |v: &str| vmap[v].clone();
    let idv = |v: &str| v.to_string();
    let rc = classify(r, &map_v);
    let sc = classify(s, &idv);
    if rc.len() != sc.len() {
        return None;
    }
    let mut emap = BTreeMap::new();
    for (key, res) in &rc {
        let ses = sc.get(key)?;
        if res.len() != ses.len() {
            return None;
        }
        for (a, b) in res.iter().zip(ses) {
            emap.insert(a.clone(), b.clone());
        }
    }
    Some(GraphHom { vmap, emap })
}

/// The lexicographically least span isomorphism, if any.
pub fn span_iso(r: &Span, s: &Span, limits: &Limits) -> Result<Option<GraphHom>, RGraphError> {
    // Enumeration order is lexicographic in the vertex assignment, so the
    // first witness is the least.
    let mut found = None;
    span_isos_visit(r, s, limits, &mut |iso| {
        found = Some(iso);
        true
    })?;
    Ok(found)
}

/// Duality unit on `X`: the span `1 ← X → X×X` with legs `!` and `Δ`.
pub fn cc_unit(x: &RGraph) -> Span {
    let (xx, _, _) = product(x, x);
    Span {
        left_boundary: RGraph::unit(),
        right_boundary: xx,
        leg0: GraphHom::bang(x),
        leg1: GraphHom::diagonal(x),
        apex: x.clone(),
    }
}

/// Duality counit on `X`: the span `X×X ← X → 1`.
pub fn cc_counit(x: &RGraph) -> Span {
    let (xx, _, _) = product(x, x);
    Span {
        left_boundary: xx,
        right_boundary: RGraph::unit(),
        leg0: GraphHom::diagonal(x),
        leg1: GraphHom::bang(x),
        apex: x.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The gear interface: one vertex, two rotations.
    fn gear_m() -> RGraph {
        RGraph::new(["m"], [("cw", "m", "m"), ("ccw", "m", "m")]).unwrap()
    }

    /// The gear span: meshed gears rotate in opposite directions.
    fn gear() -> Span {
        let m = gear_m();
        let leg0 = GraphHom::identity(&m);
        let leg1 = GraphHom {
            vmap: [("m".into(), "m".into())].into(),
            emap: [
                ("cw".into(), "ccw".into()),
                ("ccw".into(), "cw".into()),
                ("eps:m".into(), "eps:m".into()),
            ]
            .into(),
        };
        let s = Span {
            left_boundary: m.clone(),
            apex: m.clone(),
            right_boundary: m,
            leg0,
            leg1,
        };
        s.validate().unwrap();
        s
    }

    #[test]
    fn flat_tuple_names() {
        assert_eq!(pair_name("a", "b"), "(a,b)");
        assert_eq!(pair_name("(a,b)", "c"), "(a,b,c)");
        assert_eq!(pair_name("a", "(b,c)"), "(a,b,c)");
        assert_eq!(components("(eps:u,eps:v)"), vec!["eps:u", "eps:v"]);
    }

    #[test]
    fn product_counts() {
        let m = gear_m();
        let (p, p0, p1) = product(&m, &m);
        assert_eq!(p.vertices.len(), 1);
        assert_eq!(p.edges.len(), 9);
        p.validate().unwrap();
        p0.validate(&p, &m).unwrap();
        p1.validate(&p, &m).unwrap();
    }

    #[test]
    fn product_with_unit() {
        let m = gear_m();
        let (p, p0, _) = product(&m, &RGraph::unit());
        assert_eq!(p.vertices.len(), m.vertices.len());
        assert_eq!(p.edges.len(), m.edges.len());
        // Projection is an isomorphism.
        assert!(p0.is_bijection(&p, &m));
    }

    #[test]
    fn pullback_along_identities_is_product() {
        let m = gear_m();
        let one = RGraph::unit();
        let bang = GraphHom::bang(&m);
        let (pb, _, _) = pullback(&m, &bang, &m, &bang);
        let (pr, _, _) = product(&m, &m);
        assert_eq!(pb, pr);
        let _ = one;
    }

    #[test]
    fn gear_composed_with_gear_is_identity() {
        let g = gear();
        let c = span_compose(&g, &g).unwrap();
        c.validate().unwrap();
        assert_eq!(c.apex.vertices.len(), 1);
        assert_eq!(c.apex.nontrivial_edges().count(), 2);
        // Both gears rotating the same way is not a synchronized transition.
        let nontrivial: Vec<&String> = c.apex.nontrivial_edges().collect();
        assert_eq!(nontrivial, vec!["(ccw,cw)", "(cw,ccw)"]);
        let id = Span::identity(&gear_m());
        let iso = span_iso(&c, &id, &Limits::default()).unwrap();
        assert!(iso.is_some());
        let iso = iso.unwrap();
        iso.validate(&c.apex, &id.apex).unwrap();
        assert!(iso.is_bijection(&c.apex, &id.apex));
    }

    #[test]
    fn identity_span_is_unit_up_to_iso() {
        let g = gear();
        let id = Span::identity(&gear_m());
        let c = span_compose(&g, &id).unwrap();
        assert!(span_iso(&c, &g, &Limits::default()).unwrap().is_some());
        let c = span_compose(&id, &g).unwrap();
        assert!(span_iso(&c, &g, &Limits::default()).unwrap().is_some());
    }

    #[test]
    fn span_iso_is_reflexive_and_respects_counts() {
        let g = gear();
        let iso = span_iso(&g, &g, &Limits::default()).unwrap().unwrap();
        assert_eq!(iso, GraphHom::identity(&g.apex));
        // Different apex sizes → none.
        let m = gear_m();
        let apex2 = RGraph::new(["a", "b"], std::iter::empty::<(String, String, String)>())
            .unwrap();
        let to_m = GraphHom {
            vmap: [("a".into(), "m".into()), ("b".into(), "m".into())].into(),
            emap: [
                ("eps:a".into(), "eps:m".into()),
                ("eps:b".into(), "eps:m".into()),
            ]
            .into(),
        };
        let fat = Span {
            left_boundary: m.clone(),
            apex: apex2,
            right_boundary: m.clone(),
            leg0: to_m.clone(),
            leg1: to_m,
        };
        fat.validate().unwrap();
        assert!(span_iso(&fat, &Span::identity(&m), &Limits::default())
            .unwrap()
            .is_none());
        // Legs distinguish the meshed-gear tensor from the identity tensor.
        let id = Span::identity(&gear_m());
        assert!(
            span_iso(&span_tensor(&g, &g), &span_tensor(&id, &id), &Limits::default())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn tensor_counts() {
        let g = gear();
        let t = span_tensor(&g, &g);
        t.validate().unwrap();
        assert_eq!(t.apex.vertices.len(), 1);
        assert_eq!(t.apex.edges.len(), 9);
    }

    #[test]
    fn snake_for_gears() {
        // (1_M ⊗ η) ; (ε ⊗ 1_M) ≅ 1_M, using strict associativity of the
        // flat-tuple product.
        let m = gear_m();
        let limits = Limits::default();
        let id_m = Span::identity(&m);
        let t1 = span_tensor(&id_m, &cc_unit(&m));
        let t2 = span_tensor(&cc_counit(&m), &id_m);
        assert_eq!(t1.right_boundary, t2.left_boundary);
        let snake = span_compose(&t1, &t2).unwrap();
        snake.validate().unwrap();
        // The snake runs M⊗1 → 1⊗M; pre- and post-compose with the unitor
        // spans to land back on M → M and compare with the identity span.
        let (m1, p, _) = product(&m, &RGraph::unit());
        let lam_inv = Span {
            left_boundary: m.clone(),
            apex: m1.clone(),
            right_boundary: m1.clone(),
            leg0: p,
            leg1: GraphHom::identity(&m1),
        };
        lam_inv.validate().unwrap();
        let (one_m, _, q) = product(&RGraph::unit(), &m);
        let rho = Span {
            left_boundary: one_m.clone(),
            apex: one_m.clone(),
            right_boundary: m.clone(),
            leg0: GraphHom::identity(&one_m),
            leg1: q,
        };
        rho.validate().unwrap();
        let full = span_compose(&span_compose(&lam_inv, &snake).unwrap(), &rho).unwrap();
        full.validate().unwrap();
        assert!(span_iso(&full, &Span::identity(&m), &limits)
            .unwrap()
            .is_some());
    }
}
