//! JSON file formats: theory signatures, reflexive graphs, spans, and
//! situated-system bundles, plus the bundled example files.

use crate::cornering::Exchange;
use crate::fixtures;
use crate::limits::Limits;
use crate::rgraph::{GraphHom, RGraph, RGraphError, Span};
use crate::situated::{s_discrete, validate_situated, SituatedBoundary, SituatedSystem};
use crate::syntax;
use crate::theory::{
    FreeTheory, ObjWord, Theory, TheoryError, TheorySignature, ZTheory,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum FilesError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("json error in {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Theory(#[from] TheoryError),
    #[error("{0}")]
    Graph(#[from] RGraphError),
    #[error("invalid file: {0}")]
    Invalid(String),
}

// ---------------------------------------------------------------------------
// Schemas
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MorphismFile {
    pub name: String,
    pub dom: Vec<String>,
    pub cod: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EquationFile {
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SignatureFile {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<EquationFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duals: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeFile {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// A reflexive graph with its trivial edges left implicit.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomFile {
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpanFile {
    pub left: GraphFile,
    pub apex: GraphFile,
    pub right: GraphFile,
    pub leg0: HomFile,
    pub leg1: HomFile,
}

/// An interface: graph plus exchange labels on the nontrivial edges.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundaryFile {
    pub graph: GraphFile,
    pub labels: BTreeMap<String, String>,
}

/// A situated system. `theory` is `"Z"` or the path of a signature file,
/// resolved relative to the system file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SystemFile {
    pub theory: String,
    pub src_boundary: BoundaryFile,
    pub tgt_boundary: BoundaryFile,
    pub span: SpanFile,
    pub vlabels: BTreeMap<String, String>,
    pub elabels: BTreeMap<String, String>,
}

/// A loaded system over either built-in theory kind.
#[derive(Debug, Clone)]
pub enum AnySystem {
    Z(SituatedSystem<ZTheory>),
    Free(SituatedSystem<FreeTheory>),
}

impl AnySystem {
    pub fn span(&self) -> &Span {
        match self {
            AnySystem::Z(s) => &s.span,
            AnySystem::Free(s) => &s.span,
        }
    }

    pub fn validate(&self, limits: &Limits) -> Vec<crate::situated::Violation> {
        match self {
            AnySystem::Z(s) => validate_situated(s, limits),
            AnySystem::Free(s) => validate_situated(s, limits),
        }
    }
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

pub fn signature_from_file(file: &SignatureFile) -> Result<TheorySignature, FilesError> {
    let mut sig = TheorySignature::new(&file.name).with_objects(file.objects.clone());
    for m in &file.morphisms {
        sig = sig.with_morphism(
            &m.name,
            ObjWord::from_letters(m.dom.iter()),
            ObjWord::from_letters(m.cod.iter()),
        );
    }
    sig.duals = file.duals.as_ref().map(|d| {
        d.iter()
            .map(|(k, v)| (k.clone(), ObjWord::from_letters(v.iter())))
            .collect()
    });
    let violations = sig.validate();
    if !violations.is_empty() {
        return Err(FilesError::Invalid(
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    // Equations are parsed against the equation-free theory.
    let th = FreeTheory::new(sig.clone());
    for eq in &file.equations {
        let lhs = syntax::parse_diagram(&th, &eq.lhs)?;
        let rhs = syntax::parse_diagram(&th, &eq.rhs)?;
        if lhs.dom != rhs.dom || lhs.cod != rhs.cod {
            return Err(FilesError::Invalid(format!(
                "equation sides have different boundaries: `{}` vs `{}`",
                eq.lhs, eq.rhs
            )));
        }
        sig.equations.push((lhs, rhs));
    }
    Ok(sig)
}

pub fn graph_to_file(g: &RGraph) -> GraphFile {
    GraphFile {
        vertices: g.vertices.iter().cloned().collect(),
        edges: g
            .nontrivial_edges()
            .map(|e| EdgeFile {
                id: e.clone(),
                src: g.src(e).unwrap().clone(),
                tgt: g.tgt(e).unwrap().clone(),
            })
            .collect(),
    }
}

pub fn graph_from_file(file: &GraphFile) -> Result<RGraph, FilesError> {
    Ok(RGraph::new(
        file.vertices.clone(),
        file.edges
            .iter()
            .map(|e| (e.id.clone(), e.src.clone(), e.tgt.clone()))
            .collect::<Vec<_>>(),
    )?)
}

/// Homs are serialized without their trivial-edge entries: loading a graph
/// renames trivial edges canonically, and a hom always sends the trivial
/// edge of `v` to the trivial edge of `v`'s image, so those entries are
/// reconstructed on load.
pub fn hom_to_file(h: &GraphHom, dom: &RGraph) -> HomFile {
    HomFile {
        vmap: h.vmap.clone(),
        emap: h
            .emap
            .iter()
            .filter(|(e, _)| !dom.is_trivial(e))
            .map(|(e, f)| (e.clone(), f.clone()))
            .collect(),
    }
}

pub fn hom_from_file(file: &HomFile, dom: &RGraph, cod: &RGraph) -> GraphHom {
    let mut emap = file.emap.clone();
    for (v, te) in &dom.trivial {
        if let Some(image) = file.vmap.get(v) {
            if let Some(tf) = cod.trivial.get(image) {
                emap.insert(te.clone(), tf.clone());
            }
        }
    }
    GraphHom {
        vmap: file.vmap.clone(),
        emap,
    }
}

pub fn span_to_file(s: &Span) -> SpanFile {
    SpanFile {
        left: graph_to_file(&s.left_boundary),
        apex: graph_to_file(&s.apex),
        right: graph_to_file(&s.right_boundary),
        leg0: hom_to_file(&s.leg0, &s.apex),
        leg1: hom_to_file(&s.leg1, &s.apex),
    }
}

pub fn span_from_file(file: &SpanFile) -> Result<Span, FilesError> {
    let left_boundary = graph_from_file(&file.left)?;
    let apex = graph_from_file(&file.apex)?;
    let right_boundary = graph_from_file(&file.right)?;
    let leg0 = hom_from_file(&file.leg0, &apex, &left_boundary);
    let leg1 = hom_from_file(&file.leg1, &apex, &right_boundary);
    let span = Span {
        left_boundary,
        apex,
        right_boundary,
        leg0,
        leg1,
    };
    span.validate()?;
    Ok(span)
}

pub fn boundary_to_file<T: Theory>(th: &T, b: &SituatedBoundary<T>) -> BoundaryFile {
    BoundaryFile {
        graph: graph_to_file(&b.graph),
        labels: b
            .graph
            .nontrivial_edges()
            .map(|e| (e.clone(), syntax::print_exchange(th, &b.label(e))))
            .collect(),
    }
}

pub fn boundary_from_file<T: Theory>(
    th: &T,
    file: &BoundaryFile,
) -> Result<SituatedBoundary<T>, FilesError> {
    let graph = graph_from_file(&file.graph)?;
    let mut labels: BTreeMap<String, Exchange<T>> = BTreeMap::new();
    for e in graph.edges.keys() {
        let x = match file.labels.get(e) {
            Some(text) => syntax::parse_exchange(th, text)?,
            None => Exchange::empty(),
        };
        labels.insert(e.clone(), x);
    }
    for e in file.labels.keys() {
        if !graph.edges.contains_key(e) {
            return Err(FilesError::Invalid(format!("label for unknown edge `{e}`")));
        }
    }
    Ok(SituatedBoundary { graph, labels })
}

pub fn system_to_file<T: Theory>(theory_ref: &str, sys: &SituatedSystem<T>) -> SystemFile {
    let th = &sys.theory;
    SystemFile {
        theory: theory_ref.to_string(),
        src_boundary: boundary_to_file(th, &sys.src_boundary),
        tgt_boundary: boundary_to_file(th, &sys.tgt_boundary),
        span: span_to_file(&sys.span),
        vlabels: sys
            .vlabels
            .iter()
            .map(|(v, o)| (v.clone(), th.print_obj(o)))
            .collect(),
        elabels: sys
            .span
            .apex
            .nontrivial_edges()
            .map(|e| (e.clone(), syntax::print_cell(th, &sys.elabels[e])))
            .collect(),
    }
}

/// Assemble a system from a parsed file; trivial edges get vertical
/// identity cells. The result is not yet validated.
pub fn system_from_file<T: Theory>(
    th: &T,
    file: &SystemFile,
) -> Result<SituatedSystem<T>, FilesError> {
    let span = span_from_file(&file.span)?;
    let mut vlabels = BTreeMap::new();
    for v in &span.apex.vertices {
        let text = file
            .vlabels
            .get(v)
            .ok_or_else(|| FilesError::Invalid(format!("vertex `{v}` has no label")))?;
        vlabels.insert(v.clone(), th.parse_obj(text)?);
    }
    let mut elabels = BTreeMap::new();
    for e in span.apex.edges.keys() {
        match file.elabels.get(e) {
            Some(text) => {
                elabels.insert(e.clone(), syntax::parse_cell(th, text)?);
            }
            None => {
                let Some((v, _)) = span.apex.trivial.iter().find(|(_, tr)| *tr == e) else {
                    return Err(FilesError::Invalid(format!("edge `{e}` has no cell")));
                };
                elabels.insert(e.clone(), crate::cornering::Cell::VId(vlabels[v].clone()));
            }
        }
    }
    Ok(SituatedSystem {
        theory: th.clone(),
        span,
        vlabels,
        elabels,
        src_boundary: boundary_from_file(th, &file.src_boundary)?,
        tgt_boundary: boundary_from_file(th, &file.tgt_boundary)?,
    })
}

// ---------------------------------------------------------------------------
// Loading from disk
// ---------------------------------------------------------------------------

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FilesError> {
    let text = std::fs::read_to_string(path).map_err(|source| FilesError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FilesError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_signature(path: &Path) -> Result<TheorySignature, FilesError> {
    signature_from_file(&read_json(path)?)
}

/// Load a system file, resolving its theory reference (`"Z"` or a
/// signature-file path relative to the system file).
pub fn load_system(path: &Path) -> Result<AnySystem, FilesError> {
    let file: SystemFile = read_json(path)?;
    load_system_file(&file, path.parent().unwrap_or(Path::new(".")))
}

pub fn load_system_file(file: &SystemFile, base: &Path) -> Result<AnySystem, FilesError> {
    if file.theory == "Z" {
        Ok(AnySystem::Z(system_from_file(&ZTheory, file)?))
    } else {
        let sig = load_signature(&base.join(&file.theory))?;
        Ok(AnySystem::Free(system_from_file(&FreeTheory::new(sig), file)?))
    }
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FilesError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| FilesError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| FilesError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Bundled examples
// ---------------------------------------------------------------------------

/// The bundled example files, as (file name, JSON value) pairs. The Gear is
/// shipped as a trivially-situated system so every command applies to it.
pub fn example_files(capacity: usize) -> Vec<(String, serde_json::Value)> {
    let to_value = |v: &SystemFile| serde_json::to_value(v).expect("serializable");
    let gear = s_discrete(&ZTheory, &fixtures::gear());
    vec![
        (
            "bread_theory.json".to_string(),
            serde_json::to_value(signature_file_of(&fixtures::bread_signature()))
                .expect("serializable"),
        ),
        (
            "gear.json".to_string(),
            to_value(&system_to_file("Z", &gear)),
        ),
        (
            "baker.json".to_string(),
            to_value(&system_to_file(
                "bread_theory.json",
                &fixtures::situated_baker(capacity),
            )),
        ),
        (
            "eater.json".to_string(),
            to_value(&system_to_file(
                "bread_theory.json",
                &fixtures::situated_eater(capacity),
            )),
        ),
        (
            "account.json".to_string(),
            to_value(&system_to_file("Z", &fixtures::account())),
        ),
    ]
}

pub fn signature_file_of(sig: &TheorySignature) -> SignatureFile {
    SignatureFile {
        name: sig.name.clone(),
        objects: sig.object_generators.iter().cloned().collect(),
        morphisms: sig
            .morphism_generators
            .values()
            .map(|m| MorphismFile {
                name: m.name.clone(),
                dom: m.dom.letters().to_vec(),
                cod: m.cod.letters().to_vec(),
            })
            .collect(),
        equations: sig
            .equations
            .iter()
            .map(|(l, r)| EquationFile {
                lhs: syntax::print_diagram(l),
                rhs: syntax::print_diagram(r),
            })
            .collect(),
        duals: sig.duals.as_ref().map(|d| {
            d.iter()
                .map(|(k, v)| (k.clone(), v.letters().to_vec()))
                .collect()
        }),
    }
}

/// Write the bundled examples into a directory.
pub fn write_examples(dir: &Path, capacity: usize) -> Result<Vec<PathBuf>, FilesError> {
    std::fs::create_dir_all(dir).map_err(|source| FilesError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (name, value) in example_files(capacity) {
        let path = dir.join(name);
        save_json(&path, &value)?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_roundtrip() {
        let sig = fixtures::bread_signature();
        let file = signature_file_of(&sig);
        let back = signature_from_file(&file).unwrap();
        assert_eq!(back, sig);
        // With an equation.
        let sig2 = fixtures::bread_sift_theory().signature().clone();
        let back2 = signature_from_file(&signature_file_of(&sig2)).unwrap();
        assert_eq!(back2.equations.len(), 1);
        assert!(back2.equations[0].0.iso_equal(&sig2.equations[0].0));
    }

    #[test]
    fn graph_and_span_roundtrip() {
        let g = fixtures::gear_m();
        assert_eq!(graph_from_file(&graph_to_file(&g)).unwrap(), g);
        let s = fixtures::gear();
        let back = span_from_file(&span_to_file(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn system_roundtrip_free() {
        let sys = fixtures::situated_baker(2);
        let file = system_to_file("bread_theory.json", &sys);
        let back = system_from_file(&sys.theory, &file).unwrap();
        assert_eq!(back.span, sys.span);
        assert_eq!(back.vlabels, sys.vlabels);
        assert_eq!(back.elabels, sys.elabels);
        assert_eq!(back.src_boundary, sys.src_boundary);
        // And through serde.
        let text = serde_json::to_string(&file).unwrap();
        let file2: SystemFile = serde_json::from_str(&text).unwrap();
        assert_eq!(file2, file);
    }

    #[test]
    fn system_roundtrip_z() {
        let sys = fixtures::account();
        let file = system_to_file("Z", &sys);
        let back = system_from_file(&ZTheory, &file).unwrap();
        assert_eq!(back.elabels, sys.elabels);
        assert_eq!(back.vlabels, sys.vlabels);
    }

    #[test]
    fn examples_validate_from_disk() {
        let dir = std::env::temp_dir().join(format!("situ-examples-{}", std::process::id()));
        let paths = write_examples(&dir, 2).unwrap();
        let limits = Limits::default();
        for path in &paths {
            if path.file_name().unwrap() == "bread_theory.json" {
                assert!(load_signature(path).is_ok());
                continue;
            }
            let sys = load_system(path).unwrap();
            assert_eq!(sys.validate(&limits), Vec::new(), "{}", path.display());
        }
        std::fs::remove_dir_all(&dir).ok();
    }
}
