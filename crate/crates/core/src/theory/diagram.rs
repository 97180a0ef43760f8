use super::word::ObjWord;
use std::collections::{BTreeMap, BTreeSet};

/// A box in a diagram: one occurrence of a morphism generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiagBox {
    pub gen: String,
    pub dom: ObjWord,
    pub cod: ObjWord,
}

/// Where a wire starts: a diagram input position or an output port of a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortSource {
    Input(usize),
    BoxOut { bx: usize, port: usize },
}

/// Where a wire ends: a diagram output position or an input port of a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortSink {
    Output(usize),
    BoxIn { bx: usize, port: usize },
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("composition boundary mismatch: cod {0} != dom {1}")]
    ComposeMismatch(ObjWord, ObjWord),
    #[error("port {0} is not wired exactly once")]
    BadWiring(String),
    #[error("wire carries mismatched types: {0}")]
    TypeMismatch(String),
    #[error("wiring contains a directed cycle through boxes")]
    Cyclic,
    #[error("permutation does not fit word of length {0}")]
    BadPermutation(usize),
}

/// A morphism of a free symmetric strict monoidal category, represented as an
/// anchored acyclic port graph.
///
/// Boxes are generator occurrences; every source port (diagram input or box
/// output) is connected by exactly one wire to a sink port (diagram output or
/// box input). Symmetries are implicit in the wiring, so the symmetric
/// monoidal axioms hold definitionally and equality reduces to
/// boundary-preserving isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub dom: ObjWord,
    pub cod: ObjWord,
    pub boxes: Vec<DiagBox>,
    /// Sorted by source for canonical form.
    pub wires: Vec<(PortSource, PortSink)>,
}

impl Diagram {
    /// The identity diagram on `w`: straight wires, no boxes.
    pub fn identity(w: &ObjWord) -> Diagram {
        let wires = (0..w.len())
            .map(|i| (PortSource::Input(i), PortSink::Output(i)))
            .collect();
        Diagram {
            dom: w.clone(),
            cod: w.clone(),
            boxes: Vec::new(),
            wires,
        }
    }

    /// A single generator box with straight boundary wires.
    pub fn generator(name: impl Into<String>, dom: ObjWord, cod: ObjWord) -> Diagram {
        let name = name.into();
        let mut wires = Vec::new();
        for i in 0..dom.len() {
            wires.push((PortSource::Input(i), PortSink::BoxIn { bx: 0, port: i }));
        }
        for i in 0..cod.len() {
            wires.push((PortSource::BoxOut { bx: 0, port: i }, PortSink::Output(i)));
        }
        Diagram {
            dom: dom.clone(),
            cod: cod.clone(),
            boxes: vec![DiagBox {
                gen: name,
                dom,
                cod,
            }],
            wires,
        }
    }

    /// The symmetry `a ⊗ b → b ⊗ a`.
    pub fn symmetry(a: &ObjWord, b: &ObjWord) -> Diagram {
        let mut perm = Vec::with_capacity(a.len() + b.len());
        for i in 0..a.len() {
            perm.push(b.len() + i);
        }
        for j in 0..b.len() {
            perm.push(j);
        }
        Diagram::permutation(&a.tensor(b), &perm).expect("symmetry permutation is valid")
    }

    /// Wire-only diagram sending input position `i` to output position
    /// `perm[i]`. The codomain word is induced by the permutation.
    pub fn permutation(dom: &ObjWord, perm: &[usize]) -> Result<Diagram, DiagramError> {
        if perm.len() != dom.len() {
            return Err(DiagramError::BadPermutation(dom.len()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(DiagramError::BadPermutation(dom.len()));
            }
            seen[p] = true;
        }
        let mut cod_letters = vec![String::new(); dom.len()];
        for (i, &p) in perm.iter().enumerate() {
            cod_letters[p] = dom.letters()[i].clone();
        }
        let wires = perm
            .iter()
            .enumerate()
            .map(|(i, &p)| (PortSource::Input(i), PortSink::Output(p)))
            .collect();
        Ok(Diagram {
            dom: dom.clone(),
            cod: ObjWord(cod_letters),
            boxes: Vec::new(),
            wires,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.boxes.is_empty()
            && self.dom == self.cod
            && self
                .wires
                .iter()
                .all(|w| matches!(w, (PortSource::Input(i), PortSink::Output(j)) if i == j))
    }

    fn canonicalize(&mut self) {
        self.wires.sort();
    }

    /// Sequential composition `self ; other` (self first).
    pub fn compose(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        if self.cod != other.dom {
            return Err(DiagramError::ComposeMismatch(
                self.cod.clone(),
                other.dom.clone(),
            ));
        }
        let shift = self.boxes.len();
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());

        // For each interface position, the wire of `self` ending there and the
        // wire of `other` starting there get spliced together.
        let mut into_interface: BTreeMap<usize, PortSource> = BTreeMap::new();
        let mut wires = Vec::new();
        for (src, snk) in &self.wires {
            match snk {
                PortSink::Output(j) => {
                    into_interface.insert(*j, *src);
                }
                PortSink::BoxIn { .. } => wires.push((*src, *snk)),
            }
        }
        let shift_src = |src: &PortSource| match src {
            PortSource::Input(_) => None,
            PortSource::BoxOut { bx, port } => Some(PortSource::BoxOut {
                bx: bx + shift,
                port: *port,
            }),
        };
        let shift_snk = |snk: &PortSink| match snk {
            PortSink::Output(j) => PortSink::Output(*j),
            PortSink::BoxIn { bx, port } => PortSink::BoxIn {
                bx: bx + shift,
                port: *port,
            },
        };
        for (src, snk) in &other.wires {
            let new_snk = shift_snk(snk);
            match src {
                PortSource::Input(i) => {
                    let upstream = into_interface
                        .get(i)
                        .ok_or_else(|| DiagramError::BadWiring(format!("interface {i}")))?;
                    wires.push((*upstream, new_snk));
                }
                _ => wires.push((shift_src(src).unwrap(), new_snk)),
            }
        }
        let mut d = Diagram {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            boxes,
            wires,
        };
        d.canonicalize();
        d.check_acyclic()?;
        Ok(d)
    }

    /// Parallel composition: disjoint union with `self`'s ports first.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let shift = self.boxes.len();
        let in_shift = self.dom.len();
        let out_shift = self.cod.len();
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        let mut wires = self.wires.clone();
        for (src, snk) in &other.wires {
            let src = match src {
                PortSource::Input(i) => PortSource::Input(i + in_shift),
                PortSource::BoxOut { bx, port } => PortSource::BoxOut {
                    bx: bx + shift,
                    port: *port,
                },
            };
            let snk = match snk {
                PortSink::Output(j) => PortSink::Output(j + out_shift),
                PortSink::BoxIn { bx, port } => PortSink::BoxIn {
                    bx: bx + shift,
                    port: *port,
                },
            };
            wires.push((src, snk));
        }
        let mut d = Diagram {
            dom: self.dom.tensor(&other.dom),
            cod: self.cod.tensor(&other.cod),
            boxes,
            wires,
        };
        d.canonicalize();
        d
    }

    fn port_type<'a>(&'a self, src: &PortSource) -> Option<&'a str> {
        match src {
            PortSource::Input(i) => self.dom.letters().get(*i).map(|s| s.as_str()),
            PortSource::BoxOut { bx, port } => self
                .boxes
                .get(*bx)
                .and_then(|b| b.cod.letters().get(*port))
                .map(|s| s.as_str()),
        }
    }

    fn sink_type<'a>(&'a self, snk: &PortSink) -> Option<&'a str> {
        match snk {
            PortSink::Output(j) => self.cod.letters().get(*j).map(|s| s.as_str()),
            PortSink::BoxIn { bx, port } => self
                .boxes
                .get(*bx)
                .and_then(|b| b.dom.letters().get(*port))
                .map(|s| s.as_str()),
        }
    }

    fn check_acyclic(&self) -> Result<(), DiagramError> {
        // Kahn's algorithm over the box dependency graph.
        let n = self.boxes.len();
        let mut deps: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut indeg = vec![0usize; n];
        for (src, snk) in &self.wires {
            if let (PortSource::BoxOut { bx: a, .. }, PortSink::BoxIn { bx: b, .. }) = (src, snk) {
                if deps[*a].insert(*b) {
                    indeg[*b] += 1;
                }
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop() {
            seen += 1;
            for &j in &deps[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        if seen == n {
            Ok(())
        } else {
            Err(DiagramError::Cyclic)
        }
    }

    /// Full well-formedness check: every port wired exactly once, wire types
    /// match, wiring acyclic.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let mut sources: BTreeSet<PortSource> = BTreeSet::new();
        let mut sinks: BTreeSet<PortSink> = BTreeSet::new();
        for (src, snk) in &self.wires {
            if !sources.insert(*src) {
                return Err(DiagramError::BadWiring(format!("{src:?} wired twice")));
            }
            if !sinks.insert(*snk) {
                return Err(DiagramError::BadWiring(format!("{snk:?} wired twice")));
            }
            let st = self
                .port_type(src)
                .ok_or_else(|| DiagramError::BadWiring(format!("{src:?} out of range")))?;
            let tt = self
                .sink_type(snk)
                .ok_or_else(|| DiagramError::BadWiring(format!("{snk:?} out of range")))?;
            if st != tt {
                return Err(DiagramError::TypeMismatch(format!(
                    "{src:?} : {st} -> {snk:?} : {tt}"
                )));
            }
        }
        for i in 0..self.dom.len() {
            if !sources.contains(&PortSource::Input(i)) {
                return Err(DiagramError::BadWiring(format!("input {i} unwired")));
            }
        }
        for j in 0..self.cod.len() {
            if !sinks.contains(&PortSink::Output(j)) {
                return Err(DiagramError::BadWiring(format!("output {j} unwired")));
            }
        }
        for (bx, b) in self.boxes.iter().enumerate() {
            for port in 0..b.cod.len() {
                if !sources.contains(&PortSource::BoxOut { bx, port }) {
                    return Err(DiagramError::BadWiring(format!("box {bx} out {port} unwired")));
                }
            }
            for port in 0..b.dom.len() {
                if !sinks.contains(&PortSink::BoxIn { bx, port }) {
                    return Err(DiagramError::BadWiring(format!("box {bx} in {port} unwired")));
                }
            }
        }
        self.check_acyclic()
    }

    /// Multiset of generator names used by boxes.
    pub fn box_census(&self) -> BTreeMap<&str, usize> {
        let mut census = BTreeMap::new();
        for b in &self.boxes {
            *census.entry(b.gen.as_str()).or_insert(0) += 1;
        }
        census
    }

    /// Boundary-preserving isomorphism test for the equation-free case:
    /// backtracking over box bijections with generator pruning. Complete.
    pub fn iso_equal(&self, other: &Diagram) -> bool {
        if self.dom != other.dom || self.cod != other.cod {
            return false;
        }
        if self.boxes.len() != other.boxes.len() || self.box_census() != other.box_census() {
            return false;
        }
        if self.wires.len() != other.wires.len() {
            return false;
        }
        let wire_set: BTreeSet<(PortSource, PortSink)> = other.wires.iter().cloned().collect();
        let mut mapping: Vec<Option<usize>> = vec![None; self.boxes.len()];
        let mut used = vec![false; other.boxes.len()];
        self.iso_search(other, &wire_set, &mut mapping, &mut used, 0)
    }

    fn iso_search(
        &self,
        other: &Diagram,
        other_wires: &BTreeSet<(PortSource, PortSink)>,
        mapping: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        if next == self.boxes.len() {
            return self.wires.iter().all(|(src, snk)| {
                let src = match src {
                    PortSource::Input(i) => PortSource::Input(*i),
                    PortSource::BoxOut { bx, port } => PortSource::BoxOut {
                        bx: mapping[*bx].unwrap(),
                        port: *port,
                    },
                };
                let snk = match snk {
                    PortSink::Output(j) => PortSink::Output(*j),
                    PortSink::BoxIn { bx, port } => PortSink::BoxIn {
                        bx: mapping[*bx].unwrap(),
                        port: *port,
                    },
                };
                other_wires.contains(&(src, snk))
            });
        }
        for cand in 0..other.boxes.len() {
            if used[cand] || other.boxes[cand].gen != self.boxes[next].gen {
                continue;
            }
            mapping[next] = Some(cand);
            used[cand] = true;
            // Early check: wires fully determined so far must already match.
            let partial_ok = self.wires.iter().all(|(src, snk)| {
                let src = match src {
                    PortSource::Input(i) => PortSource::Input(*i),
                    PortSource::BoxOut { bx, port } => match mapping[*bx] {
                        Some(m) => PortSource::BoxOut { bx: m, port: *port },
                        None => return true,
                    },
                };
                let snk = match snk {
                    PortSink::Output(j) => PortSink::Output(*j),
                    PortSink::BoxIn { bx, port } => match mapping[*bx] {
                        Some(m) => PortSink::BoxIn { bx: m, port: *port },
                        None => return true,
                    },
                };
                other_wires.contains(&(src, snk))
            });
            if partial_ok && self.iso_search(other, other_wires, mapping, used, next + 1) {
                return true;
            }
            mapping[next] = None;
            used[cand] = false;
        }
        false
    }
}
