use super::diagram::Diagram;
use super::word::ObjWord;
use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// A generating morphism of a presented theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismGen {
    pub name: String,
    pub dom: ObjWord,
    pub cod: ObjWord,
}

/// Presentation of a free symmetric strict monoidal category: object
/// generators, morphism generators, optional equations between diagrams, and
/// an optional duals table making the theory compact closed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TheorySignature {
    pub name: String,
    pub object_generators: BTreeSet<String>,
    pub morphism_generators: BTreeMap<String, MorphismGen>,
    pub equations: Vec<(Diagram, Diagram)>,
    /// Present iff the theory is declared compact closed; must then be total
    /// on object generators.
    pub duals: Option<BTreeMap<String, ObjWord>>,
}

/// One invariant failure, with a path to the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureViolation {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SignatureViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl TheorySignature {
    pub fn new(name: impl Into<String>) -> Self {
        TheorySignature {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn with_objects<I: IntoIterator<Item = S>, S: Into<String>>(mut self, objs: I) -> Self {
        for o in objs {
            self.object_generators.insert(o.into());
        }
        self
    }

    pub fn with_morphism(mut self, name: impl Into<String>, dom: ObjWord, cod: ObjWord) -> Self {
        let name = name.into();
        self.morphism_generators.insert(
            name.clone(),
            MorphismGen {
                name,
                dom,
                cod,
            },
        );
        self
    }

    pub fn morphism(&self, name: &str) -> Option<&MorphismGen> {
        self.morphism_generators.get(name)
    }

    pub fn has_object(&self, name: &str) -> bool {
        self.object_generators.contains(name)
    }

    fn check_word(&self, word: &ObjWord, path: &str, out: &mut Vec<SignatureViolation>) {
        for letter in word.letters() {
            if !self.has_object(letter) {
                out.push(SignatureViolation {
                    path: path.to_string(),
                    message: format!("unknown object generator `{letter}`"),
                });
            }
        }
    }

    /// All invariant violations; empty iff the signature is well-formed.
    pub fn validate(&self) -> Vec<SignatureViolation> {
        let mut out = Vec::new();
        // Generator names must not collide across the two namespaces either.
        for name in &self.object_generators {
            if self.morphism_generators.contains_key(name) {
                out.push(SignatureViolation {
                    path: format!("objects/{name}"),
                    message: "name also used by a morphism generator".into(),
                });
            }
        }
        for (name, gen) in &self.morphism_generators {
            if name != &gen.name {
                out.push(SignatureViolation {
                    path: format!("morphisms/{name}"),
                    message: "record name differs from table key".into(),
                });
            }
            self.check_word(&gen.dom, &format!("morphisms/{name}/dom"), &mut out);
            self.check_word(&gen.cod, &format!("morphisms/{name}/cod"), &mut out);
        }
        for (i, (lhs, rhs)) in self.equations.iter().enumerate() {
            if lhs.dom != rhs.dom || lhs.cod != rhs.cod {
                out.push(SignatureViolation {
                    path: format!("equations/{i}"),
                    message: format!(
                        "sides have different boundaries: {} -> {} vs {} -> {}",
                        lhs.dom, lhs.cod, rhs.dom, rhs.cod
                    ),
                });
            }
            for (side, d) in [("lhs", lhs), ("rhs", rhs)] {
                if let Err(e) = d.validate() {
                    out.push(SignatureViolation {
                        path: format!("equations/{i}/{side}"),
                        message: e.to_string(),
                    });
                }
                for b in &d.boxes {
                    match self.morphism(&b.gen) {
                        None => out.push(SignatureViolation {
                            path: format!("equations/{i}/{side}"),
                            message: format!("unknown morphism generator `{}`", b.gen),
                        }),
                        Some(g) => {
                            if g.dom != b.dom || g.cod != b.cod {
                                out.push(SignatureViolation {
                                    path: format!("equations/{i}/{side}"),
                                    message: format!("box `{}` disagrees with signature", b.gen),
                                });
                            }
                        }
                    }
                }
            }
        }
        if let Some(duals) = &self.duals {
            for obj in &self.object_generators {
                match duals.get(obj) {
                    None => out.push(SignatureViolation {
                        path: format!("duals/{obj}"),
                        message: "duals table is not total on object generators".into(),
                    }),
                    Some(w) => self.check_word(w, &format!("duals/{obj}"), &mut out),
                }
            }
            for key in duals.keys() {
                if !self.has_object(key) {
                    out.push(SignatureViolation {
                        path: format!("duals/{key}"),
                        message: "dual declared for unknown object generator".into(),
                    });
                }
            }
        }
        out
    }
}
