use serde::{Deserialize, Serialize};
use std::fmt;

/// An object of a free presented theory: a word of object generator names.
///
/// Tensor is concatenation, the empty word is the unit, so the monoid laws
/// hold definitionally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct ObjWord(pub Vec<String>);

impl ObjWord {
    pub fn empty() -> Self {
        ObjWord(Vec::new())
    }

    pub fn letter(name: impl Into<String>) -> Self {
        ObjWord(vec![name.into()])
    }

    pub fn from_letters<I: IntoIterator<Item = S>, S: Into<String>>(letters: I) -> Self {
        ObjWord(letters.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.0
    }

    /// Concatenation `self ++ other`.
    pub fn tensor(&self, other: &ObjWord) -> ObjWord {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        ObjWord(letters)
    }

    /// `self` repeated `n` times.
    pub fn pow(&self, n: usize) -> ObjWord {
        let mut out = ObjWord::empty();
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }
}

impl fmt::Display for ObjWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "I")
        } else {
            write!(f, "{}", self.0.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word_strategy() -> impl Strategy<Value = ObjWord> {
        proptest::collection::vec("[a-c]", 0..6).prop_map(ObjWord::from_letters)
    }

    proptest! {
        #[test]
        fn tensor_associative(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
            prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
        }

        #[test]
        fn tensor_unital(a in word_strategy()) {
            prop_assert_eq!(a.tensor(&ObjWord::empty()), a.clone());
            prop_assert_eq!(ObjWord::empty().tensor(&a), a);
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(ObjWord::empty().to_string(), "I");
        assert_eq!(
            ObjWord::from_letters(["flour", "oven"]).to_string(),
            "flour*oven"
        );
    }
}
