use super::{Theory, TheoryError, Verdict};
use crate::cornering::{eval_flow, Cell};
use crate::limits::Limits;

/// The thin compact closed theory of integers: objects are integers, tensor
/// is addition, there is exactly one morphism `m -> n` when `m = n` and none
/// otherwise, and the dual of `n` is `-n`.
///
/// Because homs are at most singletons a morphism carries no data beyond its
/// (shared) domain and codomain, so `Mor = i64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ZTheory;

impl Theory for ZTheory {
    type Obj = i64;
    type Mor = i64;

    fn unit(&self) -> i64 {
        0
    }

    fn tensor(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn mor_dom(&self, m: &i64) -> i64 {
        *m
    }

    fn mor_cod(&self, m: &i64) -> i64 {
        *m
    }

    fn mor_identity(&self, a: &i64) -> i64 {
        *a
    }

    fn mor_is_identity(&self, _m: &i64) -> bool {
        true
    }

    fn mor_compose(&self, f: &i64, g: &i64) -> Result<i64, TheoryError> {
        if f != g {
            return Err(TheoryError::ComposeMismatch(f.to_string(), g.to_string()));
        }
        Ok(*f)
    }

    fn mor_tensor(&self, f: &i64, g: &i64) -> i64 {
        f + g
    }

    fn mor_equal(&self, f: &i64, g: &i64, _limits: &Limits) -> Verdict {
        Verdict::from_bool(f == g)
    }

    fn mor_symmetry(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn is_compact_closed(&self) -> bool {
        true
    }

    fn dual(&self, a: &i64) -> Result<i64, TheoryError> {
        Ok(-a)
    }

    fn duality_unit(&self, _a: &i64) -> Result<i64, TheoryError> {
        // eta_a: 0 -> a + (-a); the hom is inhabited because both sides are 0.
        Ok(0)
    }

    fn duality_counit(&self, _a: &i64) -> Result<i64, TheoryError> {
        Ok(0)
    }

    fn iso_candidates(&self, a: &i64, b: &i64) -> Vec<i64> {
        if a == b {
            vec![*a]
        } else {
            Vec::new()
        }
    }

    /// Cells over a thin theory are determined by their flow summaries, so
    /// equality is decidable: compare boundaries and net postings.
    fn cell_equal(&self, c1: &Cell<Self>, c2: &Cell<Self>, _limits: &Limits) -> Verdict {
        match (eval_flow(self, c1), eval_flow(self, c2)) {
            (Ok(f1), Ok(f2)) => Verdict::from_bool(f1 == f2),
            _ => Verdict::False,
        }
    }

    fn print_obj(&self, a: &i64) -> String {
        a.to_string()
    }

    fn parse_obj(&self, s: &str) -> Result<i64, TheoryError> {
        s.trim()
            .parse()
            .map_err(|_| TheoryError::UnknownObject(s.to_string()))
    }

    fn print_mor(&self, m: &i64) -> String {
        format!("id({m})")
    }

    fn parse_mor(&self, s: &str) -> Result<i64, TheoryError> {
        let t = s.trim();
        let inner = t
            .strip_prefix("id(")
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        inner
            .trim()
            .parse()
            .map_err(|_| TheoryError::UnknownMorphism(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thin_homs() {
        let z = ZTheory;
        assert_eq!(z.mor_compose(&3, &3).unwrap(), 3);
        assert!(z.mor_compose(&3, &4).is_err());
        assert_eq!(z.mor_tensor(&3, &-5), -2);
        assert_eq!(z.tensor(&2, &-2), z.unit());
    }

    #[test]
    fn duality() {
        let z = ZTheory;
        assert_eq!(z.dual(&7).unwrap(), -7);
        // eta and eps are endomorphisms of 0.
        assert_eq!(z.mor_dom(&z.duality_unit(&7).unwrap()), 0);
        assert_eq!(z.mor_cod(&z.duality_counit(&7).unwrap()), 0);
    }

    #[test]
    fn parse_roundtrip() {
        let z = ZTheory;
        assert_eq!(z.parse_obj("-12").unwrap(), -12);
        assert_eq!(z.parse_mor(&z.print_mor(&-3)).unwrap(), -3);
    }
}
