//! Search and rewrite budgets shared by the equality procedures.

/// Budgets for the bounded searches used throughout the crate.
///
/// Equality of morphisms in presented theories and of cells in a free
/// cornering is undecidable in general; every procedure that could diverge is
/// bounded by one of these knobs and reports `Unknown` when the budget runs
/// out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of distinct diagrams explored per rewrite closure.
    pub rewrite_budget: usize,
    /// Maximum number of boxes a diagram may grow to during rewriting.
    pub max_boxes: usize,
    /// Maximum number of cell terms visited by the interchange search.
    pub cell_search_budget: usize,
    /// Maximum apex size for span isomorphism search.
    pub iso_size_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            rewrite_budget: 256,
            max_boxes: 24,
            cell_search_budget: 2048,
            iso_size_cap: 64,
        }
    }
}

impl Limits {
    pub fn with_iso_size_cap(mut self, cap: usize) -> Self {
        self.iso_size_cap = cap;
        self
    }

    pub fn with_rewrite_budget(mut self, budget: usize) -> Self {
        self.rewrite_budget = budget;
        self
    }

    pub fn with_cell_search_budget(mut self, budget: usize) -> Self {
        self.cell_search_budget = budget;
        self
    }
}
