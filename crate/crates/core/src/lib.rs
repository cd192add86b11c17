//! Decide where a finite digraph sits in the top of the primitive positive
//! constructability order: equivalent to `P1`, equivalent to `P2`, or strictly
//! below, in which case every submaximal upper bound found (`T3` or a directed
//! prime cycle `C_p`) is reported with a checkable witness.
//!
//! The building blocks are usable on their own:
//!
//! * [`digraph`]: the digraph type, standard families, products, I/O.
//! * [`homsearch`]: homomorphism search with arc consistency, cores.
//! * [`minorcond`]: minor conditions, their DSL, and satisfaction by
//!   polymorphisms via the indicator digraph.
//! * [`rect`]: k-rectangularity and total rectangularity.
//! * [`ppcons`]: pp formulas, pp powers, and explicit constructions.
//! * [`classify`]: the classifier tying it all together.

pub mod classify;
pub mod cli;
pub mod digraph;
mod error;
pub mod homsearch;
pub mod minorcond;
pub mod ppcons;
pub mod rect;
pub mod tuples;
mod unionfind;

pub use classify::{classify, signature, Classification, ClassifyOptions, Verdict};
pub use digraph::{Digraph, Family, Format};
pub use error::{Error, Result};
pub use homsearch::{core_of, find_hom, hom_equivalent, is_core, Hom, SearchBudget};
pub use minorcond::{satisfies, Builtin, MinorCondition};
pub use ppcons::{pp_power, PpFormula};
pub use rect::{has_maltsev, is_k_rectangular, is_totally_rectangular, RectWitness};

/// Resource caps shared by every construction and search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub search: SearchBudget,
    /// Maximum number of vertices of any product, power or indicator digraph.
    pub vertex_budget: usize,
    /// Maximum number of edges of any product, power or indicator digraph.
    pub edge_budget: usize,
}

impl Limits {
    pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;
    pub const DEFAULT_EDGE_BUDGET: usize = 50_000_000;

    pub(crate) fn check_vertices(&self, what: &'static str, required: u128) -> Result<usize> {
        if required > self.vertex_budget as u128 {
            return Err(Error::BudgetExceeded {
                what,
                required,
                budget: self.vertex_budget as u128,
            });
        }
        Ok(required as usize)
    }

    pub(crate) fn check_edges(&self, what: &'static str, required: u128) -> Result<usize> {
        if required > self.edge_budget as u128 {
            return Err(Error::BudgetExceeded {
                what,
                required,
                budget: self.edge_budget as u128,
            });
        }
        Ok(required as usize)
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search: SearchBudget::default(),
            vertex_budget: Self::DEFAULT_VERTEX_BUDGET,
            edge_budget: Self::DEFAULT_EDGE_BUDGET,
        }
    }
}
