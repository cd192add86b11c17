//! Primitive positive formulas, pp powers, and explicit constructions of
//! `P_2`, `P_k` and `T_3` as pp powers.
//!
//! A pp power of `H` of dimension `d` has vertex set `V(H)^d` and an edge
//! `u -> v` whenever `φ(u, v)` holds in `H`. Each construction comes with
//! homomorphisms both ways between the power and its target, certified on
//! return.

mod constructions;
mod formula;
mod power;

pub(crate) use constructions::t3_from_core;
pub use constructions::{
    construct_p2_from, construct_path_formula, construct_t3_from, verify_construction,
    Construction, MAX_PATH_CONSTRUCTION,
};
pub use formula::{Atom, PpFormula, Term};
pub use power::{pp_power, PpPower};
