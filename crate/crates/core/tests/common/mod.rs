#![allow(dead_code)]

use pptop::Digraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every digraph on `n` vertices, loops included when `loops` is set, in
/// order of the bitmask over candidate edges.
pub fn all_digraphs(n: usize, loops: bool) -> Vec<Digraph> {
    let candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| loops || u != v)
        .collect();
    (0..1u32 << candidates.len())
        .map(|mask| {
            let edges = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            Digraph::new(n, edges).unwrap()
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random digraph on `n` vertices: each non-loop edge with probability
/// `p`, each loop with probability `loop_p`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64, loop_p: f64) -> Digraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let q = if u == v { loop_p } else { p };
            if rng.gen_bool(q) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges).unwrap()
}
