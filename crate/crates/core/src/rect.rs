//! k-rectangularity and total rectangularity.
//!
//! `R_k` relates `a` to `b` when some walk of exactly `k` edges leads from
//! `a` to `b` (vertices may repeat). A digraph is k-rectangular when
//! `R_k ∘ R_k⁻¹ ∘ R_k ⊆ R_k`, and totally rectangular when that holds for
//! every `k ≥ 1`, which is equivalent to having a Maltsev polymorphism.

use std::collections::HashSet;

use serde::Serialize;

use crate::digraph::Digraph;

const WORD: usize = 64;

/// Square boolean matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(WORD);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn adjacency(g: &Digraph) -> Self {
        let mut m = BitMatrix::zeros(g.vertex_count());
        for (u, v) in g.edges() {
            m.set(u, v);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words + b / WORD] >> (b % WORD) & 1 == 1
    }

    pub fn set(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / WORD] |= 1 << (b % WORD);
    }

    fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    /// Boolean product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.n);
        for a in 0..self.n {
            for b in ones(self.row(a)) {
                let src = b * self.words;
                let dst = a * self.words;
                for w in 0..self.words {
                    out.bits[dst + w] |= other.bits[src + w];
                }
            }
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| ones(self.row(a)).map(move |b| (a, b)))
    }
}

fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                w * WORD + b
            })
        })
    })
}

/// The walk relation `R_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachRelation {
    pub k: usize,
    pub matrix: BitMatrix,
}

impl ReachRelation {
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.matrix.get(a, b)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.matrix.pairs().collect()
    }
}

/// `R_k` as the `k`-th boolean power of the adjacency matrix. `k` is at least 1.
pub fn reach_relation(g: &Digraph, k: usize) -> ReachRelation {
    assert!(k >= 1, "walk length must be positive");
    let adj = BitMatrix::adjacency(g);
    let mut m = adj.clone();
    for _ in 1..k {
        m = m.mul(&adj);
    }
    ReachRelation { k, matrix: m }
}

/// Walks of length `k` from `a` to `b`, from `c` to `b` and from `c` to `d`,
/// but none from `a` to `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RectWitness {
    pub k: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl RectWitness {
    /// Re-checks the witness by layered reachability sets.
    pub fn verify(&self, g: &Digraph) -> bool {
        let n = g.vertex_count();
        if [self.a, self.b, self.c, self.d].iter().any(|&v| v >= n) || self.k == 0 {
            return false;
        }
        let from_a = walk_ends(g, self.a, self.k);
        let from_c = walk_ends(g, self.c, self.k);
        from_a[self.b] && from_c[self.b] && from_c[self.d] && !from_a[self.d]
    }
}

/// Vertices reachable from `start` by a walk of exactly `k` edges.
fn walk_ends(g: &Digraph, start: usize, k: usize) -> Vec<bool> {
    let mut layer = vec![false; g.vertex_count()];
    layer[start] = true;
    for _ in 0..k {
        let mut next = vec![false; g.vertex_count()];
        for (u, _) in layer.iter().enumerate().filter(|(_, &on)| on) {
            for &v in g.out_neighbors(u) {
                next[v] = true;
            }
        }
        layer = next;
    }
    layer
}

/// The lexicographically least `(a, b, c, d)` violating rectangularity of `r`.
fn violation(r: &BitMatrix, k: usize) -> Option<RectWitness> {
    let n = r.size();
    for a in 0..n {
        let row_a = r.row(a);
        for b in ones(row_a) {
            for c in 0..n {
                if !r.get(c, b) {
                    continue;
                }
                let row_c = r.row(c);
                let missing = row_c
                    .iter()
                    .zip(row_a)
                    .enumerate()
                    .find_map(|(w, (&rc, &ra))| {
                        let diff = rc & !ra;
                        (diff != 0).then(|| w * WORD + diff.trailing_zeros() as usize)
                    });
                if let Some(d) = missing {
                    return Some(RectWitness { k, a, b, c, d });
                }
            }
        }
    }
    None
}

pub fn is_k_rectangular(g: &Digraph, k: usize) -> Result<(), RectWitness> {
    match violation(&reach_relation(g, k).matrix, k) {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// Checks `R_1, R_2, ...` until a matrix repeats; from then on the powers
/// cycle through matrices already checked.
pub fn is_totally_rectangular(g: &Digraph) -> Result<(), RectWitness> {
    let adj = BitMatrix::adjacency(g);
    let mut seen: HashSet<BitMatrix> = HashSet::new();
    let mut m = adj.clone();
    let mut k = 1;
    while seen.insert(m.clone()) {
        if let Some(w) = violation(&m, k) {
            return Err(w);
        }
        m = m.mul(&adj);
        k += 1;
    }
    Ok(())
}

/// Maltsev polymorphism test via total rectangularity; the witness explains
/// a failure.
pub fn has_maltsev(g: &Digraph) -> Result<(), RectWitness> {
    is_totally_rectangular(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{clique, cycle, disjoint_union, path, t3};

    #[test]
    fn reach_relations() {
        assert_eq!(
            reach_relation(&t3(), 1).pairs(),
            vec![(0, 1), (0, 2), (1, 2)]
        );
        assert_eq!(
            reach_relation(&cycle(3), 3).pairs(),
            vec![(0, 0), (1, 1), (2, 2)]
        );
        assert_eq!(reach_relation(&path(3), 2).pairs(), vec![(0, 2)]);
        assert!(reach_relation(&path(3), 3).pairs().is_empty());
    }

    #[test]
    fn tournament_witness() {
        let w = is_k_rectangular(&t3(), 1).unwrap_err();
        assert_eq!(
            w,
            RectWitness {
                k: 1,
                a: 1,
                b: 2,
                c: 0,
                d: 1
            }
        );
        assert!(w.verify(&t3()));
        assert_eq!(is_totally_rectangular(&t3()), Err(w));
        assert_eq!(has_maltsev(&t3()), Err(w));
    }

    #[test]
    fn clique_witness() {
        let w = is_k_rectangular(&clique(3), 1).unwrap_err();
        assert_eq!(
            w,
            RectWitness {
                k: 1,
                a: 0,
                b: 1,
                c: 2,
                d: 0
            }
        );
        assert!(w.verify(&clique(3)));
        assert!(has_maltsev(&clique(3)).is_err());
    }

    #[test]
    fn cycles_and_paths_are_rectangular() {
        for k in 1..=10 {
            assert_eq!(is_k_rectangular(&cycle(5), k), Ok(()));
        }
        for n in 1..=10 {
            assert_eq!(is_totally_rectangular(&cycle(n)), Ok(()));
        }
        for n in 1..=6 {
            assert_eq!(is_totally_rectangular(&path(n)), Ok(()));
        }
        let u = disjoint_union(&[cycle(6), cycle(3)]).unwrap();
        assert_eq!(has_maltsev(&u), Ok(()));
    }

    #[test]
    fn witness_needs_a_longer_walk() {
        // 0 -> 1 -> 2, 3 -> 4 -> 2 and 3 -> 5 -> 6: 1-rectangular, but
        // 2-rectangularity fails at (0, 2, 3, 6).
        let g = Digraph::new(7, [(0, 1), (1, 2), (3, 4), (4, 2), (3, 5), (5, 6)]).unwrap();
        assert_eq!(is_k_rectangular(&g, 1), Ok(()));
        let w = is_totally_rectangular(&g).unwrap_err();
        assert_eq!(
            w,
            RectWitness {
                k: 2,
                a: 0,
                b: 2,
                c: 3,
                d: 6
            }
        );
        assert!(w.verify(&g));
    }

    #[test]
    fn bad_witnesses_fail_verification() {
        let w = RectWitness {
            k: 1,
            a: 0,
            b: 1,
            c: 0,
            d: 2,
        };
        assert!(!w.verify(&t3()));
        let out_of_range = RectWitness {
            k: 1,
            a: 9,
            b: 1,
            c: 0,
            d: 2,
        };
        assert!(!out_of_range.verify(&t3()));
    }
}
