//! Finite digraphs on dense vertex sets `0..n`.

mod io;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{tuples, Error, Limits, Result};

pub(crate) use io::to_dot;
pub use io::{decode, encode, Format};

/// A finite digraph with vertices `0..n`. Loops are allowed, parallel edges
/// are not. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    // CSR layout, heads of each out-list sorted ascending
    out_start: Vec<usize>,
    out_heads: Vec<usize>,
    in_start: Vec<usize>,
    in_tails: Vec<usize>,
}

impl Digraph {
    /// Builds a digraph, dropping duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::EndpointOutOfRange { u, v, n });
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted(n, &edges))
    }

    fn from_sorted(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut out_start = vec![0; n + 1];
        let mut in_start = vec![0; n + 1];
        for &(u, v) in edges {
            out_start[u + 1] += 1;
            in_start[v + 1] += 1;
        }
        for i in 0..n {
            out_start[i + 1] += out_start[i];
            in_start[i + 1] += in_start[i];
        }
        let out_heads = edges.iter().map(|&(_, v)| v).collect();
        let mut fill = in_start.clone();
        let mut in_tails = vec![0; edges.len()];
        // edges are sorted by tail, so every in-list comes out sorted
        for &(u, v) in edges {
            in_tails[fill[v]] = u;
            fill[v] += 1;
        }
        Digraph {
            n,
            out_start,
            out_heads,
            in_start,
            in_tails,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out_heads.len()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_heads[self.out_start[u]..self.out_start[u + 1]]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_tails[self.in_start[v]..self.in_start[v + 1]]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_start[u + 1] - self.out_start[u]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_start[v + 1] - self.in_start[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn has_loop(&self) -> bool {
        (0..self.n).any(|u| self.has_edge(u, u))
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// The subgraph induced by `vertices`, re-indexed in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = vertices.iter().enumerate().flat_map(|(i, &u)| {
            let pos = &pos;
            self.out_neighbors(u)
                .iter()
                .filter(move |&&v| pos[v] != usize::MAX)
                .map(move |&v| (i, pos[v]))
        });
        Digraph::new(vertices.len(), edges.collect::<Vec<_>>())
            .expect("induced subgraph of a valid digraph")
    }

    /// Vertices with a loop.
    pub fn looped_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_edge(u, u))
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct DigraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DigraphRepr {
            n: self.n,
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DigraphRepr::deserialize(d)?;
        Digraph::new(repr.n, repr.edges.into_iter().map(|[u, v]| (u, v)))
            .map_err(serde::de::Error::custom)
    }
}

/// Standard digraph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `C_k`: `u -> u+1 mod k`.
    Cycle,
    /// `P_k`: vertices `0..k`, edges `i -> i+1`.
    Path,
    /// `T_k`: `i -> j` for `i < j`.
    TransitiveTournament,
    /// `K_k`: all ordered pairs of distinct vertices.
    Clique,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "tournament" | "transitive_tournament" | "transitive-tournament" => {
                Ok(Family::TransitiveTournament)
            }
            "clique" => Ok(Family::Clique),
            _ => Err(Error::parse(1, 1, format!("unknown digraph family `{s}`"))),
        }
    }
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::TransitiveTournament => "transitive tournament",
            Family::Clique => "clique",
        }
    }

    pub fn generate(self, k: usize) -> Result<Digraph> {
        let min = if self == Family::Clique { 2 } else { 1 };
        if k < min {
            return Err(Error::SizeTooSmall {
                what: self.name(),
                min,
                got: k,
            });
        }
        let edges: Vec<(usize, usize)> = match self {
            Family::Cycle => (0..k).map(|u| (u, (u + 1) % k)).collect(),
            Family::Path => (1..k).map(|v| (v - 1, v)).collect(),
            Family::TransitiveTournament => (0..k)
                .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
                .collect(),
            Family::Clique => (0..k)
                .flat_map(|u| (0..k).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect(),
        };
        Digraph::new(k, edges)
    }
}

pub fn cycle(k: usize) -> Digraph {
    Family::Cycle.generate(k.max(1)).unwrap()
}

pub fn path(k: usize) -> Digraph {
    Family::Path.generate(k.max(1)).unwrap()
}

/// `T_3`, the transitive tournament on three vertices.
pub fn t3() -> Digraph {
    Family::TransitiveTournament.generate(3).unwrap()
}

pub fn clique(k: usize) -> Digraph {
    Family::Clique.generate(k.max(2)).unwrap()
}

/// The `k`-th direct power. Tuple vertices are indexed mixed-radix, most
/// significant coordinate first.
pub fn direct_power(g: &Digraph, k: usize, limits: &Limits) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::SizeTooSmall {
            what: "direct power arity",
            min: 1,
            got: 0,
        });
    }
    let n = g.vertex_count();
    let vertices = limits.check_vertices("direct power", tuples::count(n, k))?;
    let m = g.edge_count();
    limits.check_edges("direct power", tuples::count(m, k))?;
    let base: Vec<(usize, usize)> = g.edges().collect();
    let mut edges = Vec::with_capacity(tuples::count(m, k) as usize);
    if m > 0 {
        let mut choice = vec![0; k];
        loop {
            let (mut tail, mut head) = (0, 0);
            for &c in &choice {
                tail = tail * n + base[c].0;
                head = head * n + base[c].1;
            }
            edges.push((tail, head));
            if !tuples::advance(&mut choice, m) {
                break;
            }
        }
    }
    Digraph::new(vertices, edges)
}

/// Blocks concatenated in order; block `i` is shifted by the sizes of the
/// blocks before it.
pub fn disjoint_union(gs: &[Digraph]) -> Result<Digraph> {
    if gs.is_empty() {
        return Err(Error::EmptyList);
    }
    let mut offset = 0;
    let mut edges = Vec::new();
    for g in gs {
        edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
        offset += g.vertex_count();
    }
    Digraph::new(offset, edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeKind {
    /// Isomorphic to `P_k`.
    Path(usize),
    /// Every vertex has in- and out-degree 1; cycle lengths listed by
    /// increasing smallest vertex.
    DisjointUnionOfCycles(Vec<usize>),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub kind: ShapeKind,
    /// Length of a shortest directed cycle, if any.
    pub shortest_cycle: Option<usize>,
}

pub fn shape_of(g: &Digraph) -> ShapeReport {
    ShapeReport {
        kind: shape_kind(g),
        shortest_cycle: shortest_cycle(g),
    }
}

fn shape_kind(g: &Digraph) -> ShapeKind {
    let n = g.vertex_count();
    if (0..n).all(|u| g.in_degree(u) == 1 && g.out_degree(u) == 1) {
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut u = start;
            while !seen[u] {
                seen[u] = true;
                len += 1;
                u = g.out_neighbors(u)[0];
            }
            lengths.push(len);
        }
        return ShapeKind::DisjointUnionOfCycles(lengths);
    }
    if g.edge_count() + 1 != n {
        return ShapeKind::Other;
    }
    let sources: Vec<usize> = (0..n).filter(|&u| g.in_degree(u) == 0).collect();
    if sources.len() != 1 || (0..n).any(|u| g.out_degree(u) > 1 || g.in_degree(u) > 1) {
        return ShapeKind::Other;
    }
    let mut visited = 1;
    let mut u = sources[0];
    while let Some(&v) = g.out_neighbors(u).first() {
        visited += 1;
        u = v;
        if visited > n {
            return ShapeKind::Other;
        }
    }
    if visited == n {
        ShapeKind::Path(n)
    } else {
        ShapeKind::Other
    }
}

/// Shortest directed cycle length via a BFS from every vertex.
pub fn shortest_cycle(g: &Digraph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if g.has_edge(s, s) {
            return Some(1);
        }
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| dist[u] + 1 >= b) {
                break;
            }
            for &v in g.out_neighbors(u) {
                if v == s {
                    let len = dist[u] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                } else if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_basics() {
        let p1 = Digraph::new(1, []).unwrap();
        assert_eq!((p1.vertex_count(), p1.edge_count()), (1, 0));
        let p2 = Digraph::new(2, [(0, 1)]).unwrap();
        assert!(p2.has_edge(0, 1) && !p2.has_edge(1, 0));
        let dup = Digraph::new(3, [(0, 1), (0, 1)]).unwrap();
        assert_eq!((dup.vertex_count(), dup.edge_count()), (3, 1));
    }

    #[test]
    fn build_errors() {
        assert_eq!(Digraph::new(0, []), Err(Error::EmptyVertexSet));
        assert_eq!(
            Digraph::new(2, [(0, 5)]),
            Err(Error::EndpointOutOfRange { u: 0, v: 5, n: 2 })
        );
    }

    #[test]
    fn families() {
        let c1 = Family::Cycle.generate(1).unwrap();
        assert_eq!(c1.edges().collect::<Vec<_>>(), vec![(0, 0)]);
        let t3 = Family::TransitiveTournament.generate(3).unwrap();
        assert_eq!(t3.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let k3 = Family::Clique.generate(3).unwrap();
        assert_eq!(k3.edge_count(), 6);
        assert!(!k3.has_loop());
        assert!(matches!(
            Family::Clique.generate(1),
            Err(Error::SizeTooSmall { min: 2, .. })
        ));
        assert!(matches!(
            Family::Cycle.generate(0),
            Err(Error::SizeTooSmall { min: 1, .. })
        ));
        assert_eq!(
            path(4).edges().collect::<Vec<_>>(),
            vec![(0, 1), (1, 2), (2, 3)]
        );
    }

    #[test]
    fn direct_powers() {
        let limits = Limits::default();
        let p2 = path(2);
        let sq = direct_power(&p2, 2, &limits).unwrap();
        assert_eq!(sq.vertex_count(), 4);
        assert_eq!(sq.edges().collect::<Vec<_>>(), vec![(0, 3)]);

        let c3 = cycle(3);
        let sq = direct_power(&c3, 2, &limits).unwrap();
        assert_eq!((sq.vertex_count(), sq.edge_count()), (9, 9));
        assert_eq!(direct_power(&c3, 1, &limits).unwrap(), c3);
    }

    #[test]
    fn direct_power_budget() {
        let limits = Limits {
            vertex_budget: 100,
            ..Limits::default()
        };
        let err = direct_power(&cycle(5), 3, &limits).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                what: "direct power",
                required: 125,
                budget: 100
            }
        );
    }

    #[test]
    fn unions() {
        let u = disjoint_union(&[cycle(2), cycle(3)]).unwrap();
        assert_eq!((u.vertex_count(), u.edge_count()), (5, 5));
        assert!(u.has_edge(4, 2));
        let p1 = Digraph::new(1, []).unwrap();
        assert_eq!(disjoint_union(std::slice::from_ref(&p1)).unwrap(), p1);
        assert_eq!(disjoint_union(&[]), Err(Error::EmptyList));
        let two = disjoint_union(&[cycle(2), cycle(2)]).unwrap();
        assert_eq!(
            shape_of(&two).kind,
            ShapeKind::DisjointUnionOfCycles(vec![2, 2])
        );
    }

    #[test]
    fn shapes() {
        let p4 = shape_of(&path(4));
        assert_eq!(p4.kind, ShapeKind::Path(4));
        assert_eq!(p4.shortest_cycle, None);

        let u = disjoint_union(&[cycle(6), cycle(3)]).unwrap();
        let s = shape_of(&u);
        assert_eq!(s.kind, ShapeKind::DisjointUnionOfCycles(vec![6, 3]));
        assert_eq!(s.shortest_cycle, Some(3));

        let t = shape_of(&t3());
        assert_eq!(t.kind, ShapeKind::Other);
        assert_eq!(t.shortest_cycle, None);

        assert_eq!(
            shape_of(&Digraph::new(1, []).unwrap()).kind,
            ShapeKind::Path(1)
        );
        // a path plus an isolated vertex is not a path
        let broken = Digraph::new(3, [(0, 1)]).unwrap();
        assert_eq!(shape_of(&broken).kind, ShapeKind::Other);
        // a path that closes into a cycle with a tail
        let lasso = Digraph::new(3, [(0, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(shape_of(&lasso).kind, ShapeKind::Other);
        assert_eq!(shape_of(&lasso).shortest_cycle, Some(2));
    }

    #[test]
    fn cycles_have_their_own_shape() {
        for k in 1..=12 {
            let s = shape_of(&cycle(k));
            assert_eq!(s.kind, ShapeKind::DisjointUnionOfCycles(vec![k]));
            assert_eq!(s.shortest_cycle, Some(k));
        }
    }

    #[test]
    fn powers_compose() {
        // With mixed-radix indexing, (G^j)^k and G^(jk) coincide exactly.
        let limits = Limits::default();
        let graphs = [
            Digraph::new(3, [(0, 1), (1, 2), (2, 0), (0, 0)]).unwrap(),
            t3(),
            Digraph::new(2, [(0, 1), (1, 1)]).unwrap(),
        ];
        for g in &graphs {
            for j in 1..=2 {
                for k in 1..=2 {
                    let nested =
                        direct_power(&direct_power(g, j, &limits).unwrap(), k, &limits).unwrap();
                    let flat = direct_power(g, j * k, &limits).unwrap();
                    assert_eq!(nested, flat);
                }
            }
        }
    }

    #[test]
    fn induced_reindexes() {
        let g = cycle(4);
        let sub = g.induced(&[1, 2, 3]);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }
}
