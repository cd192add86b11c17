use super::{MinorCondition, OperationTable, PolymorphismWitness};
use crate::digraph::Digraph;
use crate::unionfind::UnionFind;
use crate::{tuples, Limits, Result};

/// The indicator digraph of a condition over a base digraph.
///
/// Cells are pairs `(symbol, tuple)`, laid out symbol by symbol with tuples
/// in mixed-radix order. Two cells share a vertex when some instantiation of
/// an equation identifies them; vertices are numbered by their lowest cell.
#[derive(Debug, Clone)]
pub struct Indicator {
    pub graph: Digraph,
    base: usize,
    /// First cell of each symbol.
    offsets: Vec<usize>,
    /// Cell -> indicator vertex.
    class_of: Vec<usize>,
}

impl Indicator {
    /// The indicator vertex holding `tuple` for symbol `symbol`.
    pub fn vertex_of(&self, symbol: usize, tuple: &[usize]) -> usize {
        self.class_of[self.offsets[symbol] + tuples::index(tuple, self.base)]
    }

    pub fn cell_count(&self) -> usize {
        self.class_of.len()
    }

    /// Reads operation tables off a map from indicator vertices to the base.
    pub fn pull_back(&self, cond: &MinorCondition, map: &[usize]) -> PolymorphismWitness {
        let tables = cond
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, sym)| {
                let end = self
                    .offsets
                    .get(i + 1)
                    .copied()
                    .unwrap_or(self.class_of.len());
                OperationTable {
                    symbol: sym.name.clone(),
                    arity: sym.arity,
                    values: self.class_of[self.offsets[i]..end]
                        .iter()
                        .map(|&c| map[c])
                        .collect(),
                }
            })
            .collect();
        PolymorphismWitness { tables }
    }
}

pub fn indicator(h: &Digraph, cond: &MinorCondition, limits: &Limits) -> Result<Indicator> {
    let n = h.vertex_count();
    let total: u128 = cond
        .symbols()
        .iter()
        .map(|s| tuples::count(n, s.arity))
        .fold(0u128, |a, b| a.saturating_add(b));
    let total = limits.check_vertices("indicator", total)?;
    let m = h.edge_count();
    let edges_needed = cond
        .symbols()
        .iter()
        .map(|s| tuples::count(m, s.arity))
        .fold(0u128, |a, b| a.saturating_add(b));
    limits.check_edges("indicator", edges_needed)?;
    let instantiations = cond
        .equations()
        .iter()
        .map(|e| tuples::count(n, e.variables()))
        .fold(0u128, |a, b| a.saturating_add(b));
    limits.check_vertices("indicator instantiations", instantiations)?;

    let mut offsets = Vec::with_capacity(cond.symbols().len());
    let mut acc = 0;
    for s in cond.symbols() {
        offsets.push(acc);
        acc += tuples::count(n, s.arity) as usize;
    }

    let mut uf = UnionFind::new(total);
    for eq in cond.equations() {
        let mut left = vec![0; eq.lhs.map.from_arity()];
        let mut right = vec![0; eq.rhs.map.from_arity()];
        let (lo, ro) = (offsets[eq.lhs.symbol], offsets[eq.rhs.symbol]);
        tuples::for_each(n, eq.variables(), |x| {
            eq.lhs.map.pull(x, &mut left);
            eq.rhs.map.pull(x, &mut right);
            uf.union(lo + tuples::index(&left, n), ro + tuples::index(&right, n));
        });
    }

    let mut class_of = vec![usize::MAX; total];
    let mut root_class = vec![usize::MAX; total];
    let mut classes = 0;
    for (cell, class) in class_of.iter_mut().enumerate() {
        let r = uf.find(cell);
        if root_class[r] == usize::MAX {
            root_class[r] = classes;
            classes += 1;
        }
        *class = root_class[r];
    }
    drop(root_class);

    // edges: u -> v coordinatewise in h, within one symbol
    let base_edges: Vec<(usize, usize)> = h.edges().collect();
    let mut edges = Vec::with_capacity(edges_needed as usize);
    for (sym, s) in cond.symbols().iter().enumerate() {
        if base_edges.is_empty() && s.arity > 0 {
            continue;
        }
        let mut choice = vec![0; s.arity];
        loop {
            let (mut u, mut v) = (0, 0);
            for &c in &choice {
                u = u * n + base_edges[c].0;
                v = v * n + base_edges[c].1;
            }
            edges.push((class_of[offsets[sym] + u], class_of[offsets[sym] + v]));
            if !tuples::advance(&mut choice, base_edges.len()) {
                break;
            }
        }
    }
    let graph = Digraph::new(classes.max(1), edges)?;
    Ok(Indicator {
        graph,
        base: n,
        offsets,
        class_of,
    })
}
