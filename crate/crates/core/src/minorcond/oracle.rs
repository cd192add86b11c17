//! Reference decision procedure for condition satisfaction.
//!
//! Searches operation tables cell by cell. Equations are kept as equality
//! constraints between cells (no quotienting) and edge preservation as
//! binary constraints, with forward checking only. It shares no code with
//! the indicator construction or the homomorphism solver, which is the
//! point: tests compare the two.

use super::MinorCondition;
use crate::digraph::Digraph;
use crate::{tuples, Error, Limits, Result};

/// Most cells the oracle will take on.
const MAX_CELLS: usize = 4096;

#[derive(Clone, Copy)]
enum Link {
    /// this cell -> other cell must be an edge
    Out(usize),
    /// other cell -> this cell must be an edge
    In(usize),
    Same(usize),
}

pub fn brute_force_satisfies(h: &Digraph, cond: &MinorCondition, limits: &Limits) -> Result<bool> {
    let n = h.vertex_count();
    let cells: u128 = cond
        .symbols()
        .iter()
        .map(|s| tuples::count(n, s.arity))
        .fold(0u128, |a, b| a.saturating_add(b));
    if n > 64 || cells > MAX_CELLS as u128 {
        return Err(Error::BudgetExceeded {
            what: "brute-force oracle cells",
            required: cells,
            budget: MAX_CELLS as u128,
        });
    }
    let cells = cells as usize;
    let mut offsets = Vec::new();
    let mut acc = 0;
    for s in cond.symbols() {
        offsets.push(acc);
        acc += tuples::count(n, s.arity) as usize;
    }

    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let out_mask: Vec<u64> = (0..n)
        .map(|a| h.out_neighbors(a).iter().fold(0, |m, &b| m | 1 << b))
        .collect();
    let in_mask: Vec<u64> = (0..n)
        .map(|b| h.in_neighbors(b).iter().fold(0, |m, &a| m | 1 << a))
        .collect();
    let looped: u64 = h.looped_vertices().fold(0, |m, a| m | 1 << a);

    let mut domains = vec![full; cells];
    let mut links: Vec<Vec<Link>> = vec![Vec::new(); cells];

    // edge preservation: every pair of tuples related coordinatewise
    for (sym, s) in cond.symbols().iter().enumerate() {
        let mut u = vec![0; s.arity];
        loop {
            let mut v = vec![0; s.arity];
            loop {
                if u.iter().zip(&v).all(|(&a, &b)| h.has_edge(a, b)) {
                    let cu = offsets[sym] + tuples::index(&u, n);
                    let cv = offsets[sym] + tuples::index(&v, n);
                    if cu == cv {
                        domains[cu] &= looped;
                    } else {
                        links[cu].push(Link::Out(cv));
                        links[cv].push(Link::In(cu));
                    }
                }
                if !tuples::advance(&mut v, n) {
                    break;
                }
            }
            if !tuples::advance(&mut u, n) {
                break;
            }
        }
    }

    for eq in cond.equations() {
        let mut x = vec![0; eq.variables()];
        loop {
            let left: Vec<usize> = eq.lhs.map.table().iter().map(|&t| x[t]).collect();
            let right: Vec<usize> = eq.rhs.map.table().iter().map(|&t| x[t]).collect();
            let a = offsets[eq.lhs.symbol] + tuples::index(&left, n);
            let b = offsets[eq.rhs.symbol] + tuples::index(&right, n);
            if a != b {
                links[a].push(Link::Same(b));
                links[b].push(Link::Same(a));
            }
            if !tuples::advance(&mut x, n) {
                break;
            }
        }
    }

    let mut search = Search {
        links: &links,
        out_mask: &out_mask,
        in_mask: &in_mask,
        nodes: 0,
        limit: limits.search.node_limit,
    };
    if domains.contains(&0) {
        return Ok(false);
    }
    let mut assigned = vec![false; cells];
    search.run(&mut domains, &mut assigned)
}

struct Search<'a> {
    links: &'a [Vec<Link>],
    out_mask: &'a [u64],
    in_mask: &'a [u64],
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    fn run(&mut self, domains: &mut [u64], assigned: &mut [bool]) -> Result<bool> {
        // fewest remaining values first
        let next = (0..domains.len())
            .filter(|&c| !assigned[c])
            .min_by_key(|&c| domains[c].count_ones());
        let Some(cell) = next else {
            return Ok(true);
        };
        let mut values = domains[cell];
        while values != 0 {
            let a = values.trailing_zeros() as usize;
            values &= values - 1;
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(Error::BudgetExhausted { limit: self.limit });
            }
            let mut trial = domains.to_vec();
            trial[cell] = 1 << a;
            let consistent = self.links[cell].iter().all(|&link| {
                let (other, allowed) = match link {
                    Link::Out(o) => (o, self.out_mask[a]),
                    Link::In(o) => (o, self.in_mask[a]),
                    Link::Same(o) => (o, 1u64 << a),
                };
                trial[other] &= allowed;
                trial[other] != 0
            });
            if !consistent {
                continue;
            }
            assigned[cell] = true;
            if self.run(&mut trial, assigned)? {
                return Ok(true);
            }
            assigned[cell] = false;
        }
        Ok(false)
    }
}
