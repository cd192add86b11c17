//! Homomorphism search, homomorphic equivalence and cores.
//!
//! The solver is a plain backtracking search over the vertices of the source
//! digraph. Domains are bitsets over the target's vertices and are kept
//! arc consistent (AC-3) along both orientations of every source edge.
//! Variables are chosen smallest-domain-first (ties to the lowest index) and
//! values are tried in increasing order, so every answer is deterministic.
//! Weakly connected components of the source are solved one after another.

use std::collections::VecDeque;

use serde::Serialize;

use crate::digraph::Digraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Maximum number of value assignments tried by one search.
    pub node_limit: u64,
}

impl SearchBudget {
    pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

    pub fn new(node_limit: u64) -> Self {
        SearchBudget {
            node_limit: node_limit.max(1),
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(Self::DEFAULT_NODE_LIMIT)
    }
}

/// A vertex map certified to preserve every edge of its source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Hom {
    map: Vec<usize>,
}

impl Hom {
    /// Certifies `map` as a homomorphism from `source` to `target`.
    pub fn new(source: &Digraph, target: &Digraph, map: Vec<usize>) -> Result<Hom> {
        if !is_homomorphism(source, target, &map) {
            return Err(Error::InternalInconsistency(
                "map does not preserve edges".into(),
            ));
        }
        Ok(Hom { map })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    /// `self` then `next`.
    pub fn then(&self, next: &Hom) -> Hom {
        Hom {
            map: self.map.iter().map(|&v| next.map[v]).collect(),
        }
    }

    /// Re-checks the certificate against a pair of digraphs.
    pub fn verify(&self, source: &Digraph, target: &Digraph) -> bool {
        is_homomorphism(source, target, &self.map)
    }
}

pub fn is_homomorphism(source: &Digraph, target: &Digraph, map: &[usize]) -> bool {
    map.len() == source.vertex_count()
        && map.iter().all(|&v| v < target.vertex_count())
        && source.edges().all(|(u, v)| target.has_edge(map[u], map[v]))
}

/// Looks for a homomorphism `g -> h` that sends each pinned vertex `v` to
/// its value. `Ok(None)` means none exists; running out of budget is an
/// error, never a "no".
pub fn find_hom(
    g: &Digraph,
    h: &Digraph,
    pins: &[(usize, usize)],
    budget: &SearchBudget,
) -> Result<Option<Hom>> {
    for &(vertex, value) in pins {
        if vertex >= g.vertex_count() || value >= h.vertex_count() {
            return Err(Error::PinOutOfRange { vertex, value });
        }
    }
    let mut solver = Solver::new(g, h, budget.node_limit);
    for &(vertex, value) in pins {
        solver.restrict_to(vertex, value);
    }
    match solver.solve()? {
        Some(map) => Hom::new(g, h, map).map(Some),
        None => Ok(None),
    }
}

/// Both homomorphisms, if `g` and `h` are homomorphically equivalent.
pub fn hom_equivalent(
    g: &Digraph,
    h: &Digraph,
    budget: &SearchBudget,
) -> Result<Option<(Hom, Hom)>> {
    let Some(forward) = find_hom(g, h, &[], budget)? else {
        return Ok(None);
    };
    Ok(find_hom(h, g, &[], budget)?.map(|back| (forward, back)))
}

/// A core of some digraph together with a retraction onto it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Core {
    /// The core, re-indexed densely.
    pub digraph: Digraph,
    /// Original vertex kept at each core position, ascending.
    pub vertices: Vec<usize>,
    /// Homomorphism from the original digraph onto the core.
    pub retraction: Hom,
}

/// Computes the core by repeatedly mapping the current digraph into itself
/// minus one vertex (lowest index first) and keeping the induced image.
pub fn core_of(g: &Digraph, budget: &SearchBudget) -> Result<Core> {
    // current core candidate as original vertex ids, ascending
    let mut kept: Vec<usize> = (0..g.vertex_count()).collect();
    let mut current = g.clone();
    // original vertex -> position in `kept`
    let mut to_current: Vec<usize> = kept.clone();

    'shrink: loop {
        for v in 0..current.vertex_count() {
            let Some(h) = retract_without(&current, v, budget)? else {
                continue;
            };
            let mut image: Vec<usize> = h.clone();
            image.sort_unstable();
            image.dedup();
            let mut pos = vec![usize::MAX; current.vertex_count()];
            for (i, &w) in image.iter().enumerate() {
                pos[w] = i;
            }
            for t in to_current.iter_mut() {
                *t = pos[h[*t]];
            }
            kept = image.iter().map(|&w| kept[w]).collect();
            current = current.induced(&image);
            continue 'shrink;
        }
        break;
    }
    let retraction = Hom::new(g, &current, to_current)?;
    Ok(Core {
        digraph: current,
        vertices: kept,
        retraction,
    })
}

/// A homomorphism from `g` to `g - v`, expressed in `g`'s vertex ids.
fn retract_without(g: &Digraph, v: usize, budget: &SearchBudget) -> Result<Option<Vec<usize>>> {
    if g.vertex_count() == 1 {
        return Ok(None);
    }
    let rest: Vec<usize> = (0..g.vertex_count()).filter(|&w| w != v).collect();
    let sub = g.induced(&rest);
    Ok(
        find_hom(g, &sub, &[], budget)?
            .map(|h| h.into_map().into_iter().map(|w| rest[w]).collect()),
    )
}

/// True iff no vertex can be retracted away.
pub fn is_core(g: &Digraph, budget: &SearchBudget) -> Result<bool> {
    for v in 0..g.vertex_count() {
        if retract_without(g, v, budget)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

const WORD: usize = 64;

struct Solver<'a> {
    g: &'a Digraph,
    h: &'a Digraph,
    words: usize,
    dom: Vec<u64>,
    /// (word index, previous value)
    trail: Vec<(usize, u64)>,
    nodes: u64,
    limit: u64,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    support: Vec<u64>,
    /// Bitset rows of the target's out- and in-neighborhoods, when small.
    rows: Option<(Vec<u64>, Vec<u64>)>,
}

impl<'a> Solver<'a> {
    fn new(g: &'a Digraph, h: &'a Digraph, limit: u64) -> Self {
        let nh = h.vertex_count();
        let words = nh.div_ceil(WORD);
        let mut full = vec![!0u64; words];
        if !nh.is_multiple_of(WORD) {
            full[words - 1] = (1u64 << (nh % WORD)) - 1;
        }
        let mut dom = Vec::with_capacity(g.vertex_count() * words);
        for _ in 0..g.vertex_count() {
            dom.extend_from_slice(&full);
        }
        let rows = (nh * words <= 1 << 20).then(|| {
            let mut out_rows = vec![0u64; nh * words];
            let mut in_rows = vec![0u64; nh * words];
            for (a, b) in h.edges() {
                out_rows[a * words + b / WORD] |= 1 << (b % WORD);
                in_rows[b * words + a / WORD] |= 1 << (a % WORD);
            }
            (out_rows, in_rows)
        });
        let mut solver = Solver {
            g,
            h,
            words,
            dom,
            trail: Vec::new(),
            nodes: 0,
            limit,
            queue: VecDeque::new(),
            queued: vec![false; g.vertex_count()],
            support: vec![0; words],
            rows,
        };
        // a looped source vertex can only go to a looped target vertex
        let mut looped = vec![0u64; words];
        for a in h.looped_vertices() {
            looped[a / WORD] |= 1 << (a % WORD);
        }
        for x in g.looped_vertices() {
            let row = &mut solver.dom[x * words..(x + 1) * words];
            for (d, l) in row.iter_mut().zip(&looped) {
                *d &= l;
            }
        }
        solver
    }

    fn restrict_to(&mut self, x: usize, value: usize) {
        let base = x * self.words;
        for w in 0..self.words {
            let keep = if w == value / WORD {
                1u64 << (value % WORD)
            } else {
                0
            };
            self.dom[base + w] &= keep;
        }
    }

    fn domain(&self, x: usize) -> &[u64] {
        &self.dom[x * self.words..(x + 1) * self.words]
    }

    fn size(&self, x: usize) -> u32 {
        self.domain(x).iter().map(|w| w.count_ones()).sum()
    }

    fn is_empty(&self, x: usize) -> bool {
        self.domain(x).iter().all(|&w| w == 0)
    }

    fn first_value(&self, x: usize) -> Option<usize> {
        first_bit_from(self.domain(x), 0)
    }

    fn solve(&mut self) -> Result<Option<Vec<usize>>> {
        let n = self.g.vertex_count();
        if (0..n).any(|x| self.is_empty(x)) {
            return Ok(None);
        }
        for x in 0..n {
            self.enqueue(x);
        }
        if !self.propagate() {
            return Ok(None);
        }
        self.trail.clear();
        for component in components(self.g) {
            if !self.solve_component(&component)? {
                return Ok(None);
            }
            // assignments of finished components are permanent
            self.trail.clear();
        }
        Ok(Some(
            (0..n)
                .map(|x| self.first_value(x).expect("solved domains are singletons"))
                .collect(),
        ))
    }

    fn solve_component(&mut self, vars: &[usize]) -> Result<bool> {
        struct Frame {
            var: usize,
            values: Vec<u64>,
            next: usize,
            mark: usize,
        }
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            let Some(var) = self.pick(vars) else {
                return Ok(true);
            };
            stack.push(Frame {
                var,
                values: self.domain(var).to_vec(),
                next: 0,
                mark: self.trail.len(),
            });
            // try values of the top frame until one propagates cleanly
            loop {
                let Some(frame) = stack.last_mut() else {
                    return Ok(false);
                };
                let mark = frame.mark;
                let var = frame.var;
                let value = first_bit_from(&frame.values, frame.next);
                if let Some(value) = value {
                    frame.next = value + 1;
                }
                self.undo(mark);
                let Some(value) = value else {
                    stack.pop();
                    continue;
                };
                self.nodes += 1;
                if self.nodes > self.limit {
                    return Err(Error::BudgetExhausted { limit: self.limit });
                }
                self.assign(var, value);
                self.enqueue(var);
                if self.propagate() {
                    break;
                }
            }
        }
    }

    fn pick(&self, vars: &[usize]) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for &x in vars {
            let s = self.size(x);
            if s > 1 && best.is_none_or(|(b, _)| s < b) {
                best = Some((s, x));
                if s == 2 {
                    break;
                }
            }
        }
        best.map(|(_, x)| x)
    }

    fn set_word(&mut self, idx: usize, value: u64) {
        let old = self.dom[idx];
        if old != value {
            self.trail.push((idx, old));
            self.dom[idx] = value;
        }
    }

    fn assign(&mut self, x: usize, value: usize) {
        let base = x * self.words;
        for w in 0..self.words {
            let keep = if w == value / WORD {
                1u64 << (value % WORD)
            } else {
                0
            };
            self.set_word(base + w, keep);
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (idx, old) = self.trail.pop().unwrap();
            self.dom[idx] = old;
        }
        while let Some(x) = self.queue.pop_front() {
            self.queued[x] = false;
        }
    }

    fn enqueue(&mut self, x: usize) {
        if !self.queued[x] {
            self.queued[x] = true;
            self.queue.push_back(x);
        }
    }

    /// AC-3 to a fixpoint. Returns false on a wipe-out.
    fn propagate(&mut self) -> bool {
        while let Some(x) = self.queue.pop_front() {
            self.queued[x] = false;
            let g = self.g;
            self.compute_support(x, true);
            for &y in g.out_neighbors(x) {
                if y != x && !self.narrow(y) {
                    return self.fail();
                }
            }
            self.compute_support(x, false);
            for &w in g.in_neighbors(x) {
                if w != x && !self.narrow(w) {
                    return self.fail();
                }
            }
        }
        true
    }

    fn fail(&mut self) -> bool {
        while let Some(x) = self.queue.pop_front() {
            self.queued[x] = false;
        }
        false
    }

    /// Union of out- (or in-) neighborhoods over the domain of `x`.
    fn compute_support(&mut self, x: usize, outgoing: bool) {
        let words = self.words;
        self.support.iter_mut().for_each(|w| *w = 0);
        let base = x * words;
        for w in 0..words {
            let mut bits = self.dom[base + w];
            while bits != 0 {
                let a = w * WORD + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                match &self.rows {
                    Some((out_rows, in_rows)) => {
                        let rows = if outgoing { out_rows } else { in_rows };
                        for (s, r) in self.support.iter_mut().zip(&rows[a * words..]) {
                            *s |= r;
                        }
                    }
                    None => {
                        let nbrs = if outgoing {
                            self.h.out_neighbors(a)
                        } else {
                            self.h.in_neighbors(a)
                        };
                        for &b in nbrs {
                            self.support[b / WORD] |= 1 << (b % WORD);
                        }
                    }
                }
            }
        }
    }

    /// Intersects the domain of `y` with the current support.
    fn narrow(&mut self, y: usize) -> bool {
        let base = y * self.words;
        let mut changed = false;
        let mut nonempty = false;
        for w in 0..self.words {
            let new = self.dom[base + w] & self.support[w];
            if new != self.dom[base + w] {
                changed = true;
                self.set_word(base + w, new);
            }
            nonempty |= new != 0;
        }
        if changed {
            self.enqueue(y);
        }
        nonempty
    }
}

fn first_bit_from(bits: &[u64], from: usize) -> Option<usize> {
    let mut w = from / WORD;
    if w >= bits.len() {
        return None;
    }
    let mut word = bits[w] & (!0u64 << (from % WORD));
    loop {
        if word != 0 {
            return Some(w * WORD + word.trailing_zeros() as usize);
        }
        w += 1;
        if w == bits.len() {
            return None;
        }
        word = bits[w];
    }
}

/// Weakly connected components, each sorted, ordered by smallest vertex.
fn components(g: &Digraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in g.out_neighbors(u).iter().chain(g.in_neighbors(u)) {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}
