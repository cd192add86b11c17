//! Minor conditions and their satisfaction by polymorphisms.
//!
//! A minor condition is a set of equations `f_σ = g_τ` where `σ` and `τ`
//! map argument positions of `f` and `g` into a shared list of universally
//! quantified variables. Whether `Pol(H)` satisfies a condition is decided by
//! building the indicator digraph (all `(symbol, tuple)` cells, glued along
//! the equations) and searching for a homomorphism from it back to `H`.

mod indicator;
mod oracle;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::digraph::Digraph;
use crate::homsearch::find_hom;
use crate::{tuples, Error, Limits, Result};

pub use indicator::{indicator, Indicator};
pub use oracle::brute_force_satisfies;
pub use parse::parse_condition;

/// A map `{0..from_arity} -> {0..to_arity}`; `table[i]` is the variable fed
/// into argument `i` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorMap {
    table: Vec<usize>,
    to_arity: usize,
}

impl MinorMap {
    pub fn new(table: Vec<usize>, to_arity: usize) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&t| t >= to_arity) {
            return Err(Error::InvalidCondition(format!(
                "minor map entry {bad} exceeds {to_arity} variables"
            )));
        }
        Ok(MinorMap { table, to_arity })
    }

    pub fn from_arity(&self) -> usize {
        self.table.len()
    }

    pub fn to_arity(&self) -> usize {
        self.to_arity
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Writes `x ∘ self` into `out`.
    pub fn pull(&self, x: &[usize], out: &mut [usize]) {
        for (o, &t) in out.iter_mut().zip(&self.table) {
            *o = x[t];
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// One side of an equation: a symbol and the minor applied to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Side {
    pub symbol: usize,
    pub map: MinorMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Side,
    pub rhs: Side,
}

impl Equation {
    pub fn variables(&self) -> usize {
        self.lhs.map.to_arity
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorCondition {
    symbols: Vec<Symbol>,
    equations: Vec<Equation>,
}

impl MinorCondition {
    pub fn new(symbols: Vec<Symbol>, equations: Vec<Equation>) -> Result<Self> {
        for eq in &equations {
            for side in [&eq.lhs, &eq.rhs] {
                let sym = symbols.get(side.symbol).ok_or_else(|| {
                    Error::InvalidCondition(format!("unknown symbol index {}", side.symbol))
                })?;
                if side.map.from_arity() != sym.arity {
                    return Err(Error::ArityMismatch {
                        symbol: sym.name.clone(),
                        first: sym.arity,
                        second: side.map.from_arity(),
                    });
                }
            }
            if eq.lhs.map.to_arity != eq.rhs.map.to_arity {
                return Err(Error::InvalidCondition(
                    "both sides of an equation must use the same variables".into(),
                ));
            }
        }
        Ok(MinorCondition { symbols, equations })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    /// The same condition with each equation's variables renumbered by first
    /// occurrence (left side first) and unused variables dropped.
    pub fn canonical(&self) -> MinorCondition {
        let equations = self
            .equations
            .iter()
            .map(|eq| {
                let mut order: Vec<usize> = Vec::new();
                for &t in eq.lhs.map.table.iter().chain(&eq.rhs.map.table) {
                    if !order.contains(&t) {
                        order.push(t);
                    }
                }
                let rename = |side: &Side| Side {
                    symbol: side.symbol,
                    map: MinorMap {
                        table: side
                            .map
                            .table
                            .iter()
                            .map(|t| order.iter().position(|o| o == t).unwrap())
                            .collect(),
                        to_arity: order.len(),
                    },
                };
                Equation {
                    lhs: rename(&eq.lhs),
                    rhs: rename(&eq.rhs),
                }
            })
            .collect();
        MinorCondition {
            symbols: self.symbols.clone(),
            equations,
        }
    }
}

/// Prints in the condition DSL. Variable `i` of an equation is named `x`,
/// `y`, `z`, `w` (or `x1`, `x2`, ... for more than four), so the output parses
/// back to [`MinorCondition::canonical`].
impl fmt::Display for MinorCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        for (i, eq) in self.equations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let many = eq.variables() > NAMES.len();
            let name = |t: usize| {
                if many {
                    format!("x{}", t + 1)
                } else {
                    NAMES[t].to_string()
                }
            };
            for (j, side) in [&eq.lhs, &eq.rhs].into_iter().enumerate() {
                if j > 0 {
                    f.write_str("=")?;
                }
                let args: Vec<String> = side.map.table.iter().map(|&t| name(t)).collect();
                write!(f, "{}({})", self.symbols[side.symbol].name, args.join(","))?;
            }
        }
        Ok(())
    }
}

/// The named conditions used by the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `Σ_p`: `f(x_1,...,x_p) = f(x_2,...,x_p,x_1)`.
    Cyclic(usize),
    /// `Σ_M`: `f(y,y,x) = f(x,x,x) = f(x,y,y)` (idempotency not imposed).
    Maltsev,
    /// `Σ_c`: `f(x) = f(y)`.
    Constant,
    /// `f(x,x,y) = f(y,y,x) = f(x,y,y) = f(y,x,x)`.
    Fourfold,
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let cyclic_arg = s
            .strip_prefix("cyclic:")
            .or_else(|| s.strip_prefix("cyclic(").and_then(|r| r.strip_suffix(')')));
        match (s, cyclic_arg) {
            (_, Some(p)) => p
                .trim()
                .parse()
                .map(Builtin::Cyclic)
                .map_err(|_| Error::UnknownBuiltin(s.to_string())),
            ("maltsev", _) => Ok(Builtin::Maltsev),
            ("constant", _) => Ok(Builtin::Constant),
            ("fourfold", _) => Ok(Builtin::Fourfold),
            _ => Err(Error::UnknownBuiltin(s.to_string())),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Cyclic(p) => write!(f, "cyclic:{p}"),
            Builtin::Maltsev => f.write_str("maltsev"),
            Builtin::Constant => f.write_str("constant"),
            Builtin::Fourfold => f.write_str("fourfold"),
        }
    }
}

impl Builtin {
    pub fn condition(self) -> Result<MinorCondition> {
        let f = |arity| {
            vec![Symbol {
                name: "f".into(),
                arity,
            }]
        };
        let side = |table: &[usize], to| Side {
            symbol: 0,
            map: MinorMap::new(table.to_vec(), to).unwrap(),
        };
        let eq = |l: &[usize], r: &[usize], to| Equation {
            lhs: side(l, to),
            rhs: side(r, to),
        };
        match self {
            Builtin::Cyclic(p) => {
                if p < 2 {
                    return Err(Error::UnknownBuiltin(self.to_string()));
                }
                let id: Vec<usize> = (0..p).collect();
                let rot: Vec<usize> = (0..p).map(|i| (i + 1) % p).collect();
                MinorCondition::new(f(p), vec![eq(&id, &rot, p)])
            }
            Builtin::Maltsev => {
                let sigma = [1, 1, 0];
                let tau = [0, 0, 0];
                let rho = [0, 1, 1];
                MinorCondition::new(f(3), vec![eq(&sigma, &tau, 2), eq(&tau, &rho, 2)])
            }
            Builtin::Constant => MinorCondition::new(f(1), vec![eq(&[0], &[1], 2)]),
            Builtin::Fourfold => {
                let a = [0, 0, 1];
                let b = [1, 1, 0];
                let c = [0, 1, 1];
                let d = [1, 0, 0];
                MinorCondition::new(f(3), vec![eq(&a, &b, 2), eq(&b, &c, 2), eq(&c, &d, 2)])
            }
        }
    }
}

/// A builtin name (`cyclic:5`, `maltsev`, ...) or a DSL string.
pub fn resolve_condition(text: &str) -> Result<MinorCondition> {
    if text.contains('=') {
        parse_condition(text)
    } else {
        text.parse::<Builtin>()?.condition()
    }
}

/// The operation chosen for one symbol, as a table indexed by argument tuple
/// (mixed radix, most significant argument first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperationTable {
    pub symbol: String,
    pub arity: usize,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolymorphismWitness {
    pub tables: Vec<OperationTable>,
}

impl PolymorphismWitness {
    /// Checks from scratch that every table is a polymorphism of `h` and
    /// that every equation holds at every instantiation.
    pub fn verify(&self, h: &Digraph, cond: &MinorCondition) -> bool {
        let n = h.vertex_count();
        if self.tables.len() != cond.symbols.len() {
            return false;
        }
        for (table, sym) in self.tables.iter().zip(&cond.symbols) {
            if table.arity != sym.arity
                || table.values.len() as u128 != tuples::count(n, sym.arity)
                || table.values.iter().any(|&v| v >= n)
                || !is_polymorphism(h, table)
            {
                return false;
            }
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        cond.equations.iter().all(|eq| {
            left.resize(eq.lhs.map.from_arity(), 0);
            right.resize(eq.rhs.map.from_arity(), 0);
            let mut ok = true;
            tuples::for_each(n, eq.variables(), |x| {
                if !ok {
                    return;
                }
                eq.lhs.map.pull(x, &mut left);
                eq.rhs.map.pull(x, &mut right);
                ok = self.tables[eq.lhs.symbol].values[tuples::index(&left, n)]
                    == self.tables[eq.rhs.symbol].values[tuples::index(&right, n)];
            });
            ok
        })
    }
}

/// Edge preservation over every edge of `h^arity`.
fn is_polymorphism(h: &Digraph, table: &OperationTable) -> bool {
    let n = h.vertex_count();
    let edges: Vec<(usize, usize)> = h.edges().collect();
    if table.arity == 0 {
        // a nullary operation is a constant; h^0 is a single looped vertex
        return h.has_edge(table.values[0], table.values[0]);
    }
    if edges.is_empty() {
        return true;
    }
    let mut choice = vec![0; table.arity];
    loop {
        let (mut u, mut v) = (0, 0);
        for &c in &choice {
            u = u * n + edges[c].0;
            v = v * n + edges[c].1;
        }
        if !h.has_edge(table.values[u], table.values[v]) {
            return false;
        }
        if !tuples::advance(&mut choice, edges.len()) {
            return true;
        }
    }
}

/// Decides `Pol(h) ⊨ cond`. On success the operations are read off the
/// indicator homomorphism and verified independently.
pub fn satisfies(
    h: &Digraph,
    cond: &MinorCondition,
    limits: &Limits,
) -> Result<Option<PolymorphismWitness>> {
    let ind = indicator(h, cond, limits)?;
    let Some(hom) = find_hom(&ind.graph, h, &[], &limits.search)? else {
        return Ok(None);
    };
    let witness = ind.pull_back(cond, hom.map());
    if !witness.verify(h, cond) {
        return Err(Error::InternalInconsistency(
            "pulled-back polymorphism failed verification".into(),
        ));
    }
    Ok(Some(witness))
}
