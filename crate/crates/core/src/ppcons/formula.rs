use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// A variable of a pp formula. `X(i)` and `Y(i)` are the free source and
/// target coordinates (0-based), `E(j)` an existentially quantified one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    X(usize),
    Y(usize),
    E(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Edge(Term, Term),
    Eq(Term, Term),
    /// The term equals a fixed vertex of the base digraph.
    Const(Term, usize),
    False,
}

/// A primitive positive formula `φ(x_1..x_d, y_1..y_d)` with `m`
/// existential variables.
///
/// Surface syntax (1-based free coordinates, 0-based existentials):
/// `d=2; exists 1; E(x1,e0) & E(e0,y2) & x2=c3 & y1=c0`. `false` is an
/// atom; an empty conjunction is written `true`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PpFormula {
    dim: usize,
    existentials: usize,
    atoms: Vec<Atom>,
}

impl PpFormula {
    pub fn new(dim: usize, existentials: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFormula("dimension must be positive".into()));
        }
        let f = PpFormula {
            dim,
            existentials,
            atoms,
        };
        for atom in &f.atoms {
            let terms: &[Term] = match atom {
                Atom::Edge(s, t) | Atom::Eq(s, t) => &[*s, *t],
                Atom::Const(t, _) => &[*t],
                Atom::False => &[],
            };
            if let Some(t) = terms.iter().find(|t| !f.in_range(**t)) {
                return Err(Error::InvalidFormula(format!(
                    "variable {} out of range",
                    TermDisplay(*t)
                )));
            }
        }
        Ok(f)
    }

    fn in_range(&self, t: Term) -> bool {
        match t {
            Term::X(i) | Term::Y(i) => i < self.dim,
            Term::E(j) => j < self.existentials,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn existentials(&self) -> usize {
        self.existentials
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn has_false(&self) -> bool {
        self.atoms.contains(&Atom::False)
    }

    pub fn has_constants(&self) -> bool {
        self.atoms.iter().any(|a| matches!(a, Atom::Const(..)))
    }

    /// Dense index over all `2·dim + existentials` variables.
    pub(crate) fn slot(&self, t: Term) -> usize {
        match t {
            Term::X(i) => i,
            Term::Y(i) => self.dim + i,
            Term::E(j) => 2 * self.dim + j,
        }
    }

    pub(crate) fn variable_count(&self) -> usize {
        2 * self.dim + self.existentials
    }
}

struct TermDisplay(Term);

impl fmt::Display for TermDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Term::X(i) => write!(f, "x{}", i + 1),
            Term::Y(i) => write!(f, "y{}", i + 1),
            Term::E(j) => write!(f, "e{j}"),
        }
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}; exists {}; ", self.dim, self.existentials)?;
        if self.atoms.is_empty() {
            return f.write_str("true");
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            match *atom {
                Atom::Edge(s, t) => write!(f, "E({},{})", TermDisplay(s), TermDisplay(t))?,
                Atom::Eq(s, t) => write!(f, "{}={}", TermDisplay(s), TermDisplay(t))?,
                Atom::Const(t, c) => write!(f, "{}=c{c}", TermDisplay(t))?,
                Atom::False => f.write_str("false")?,
            }
        }
        Ok(())
    }
}

impl Serialize for PpFormula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

enum Operand {
    Var(Term),
    Constant(usize),
}

fn operand(text: &str, col: usize) -> Result<Operand> {
    let bad = || {
        Error::parse(
            1,
            col,
            format!("expected a variable or constant, found `{text}`"),
        )
    };
    let (head, rest) = text.split_at(text.chars().next().map_or(0, |c| c.len_utf8()));
    let num: usize = rest.parse().map_err(|_| bad())?;
    match head {
        "x" | "y" if num == 0 => Err(Error::parse(1, col, "free variables are numbered from 1")),
        "x" => Ok(Operand::Var(Term::X(num - 1))),
        "y" => Ok(Operand::Var(Term::Y(num - 1))),
        "e" => Ok(Operand::Var(Term::E(num))),
        "c" => Ok(Operand::Constant(num)),
        _ => Err(bad()),
    }
}

impl FromStr for PpFormula {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        // positions are reported as columns of a single logical line
        let flat: String = text
            .chars()
            .map(|c| if c == '\n' { ' ' } else { c })
            .collect();
        let mut dim = None;
        let mut existentials = 0;
        let mut atoms = Vec::new();
        let mut col = 1;
        for section in flat.split(';') {
            let lead = section.len() - section.trim_start().len();
            let body = section.trim();
            let at = col + lead;
            col += section.len() + 1;
            if body.is_empty() {
                continue;
            }
            if let Some(d) = body.strip_prefix("d=").or_else(|| body.strip_prefix("d =")) {
                let d = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(1, at, "bad dimension"))?;
                dim = Some(d);
            } else if let Some(m) = body.strip_prefix("exists") {
                existentials = m
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(1, at, "bad existential count"))?;
            } else {
                let mut acol = at;
                for piece in body.split('&') {
                    let lead = piece.len() - piece.trim_start().len();
                    let a = piece.trim();
                    let here = acol + lead;
                    acol += piece.len() + 1;
                    atoms.push(parse_atom(a, here)?);
                }
            }
        }
        let dim = dim.ok_or_else(|| Error::parse(1, 1, "missing `d=<dimension>`"))?;
        PpFormula::new(dim, existentials, atoms.into_iter().flatten().collect())
    }
}

fn parse_atom(a: &str, col: usize) -> Result<Option<Atom>> {
    let compact: String = a.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "false" => return Ok(Some(Atom::False)),
        "true" => return Ok(None),
        _ => {}
    }
    if let Some(inner) = compact.strip_prefix("E(").and_then(|r| r.strip_suffix(')')) {
        let (s, t) = inner
            .split_once(',')
            .ok_or_else(|| Error::parse(1, col, "expected `E(s,t)`"))?;
        return match (operand(s, col)?, operand(t, col)?) {
            (Operand::Var(s), Operand::Var(t)) => Ok(Some(Atom::Edge(s, t))),
            _ => Err(Error::parse(1, col, "edge atoms take variables only")),
        };
    }
    let (l, r) = compact
        .split_once('=')
        .ok_or_else(|| Error::parse(1, col, format!("cannot read atom `{a}`")))?;
    match (operand(l, col)?, operand(r, col)?) {
        (Operand::Var(s), Operand::Var(t)) => Ok(Some(Atom::Eq(s, t))),
        (Operand::Var(t), Operand::Constant(c)) | (Operand::Constant(c), Operand::Var(t)) => {
            Ok(Some(Atom::Const(t, c)))
        }
        (Operand::Constant(c), Operand::Constant(d)) => {
            Ok(if c == d { None } else { Some(Atom::False) })
        }
    }
}
