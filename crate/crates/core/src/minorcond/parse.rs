//! The condition DSL.
//!
//! ```text
//! condition := eq (';' eq)* [';']
//! eq        := term '=' term ('=' term)*
//! term      := ident '(' ident (',' ident)* ')'
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Within one
//! equation (a whole chain `a = b = c`), variables are numbered by first
//! occurrence; a chain expands into the equations `a = b`, `b = c`.

use super::{Equation, MinorCondition, MinorMap, Side, Symbol};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Semi,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some((i, ch)) = chars.next() {
            let at = |tok| Token {
                tok,
                line: lineno + 1,
                column: i + 1,
            };
            match ch {
                c if c.is_whitespace() => {}
                '(' => out.push(at(Tok::LParen)),
                ')' => out.push(at(Tok::RParen)),
                ',' => out.push(at(Tok::Comma)),
                '=' => out.push(at(Tok::Eq)),
                ';' => out.push(at(Tok::Semi)),
                c if c.is_alphanumeric() || c == '_' => {
                    let mut end = i + c.len_utf8();
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_alphanumeric() || d == '_' {
                            end = j + d.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push(at(Tok::Ident(line[i..end].to_string())));
                }
                c => {
                    return Err(Error::parse(
                        lineno + 1,
                        i + 1,
                        format!("unexpected character `{c}`"),
                    ))
                }
            }
        }
    }
    Ok(out)
}

struct Term {
    symbol: String,
    args: Vec<String>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.here();
        Error::parse(line, column, message)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let symbol = self.ident("a function symbol")?;
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.ident("a variable")?];
        loop {
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                    args.push(self.ident("a variable")?);
                }
                Some(Tok::RParen) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::LParen) => {
                    return Err(self.error("nested terms are not supported (height 1 only)"))
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
        Ok(Term { symbol, args })
    }

    fn chain(&mut self) -> Result<Vec<Term>> {
        let mut terms = vec![self.term()?];
        self.expect(Tok::Eq, "`=`")?;
        terms.push(self.term()?);
        while self.peek() == Some(&Tok::Eq) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(terms)
    }
}

pub fn parse_condition(text: &str) -> Result<MinorCondition> {
    let toks = lex(text)?;
    let end = (
        text.lines().count().max(1),
        text.lines().last().map_or(1, |l| l.len() + 1),
    );
    let mut p = Parser { toks, pos: 0, end };
    let mut symbols: Vec<Symbol> = Vec::new();
    let mut equations = Vec::new();

    while p.peek().is_some() {
        let terms = p.chain()?;
        let mut vars: Vec<&str> = Vec::new();
        for t in &terms {
            for a in &t.args {
                if !vars.contains(&a.as_str()) {
                    vars.push(a);
                }
            }
        }
        let mut sides = Vec::with_capacity(terms.len());
        for t in &terms {
            let symbol = match symbols.iter().position(|s| s.name == t.symbol) {
                Some(i) if symbols[i].arity != t.args.len() => {
                    return Err(Error::ArityMismatch {
                        symbol: t.symbol.clone(),
                        first: symbols[i].arity,
                        second: t.args.len(),
                    });
                }
                Some(i) => i,
                None => {
                    symbols.push(Symbol {
                        name: t.symbol.clone(),
                        arity: t.args.len(),
                    });
                    symbols.len() - 1
                }
            };
            let table = t
                .args
                .iter()
                .map(|a| vars.iter().position(|v| v == a).unwrap())
                .collect();
            sides.push(Side {
                symbol,
                map: MinorMap::new(table, vars.len())?,
            });
        }
        for pair in sides.windows(2) {
            equations.push(Equation {
                lhs: pair[0].clone(),
                rhs: pair[1].clone(),
            });
        }
        match p.peek() {
            Some(Tok::Semi) => {
                while p.peek() == Some(&Tok::Semi) {
                    p.pos += 1;
                }
            }
            None => {}
            Some(_) => return Err(p.error("expected `;` or end of input")),
        }
    }
    if equations.is_empty() {
        return Err(p.error("expected at least one equation"));
    }
    MinorCondition::new(symbols, equations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minorcond::Builtin;

    fn tables(c: &MinorCondition) -> Vec<(Vec<usize>, Vec<usize>)> {
        c.equations()
            .iter()
            .map(|e| (e.lhs.map.table().to_vec(), e.rhs.map.table().to_vec()))
            .collect()
    }

    #[test]
    fn maltsev_compiles_to_rho_tau_sigma() {
        let c = parse_condition("f(x,y,y)=f(x,x,x); f(x,x,x)=f(y,y,x)").unwrap();
        assert_eq!(c.symbols().len(), 1);
        // ρ = (1,2,2), τ = (1,1,1), σ = (2,2,1), written 0-based
        assert_eq!(
            tables(&c),
            vec![
                (vec![0, 1, 1], vec![0, 0, 0]),
                (vec![0, 0, 0], vec![1, 1, 0])
            ]
        );
        assert!(c.equations().iter().all(|e| e.variables() == 2));
    }

    #[test]
    fn commutativity_is_sigma_two() {
        let c = parse_condition("f(x,y)=f(y,x)").unwrap();
        assert_eq!(c, Builtin::Cyclic(2).condition().unwrap());
    }

    #[test]
    fn constant_condition() {
        let c = parse_condition("f(x)=f(y)").unwrap();
        assert_eq!(c, Builtin::Constant.condition().unwrap());
    }

    #[test]
    fn chains_expand_pairwise() {
        let c = parse_condition("f(x,x,y)=f(y,y,x)=f(x,y,y)=f(y,x,x)").unwrap();
        assert_eq!(c, Builtin::Fourfold.condition().unwrap());
    }

    #[test]
    fn comments_whitespace_and_several_symbols() {
        let text = "# Siggers-like\n  g( a , b ) = h(b,a,a) ;\n h(a,a,a)=g(a,a); # trailing\n";
        let c = parse_condition(text).unwrap();
        let names: Vec<_> = c
            .symbols()
            .iter()
            .map(|s| (s.name.as_str(), s.arity))
            .collect();
        assert_eq!(names, vec![("g", 2), ("h", 3)]);
        assert_eq!(c.equations()[1].variables(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_condition("f(x,y)=f(x)"),
            Err(Error::ArityMismatch {
                first: 2,
                second: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_condition("f(x,y)=g(y,x"),
            Err(Error::Parse {
                line: 1,
                column: 13,
                ..
            })
        ));
        assert!(matches!(
            parse_condition("f(g(x))=f(x)"),
            Err(Error::Parse {
                line: 1,
                column: 4,
                ..
            })
        ));
        assert!(matches!(
            parse_condition("f(x)\n=f(y) f(x)=f(x)"),
            Err(Error::Parse {
                line: 2,
                column: 7,
                ..
            })
        ));
        assert!(matches!(
            parse_condition("f(x)=f(y) $"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_condition("  # nothing\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_condition("f()=f(x)"),
            Err(Error::Parse { .. })
        ));
    }
}
