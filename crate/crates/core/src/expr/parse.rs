//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' '-'? integer)?
//! base   := integer | name | "y'" | "y''" | '(' expr ')' | func '(' expr ')'
//! func   := exp | ln | sin | cos
//! ```
//!
//! `integer / integer` folds to a rational constant, so `2/3` is a number.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Expr, Func, Symbol};
use crate::error::{Error, Result};

/// Names the parser accepts besides `x`, `y` and `y'`.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    params: BTreeSet<String>,
    allow_ypp: bool,
}

impl ParseContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_params<I, S>(params: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut ctx = Self::new();
        for p in params {
            ctx.add_param(p.as_ref());
        }
        ctx
    }

    pub fn add_param(&mut self, name: &str) {
        self.params.insert(name.to_string());
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(String::as_str)
    }

    /// Accept `y''` (equation input).
    pub fn allowing_second_derivative(mut self) -> Self {
        self.allow_ypp = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String, usize),
    Op(char),
}

struct Lexer;

impl Lexer {
    fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: "floating-point literals are not accepted".into(),
                    });
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = text[start..i].to_string();
                let mut primes = 0;
                while i < bytes.len() && bytes[i] == b'\'' {
                    primes += 1;
                    i += 1;
                }
                out.push((start, Tok::Name(name, primes)));
            } else if "+-*/^()".contains(c) {
                out.push((i, Tok::Op(c)));
                i += 1;
            } else {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'a ParseContext,
}

/// Parse `text` into an expression, resolving names against `ctx`.
pub fn parse_expr(text: &str, ctx: &ParseContext) -> Result<Expr> {
    let toks = Lexer::tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        ctx,
    };
    if p.toks.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let e = p.expr()?;
    if let Some((at, t)) = p.toks.get(p.pos) {
        return Err(Error::Syntax {
            pos: *at,
            msg: format!("unexpected token {t:?}"),
        });
    }
    Ok(e)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: self.here(),
                msg: format!("expected `{c}`"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let first = self.term()?;
        let mut terms = vec![if negate { -first } else { first }];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let rhs = self.factor()?;
                acc = acc * rhs;
            } else if self.eat('/') {
                let rhs = self.factor()?;
                acc = acc / rhs;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.eat('^') {
            let at = self.here();
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let n: i64 = i64::try_from(n).map_err(|_| Error::Syntax {
                        pos: at,
                        msg: "exponent too large".into(),
                    })?;
                    Ok(base.pow(if neg { -n } else { n }))
                }
                _ => Err(Error::NonIntegerExponent { pos: at }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Num(BigRational::from_integer(n)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Name(name, primes)) => {
                self.pos += 1;
                if let Some(func) = Func::from_name(&name) {
                    if primes > 0 {
                        return Err(Error::Syntax {
                            pos: at,
                            msg: format!("`{name}` cannot carry primes"),
                        });
                    }
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::Func(func, Box::new(arg)));
                }
                self.symbol(&name, primes, at).map(Expr::Sym)
            }
            Some(t) => Err(Error::Syntax {
                pos: at,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(Error::Syntax {
                pos: at,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn symbol(&self, name: &str, primes: usize, at: usize) -> Result<Symbol> {
        match (name, primes) {
            ("x", 0) => Ok(Symbol::X),
            ("y", 0) => Ok(Symbol::Y),
            ("y", 1) => Ok(Symbol::Yp),
            ("y", 2) if self.ctx.allow_ypp => Ok(Symbol::Ypp),
            ("y", _) => Err(Error::Syntax {
                pos: at,
                msg: format!("derivative of order {primes} not allowed here"),
            }),
            (_, 0) if self.ctx.params.contains(name) => Ok(Symbol::param(name)),
            (_, 0) => Err(Error::UndeclaredSymbol(name.to_string())),
            _ => Err(Error::Syntax {
                pos: at,
                msg: format!("`{name}` cannot carry primes"),
            }),
        }
    }
}
