//! Symbolic expressions over `x`, `y`, `y'`, `y''`, declared parameters,
//! exact rational constants and the transcendental kernels `exp`, `ln`,
//! `sin`, `cos`.

mod diff;
mod eval;
mod integrate;
mod normal;
mod parse;
mod poly;
mod render;
mod zero;

use std::collections::BTreeSet;
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use eval::{eval_numeric, Assignment};
pub use integrate::{integrate_rulebased, verify_antiderivative};
pub use normal::{
    canonical, coefficients_in, linear_relation_rows, normalize, normalize_many, NormalForm,
};
pub use parse::{parse_expr, ParseContext};
pub use poly::{Monomial, Poly};
pub use zero::{is_zero, is_zero_seeded, sample_points, ZeroVerdict, DEFAULT_SEED};

pub(crate) use eval::eval_with_tolerance;
pub(crate) use zero::random_point;

/// A free symbol of an expression.
///
/// The derived ordering is the variable order used by normal forms:
/// `x < y < y' < y'' < parameters (alphabetical)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    X,
    Y,
    /// First derivative `y'`.
    Yp,
    /// Second derivative `y''`; only accepted when parsing equations.
    Ypp,
    Param(Arc<str>),
}

impl Symbol {
    pub fn param(name: &str) -> Symbol {
        Symbol::Param(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        match self {
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::Yp => "y'",
            Symbol::Ypp => "y''",
            Symbol::Param(p) => p,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Transcendental kernel heads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }
}

/// Immutable expression tree.
///
/// Exponents are always integers. Trees produced by the parser are stable
/// under render/re-parse; trees produced by the arithmetic operators are
/// lightly simplified (constant folding, flattening, identity removal) but
/// otherwise not canonical. Use [`normalize`] for canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(BigRational),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Div(Box<Expr>, Box<Expr>),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Num(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::Num(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn x() -> Expr {
        Expr::Sym(Symbol::X)
    }

    pub fn y() -> Expr {
        Expr::Sym(Symbol::Y)
    }

    pub fn yp() -> Expr {
        Expr::Sym(Symbol::Yp)
    }

    pub fn param(name: &str) -> Expr {
        Expr::Sym(Symbol::param(name))
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self {
            Expr::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Num(q) if q.is_zero())
    }

    pub fn is_one_literal(&self) -> bool {
        matches!(self, Expr::Num(q) if q.is_one())
    }

    /// Sum with constant folding and flattening of nested sums.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut constant = BigRational::zero();
        let mut out = Vec::new();
        for t in terms {
            match t {
                Expr::Num(q) => constant += q,
                Expr::Add(inner) => {
                    for u in inner {
                        match u {
                            Expr::Num(q) => constant += q,
                            other => out.push(other),
                        }
                    }
                }
                other => out.push(other),
            }
        }
        if !constant.is_zero() {
            out.push(Expr::Num(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::Add(out),
        }
    }

    /// Product with constant folding; the numeric factor, if any, leads.
    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut constant = BigRational::one();
        let mut out = Vec::new();
        for f in factors {
            match f {
                Expr::Num(q) => constant *= q,
                Expr::Mul(inner) => {
                    for u in inner {
                        match u {
                            Expr::Num(q) => constant *= q,
                            other => out.push(other),
                        }
                    }
                }
                other => out.push(other),
            }
        }
        if constant.is_zero() {
            return Expr::zero();
        }
        if out.is_empty() {
            return Expr::Num(constant);
        }
        if !constant.is_one() {
            out.insert(0, Expr::Num(constant));
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Mul(out)
        }
    }

    pub fn pow(self, n: i64) -> Expr {
        match (self, n) {
            (_, 0) => Expr::one(),
            (e, 1) => e,
            (Expr::Num(q), n) if !(q.is_zero() && n < 0) => Expr::Num(rational_pow(&q, n)),
            (Expr::Pow(b, m), n) => match m.checked_mul(n) {
                Some(k) => Expr::Pow(b, k),
                None => Expr::Pow(Box::new(Expr::Pow(b, m)), n),
            },
            (e, n) => Expr::Pow(Box::new(e), n),
        }
    }

    pub fn exp(self) -> Expr {
        if self.is_zero_literal() {
            return Expr::one();
        }
        Expr::Func(Func::Exp, Box::new(self))
    }

    pub fn ln(self) -> Expr {
        if self.is_one_literal() {
            return Expr::zero();
        }
        Expr::Func(Func::Ln, Box::new(self))
    }

    pub fn sin(self) -> Expr {
        if self.is_zero_literal() {
            return Expr::zero();
        }
        Expr::Func(Func::Sin, Box::new(self))
    }

    pub fn cos(self) -> Expr {
        if self.is_zero_literal() {
            return Expr::one();
        }
        Expr::Func(Func::Cos, Box::new(self))
    }

    pub fn apply(func: Func, arg: Expr) -> Expr {
        match func {
            Func::Exp => arg.exp(),
            Func::Ln => arg.ln(),
            Func::Sin => arg.sin(),
            Func::Cos => arg.cos(),
        }
    }

    /// All free symbols, including those inside kernel arguments.
    pub fn free_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Add(v) | Expr::Mul(v) => v.iter().for_each(|e| e.collect_symbols(out)),
            Expr::Pow(b, _) => b.collect_symbols(out),
            Expr::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Func(_, a) => a.collect_symbols(out),
        }
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Sym(t) => t == s,
            Expr::Add(v) | Expr::Mul(v) => v.iter().any(|e| e.depends_on(s)),
            Expr::Pow(b, _) => b.depends_on(s),
            Expr::Div(a, b) => a.depends_on(s) || b.depends_on(s),
            Expr::Func(_, a) => a.depends_on(s),
        }
    }

    /// Replace every occurrence of `s` by `value`.
    pub fn subst(&self, s: &Symbol, value: &Expr) -> Expr {
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Sym(t) if t == s => value.clone(),
            Expr::Sym(_) => self.clone(),
            Expr::Add(v) => Expr::sum(v.iter().map(|e| e.subst(s, value))),
            Expr::Mul(v) => Expr::product(v.iter().map(|e| e.subst(s, value))),
            Expr::Pow(b, n) => b.subst(s, value).pow(*n),
            Expr::Div(a, b) => a.subst(s, value) / b.subst(s, value),
            Expr::Func(f, a) => Expr::apply(*f, a.subst(s, value)),
        }
    }

    /// Simultaneous substitution of several symbols.
    pub fn subst_all(&self, map: &[(Symbol, Expr)]) -> Expr {
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Sym(t) => map
                .iter()
                .find(|(s, _)| s == t)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| self.clone()),
            Expr::Add(v) => Expr::sum(v.iter().map(|e| e.subst_all(map))),
            Expr::Mul(v) => Expr::product(v.iter().map(|e| e.subst_all(map))),
            Expr::Pow(b, n) => b.subst_all(map).pow(*n),
            Expr::Div(a, b) => a.subst_all(map) / b.subst_all(map),
            Expr::Func(f, a) => Expr::apply(*f, a.subst_all(map)),
        }
    }

    /// Number of nodes; used to bound work in tests and diagnostics.
    pub fn size(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Sym(_) => 1,
            Expr::Add(v) | Expr::Mul(v) => 1 + v.iter().map(Expr::size).sum::<usize>(),
            Expr::Pow(b, _) => 1 + b.size(),
            Expr::Div(a, b) => 1 + a.size() + b.size(),
            Expr::Func(_, a) => 1 + a.size(),
        }
    }
}

pub(crate) fn rational_pow(q: &BigRational, n: i64) -> BigRational {
    let base = if n < 0 { q.recip() } else { q.clone() };
    num_traits::pow(base, n.unsigned_abs() as usize)
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Expr {
        Expr::Num(q)
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Expr {
        Expr::Sym(s)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum([self, -rhs])
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs])
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        match (&self, &rhs) {
            (_, Expr::Num(q)) if q.is_zero() => Expr::Div(Box::new(self), Box::new(rhs)),
            (_, Expr::Num(q)) if q.is_one() => self,
            (Expr::Num(a), Expr::Num(b)) if !b.is_zero() => Expr::Num(a / b),
            (_, Expr::Num(b)) if !b.is_zero() => Expr::product([Expr::Num(b.recip()), self]),
            (Expr::Num(a), _) if a.is_zero() => Expr::zero(),
            _ => Expr::Div(Box::new(self), Box::new(rhs)),
        }
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Num(q) => Expr::Num(-q),
            Expr::Mul(mut v) => {
                if let Some(Expr::Num(q)) = v.first_mut() {
                    *q = -q.clone();
                    if q.is_one() {
                        v.remove(0);
                        return if v.len() == 1 {
                            v.pop().unwrap()
                        } else {
                            Expr::Mul(v)
                        };
                    }
                    Expr::Mul(v)
                } else {
                    v.insert(0, Expr::int(-1));
                    Expr::Mul(v)
                }
            }
            Expr::Add(v) => Expr::sum(v.into_iter().map(|t| -t)),
            other => Expr::Mul(vec![Expr::int(-1), other]),
        }
    }
}

macro_rules! ref_binop {
    ($tr:ident, $m:ident) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                ops::$tr::$m(self.clone(), rhs.clone())
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                ops::$tr::$m(self, rhs.clone())
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                ops::$tr::$m(self.clone(), rhs)
            }
        }
    };
}

ref_binop!(Add, add);
ref_binop!(Sub, sub);
ref_binop!(Mul, mul);
ref_binop!(Div, div);

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}
