//! Second-order ODEs in the form `y'' + F3·y'^3 + F2·y'^2 + F1·y' + F = 0`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{canonical, normalize, parse_expr, Expr, ParseContext, Symbol};

/// Coefficients of `y'' + F3 y'^3 + F2 y'^2 + F1 y' + F = 0`, each in
/// canonical form and free of `y'`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicOde {
    pub f3: Expr,
    pub f2: Expr,
    pub f1: Expr,
    pub f0: Expr,
    /// Coefficient of `y''` divided out of the input, when not constant.
    pub leading: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffTexts {
    pub f3: String,
    pub f2: String,
    pub f1: String,
    pub f0: String,
}

impl CubicOde {
    /// Build from coefficient expressions; each is normalized.
    pub fn new(f3: Expr, f2: Expr, f1: Expr, f0: Expr) -> Result<CubicOde> {
        let coeffs = [f3, f2, f1, f0];
        for c in &coeffs {
            if c.depends_on(&Symbol::Yp) || c.depends_on(&Symbol::Ypp) {
                return Err(Error::Input(format!(
                    "coefficient `{c}` depends on y' or y''"
                )));
            }
        }
        let [f3, f2, f1, f0] = coeffs;
        Ok(CubicOde {
            f3: canonical(&f3)?,
            f2: canonical(&f2)?,
            f1: canonical(&f1)?,
            f0: canonical(&f0)?,
            leading: None,
        })
    }

    /// `y'' = 0`.
    pub fn free_particle() -> CubicOde {
        CubicOde {
            f3: Expr::zero(),
            f2: Expr::zero(),
            f1: Expr::zero(),
            f0: Expr::zero(),
            leading: None,
        }
    }

    /// Coefficients `[F3, F2, F1, F]`.
    pub fn coeffs(&self) -> [&Expr; 4] {
        [&self.f3, &self.f2, &self.f1, &self.f0]
    }

    pub fn texts(&self) -> CoeffTexts {
        CoeffTexts {
            f3: self.f3.to_string(),
            f2: self.f2.to_string(),
            f1: self.f1.to_string(),
            f0: self.f0.to_string(),
        }
    }

    /// Cubic polynomial `F3 y'^3 + F2 y'^2 + F1 y' + F`.
    pub fn cubic(&self) -> Expr {
        let p = Expr::yp();
        Expr::sum([
            self.f3.clone() * p.clone().pow(3),
            self.f2.clone() * p.clone().pow(2),
            self.f1.clone() * p,
            self.f0.clone(),
        ])
    }

    /// Right-hand side `f` of `y'' = f`.
    pub fn rhs(&self) -> Expr {
        -self.cubic()
    }

    /// Left-hand side `y'' + F3 y'^3 + ...`.
    pub fn lhs(&self) -> Expr {
        Expr::Sym(Symbol::Ypp) + self.cubic()
    }

    /// `D_x e = e_x + y' e_y + f e_{y'}` along solutions.
    pub fn total_derivative(&self, e: &Expr) -> Expr {
        let mut terms = vec![e.dx(), Expr::yp() * e.dy()];
        if e.depends_on(&Symbol::Yp) {
            terms.push(self.rhs() * e.dyp());
        }
        Expr::sum(terms)
    }

    /// Free symbols other than `x`, `y`, `y'`.
    pub fn params(&self) -> Vec<String> {
        let mut out = std::collections::BTreeSet::new();
        for c in self.coeffs() {
            for s in c.free_symbols() {
                if let Symbol::Param(p) = s {
                    out.insert(p.to_string());
                }
            }
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for CubicOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = 0",
            canonical(&self.lhs()).unwrap_or_else(|_| self.lhs())
        )
    }
}

/// Parse `lhs = rhs` (or a bare right-hand side of `y'' = f`) into
/// `lhs - rhs`.
pub fn parse_equation(text: &str, ctx: &ParseContext) -> Result<Expr> {
    let ctx = ctx.clone().allowing_second_derivative();
    let parts: Vec<&str> = text.split('=').collect();
    match parts.as_slice() {
        [rhs] => Ok(Expr::Sym(Symbol::Ypp) - parse_expr(rhs, &ctx)?),
        [l, r] => {
            let lhs = parse_expr(l, &ctx).map_err(|e| shift_pos(e, 0))?;
            let rhs = parse_expr(r, &ctx).map_err(|e| shift_pos(e, l.len() + 1))?;
            Ok(lhs - rhs)
        }
        _ => Err(Error::Input("equation must contain exactly one `=`".into())),
    }
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: pos + by, msg },
        Error::NonIntegerExponent { pos } => Error::NonIntegerExponent { pos: pos + by },
        other => other,
    }
}

/// Split `M y'' + N = 0` into the cubic form by dividing by `M`.
pub fn extract_cubic(eq: &Expr) -> Result<CubicOde> {
    let ypp = Symbol::Ypp;
    let m = canonical(&eq.diff(&ypp))?;
    if m.depends_on(&ypp) {
        return Err(Error::NotCubic("equation is not linear in y''".into()));
    }
    if m.is_zero_literal() {
        return Err(Error::DegenerateLeading);
    }
    let n = eq.subst(&ypp, &Expr::zero());
    let g = normalize(&(n / m.clone()))?;
    let coeffs = g
        .numerator_coeffs_in(&Symbol::Yp)
        .ok_or_else(|| Error::NotCubic("not polynomial in y'".into()))?;
    if coeffs.len() > 4 {
        return Err(Error::NotCubic(format!(
            "degree {} in y'",
            coeffs.len() - 1
        )));
    }
    let den = g.denominator_expr();
    let mut c: Vec<Expr> = coeffs
        .into_iter()
        .map(|k| canonical(&(k / den.clone())))
        .collect::<Result<_>>()?;
    c.resize(4, Expr::zero());
    let leading = if m.free_symbols().is_empty() {
        None
    } else {
        Some(m)
    };
    Ok(CubicOde {
        f3: c[3].clone(),
        f2: c[2].clone(),
        f1: c[1].clone(),
        f0: c[0].clone(),
        leading,
    })
}

/// Parse and extract in one step.
pub fn parse_ode(text: &str, ctx: &ParseContext) -> Result<CubicOde> {
    extract_cubic(&parse_equation(text, ctx)?)
}
