use num_traits::ToPrimitive;

use super::{Expr, Func, Symbol};
use crate::error::{Error, Result};

/// Floating-point values for the free symbols of an expression.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment {
    values: Vec<(Symbol, f64)>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, s: Symbol, v: f64) {
        match self.values.iter_mut().find(|(t, _)| *t == s) {
            Some(slot) => slot.1 = v,
            None => self.values.push((s, v)),
        }
    }

    pub fn with(mut self, s: Symbol, v: f64) -> Self {
        self.set(s, v);
        self
    }

    pub fn get(&self, s: &Symbol) -> Option<f64> {
        self.values.iter().find(|(t, _)| t == s).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Symbol, f64)> {
        self.values.iter()
    }
}

/// Evaluate `e` in floating point.
///
/// `ln` is evaluated as `ln|a|`, which obeys the same differentiation rules.
/// Division by a value that is zero up to rounding is a singular point.
pub fn eval_numeric(e: &Expr, at: &Assignment) -> Result<f64> {
    eval_with_tolerance(e, at, 1e-12).map(|(v, _)| v)
}

/// Value together with a magnitude bound: the same evaluation with every
/// cancellation replaced by addition of absolute values. A result is
/// numerically zero when `|value| <= tol * magnitude`.
pub(crate) fn eval_with_tolerance(e: &Expr, at: &Assignment, tol: f64) -> Result<(f64, f64)> {
    let singular = || Error::SingularPoint(e.to_string());
    let (v, m) = match e {
        Expr::Num(q) => {
            let v = q.to_f64().unwrap_or(f64::NAN);
            (v, v.abs())
        }
        Expr::Sym(s) => {
            let v = at
                .get(s)
                .ok_or_else(|| Error::Input(format!("no value for `{s}`")))?;
            (v, v.abs())
        }
        Expr::Add(ts) => {
            let mut v = 0.0;
            let mut m = 0.0;
            for t in ts {
                let (a, b) = eval_with_tolerance(t, at, tol)?;
                v += a;
                m += b;
            }
            (v, m)
        }
        Expr::Mul(fs) => {
            let mut v = 1.0;
            let mut m = 1.0;
            for f in fs {
                let (a, b) = eval_with_tolerance(f, at, tol)?;
                v *= a;
                m *= b;
            }
            (v, m)
        }
        Expr::Pow(b, n) => {
            let (a, mb) = eval_with_tolerance(b, at, tol)?;
            let n32 = i32::try_from(*n).map_err(|_| singular())?;
            if n32 < 0 && a.abs() <= tol * mb.max(f64::MIN_POSITIVE) {
                return Err(singular());
            }
            let v = a.powi(n32);
            let m = if n32 >= 0 {
                mb.powi(n32)
            } else {
                v.abs() * (mb / a.abs()).powi(-n32)
            };
            (v, m)
        }
        Expr::Div(a, b) => {
            let (va, ma) = eval_with_tolerance(a, at, tol)?;
            let (vb, mb) = eval_with_tolerance(b, at, tol)?;
            if vb.abs() <= tol * mb.max(f64::MIN_POSITIVE) {
                return Err(singular());
            }
            (va / vb, ma / vb.abs() + va.abs() * mb / (vb * vb))
        }
        Expr::Func(f, a) => {
            let (va, ma) = eval_with_tolerance(a, at, tol)?;
            match f {
                Func::Exp => {
                    let v = va.exp();
                    (v, v * (1.0 + ma))
                }
                Func::Ln => {
                    if va.abs() <= tol * ma.max(f64::MIN_POSITIVE) {
                        return Err(singular());
                    }
                    let v = va.abs().ln();
                    (v, v.abs() + ma / va.abs())
                }
                Func::Sin => (va.sin(), va.sin().abs() + ma),
                Func::Cos => (va.cos(), va.cos().abs() + ma),
            }
        }
    };
    if !v.is_finite() {
        return Err(singular());
    }
    Ok((v, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, ParseContext};

    #[test]
    fn evaluates_emden_right_side() {
        let e = parse_expr("-(3*y*y' + y^3)", &ParseContext::new()).unwrap();
        let at = Assignment::new()
            .with(Symbol::Y, 2.0)
            .with(Symbol::Yp, -1.0);
        assert_eq!(eval_numeric(&e, &at).unwrap(), -2.0);
    }

    #[test]
    fn pole_is_singular() {
        let e = parse_expr("1/(x-1)", &ParseContext::new()).unwrap();
        let at = Assignment::new().with(Symbol::X, 1.0);
        assert!(matches!(
            eval_numeric(&e, &at),
            Err(Error::SingularPoint(_))
        ));
    }

    #[test]
    fn cancellation_has_large_magnitude() {
        let e = parse_expr("(x+1)^2 - x^2 - 2*x - 1", &ParseContext::new()).unwrap();
        let at = Assignment::new().with(Symbol::X, 3.0);
        let (v, m) = eval_with_tolerance(&e, &at, 1e-12).unwrap();
        assert_eq!(v, 0.0);
        assert!(m >= 16.0);
    }
}
