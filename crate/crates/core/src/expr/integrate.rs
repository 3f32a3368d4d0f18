//! Antiderivatives of sums of `c · v^n · exp(αv+β) · trig(γv+δ)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{is_zero, normalize, Expr, Func, Symbol};
use crate::error::{Error, Result};

/// Antiderivative of `f` with respect to `v`, checked by differentiation.
pub fn integrate_rulebased(f: &Expr, v: &Symbol) -> Result<Expr> {
    let nf = normalize(f)?;
    if nf.is_zero() {
        return Ok(Expr::zero());
    }
    let canon = nf.to_expr();
    let (num, den) = match &canon {
        Expr::Div(a, b) => ((**a).clone(), (**b).clone()),
        other => (other.clone(), Expr::one()),
    };
    // denominator: free of v, or a pure power of v
    let (den_const, den_pow) = if !den.depends_on(v) {
        (den, 0)
    } else {
        match &den {
            Expr::Sym(s) if s == v => (Expr::one(), 1),
            Expr::Pow(b, k) if matches!(&**b, Expr::Sym(s) if s == v) => (Expr::one(), *k),
            _ => return Err(Error::NotIntegrable(canon.to_string())),
        }
    };
    let terms = match num {
        Expr::Add(ts) => ts,
        t => vec![t],
    };
    let mut out = Vec::with_capacity(terms.len());
    for t in &terms {
        out.push(
            integrate_term(t, v, den_pow).map_err(|_| Error::NotIntegrable(canon.to_string()))?,
        );
    }
    let result = normalize(&(Expr::sum(out) / den_const))?.to_expr();
    verify_antiderivative(&result, f, v)?;
    Ok(result)
}

/// `Ok` when `d/dv big_f - f` is zero.
pub fn verify_antiderivative(big_f: &Expr, f: &Expr, v: &Symbol) -> Result<()> {
    let residual = big_f.diff(v) - f.clone();
    if is_zero(&residual)?.holds() {
        Ok(())
    } else {
        Err(Error::AntiderivativeMismatch(
            normalize(&residual)?.to_expr().to_string(),
        ))
    }
}

struct Term {
    coeff: Vec<Expr>,
    power: i64,
    exp_arg: Option<Expr>,
    trig: Option<(Func, Expr)>,
}

fn split_term(t: &Expr, v: &Symbol) -> Option<Term> {
    let factors = match t {
        Expr::Mul(fs) => fs.clone(),
        other => vec![other.clone()],
    };
    let mut term = Term {
        coeff: Vec::new(),
        power: 0,
        exp_arg: None,
        trig: None,
    };
    for f in factors {
        if !f.depends_on(v) {
            term.coeff.push(f);
            continue;
        }
        match &f {
            Expr::Sym(s) if s == v => term.power += 1,
            Expr::Pow(b, k) if matches!(&**b, Expr::Sym(s) if s == v) => term.power += k,
            Expr::Func(Func::Exp, a) if term.exp_arg.is_none() => {
                term.exp_arg = Some((**a).clone())
            }
            Expr::Func(g @ (Func::Sin | Func::Cos), a) if term.trig.is_none() => {
                term.trig = Some((*g, (**a).clone()))
            }
            _ => return None,
        }
    }
    Some(term)
}

/// `arg = slope·v + rest` with `slope` free of `v`.
fn linear_in(arg: &Expr, v: &Symbol) -> Option<(Expr, Expr)> {
    let slope = normalize(&arg.diff(v)).ok()?.to_expr();
    if slope.depends_on(v) {
        return None;
    }
    let rest = normalize(&(arg.clone() - slope.clone() * Expr::Sym(v.clone())))
        .ok()?
        .to_expr();
    Some((slope, rest))
}

fn falling(n: i64, j: i64) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

fn integrate_term(t: &Expr, v: &Symbol, den_pow: i64) -> Result<Expr> {
    let fail = || Error::NotIntegrable(t.to_string());
    let term = split_term(t, v).ok_or_else(fail)?;
    let n = term.power - den_pow;
    let coeff = Expr::product(term.coeff.clone());
    let var = Expr::Sym(v.clone());
    let (alpha, exp_factor) = match &term.exp_arg {
        Some(a) => {
            let (slope, _) = linear_in(a, v).ok_or_else(fail)?;
            (slope, Expr::Func(Func::Exp, Box::new(a.clone())))
        }
        None => (Expr::zero(), Expr::one()),
    };
    let (gamma, theta) = match &term.trig {
        Some((_, a)) => (linear_in(a, v).ok_or_else(fail)?.0, a.clone()),
        None => (Expr::zero(), Expr::zero()),
    };
    if term.trig.is_none() && alpha.is_zero_literal() {
        // plain power
        return Ok(if n == -1 {
            coeff * var.ln()
        } else {
            coeff * var.pow(n + 1) / Expr::int(n + 1)
        });
    }
    if n < 0 {
        return Err(fail());
    }
    // ∫ v^n e^{(α+iγ)v} = e^{(α+iγ)v} Σ_j (-1)^j n!/(n-j)! v^{n-j} / (α+iγ)^{j+1}
    let rho = alpha.clone().pow(2) + gamma.clone().pow(2);
    let mut sum = Vec::new();
    for j in 0..=n {
        let c = Expr::Num(BigRational::from_integer(
            falling(n, j) * if j % 2 == 0 { 1 } else { -1 },
        ));
        let vp = var.clone().pow(n - j);
        let scale = Expr::product([c, vp]) / rho.clone().pow(j + 1);
        // (α - iγ)^{j+1} = re - i·im
        let (re, im) = complex_pow(&alpha, &(-gamma.clone()), (j + 1) as u32);
        let body = match &term.trig {
            None => re,
            Some((Func::Cos, _)) => re * theta.clone().cos() - im * theta.clone().sin(),
            Some((Func::Sin, _)) => re * theta.clone().sin() + im * theta.clone().cos(),
            _ => unreachable!(),
        };
        sum.push(scale * body);
    }
    Ok(coeff * exp_factor * Expr::sum(sum))
}

/// Real and imaginary parts of `(a + i b)^k`.
fn complex_pow(a: &Expr, b: &Expr, k: u32) -> (Expr, Expr) {
    let mut re = Expr::one();
    let mut im = Expr::zero();
    for _ in 0..k {
        let nr = re.clone() * a.clone() - im.clone() * b.clone();
        let ni = re * b.clone() + im * a.clone();
        re = nr;
        im = ni;
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, ParseContext};

    fn p(s: &str) -> Expr {
        parse_expr(s, &ParseContext::with_params(["b", "k"])).unwrap()
    }

    fn check(f: &str) {
        let f = p(f);
        let big_f = integrate_rulebased(&f, &Symbol::X).unwrap();
        // independent check: numeric derivative by central differences
        let h = 1e-5;
        for x0 in [0.3, 1.1, 2.7] {
            let at = |x: f64| {
                crate::expr::eval_numeric(
                    &big_f,
                    &crate::expr::Assignment::new()
                        .with(Symbol::X, x)
                        .with(Symbol::param("b"), 1.5)
                        .with(Symbol::param("k"), 0.7),
                )
                .unwrap()
            };
            let fd = (at(x0 + h) - at(x0 - h)) / (2.0 * h);
            let fv = crate::expr::eval_numeric(
                &f,
                &crate::expr::Assignment::new()
                    .with(Symbol::X, x0)
                    .with(Symbol::param("b"), 1.5)
                    .with(Symbol::param("k"), 0.7),
            )
            .unwrap();
            assert!(
                (fd - fv).abs() < 1e-6 * (1.0 + fv.abs()),
                "{f}: {fd} vs {fv}"
            );
        }
    }

    #[test]
    fn polynomial_and_reciprocal() {
        check("3*x^2 + k*x - 1");
        check("1/x + x^-3");
    }

    #[test]
    fn exponential_polynomial() {
        check("x^2*exp(2*x)");
        check("exp(-b*x/2)*(x + k)");
    }

    #[test]
    fn trig_with_exp() {
        check("x*cos(3*x)");
        check("exp(x)*sin(2*x + 1)");
        check("x^2*exp(-x)*cos(x)");
    }

    #[test]
    fn unsupported_is_reported() {
        assert!(matches!(
            integrate_rulebased(&p("exp(x^2)"), &Symbol::X),
            Err(Error::NotIntegrable(_))
        ));
        assert!(matches!(
            integrate_rulebased(&p("1/(x+1)"), &Symbol::X),
            Err(Error::NotIntegrable(_))
        ));
    }
}
