//! The class
//!
//! ```text
//! y'' + (a y + b) y' + (a²/9) y³ + ((a' + a b)/3) y² + c y + d = 0,   a ≠ 0
//! ```
//!
//! with `a, b, c, d` functions of `x`: detection, the auxiliary linear ODEs,
//! auxiliary pairs from solutions of the third-order ODE, transformations
//! from solutions of the second-order ODE, and the general solution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{
    canonical, coefficients_in, integrate_rulebased, normalize, verify_antiderivative, Expr, Symbol,
};
use crate::lambda::AuxPair;
use crate::ode::CubicOde;
use crate::transform::{verify_general_solution, GeneralSolution, PointTransform, SolutionCheck};

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialClass {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub d: Expr,
}

impl SpecialClass {
    /// Reassemble `(F3, F2, F1, F)`.
    pub fn to_ode(&self) -> Result<CubicOde> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let y = Expr::y();
        CubicOde::new(
            Expr::zero(),
            Expr::zero(),
            a.clone() * y.clone() + b.clone(),
            Expr::sum([
                Expr::rational(1, 9) * a.clone().pow(2) * y.clone().pow(3),
                Expr::rational(1, 3) * (a.dx() + a.clone() * b.clone()) * y.clone().pow(2),
                c.clone() * y,
                d.clone(),
            ]),
        )
    }
}

/// Match `ode` against the class template.
pub fn detect_special_class(ode: &CubicOde) -> Result<SpecialClass> {
    if !ode.f3.is_zero_literal() || !ode.f2.is_zero_literal() {
        return Err(Error::NotInClass("F3 and F2 must vanish".into()));
    }
    let y = Symbol::Y;
    let f1 = coefficients_in(&ode.f1, &y)?
        .filter(|c| c.len() <= 2)
        .ok_or_else(|| Error::NotInClass(format!("F1 = {} is not linear in y", ode.f1)))?;
    let get = |v: &[Expr], k: usize| v.get(k).cloned().unwrap_or_else(Expr::zero);
    let (a, b) = (get(&f1, 1), get(&f1, 0));
    if a.is_zero_literal() {
        return Err(Error::NotInClass("a(x) vanishes".into()));
    }
    if a.depends_on(&y) || b.depends_on(&y) {
        return Err(Error::NotInClass("F1 coefficients depend on y".into()));
    }
    let yv = Expr::y();
    let rest = ode.f0.clone()
        - Expr::rational(1, 9) * a.clone().pow(2) * yv.clone().pow(3)
        - Expr::rational(1, 3) * (a.dx() + a.clone() * b.clone()) * yv.pow(2);
    let rest = canonical(&rest)?;
    let tail = coefficients_in(&rest, &y)?.ok_or_else(|| {
        Error::NotInClass(format!("F - template = {rest} is not polynomial in y"))
    })?;
    if tail.len() > 2 {
        let expected = canonical(&(Expr::rational(1, 9) * a.clone().pow(2)))?;
        let got = canonical(&(get(&tail, 3) + expected.clone()))?;
        return Err(Error::NotInClass(format!(
            "y^3 coefficient of F must be {expected}, got {got}; remainder {rest}"
        )));
    }
    Ok(SpecialClass {
        a,
        b,
        c: get(&tail, 1),
        d: get(&tail, 0),
    })
}

/// Linear ODE `u^(n) + Σ coeffs[k] u^(k) = 0` in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOde {
    /// `coeffs[k]` multiplies the `k`-th derivative; the leading one is 1.
    pub coeffs: Vec<Expr>,
    pub name: &'static str,
}

impl LinearOde {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `u^(n) + Σ coeffs[k] u^(k)` for a candidate `u(x)`, normalized.
    pub fn residual(&self, u: &Expr) -> Result<Expr> {
        let mut derivs = vec![u.clone()];
        for _ in 0..self.order() {
            let next = canonical(&derivs.last().unwrap().dx())?;
            derivs.push(next);
        }
        let mut terms = vec![derivs[self.order()].clone()];
        for (k, c) in self.coeffs.iter().enumerate() {
            terms.push(c.clone() * derivs[k].clone());
        }
        canonical(&Expr::sum(terms))
    }
}

impl std::fmt::Display for LinearOde {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.order();
        write!(f, "{}{}", self.name, "'".repeat(n))?;
        for k in (0..n).rev() {
            let c = &self.coeffs[k];
            if c.is_zero_literal() {
                continue;
            }
            write!(f, " + ({c})*{}{}", self.name, "'".repeat(k))?;
        }
        write!(f, " = 0")
    }
}

/// The third-order ODE for `g` and the second-order ODE for `h`.
pub fn build_linear_odes(sc: &SpecialClass) -> Result<(LinearOde, LinearOde)> {
    let (a, b, c, d) = (&sc.a, &sc.b, &sc.c, &sc.d);
    let ra = a.dx() / a.clone();
    let third = LinearOde {
        coeffs: vec![
            canonical(&(d.clone() * a.clone() / Expr::int(3)))?,
            canonical(
                &(-(Expr::sum([
                    a.dx().dx() / a.clone(),
                    Expr::int(-2) * ra.clone().pow(2),
                    b.clone() * ra.clone(),
                    -c.clone(),
                ]))),
            )?,
            canonical(&(b.clone() - Expr::int(2) * ra))?,
        ],
        name: "Y",
    };
    let second = LinearOde {
        coeffs: vec![c.clone(), b.clone()],
        name: "H",
    };
    Ok((third, second))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisProvenance {
    ConstantCoefficient,
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisSolutions {
    pub solutions: Vec<Expr>,
    pub provenance: BasisProvenance,
}

/// Characteristic-root basis of a constant-coefficient ODE of order 2 or 3.
pub fn solve_const_coeff(lin: &LinearOde) -> Result<BasisSolutions> {
    for c in &lin.coeffs {
        if normalize(c)?.depends_on(&Symbol::X) {
            return Err(Error::NonConstant(format!("coefficient {c} depends on x")));
        }
    }
    let roots = match lin.order() {
        2 => quadratic_roots(&lin.coeffs[1], &lin.coeffs[0])?,
        3 => cubic_roots(&lin.coeffs)?,
        n => return Err(Error::Unsolved(format!("order {n}"))),
    };
    let mut solutions = Vec::new();
    let x = Expr::x();
    for root in roots {
        match root {
            Root::Real(r, mult) => {
                let e = canonical(&(r * x.clone()).exp())?;
                for k in 0..mult {
                    solutions.push(canonical(&(x.clone().pow(k as i64) * e.clone()))?);
                }
            }
            Root::Complex(alpha, beta) => {
                let e = (alpha * x.clone()).exp();
                let arg = beta * x.clone();
                solutions.push(canonical(&(e.clone() * arg.clone().cos()))?);
                solutions.push(canonical(&(e * arg.sin()))?);
            }
        }
    }
    let basis = BasisSolutions {
        solutions,
        provenance: BasisProvenance::ConstantCoefficient,
    };
    verify_basis(lin, &basis.solutions)?;
    Ok(basis)
}

enum Root {
    Real(Expr, usize),
    Complex(Expr, Expr),
}

/// Roots of `r² + p r + q`.
fn quadratic_roots(p: &Expr, q: &Expr) -> Result<Vec<Root>> {
    let disc = normalize(&(p.clone().pow(2) - Expr::int(4) * q.clone()))?;
    let half = Expr::rational(1, 2);
    if disc.is_zero() {
        return Ok(vec![Root::Real(canonical(&(-(half * p.clone())))?, 2)]);
    }
    if let Some(s) = disc.sqrt() {
        let s = s.to_expr();
        return Ok(vec![
            Root::Real(canonical(&(half.clone() * (s.clone() - p.clone())))?, 1),
            Root::Real(canonical(&(-(half * (s + p.clone()))))?, 1),
        ]);
    }
    if let Some(v) = disc.constant() {
        if v.is_negative() {
            if let Some(root) = rational_sqrt(&-v) {
                return Ok(vec![Root::Complex(
                    canonical(&(-(half.clone() * p.clone())))?,
                    Expr::Num(root / BigRational::from_integer(2.into())),
                )]);
            }
        }
    }
    Err(Error::Unsolved(format!(
        "discriminant {} is not a square",
        disc.to_expr()
    )))
}

/// Roots of `r³ + c2 r² + c1 r + c0`.
fn cubic_roots(coeffs: &[Expr]) -> Result<Vec<Root>> {
    let (c0, c1, c2) = (&coeffs[0], &coeffs[1], &coeffs[2]);
    if c0.is_zero_literal() {
        let mut roots = quadratic_roots(c2, c1)?;
        // merge the zero root into an existing zero root
        for r in roots.iter_mut() {
            if let Root::Real(v, m) = r {
                if v.is_zero_literal() {
                    *m += 1;
                    return Ok(roots);
                }
            }
        }
        roots.insert(0, Root::Real(Expr::zero(), 1));
        return Ok(roots);
    }
    let rat: Option<Vec<BigRational>> = [c0, c1, c2]
        .iter()
        .map(|c| normalize(c).ok().and_then(|n| n.constant()))
        .collect();
    let Some(rat) = rat else {
        return Err(Error::Unsolved(
            "non-rational cubic characteristic polynomial".into(),
        ));
    };
    // monic cubic with rational coefficients: rational roots are divisors
    let mut poly = vec![
        rat[0].clone(),
        rat[1].clone(),
        rat[2].clone(),
        BigRational::one(),
    ];
    let l = poly.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = poly.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let mut roots: Vec<(BigRational, usize)> = Vec::new();
    while poly.len() > 1 {
        let cands = candidates(&ints);
        let Some(r) = cands.into_iter().find(|r| eval_poly(&poly, r).is_zero()) else {
            break;
        };
        poly = deflate(&poly, &r);
        match roots.iter_mut().find(|(v, _)| *v == r) {
            Some(entry) => entry.1 += 1,
            None => roots.push((r, 1)),
        }
    }
    let mut out: Vec<Root> = roots
        .into_iter()
        .map(|(r, m)| Root::Real(Expr::Num(r), m))
        .collect();
    match poly.len() {
        1 => Ok(out),
        3 => {
            let rest = quadratic_roots(&Expr::Num(poly[1].clone()), &Expr::Num(poly[0].clone()))?;
            out.extend(rest);
            Ok(out)
        }
        _ => Err(Error::Unsolved(
            "cubic characteristic polynomial without rational roots".into(),
        )),
    }
}

fn candidates(ints: &[BigInt]) -> Vec<BigRational> {
    let constant = ints
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .unwrap_or_else(BigInt::one);
    let lead = ints.last().unwrap().clone();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.abs();
        let mut out = Vec::new();
        let mut i = BigInt::one();
        while &i * &i <= n && i < BigInt::from(100_000) {
            if (&n % &i).is_zero() {
                out.push(i.clone());
                out.push(&n / &i);
            }
            i += 1;
        }
        out
    };
    let mut out = Vec::new();
    for p in divisors(&constant) {
        for q in divisors(&lead) {
            let r = BigRational::new(p.clone(), q.clone());
            out.push(r.clone());
            out.push(-r);
        }
    }
    out.push(BigRational::zero());
    out.sort();
    out.dedup();
    out
}

fn eval_poly(p: &[BigRational], r: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * r + c)
}

/// Divide by `(t - r)`.
fn deflate(p: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    let n = p.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for k in (0..n).rev() {
        carry = &p[k + 1] + &carry * r;
        q[k] = carry.clone();
    }
    q
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Wronskian determinant of two or three functions of `x`.
pub fn wronskian(fs: &[Expr]) -> Result<Expr> {
    let d = |e: &Expr| e.dx();
    let w = match fs {
        [f, g] => f.clone() * d(g) - d(f) * g.clone(),
        [f, g, h] => {
            let row1 = [f.clone(), g.clone(), h.clone()];
            let row2 = row1.clone().map(|e| d(&e));
            let row3 = row2.clone().map(|e| d(&e));
            let m = |r: usize, c: usize| [&row1, &row2, &row3][r][c].clone();
            Expr::sum([
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)),
                -(m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))),
                m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)),
            ])
        }
        [_] => fs[0].clone(),
        _ => return Err(Error::BasisInvalid("expected 1 to 3 functions".into())),
    };
    canonical(&w)
}

/// Every member solves `lin` and the Wronskian does not vanish.
pub fn verify_basis(lin: &LinearOde, fs: &[Expr]) -> Result<()> {
    for f in fs {
        let r = lin.residual(f)?;
        if !r.is_zero_literal() {
            return Err(Error::BasisInvalid(format!(
                "{f} leaves residual {r} in {lin}"
            )));
        }
    }
    if wronskian(fs)?.is_zero_literal() {
        return Err(Error::BasisInvalid("Wronskian vanishes".into()));
    }
    Ok(())
}

/// Auxiliary pair from a solution `g` of the third-order ODE:
///
/// ```text
/// w = a g / (y a g - 3 g')
/// z = (9 a g'' - (9 a' + 6 y a²) g' + y² a³ g) / (3 a (y a g - 3 g'))
/// ```
pub fn aux_from_g(sc: &SpecialClass, g: &Expr) -> Result<AuxPair> {
    let (third, _) = build_linear_odes(sc)?;
    let r = third.residual(g)?;
    if !r.is_zero_literal() {
        return Err(Error::GNotASolution(r.to_string()));
    }
    let a = &sc.a;
    let y = Expr::y();
    let g1 = g.dx();
    let g2 = g1.dx();
    let den = y.clone() * a.clone() * g.clone() - Expr::int(3) * g1.clone();
    let w = a.clone() * g.clone() / den.clone();
    let z = Expr::sum([
        Expr::int(9) * a.clone() * g2,
        -((Expr::int(9) * a.dx() + Expr::int(6) * y.clone() * a.clone().pow(2)) * g1),
        y.pow(2) * a.clone().pow(3) * g.clone(),
    ]) / (Expr::int(3) * a.clone() * den);
    AuxPair::new(w, z)
}

/// Antiderivative of `a·h`, from the rule-based integrator or a supplied
/// candidate checked by differentiation.
fn quadrature(sc: &SpecialClass, h: &Expr, supplied: Option<&Expr>) -> Result<Expr> {
    let integrand = sc.a.clone() * h.clone();
    match integrate_rulebased(&integrand, &Symbol::X) {
        Ok(f) => Ok(f),
        Err(Error::NotIntegrable(msg)) => match supplied {
            Some(f) => {
                verify_antiderivative(f, &integrand, &Symbol::X)?;
                Ok(f.clone())
            }
            None => Err(Error::IntegrationUnavailable(msg)),
        },
        Err(other) => Err(other),
    }
}

/// `φ = (1/3)∫a h1 dx - h1/y`, `ψ = (1/3)∫a h2 dx - h2/y` for a basis
/// `(h1, h2)` of the second-order ODE; requires `d = 0`.
pub fn transforms_from_h(
    sc: &SpecialClass,
    h1: &Expr,
    h2: &Expr,
    antiderivatives: Option<(&Expr, &Expr)>,
) -> Result<PointTransform> {
    if !sc.d.is_zero_literal() {
        return Err(Error::NotInClass(format!(
            "transformation formula needs d = 0, got d = {}",
            sc.d
        )));
    }
    let (_, second) = build_linear_odes(sc)?;
    verify_basis(&second, &[h1.clone(), h2.clone()])?;
    let third = Expr::rational(1, 3);
    let i1 = quadrature(sc, h1, antiderivatives.map(|p| p.0))?;
    let i2 = quadrature(sc, h2, antiderivatives.map(|p| p.1))?;
    PointTransform::new(
        third.clone() * i1 - h1.clone() / Expr::y(),
        third * i2 - h2.clone() / Expr::y(),
    )
}

/// General solution `ψ = c1 φ + c2`, explicit when solvable, verified.
pub fn special_general_solution(
    ode: &CubicOde,
    tr: &PointTransform,
) -> Result<(GeneralSolution, SolutionCheck)> {
    let gs = GeneralSolution::from_transform(tr)?;
    let check = verify_general_solution(ode, &gs, Some(tr))?;
    if !check.verified {
        return Err(Error::SolutionCheckFailed(
            check
                .explicit_residual
                .clone()
                .unwrap_or_else(|| check.implicit_residual.clone()),
        ));
    }
    Ok((gs, check))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, ParseContext};
    use crate::lie_conditions::lie_conditions_residuals;
    use crate::ode::parse_ode;
    use crate::transform::transform_matches_ode;

    fn ctx() -> ParseContext {
        ParseContext::with_params(["b", "k"])
    }

    fn p(s: &str) -> Expr {
        parse_expr(s, &ctx()).unwrap()
    }

    fn same(a: &Expr, b: &str) -> bool {
        normalize(&(a.clone() - p(b))).unwrap().is_zero()
    }

    fn emden() -> CubicOde {
        parse_ode("y'' + 3*y*y' + y^3 = 0", &ctx()).unwrap()
    }

    fn lienard() -> CubicOde {
        parse_ode(
            "y'' + (b + 3*k*y)*y' + k^2*y^3 + b*k*y^2 + b^2/4*y = 0",
            &ctx(),
        )
        .unwrap()
    }

    #[test]
    fn detection() {
        let sc = detect_special_class(&emden()).unwrap();
        assert_eq!((sc.a.clone(), sc.b.clone()), (Expr::int(3), Expr::zero()));
        assert!(sc.c.is_zero_literal() && sc.d.is_zero_literal());
        let sc = detect_special_class(&lienard()).unwrap();
        assert!(
            same(&sc.a, "3*k")
                && same(&sc.b, "b")
                && same(&sc.c, "b^2/4")
                && sc.d.is_zero_literal()
        );
        assert_eq!(sc.to_ode().unwrap(), lienard());
        let other = parse_ode("y'' + y*y' + y^3 = 0", &ctx()).unwrap();
        assert!(matches!(
            detect_special_class(&other),
            Err(Error::NotInClass(_))
        ));
    }

    #[test]
    fn linear_odes() {
        let (third, second) = build_linear_odes(&detect_special_class(&emden()).unwrap()).unwrap();
        assert!(third
            .coeffs
            .iter()
            .chain(&second.coeffs)
            .all(Expr::is_zero_literal));
        let (_, second) = build_linear_odes(&detect_special_class(&lienard()).unwrap()).unwrap();
        assert!(same(&second.coeffs[1], "b") && same(&second.coeffs[0], "b^2/4"));
        let sc = SpecialClass {
            a: Expr::int(3),
            b: Expr::zero(),
            c: Expr::zero(),
            d: Expr::x(),
        };
        let (third, _) = build_linear_odes(&sc).unwrap();
        assert!(same(&third.coeffs[0], "x") && third.coeffs[1].is_zero_literal());
    }

    #[test]
    fn constant_coefficient_bases() {
        let lin = |c0: &str, c1: &str| LinearOde {
            coeffs: vec![p(c0), p(c1)],
            name: "H",
        };
        let b = solve_const_coeff(&lin("0", "0")).unwrap();
        assert_eq!(b.solutions, vec![Expr::one(), Expr::x()]);
        let b = solve_const_coeff(&lin("b^2/4", "b")).unwrap();
        assert!(same(&b.solutions[0], "exp(-b*x/2)") && same(&b.solutions[1], "x*exp(-b*x/2)"));
        let b = solve_const_coeff(&lin("-1", "0")).unwrap();
        assert!(same(&b.solutions[0], "exp(x)") && same(&b.solutions[1], "exp(-x)"));
        let b = solve_const_coeff(&lin("4", "0")).unwrap();
        assert!(same(&b.solutions[0], "cos(2*x)"));
        assert!(matches!(
            solve_const_coeff(&lin("x", "0")),
            Err(Error::NonConstant(_))
        ));
        assert!(matches!(
            solve_const_coeff(&lin("-2", "0")),
            Err(Error::Unsolved(_))
        ));
        let third = LinearOde {
            coeffs: vec![p("-6"), p("11"), p("-6")],
            name: "Y",
        };
        assert_eq!(solve_const_coeff(&third).unwrap().solutions.len(), 3);
    }

    #[test]
    fn aux_pairs() {
        let sc = detect_special_class(&emden()).unwrap();
        let aux = aux_from_g(&sc, &Expr::one()).unwrap();
        assert!(same(&aux.w, "1/y") && same(&aux.z, "y"));
        let aux = aux_from_g(&sc, &Expr::x()).unwrap();
        assert!(same(&aux.w, "x/(x*y-1)"));
        assert!(lie_conditions_residuals(&emden(), &aux)
            .unwrap()
            .iter()
            .all(Expr::is_zero_literal));
        let sc = detect_special_class(&lienard()).unwrap();
        let aux = aux_from_g(&sc, &Expr::one()).unwrap();
        assert!(same(&aux.w, "1/y") && same(&aux.z, "k*y"));
        assert!(matches!(
            aux_from_g(&detect_special_class(&emden()).unwrap(), &p("exp(x)")),
            Err(Error::GNotASolution(_))
        ));
    }

    #[test]
    fn emden_transforms() {
        let sc = detect_special_class(&emden()).unwrap();
        let tr = transforms_from_h(&sc, &Expr::one(), &Expr::x(), None).unwrap();
        assert!(same(&tr.phi, "x - 1/y") && same(&tr.psi, "x^2/2 - x/y"));
        assert!(matches!(
            transforms_from_h(&sc, &Expr::x(), &Expr::x(), None),
            Err(Error::BasisInvalid(_))
        ));
        let (gs, check) = special_general_solution(&emden(), &tr).unwrap();
        assert!(check.verified && gs.explicit.is_some());
    }

    #[test]
    fn lienard_transforms() {
        let sc = detect_special_class(&lienard()).unwrap();
        let h = solve_const_coeff(&build_linear_odes(&sc).unwrap().1).unwrap();
        let tr = transforms_from_h(&sc, &h.solutions[0], &h.solutions[1], None).unwrap();
        assert!(same(&tr.phi, "-exp(-b*x/2)*(2*k*y+b)/(b*y)"));
        assert!(transform_matches_ode(&tr, &lienard()).unwrap().matches);
        let (_, check) = special_general_solution(&lienard(), &tr).unwrap();
        assert!(check.verified);
    }
}
