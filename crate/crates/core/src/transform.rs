//! Point transformations `t = φ(x, y)`, `u = ψ(x, y)` mapping an ODE to
//! `u'' = 0`: pushforward coefficients, matching, first integrals, the
//! linear system for transformation components and general solutions.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{
    canonical, is_zero, linear_relation_rows, normalize, parse_expr, Expr, ParseContext, Symbol,
    ZeroVerdict,
};
use crate::lambda::AuxPair;
use crate::lie_conditions::lie_conditions_residuals;
use crate::linalg::{nullspace, rref};
use crate::ode::CubicOde;

#[derive(Clone, Debug, PartialEq)]
pub struct PointTransform {
    pub phi: Expr,
    pub psi: Expr,
}

impl PointTransform {
    /// Checks that the Jacobian does not vanish identically.
    pub fn new(phi: Expr, psi: Expr) -> Result<PointTransform> {
        let tr = PointTransform {
            phi: canonical(&phi)?,
            psi: canonical(&psi)?,
        };
        if tr.jacobian()?.is_zero_literal() {
            return Err(Error::SingularJacobian);
        }
        Ok(tr)
    }

    /// `φ_x ψ_y - φ_y ψ_x`, normalized.
    pub fn jacobian(&self) -> Result<Expr> {
        canonical(&jacobian_raw(&self.phi, &self.psi))
    }
}

fn jacobian_raw(phi: &Expr, psi: &Expr) -> Expr {
    phi.dx() * psi.dy() - phi.dy() * psi.dx()
}

/// The six quotients determined by a transformation.
#[derive(Clone, Debug, PartialEq)]
pub struct Pushforward {
    pub a: Expr,
    pub b: Expr,
    pub w: Expr,
    pub z: Expr,
    pub p: Expr,
    pub q: Expr,
}

impl Pushforward {
    pub fn aux(&self) -> AuxPair {
        AuxPair {
            w: self.w.clone(),
            z: self.z.clone(),
        }
    }

    pub fn all(&self) -> [&Expr; 6] {
        [&self.a, &self.b, &self.w, &self.z, &self.p, &self.q]
    }
}

/// Quotients `(A, B, w, z, P, Q)` and the ODE `(A, B + 2w, P + 2z, Q)`
/// that the transformation maps to `u'' = 0`.
pub fn pushforward_coefficients(tr: &PointTransform) -> Result<(Pushforward, CubicOde)> {
    let (phi, psi) = (&tr.phi, &tr.psi);
    let j = tr.jacobian()?;
    if j.is_zero_literal() {
        return Err(Error::SingularJacobian);
    }
    let (px, py, sx, sy) = (phi.dx(), phi.dy(), psi.dx(), psi.dy());
    let (pxx, pxy, pyy) = (px.dx(), px.dy(), py.dy());
    let (sxx, sxy, syy) = (sx.dx(), sx.dy(), sy.dy());
    let quot = |u: &Expr, v2: &Expr, s: &Expr, p2: &Expr| -> Result<Expr> {
        canonical(&((u.clone() * v2.clone() - s.clone() * p2.clone()) / j.clone()))
    };
    let pf = Pushforward {
        a: quot(&py, &syy, &sy, &pyy)?,
        b: quot(&px, &syy, &sx, &pyy)?,
        w: quot(&py, &sxy, &sy, &pxy)?,
        q: quot(&px, &sxx, &sx, &pxx)?,
        z: quot(&px, &sxy, &sx, &pxy)?,
        p: quot(&py, &sxx, &sy, &pxx)?,
    };
    let two = Expr::int(2);
    let ode = CubicOde::new(
        pf.a.clone(),
        pf.b.clone() + two.clone() * pf.w.clone(),
        pf.p.clone() + two * pf.z.clone(),
        pf.q.clone(),
    )?;
    Ok((pf, ode))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult {
    pub matches: bool,
    /// `[F3, F2, F1, F]` differences, pushforward minus input.
    pub residuals: [Expr; 4],
}

/// Whether `tr` maps `ode` to the free particle: all four coefficient
/// differences vanish.
pub fn transform_matches_ode(tr: &PointTransform, ode: &CubicOde) -> Result<MatchResult> {
    let (_, pushed) = pushforward_coefficients(tr)?;
    let a = pushed.coeffs();
    let b = ode.coeffs();
    let residuals = [
        canonical(&(a[0].clone() - b[0].clone()))?,
        canonical(&(a[1].clone() - b[1].clone()))?,
        canonical(&(a[2].clone() - b[2].clone()))?,
        canonical(&(a[3].clone() - b[3].clone()))?,
    ];
    Ok(MatchResult {
        matches: residuals.iter().all(Expr::is_zero_literal),
        residuals,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntegralKind {
    I1,
    I2,
    I3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstIntegral {
    pub kind: IntegralKind,
    pub expr: Expr,
    pub check: ZeroVerdict,
}

/// `I1 = (ψ_x + ψ_y y')/(φ_x + φ_y y')`, `I2 = ψ - φ I1`, each checked to be
/// conserved along solutions.
pub fn first_integrals(
    tr: &PointTransform,
    ode: &CubicOde,
) -> Result<(FirstIntegral, FirstIntegral)> {
    let p = Expr::yp();
    let i1 =
        canonical(&((tr.psi.dx() + tr.psi.dy() * p.clone()) / (tr.phi.dx() + tr.phi.dy() * p)))?;
    let i2 = canonical(&(tr.psi.clone() - tr.phi.clone() * i1.clone()))?;
    Ok((
        checked_integral(ode, IntegralKind::I1, i1)?,
        checked_integral(ode, IntegralKind::I2, i2)?,
    ))
}

/// `I3 = I2 / I1`, checked.
pub fn quotient_integral(
    ode: &CubicOde,
    i1: &FirstIntegral,
    i2: &FirstIntegral,
) -> Result<FirstIntegral> {
    let i3 = canonical(&(i2.expr.clone() / i1.expr.clone()))?;
    checked_integral(ode, IntegralKind::I3, i3)
}

fn checked_integral(ode: &CubicOde, kind: IntegralKind, expr: Expr) -> Result<FirstIntegral> {
    let d = ode.total_derivative(&expr);
    let verdict = is_zero(&d)?;
    if !verdict.holds() {
        return Err(Error::FirstIntegralCheckFailed(canonical(&d)?.to_string()));
    }
    Ok(FirstIntegral {
        kind,
        expr,
        check: verdict,
    })
}

fn s_system_raw(s: &Expr, ode: &CubicOde, aux: &AuxPair) -> [Expr; 3] {
    let (sx, sy) = (s.dx(), s.dy());
    let (w, z) = (&aux.w, &aux.z);
    [
        Expr::sum([
            sy.dy(),
            (Expr::int(2) * w.clone() - ode.f2.clone()) * sy.clone(),
            ode.f3.clone() * sx.clone(),
        ]),
        Expr::sum([sx.dy(), w.clone() * sx.clone(), -(z.clone() * sy.clone())]),
        Expr::sum([
            sx.dx(),
            (ode.f1.clone() - Expr::int(2) * z.clone()) * sx,
            -(ode.f0.clone() * sy),
        ]),
    ]
}

/// Residuals of
///
/// ```text
/// S_yy + (2w - F2) S_y + F3 S_x = 0
/// S_xy + w S_x - z S_y          = 0
/// S_xx + (F1 - 2z) S_x - F S_y  = 0
/// ```
pub fn s_system_residuals(s: &Expr, ode: &CubicOde, aux: &AuxPair) -> Result<[Expr; 3]> {
    let [a, b, c] = s_system_raw(s, ode, aux);
    Ok([canonical(&a)?, canonical(&b)?, canonical(&c)?])
}

/// One finite family of candidate basis functions.
#[derive(Clone, Debug, PartialEq)]
pub enum AnsatzRung {
    /// Monomials `x^i y^j`, `i + j <= degree`.
    Polynomial { degree: u32 },
    /// Monomials of degree `<= degree` divided by `y^k`, `1 <= k <= max_power`.
    OverYPower { max_power: u32, degree: u32 },
    /// Monomials of degree `<= degree` divided by `L^k` for a linear form `L`.
    OverLinear {
        form: Expr,
        max_power: u32,
        degree: u32,
    },
    /// Expressions built from an earlier analysis stage.
    Template(Vec<Expr>),
    /// User-supplied basis.
    User(Vec<Expr>),
}

impl AnsatzRung {
    pub fn label(&self) -> String {
        match self {
            AnsatzRung::Polynomial { degree } => format!("polynomial degree <= {degree}"),
            AnsatzRung::OverYPower { max_power, degree } => {
                format!("polynomial degree <= {degree} over y^k, k <= {max_power}")
            }
            AnsatzRung::OverLinear {
                form,
                max_power,
                degree,
            } => {
                format!("polynomial degree <= {degree} over ({form})^k, k <= {max_power}")
            }
            AnsatzRung::Template(_) => "special-class template".into(),
            AnsatzRung::User(_) => "user basis".into(),
        }
    }

    pub fn basis(&self) -> Vec<Expr> {
        let monomials = |d: u32| -> Vec<Expr> {
            let mut out = Vec::new();
            for total in 0..=d {
                for i in (0..=total).rev() {
                    let j = total - i;
                    out.push(Expr::x().pow(i64::from(i)) * Expr::y().pow(i64::from(j)));
                }
            }
            out
        };
        match self {
            AnsatzRung::Polynomial { degree } => monomials(*degree),
            AnsatzRung::OverYPower { max_power, degree } => {
                let mut out = monomials(*degree);
                for k in 1..=*max_power {
                    out.extend(
                        monomials(*degree)
                            .into_iter()
                            .map(|m| m / Expr::y().pow(i64::from(k))),
                    );
                }
                out
            }
            AnsatzRung::OverLinear {
                form,
                max_power,
                degree,
            } => {
                let mut out = monomials(*degree);
                for k in 1..=*max_power {
                    out.extend(
                        monomials(*degree)
                            .into_iter()
                            .map(|m| m / form.clone().pow(i64::from(k))),
                    );
                }
                out
            }
            AnsatzRung::Template(v) | AnsatzRung::User(v) => {
                let mut out = vec![Expr::one()];
                out.extend(v.iter().cloned());
                out
            }
        }
    }
}

/// Ordered list of rungs tried by [`solve_s_system`].
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzConfig {
    pub rungs: Vec<AnsatzRung>,
}

impl Default for AnsatzConfig {
    fn default() -> Self {
        let mut rungs: Vec<AnsatzRung> = (1..=4)
            .map(|d| AnsatzRung::Polynomial { degree: d })
            .collect();
        for k in 1..=2 {
            rungs.push(AnsatzRung::OverYPower {
                max_power: k,
                degree: 3,
            });
        }
        let forms = [Expr::x() + Expr::y(), Expr::x() + Expr::int(2) * Expr::y()];
        for k in 1..=2 {
            for f in &forms {
                rungs.push(AnsatzRung::OverLinear {
                    form: f.clone(),
                    max_power: k,
                    degree: 2,
                });
            }
        }
        AnsatzConfig { rungs }
    }
}

impl AnsatzConfig {
    /// Parse a ladder description:
    /// `default`, `poly:D`, `inv-y:K:D`, `basis:e1;e2;...`, joined by `,`.
    pub fn parse(text: &str, ctx: &ParseContext) -> Result<AnsatzConfig> {
        let mut rungs = Vec::new();
        for part in split_top_level(text) {
            let part = part.trim();
            let bad = || Error::Input(format!("bad ansatz rung `{part}`"));
            let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
            if part == "default" {
                rungs.extend(AnsatzConfig::default().rungs);
            } else if let Some(d) = part.strip_prefix("poly:") {
                rungs.push(AnsatzRung::Polynomial { degree: num(d)? });
            } else if let Some(rest) = part.strip_prefix("inv-y:") {
                let (k, d) = rest.split_once(':').ok_or_else(bad)?;
                rungs.push(AnsatzRung::OverYPower {
                    max_power: num(k)?,
                    degree: num(d)?,
                });
            } else if let Some(list) = part.strip_prefix("basis:") {
                let v = list
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_expr(s, ctx))
                    .collect::<Result<Vec<_>>>()?;
                rungs.push(AnsatzRung::User(v));
            } else {
                return Err(bad());
            }
        }
        Ok(AnsatzConfig { rungs })
    }
}

fn split_top_level(text: &str) -> Vec<&str> {
    // `basis:` lists may contain commas inside parentheses
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SSystemSolution {
    /// Non-constant solutions, independent modulo constants.
    pub solutions: Vec<Expr>,
    /// Indices into `solutions` of the chosen pair.
    pub pair: (usize, usize),
    pub transform: PointTransform,
    pub rung: String,
    /// Dimension of the solution space including constants.
    pub dimension: usize,
}

/// Solve the linear system for `S` in each ansatz rung until two
/// independent non-constant solutions with a non-vanishing Jacobian appear.
pub fn solve_s_system(
    ode: &CubicOde,
    aux: &AuxPair,
    ansatz: &AnsatzConfig,
) -> Result<SSystemSolution> {
    let lie = lie_conditions_residuals(ode, aux)?;
    let failing: Vec<String> = lie
        .iter()
        .filter(|r| !r.is_zero_literal())
        .map(|r| r.to_string())
        .collect();
    if !failing.is_empty() {
        return Err(Error::AuxInvalid(failing));
    }
    let mut tried = Vec::new();
    for rung in &ansatz.rungs {
        let basis = rung
            .basis()
            .iter()
            .map(canonical)
            .collect::<Result<Vec<_>>>()?;
        let (solutions, dimension) = solve_in_basis(ode, aux, &basis)?;
        tried.push(format!("{} ({} solutions)", rung.label(), solutions.len()));
        for i in 0..solutions.len() {
            for j in i + 1..solutions.len() {
                let j_expr = canonical(&jacobian_raw(&solutions[i], &solutions[j]))?;
                if !j_expr.is_zero_literal() {
                    return Ok(SSystemSolution {
                        transform: PointTransform {
                            phi: solutions[i].clone(),
                            psi: solutions[j].clone(),
                        },
                        pair: (i, j),
                        solutions,
                        rung: rung.label(),
                        dimension,
                    });
                }
            }
        }
    }
    Err(Error::AnsatzExhausted(tried.join("; ")))
}

/// Non-constant solutions within `span(basis)` (modulo constants) and the
/// dimension of the full solution space.
pub fn solve_in_basis(ode: &CubicOde, aux: &AuxPair, basis: &[Expr]) -> Result<(Vec<Expr>, usize)> {
    let n = basis.len();
    let residuals: Vec<[Expr; 3]> = basis.iter().map(|b| s_system_raw(b, ode, aux)).collect();
    let mut rows = Vec::new();
    for k in 0..3 {
        let exprs: Vec<Expr> = residuals.iter().map(|r| r[k].clone()).collect();
        rows.extend(linear_relation_rows(&exprs)?);
    }
    let null = nullspace(&rows, n);
    // combinations that are constant
    let mut const_rows = linear_relation_rows(&basis.iter().map(Expr::dx).collect::<Vec<_>>())?;
    const_rows.extend(linear_relation_rows(
        &basis.iter().map(Expr::dy).collect::<Vec<_>>(),
    )?);
    let constants = nullspace(&const_rows, n);
    let (zr, zp) = rref(&constants, n);
    let reduced: Vec<Vec<BigRational>> = null
        .iter()
        .map(|v| {
            let mut v = v.clone();
            for (row, &pc) in zr.iter().zip(&zp) {
                if !v[pc].is_zero() {
                    let f = v[pc].clone();
                    for (a, b) in v.iter_mut().zip(row) {
                        *a -= &f * b;
                    }
                }
            }
            v
        })
        .collect();
    let (independent, _) = rref(&reduced, n);
    let mut solutions = Vec::new();
    for v in independent {
        let s = Expr::sum(
            v.iter()
                .zip(basis)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, b)| Expr::Num(c.clone()) * b.clone()),
        );
        solutions.push(canonical(&s)?);
    }
    // constants always solve the system
    let dim = solutions.len() + 1;
    Ok((solutions, dim))
}

/// `ψ = c1 φ + c2`, with an explicit `y(x; c1, c2)` when one was found.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralSolution {
    /// `ψ - c1 φ - c2`.
    pub implicit: Expr,
    pub explicit: Option<Expr>,
}

pub fn c1() -> Expr {
    Expr::param("c1")
}

pub fn c2() -> Expr {
    Expr::param("c2")
}

impl GeneralSolution {
    pub fn from_transform(tr: &PointTransform) -> Result<GeneralSolution> {
        let implicit = canonical(&(tr.psi.clone() - c1() * tr.phi.clone() - c2()))?;
        Ok(GeneralSolution {
            explicit: solve_relation_for_y(&implicit)?,
            implicit,
        })
    }
}

/// Solve `R(x, y) = 0` for `y` when the numerator of `R` is linear in `y`,
/// or quadratic with a square discriminant.
pub fn solve_relation_for_y(rel: &Expr) -> Result<Option<Expr>> {
    // only the numerator matters for R = 0
    let nf = normalize(&normalize(rel)?.numerator_expr())?;
    let Some(coeffs) = nf.numerator_coeffs_in(&Symbol::Y) else {
        return Ok(None);
    };
    match coeffs.as_slice() {
        [a0, a1] => Ok(Some(canonical(&(-(a0.clone()) / a1.clone()))?)),
        [a0, a1, a2] => {
            let disc = normalize(&(a1.clone().pow(2) - Expr::int(4) * a0.clone() * a2.clone()))?;
            let Some(root) = disc.sqrt() else {
                return Ok(None);
            };
            let r = root.to_expr();
            for sign in [Expr::one(), Expr::int(-1)] {
                let cand =
                    canonical(&((-(a1.clone()) + sign * r.clone()) / (Expr::int(2) * a2.clone())))?;
                if is_zero(&rel.subst(&Symbol::Y, &cand))?.holds() {
                    return Ok(Some(cand));
                }
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionCheck {
    /// Implicit relation checked through the first integrals.
    pub implicit_via_integrals: bool,
    /// Implicit relation checked by implicit differentiation.
    pub implicit_residual: String,
    /// Residual of the explicit form substituted into the ODE.
    pub explicit_residual: Option<String>,
    pub verified: bool,
}

/// Verify a general solution. The implicit relation is checked through the
/// first integrals of `tr` and by implicit differentiation; the explicit
/// form, when present, by substitution.
pub fn verify_general_solution(
    ode: &CubicOde,
    gs: &GeneralSolution,
    tr: Option<&PointTransform>,
) -> Result<SolutionCheck> {
    let via_integrals = match tr {
        Some(tr) => first_integrals(tr, ode).is_ok(),
        None => false,
    };
    let implicit_residual = implicit_ode_residual(ode, &gs.implicit)?;
    let explicit_residual = match &gs.explicit {
        Some(y) => Some(explicit_ode_residual(ode, y)?),
        None => None,
    };
    let verified = implicit_residual.is_zero_literal()
        && tr.is_none_or(|_| via_integrals)
        && explicit_residual.as_ref().is_none_or(Expr::is_zero_literal);
    Ok(SolutionCheck {
        implicit_via_integrals: via_integrals,
        implicit_residual: implicit_residual.to_string(),
        explicit_residual: explicit_residual.map(|e| e.to_string()),
        verified,
    })
}

/// Slope field `y' = -R_x / R_y` of the relation substituted into the ODE.
pub fn implicit_ode_residual(ode: &CubicOde, rel: &Expr) -> Result<Expr> {
    let slope = canonical(&(-(rel.dx()) / rel.dy()))?;
    let second = slope.dx() + slope.dy() * slope.clone();
    let cubic = ode.cubic().subst(&Symbol::Yp, &slope);
    canonical(&(second + cubic))
}

/// `Y'' + F3 Y'^3 + F2 Y'^2 + F1 Y' + F` at `y = Y(x)`.
pub fn explicit_ode_residual(ode: &CubicOde, y: &Expr) -> Result<Expr> {
    if y.depends_on(&Symbol::Y) {
        return Err(Error::Input("explicit solution must not contain y".into()));
    }
    let d1 = canonical(&y.dx())?;
    let d2 = d1.dx();
    let cubic = ode
        .cubic()
        .subst_all(&[(Symbol::Y, y.clone()), (Symbol::Yp, d1)]);
    canonical(&(d2 + cubic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::parse_ode;

    fn p(s: &str) -> Expr {
        parse_expr(s, &ParseContext::new()).unwrap()
    }

    fn same(a: &Expr, b: &str) -> bool {
        normalize(&(a.clone() - p(b))).unwrap().is_zero()
    }

    fn emden() -> CubicOde {
        parse_ode("y'' + 3*y*y' + y^3 = 0", &ParseContext::new()).unwrap()
    }

    #[test]
    fn identity_pushes_to_free_particle() {
        let tr = PointTransform::new(Expr::x(), Expr::y()).unwrap();
        let (pf, ode) = pushforward_coefficients(&tr).unwrap();
        assert!(pf.all().iter().all(|e| e.is_zero_literal()));
        assert_eq!(ode, CubicOde::free_particle());
    }

    #[test]
    fn emden_pushforward() {
        let tr = PointTransform::new(p("x - 1/y"), p("x^2/2 - x/y")).unwrap();
        assert!(same(&tr.jacobian().unwrap(), "1/y^3"));
        let (pf, ode) = pushforward_coefficients(&tr).unwrap();
        let want = ["0", "-2/y", "1/y", "y", "y", "y^3"];
        for (got, w) in pf.all().iter().zip(want) {
            assert!(same(got, w), "{got} vs {w}");
        }
        assert!(transform_matches_ode(&tr, &emden()).unwrap().matches);
        assert_eq!(ode, emden());
    }

    #[test]
    fn identity_does_not_match_emden() {
        let tr = PointTransform::new(Expr::x(), Expr::y()).unwrap();
        let m = transform_matches_ode(&tr, &emden()).unwrap();
        assert!(!m.matches);
        assert!(same(&m.residuals[2], "-3*y") && same(&m.residuals[3], "-y^3"));
    }

    #[test]
    fn singular_jacobian_rejected() {
        assert_eq!(
            PointTransform::new(p("x+y"), p("2*x+2*y")),
            Err(Error::SingularJacobian)
        );
    }

    #[test]
    fn first_integrals_of_free_particle_and_emden() {
        let tr = PointTransform::new(Expr::x(), Expr::y()).unwrap();
        let (i1, i2) = first_integrals(&tr, &CubicOde::free_particle()).unwrap();
        assert!(same(&i1.expr, "y'") && same(&i2.expr, "y - x*y'"));
        let tr = PointTransform::new(p("x - 1/y"), p("x^2/2 - x/y")).unwrap();
        let (i1, i2) = first_integrals(&tr, &emden()).unwrap();
        assert!(same(&i1.expr, "(x*y^2 - y + x*y')/(y^2 + y')"));
        assert!(quotient_integral(&emden(), &i1, &i2).is_ok());
    }

    #[test]
    fn s_system_examples() {
        let aux = AuxPair::new(p("1/y"), p("y")).unwrap();
        let r = s_system_residuals(&p("x - 1/y"), &emden(), &aux).unwrap();
        assert!(r.iter().all(Expr::is_zero_literal));
        let r = s_system_residuals(&p("y"), &emden(), &aux).unwrap();
        // S_y = 1 leaves -z and -F in the last two equations
        assert!(same(&r[0], "2/y") && same(&r[1], "-y") && same(&r[2], "-y^3"));
    }

    #[test]
    fn solves_emden_system_in_small_basis() {
        let aux = AuxPair::new(p("1/y"), p("y")).unwrap();
        let basis: Vec<Expr> = ["1", "x", "x^2", "y", "x*y", "x^2*y", "1/y", "x/y", "x^2/y"]
            .iter()
            .map(|s| p(s))
            .collect();
        let (sols, dim) = solve_in_basis(&emden(), &aux, &basis).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(dim, 3);
        let ans = solve_s_system(
            &emden(),
            &aux,
            &AnsatzConfig {
                rungs: vec![AnsatzRung::User(basis[1..].to_vec())],
            },
        )
        .unwrap();
        assert!(
            transform_matches_ode(&ans.transform, &emden())
                .unwrap()
                .matches
        );
    }

    #[test]
    fn invalid_aux_is_rejected() {
        let aux = AuxPair::new(Expr::zero(), Expr::zero()).unwrap();
        assert!(matches!(
            solve_s_system(&emden(), &aux, &AnsatzConfig::default()),
            Err(Error::AuxInvalid(_))
        ));
    }

    #[test]
    fn emden_general_solution() {
        let tr = PointTransform::new(p("x - 1/y"), p("x^2/2 - x/y")).unwrap();
        let gs = GeneralSolution::from_transform(&tr).unwrap();
        assert!(gs.explicit.is_some());
        let check = verify_general_solution(&emden(), &gs, Some(&tr)).unwrap();
        assert!(check.verified, "{check:?}");
        let ctx = ParseContext::with_params(["c1", "c2"]);
        let known = parse_expr("(2*x+c1)/(x^2+c1*x+c2)", &ctx).unwrap();
        assert!(explicit_ode_residual(&emden(), &known)
            .unwrap()
            .is_zero_literal());
    }

    #[test]
    fn ansatz_text() {
        let a = AnsatzConfig::parse("poly:2, basis:x;1/(x+y)", &ParseContext::new()).unwrap();
        assert_eq!(a.rungs.len(), 2);
        assert!(AnsatzConfig::parse("bogus", &ParseContext::new()).is_err());
    }
}
