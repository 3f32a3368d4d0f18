//! λ-symmetries of the canonical form `(∂/∂y, λ)` and the reduced system
//! they impose on the auxiliary functions `(w, z)`.

use crate::error::{Error, Result};
use crate::expr::{canonical, coefficients_in, normalize, Expr, Symbol};
use crate::ode::CubicOde;

/// Auxiliary functions `(w, z)` of `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxPair {
    pub w: Expr,
    pub z: Expr,
}

impl AuxPair {
    pub fn new(w: Expr, z: Expr) -> Result<AuxPair> {
        if w.depends_on(&Symbol::Yp) || z.depends_on(&Symbol::Yp) {
            return Err(Error::Input("w and z must not depend on y'".into()));
        }
        Ok(AuxPair {
            w: canonical(&w)?,
            z: canonical(&z)?,
        })
    }
}

/// Which transformation component scales λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleRole {
    Phi,
    Psi,
}

/// `D_x λ + λ² - f_y - λ f_{y'}`, normalized. The λ-prolongation of `∂/∂y`
/// has components `(1, λ, D_x λ + λ²)`.
pub fn lambda_determining_residual(ode: &CubicOde, lambda: &Expr) -> Result<Expr> {
    canonical(&raw_determining(ode, lambda))
}

fn raw_determining(ode: &CubicOde, lambda: &Expr) -> Expr {
    let f = ode.rhs();
    Expr::sum([
        ode.total_derivative(lambda),
        lambda.clone().pow(2),
        -f.dy(),
        -(lambda.clone() * f.dyp()),
    ])
}

/// `λ = -F3 y'^2 - (F2 - w) y' - z`, optionally shifted by the logarithmic
/// derivatives of a scale `S`: `+ (S_y/S) y' + S_x/S`.
pub fn lambda_from_aux(
    ode: &CubicOde,
    aux: &AuxPair,
    scale: Option<(&Expr, ScaleRole)>,
) -> Result<Expr> {
    let p = Expr::yp();
    let mut terms = vec![
        -(ode.f3.clone() * p.clone().pow(2)),
        -((ode.f2.clone() - aux.w.clone()) * p.clone()),
        -aux.z.clone(),
    ];
    if let Some((s, _)) = scale {
        if normalize(s)?.is_zero() {
            return Err(Error::DivisionByZero);
        }
        terms.push(s.dy() / s.clone() * p);
        terms.push(s.dx() / s.clone());
    }
    canonical(&Expr::sum(terms))
}

/// The three reduced equations as `LHS - RHS`:
///
/// ```text
/// w_y        = -w^2 + F2 w + F3 z + F3_x - F1 F3
/// w_x - z_y  = 2 w z - 2 F3 F + F2_x - F1_y
/// z_x        = z^2 - F1 z - F w + F_y + F F2
/// ```
pub fn aux_system_residuals(ode: &CubicOde, aux: &AuxPair) -> Result<[Expr; 3]> {
    let (f3, f2, f1, f) = (&ode.f3, &ode.f2, &ode.f1, &ode.f0);
    let (w, z) = (&aux.w, &aux.z);
    let wy = Expr::sum([
        w.dy(),
        w.clone().pow(2),
        -(f2.clone() * w.clone()),
        -(f3.clone() * z.clone()),
        -f3.dx(),
        f1.clone() * f3.clone(),
    ]);
    let mixed = Expr::sum([
        w.dx(),
        -z.dy(),
        Expr::int(-2) * w.clone() * z.clone(),
        Expr::int(2) * f3.clone() * f.clone(),
        -f2.dx(),
        f1.dy(),
    ]);
    let zx = Expr::sum([
        z.dx(),
        -z.clone().pow(2),
        f1.clone() * z.clone(),
        f.clone() * w.clone(),
        -f.dy(),
        -(f.clone() * f2.clone()),
    ]);
    Ok([canonical(&wy)?, canonical(&mixed)?, canonical(&zx)?])
}

/// Coefficients of powers of `y'` (lowest first) of an expression that is
/// polynomial in `y'` with coefficients in `(x, y)`.
pub fn coefficients_in_yp(e: &Expr) -> Result<Vec<Expr>> {
    coefficients_in(e, &Symbol::Yp)?
        .ok_or_else(|| Error::Input(format!("`{e}` is not polynomial in y'")))
}
