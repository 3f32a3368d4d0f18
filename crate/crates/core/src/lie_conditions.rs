//! Residuals of the four first-order Lie conditions on `(w, z)`, the trace
//! condition, and the quadratures reconstructing a transformation component.

use crate::error::{Error, Result};
use crate::expr::{canonical, normalize, Expr};
use crate::lambda::AuxPair;
use crate::ode::CubicOde;

/// Right-hand sides of the Lie conditions for `(w_x, w_y, z_x, z_y)`.
pub fn lie_condition_rhs(ode: &CubicOde, aux: &AuxPair) -> [Expr; 4] {
    let (f3, f2, f1, f) = (&ode.f3, &ode.f2, &ode.f1, &ode.f0);
    let (w, z) = (&aux.w, &aux.z);
    let third = |e: Expr| Expr::rational(1, 3) * e;
    let two_thirds = |e: Expr| Expr::rational(2, 3) * e;
    [
        Expr::sum([
            z.clone() * w.clone(),
            -(f.clone() * f3.clone()),
            -third(f1.dy()),
            two_thirds(f2.dx()),
        ]),
        Expr::sum([
            -w.clone().pow(2),
            f2.clone() * w.clone(),
            f3.clone() * z.clone(),
            f3.dx(),
            -(f1.clone() * f3.clone()),
        ]),
        Expr::sum([
            z.clone().pow(2),
            -(f1.clone() * z.clone()),
            -(f.clone() * w.clone()),
            f.dy(),
            f.clone() * f2.clone(),
        ]),
        Expr::sum([
            -(z.clone() * w.clone()),
            f.clone() * f3.clone(),
            -third(f2.dx()),
            two_thirds(f1.dy()),
        ]),
    ]
}

/// `(w_x, w_y, z_x, z_y)` equations as `LHS - RHS`, normalized.
pub fn lie_conditions_residuals(ode: &CubicOde, aux: &AuxPair) -> Result<[Expr; 4]> {
    let [a, b, c, d] = lie_condition_rhs(ode, aux);
    let (w, z) = (&aux.w, &aux.z);
    Ok([
        canonical(&(w.dx() - a))?,
        canonical(&(w.dy() - b))?,
        canonical(&(z.dx() - c))?,
        canonical(&(z.dy() - d))?,
    ])
}

/// `w_x + z_y - (F2_x + F1_y)/3`, normalized.
pub fn trace_condition_residual(ode: &CubicOde, aux: &AuxPair) -> Result<Expr> {
    canonical(&Expr::sum([
        aux.w.dx(),
        aux.z.dy(),
        -(Expr::rational(1, 3) * (ode.f2.dx() + ode.f1.dy())),
    ]))
}

/// `S_x/S - (z - z_i)` and `S_y/S - (w_i - w)`, normalized.
pub fn quadrature_residuals(s: &Expr, aux: &AuxPair, aux_i: &AuxPair) -> Result<[Expr; 2]> {
    if normalize(s)?.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok([
        canonical(&(s.dx() / s.clone() - (aux.z.clone() - aux_i.z.clone())))?,
        canonical(&(s.dy() / s.clone() - (aux_i.w.clone() - aux.w.clone())))?,
    ])
}

/// Mixed-partial defects `(w_x)_y - (w_y)_x` and `(z_x)_y - (z_y)_x` of the
/// right-hand sides, with first derivatives of `w`, `z` eliminated through
/// the conditions themselves. Treats `w`, `z` as unknowns, so the result is
/// a polynomial in them.
pub fn compatibility_defects(ode: &CubicOde) -> Result<[Expr; 2]> {
    use crate::expr::Symbol;
    let w_sym = Symbol::param("__w");
    let z_sym = Symbol::param("__z");
    let aux = AuxPair {
        w: Expr::Sym(w_sym.clone()),
        z: Expr::Sym(z_sym.clone()),
    };
    let rhs = lie_condition_rhs(ode, &aux);
    // total derivative of an expression in (x, y, w, z) along the conditions
    let d = |e: &Expr, by_x: bool| -> Expr {
        let (dw, dz) = if by_x {
            (rhs[0].clone(), rhs[2].clone())
        } else {
            (rhs[1].clone(), rhs[3].clone())
        };
        let partial = if by_x { e.dx() } else { e.dy() };
        Expr::sum([partial, e.diff(&w_sym) * dw, e.diff(&z_sym) * dz])
    };
    let cw = d(&rhs[0], false) - d(&rhs[1], true);
    let cz = d(&rhs[2], false) - d(&rhs[3], true);
    Ok([canonical(&cw)?, canonical(&cz)?])
}
