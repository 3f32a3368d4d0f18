//! The two invariant expressions whose vanishing characterizes
//! linearizability of the cubic form by a point transformation.

use serde::Serialize;

use crate::error::Result;
use crate::expr::{canonical, Expr};
use crate::ode::CubicOde;

#[derive(Clone, Debug, PartialEq)]
pub struct LieTresse {
    pub first: Expr,
    pub second: Expr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Linearizability {
    Linearizable,
    NotLinearizable,
}

impl LieTresse {
    pub fn verdict(&self) -> Linearizability {
        if self.first.is_zero_literal() && self.second.is_zero_literal() {
            Linearizability::Linearizable
        } else {
            Linearizability::NotLinearizable
        }
    }
}

/// Both invariants, normalized. Term order follows
///
/// ```text
/// I1 = F1_yy - 2 F2_xy + 3 F3_xx - 3 F1_x F3 - 3 F1 F3_x + 6 F_y F3 + 3 F F3_y
///      - F2 F1_y + 2 F2 F2_x
/// I2 = F2_xx - 2 F1_xy + 3 F_yy + 3 F_y F2 + 3 F F2_y - 3 F_x F3 - 6 F F3_x
///      + F1 F2_x - 2 F1 F1_y
/// ```
pub fn lie_tresse_residuals(ode: &CubicOde) -> Result<LieTresse> {
    let (first, second) = raw_invariants(ode);
    Ok(LieTresse {
        first: canonical(&first)?,
        second: canonical(&second)?,
    })
}

/// The invariants as unsimplified expression trees.
pub fn raw_invariants(ode: &CubicOde) -> (Expr, Expr) {
    let (f3, f2, f1, f) = (&ode.f3, &ode.f2, &ode.f1, &ode.f0);
    let c = Expr::int;
    let first = Expr::sum([
        f1.dy().dy(),
        c(-2) * f2.dx().dy(),
        c(3) * f3.dx().dx(),
        c(-3) * f1.dx() * f3.clone(),
        c(-3) * f1.clone() * f3.dx(),
        c(6) * f.dy() * f3.clone(),
        c(3) * f.clone() * f3.dy(),
        -(f2.clone() * f1.dy()),
        c(2) * f2.clone() * f2.dx(),
    ]);
    let second = Expr::sum([
        f2.dx().dx(),
        c(-2) * f1.dx().dy(),
        c(3) * f.dy().dy(),
        c(3) * f.dy() * f2.clone(),
        c(3) * f.clone() * f2.dy(),
        c(-3) * f.dx() * f3.clone(),
        c(-6) * f.clone() * f3.dx(),
        f1.clone() * f2.dx(),
        c(-2) * f1.clone() * f1.dy(),
    ]);
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ParseContext;
    use crate::ode::parse_ode;

    fn run(s: &str) -> LieTresse {
        lie_tresse_residuals(&parse_ode(s, &ParseContext::new()).unwrap()).unwrap()
    }

    #[test]
    fn emden_is_linearizable() {
        let r = run("y'' + 3*y*y' + y^3 = 0");
        assert_eq!(r.verdict(), Linearizability::Linearizable);
    }

    #[test]
    fn quadratic_force_is_not() {
        let r = run("y'' = y^2");
        assert!(r.first.is_zero_literal());
        assert_eq!(r.second, Expr::int(-6));
        assert_eq!(r.verdict(), Linearizability::NotLinearizable);
    }

    #[test]
    fn example_with_reciprocal_coefficients() {
        let r = run("y'' - 2/(x+y)*y'^2 - 1/(x+y)*y' = 0");
        assert_eq!(r.verdict(), Linearizability::Linearizable);
    }

    #[test]
    fn verdict_invariant_under_leading_factor() {
        let a = run("y'' + 3*y*y' + y^3 = 0");
        let b = run("(x^2+1)*(y'' + 3*y*y' + y^3) = 0");
        assert_eq!(a, b);
    }
}
