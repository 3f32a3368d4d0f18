//! Floating-point cross-checks: residual sampling and a fixed-step RK4
//! comparison between an ODE and a closed-form solution.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{eval_numeric, random_point, Assignment, Expr, Symbol};
use crate::ode::CubicOde;

/// Largest `|e|` over `n` regular sample points. Singular points are
/// skipped; more than `50 n` of them is an error.
pub fn sample_residual(e: &Expr, n: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Input("sample count must be positive".into()));
    }
    let symbols: Vec<Symbol> = e.free_symbols().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut good, mut singular, mut max) = (0, 0, 0.0f64);
    while good < n {
        if singular >= 50 * n {
            return Err(Error::AllSamplesSingular(singular));
        }
        let at = random_point(&symbols, &mut rng);
        match eval_numeric(e, &at) {
            Ok(v) if v.is_finite() => {
                max = max.max(v.abs());
                good += 1;
            }
            Ok(_) | Err(Error::SingularPoint(_)) => singular += 1,
            Err(other) => return Err(other),
        }
    }
    Ok(max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rk4Result {
    pub max_deviation: f64,
    pub steps: usize,
    pub start: f64,
    pub end: f64,
}

/// Integrate `y'' = f` with classical RK4 from the initial data of
/// `explicit` at `interval.0` and return the largest deviation from
/// `explicit` at the grid points. `values` fixes the integration constants
/// and any parameters.
pub fn rk4_crosscheck(
    ode: &CubicOde,
    explicit: &Expr,
    values: &Assignment,
    interval: (f64, f64),
    step: f64,
) -> Result<Rk4Result> {
    let (x0, x1) = interval;
    if !(step > 0.0) || !(x1 > x0) {
        return Err(Error::Input(
            "need step > 0 and a non-empty interval".into(),
        ));
    }
    let f = ode.rhs();
    let dy = explicit.dx();
    let at = |x: f64, y: Option<(f64, f64)>| {
        let mut a = values.clone().with(Symbol::X, x);
        if let Some((y, p)) = y {
            a.set(Symbol::Y, y);
            a.set(Symbol::Yp, p);
        }
        a
    };
    let exact = |x: f64| -> Result<f64> {
        eval_numeric(explicit, &at(x, None))
            .ok()
            .filter(|v| v.is_finite())
            .ok_or(Error::SingularTrajectory(x))
    };
    let rhs = |x: f64, y: f64, p: f64| -> Result<f64> {
        eval_numeric(&f, &at(x, Some((y, p))))
            .ok()
            .filter(|v| v.is_finite())
            .ok_or(Error::SingularTrajectory(x))
    };
    let mut y = exact(x0)?;
    let mut p = eval_numeric(&dy, &at(x0, None)).map_err(|_| Error::SingularTrajectory(x0))?;
    let steps = ((x1 - x0) / step).round().max(1.0) as usize;
    let h = (x1 - x0) / steps as f64;
    let mut max_deviation = 0.0f64;
    for i in 0..steps {
        let x = x0 + i as f64 * h;
        let (k1y, k1p) = (p, rhs(x, y, p)?);
        let (k2y, k2p) = (
            p + 0.5 * h * k1p,
            rhs(x + 0.5 * h, y + 0.5 * h * k1y, p + 0.5 * h * k1p)?,
        );
        let (k3y, k3p) = (
            p + 0.5 * h * k2p,
            rhs(x + 0.5 * h, y + 0.5 * h * k2y, p + 0.5 * h * k2p)?,
        );
        let (k4y, k4p) = (p + h * k3p, rhs(x + h, y + h * k3y, p + h * k3p)?);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        let xn = x0 + (i + 1) as f64 * h;
        if !y.is_finite() || !p.is_finite() {
            return Err(Error::SingularTrajectory(xn));
        }
        max_deviation = max_deviation.max((y - exact(xn)?).abs());
    }
    Ok(Rk4Result {
        max_deviation,
        steps,
        start: x0,
        end: x1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, ParseContext, DEFAULT_SEED};
    use crate::ode::parse_ode;

    fn p(s: &str) -> Expr {
        parse_expr(s, &ParseContext::new()).unwrap()
    }

    #[test]
    fn sampling() {
        assert_eq!(
            sample_residual(&Expr::zero(), 5, DEFAULT_SEED).unwrap(),
            0.0
        );
        let r = sample_residual(&p("y'^2 + 3*y' + 3*y^2 - y^3"), 20, DEFAULT_SEED).unwrap();
        assert!(r > 0.1);
        assert!(matches!(
            sample_residual(&p("1/(x-x)"), 3, DEFAULT_SEED),
            Err(Error::AllSamplesSingular(150))
        ));
        let a = sample_residual(&p("x*y/(x+y)"), 10, 3).unwrap();
        assert_eq!(a, sample_residual(&p("x*y/(x+y)"), 10, 3).unwrap());
    }

    #[test]
    fn rk4_on_closed_forms() {
        let emden = parse_ode("y'' + 3*y*y' + y^3 = 0", &ParseContext::new()).unwrap();
        let r = rk4_crosscheck(
            &emden,
            &p("2*x/(x^2+1)"),
            &Assignment::new(),
            (0.0, 1.0),
            1e-3,
        )
        .unwrap();
        assert!(r.max_deviation < 1e-6, "{}", r.max_deviation);
        assert_eq!(r.steps, 1000);
        let r = rk4_crosscheck(
            &CubicOde::free_particle(),
            &p("2*x + 3"),
            &Assignment::new(),
            (0.0, 1.0),
            1e-3,
        )
        .unwrap();
        assert!(r.max_deviation < 1e-12);
        let ex = parse_ode("y'' - 2/(x+y)*y'^2 - 1/(x+y)*y' = 0", &ParseContext::new()).unwrap();
        let r = rk4_crosscheck(
            &ex,
            &p("(3 - x^2)/(2*x)"),
            &Assignment::new(),
            (1.0, 2.0),
            1e-3,
        )
        .unwrap();
        assert!(r.max_deviation < 1e-6, "{}", r.max_deviation);
    }

    #[test]
    fn singular_trajectory() {
        // y = 1/x blows up at 0
        let ode = parse_ode("y'' = 2*y^3", &ParseContext::new()).unwrap();
        let e = rk4_crosscheck(&ode, &p("1/x"), &Assignment::new(), (-1.0, 1.0), 1e-3);
        assert!(matches!(e, Err(Error::SingularTrajectory(_))));
    }
}
