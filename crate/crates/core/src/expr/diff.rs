use super::{Expr, Func, Symbol};

impl Expr {
    /// Exact partial derivative with respect to `v`; every other symbol,
    /// parameters included, is held constant.
    pub fn diff(&self, v: &Symbol) -> Expr {
        if !self.depends_on(v) {
            return Expr::zero();
        }
        match self {
            Expr::Num(_) => Expr::zero(),
            Expr::Sym(s) => Expr::int(i64::from(s == v)),
            Expr::Add(terms) => Expr::sum(terms.iter().map(|t| t.diff(v))),
            Expr::Mul(factors) => {
                let mut terms = Vec::with_capacity(factors.len());
                for (i, f) in factors.iter().enumerate() {
                    let df = f.diff(v);
                    if df.is_zero_literal() {
                        continue;
                    }
                    let others = factors
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, g)| g.clone());
                    terms.push(Expr::product(others.chain(std::iter::once(df))));
                }
                Expr::sum(terms)
            }
            Expr::Pow(b, n) => Expr::product([Expr::int(*n), (**b).clone().pow(n - 1), b.diff(v)]),
            Expr::Div(a, b) => {
                let da = a.diff(v);
                let db = b.diff(v);
                if db.is_zero_literal() {
                    return da / (**b).clone();
                }
                let numer = Expr::product([da, (**b).clone()]) - Expr::product([(**a).clone(), db]);
                numer / (**b).clone().pow(2)
            }
            Expr::Func(f, a) => {
                let da = a.diff(v);
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Ln => return da / (**a).clone(),
                    Func::Sin => (**a).clone().cos(),
                    Func::Cos => -(**a).clone().sin(),
                };
                Expr::product([outer, da])
            }
        }
    }

    /// Repeated partial derivative.
    pub fn diff_n(&self, v: &Symbol, n: usize) -> Expr {
        (0..n).fold(self.clone(), |e, _| e.diff(v))
    }

    pub fn dx(&self) -> Expr {
        self.diff(&Symbol::X)
    }

    pub fn dy(&self) -> Expr {
        self.diff(&Symbol::Y)
    }

    pub fn dyp(&self) -> Expr {
        self.diff(&Symbol::Yp)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{normalize, parse_expr, ParseContext};
    use super::*;

    fn p(s: &str) -> Expr {
        parse_expr(s, &ParseContext::new()).unwrap()
    }

    fn same(a: &Expr, b: &Expr) -> bool {
        normalize(&(a - b)).unwrap().is_zero()
    }

    #[test]
    fn power_rule() {
        assert!(same(&p("y^3").dy(), &p("3*y^2")));
    }

    #[test]
    fn log_chain_rule() {
        assert!(same(&p("ln(x+y)").dx(), &p("1/(x+y)")));
    }

    #[test]
    fn quotient_rule_example_coefficient() {
        // independent hand derivation: d/dy (-2 (x+y)^-1) = 2 (x+y)^-2
        assert!(same(&p("-2/(x+y)").dy(), &p("2/(x+y)^2")));
        assert!(same(&p("-2*(x+y)^-1").dy(), &p("2*(x+y)^-2")));
    }

    #[test]
    fn trig_and_exp() {
        assert!(same(&p("sin(2*x)").dx(), &p("2*cos(2*x)")));
        assert!(same(&p("cos(x*y)").dy(), &p("-x*sin(x*y)")));
        assert!(same(&p("exp(x^2)").dx(), &p("2*x*exp(x^2)")));
    }

    #[test]
    fn parameters_are_constants() {
        let ctx = ParseContext::with_params(["k"]);
        let e = parse_expr("k*x^2 + k^2", &ctx).unwrap();
        assert!(same(&e.dx(), &parse_expr("2*k*x", &ctx).unwrap()));
    }
}
