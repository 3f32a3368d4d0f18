use std::fmt::{self, Write};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::Expr;

// Binding strength of the surrounding context.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const FACTOR: u8 = 3;
const ATOM: u8 = 4;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, 0);
        f.write_str(&s)
    }
}

fn looks_negative(e: &Expr) -> bool {
    match e {
        Expr::Num(q) => q.is_negative(),
        Expr::Mul(v) => matches!(v.first(), Some(Expr::Num(q)) if q.is_negative()),
        _ => false,
    }
}

fn negated(e: &Expr) -> Expr {
    match e {
        Expr::Num(q) => Expr::Num(-q),
        Expr::Mul(v) => {
            let mut v = v.clone();
            if let Expr::Num(q) = &v[0] {
                let q = -q.clone();
                if q.is_one() {
                    v.remove(0);
                } else {
                    v[0] = Expr::Num(q);
                }
            }
            if v.len() == 1 {
                v.pop().unwrap()
            } else {
                Expr::Mul(v)
            }
        }
        other => other.clone(),
    }
}

fn write_num(out: &mut String, q: &BigRational, ctx: u8) {
    let simple = q.is_integer() && !q.is_negative();
    let paren = !simple && ctx >= FACTOR;
    if paren {
        out.push('(');
    }
    if q.is_integer() {
        let _ = write!(out, "{}", q.numer());
    } else {
        let _ = write!(out, "{}/{}", q.numer(), q.denom());
    }
    if paren {
        out.push(')');
    }
}

fn write_expr(out: &mut String, e: &Expr, ctx: u8) {
    match e {
        Expr::Num(q) => write_num(out, q, ctx),
        Expr::Sym(s) => out.push_str(s.name()),
        Expr::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(out, a, 0);
            out.push(')');
        }
        Expr::Add(terms) => {
            let paren = ctx > SUM;
            if paren {
                out.push('(');
            }
            for (i, t) in terms.iter().enumerate() {
                if i == 0 {
                    write_expr(out, t, SUM);
                } else if looks_negative(t) {
                    out.push_str(" - ");
                    write_expr(out, &negated(t), SUM);
                } else {
                    out.push_str(" + ");
                    write_expr(out, t, SUM);
                }
            }
            if paren {
                out.push(')');
            }
        }
        Expr::Mul(factors) => {
            let paren = ctx >= FACTOR;
            if paren {
                out.push('(');
            }
            let mut rest: &[Expr] = factors;
            if let Some(Expr::Num(q)) = factors.first() {
                if factors.len() > 1 && (q.is_one() || (-q).is_one()) {
                    if q.is_negative() {
                        out.push('-');
                    }
                    rest = &factors[1..];
                    if rest.len() == 1 {
                        // `-a/b` re-parses as the negation of the quotient
                        write_expr(out, &rest[0], PRODUCT);
                        if paren {
                            out.push(')');
                        }
                        return;
                    }
                } else {
                    let _ = write!(out, "{}", q.numer());
                    if !q.is_integer() {
                        let _ = write!(out, "/{}", q.denom());
                    }
                    rest = &factors[1..];
                    if !rest.is_empty() {
                        out.push('*');
                    }
                }
            }
            let lead_is_number = rest.len() < factors.len();
            for (i, fct) in rest.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                let first_quotient_ok = i == 0 && !lead_is_number && matches!(fct, Expr::Div(..));
                write_expr(out, fct, if first_quotient_ok { PRODUCT } else { FACTOR });
            }
            if paren {
                out.push(')');
            }
        }
        Expr::Div(a, b) => {
            let paren = ctx >= FACTOR;
            if paren {
                out.push('(');
            }
            let num_ctx = if looks_negative(a) { FACTOR } else { PRODUCT };
            write_expr(out, a, num_ctx);
            out.push('/');
            write_expr(out, b, FACTOR + u8::from(!is_atomic(b)));
            if paren {
                out.push(')');
            }
        }
        Expr::Pow(b, n) => {
            let bare = match &**b {
                Expr::Sym(_) | Expr::Func(..) => true,
                Expr::Num(q) => q.is_integer() && !q.is_negative(),
                _ => false,
            };
            if bare {
                write_expr(out, b, ATOM);
            } else {
                out.push('(');
                write_expr(out, b, 0);
                out.push(')');
            }
            let _ = write!(out, "^{n}");
        }
    }
}

fn is_atomic(e: &Expr) -> bool {
    match e {
        Expr::Sym(_) | Expr::Func(..) | Expr::Pow(..) => true,
        Expr::Num(q) => q.is_integer() && !q.is_negative(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_expr, ParseContext};

    fn round_trip(s: &str) {
        let ctx = ParseContext::with_params(["k", "b"]);
        let e = parse_expr(s, &ctx).unwrap();
        let text = e.to_string();
        let again = parse_expr(&text, &ctx).unwrap_or_else(|err| panic!("{text}: {err}"));
        assert_eq!(e, again, "{s} rendered as {text}");
    }

    #[test]
    fn renders_reparse() {
        for s in [
            "3*y*y' + y^3",
            "(2*k*y+b)/(b*k*y) * exp(-b/2*x)",
            "x - 1/y",
            "x^2/2 - x/y",
            "-(x+y)^2",
            "-2/(x+y)",
            "2*(x/y)",
            "x^-2 + (2/3)^2 - (-2)^3",
            "-x/y + ln(y-1)*(y^3-3*y+2)",
            "sin(x)^2 + cos(-x)",
            "y' * (x + 1) / (k - b)",
        ] {
            round_trip(s);
        }
    }

    #[test]
    fn readable_output() {
        let ctx = ParseContext::new();
        let e = parse_expr("x^2/2 - x/y", &ctx).unwrap();
        assert_eq!(e.to_string(), "1/2*x^2 - x/y");
        let e = parse_expr("-(y+1)", &ctx).unwrap();
        assert_eq!(e.to_string(), "-y - 1");
    }
}
