//! Acceptance criteria 1-8. Each criterion prints one PASS/FAIL line; the
//! test fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use odelin::expr::{
    is_zero, normalize, parse_expr, Assignment, Expr, ParseContext, Symbol, ZeroVerdict,
};
use odelin::lambda::{aux_system_residuals, lambda_determining_residual, lambda_from_aux, AuxPair};
use odelin::lie_conditions::{lie_conditions_residuals, trace_condition_residual};
use odelin::lie_tresse::lie_tresse_residuals;
use odelin::numeric::rk4_crosscheck;
use odelin::ode::{parse_ode, CubicOde};
use odelin::report::{run_pipeline, Mode, Options, Verdict};
use odelin::special::{
    build_linear_odes, detect_special_class, solve_const_coeff, transforms_from_h,
};
use odelin::transform::{
    explicit_ode_residual, pushforward_coefficients, s_system_residuals, transform_matches_ode,
    GeneralSolution, PointTransform,
};

const EMDEN: &str = "y'' + 3*y*y' + y^3 = 0";
const LIENARD: &str = "y'' + (b + 3*k*y)*y' + k^2*y^3 + b*k*y^2 + b^2/4*y = 0";
const RATIONAL_QUADRATIC: &str = "y'' - 2/(x+y)*y'^2 - 1/(x+y)*y' = 0";
const CUBIC_OVER_X: &str = "x*y'' - y'^3 - y' = 0";
const LOG_KERNELS: &str = "y'' - 1/x*y'^3 + 2*y/(y^2-1)*y'^2 - 1/x*y' = 0";
const LOG_PSI: &str = "((y^3-3*y+2)*ln(y-1) + (2+3*y-y^3)*ln(y+1) + 3*x^2 - y^2)/(y*(y^2-3))";

const EMDEN_BUDGET: Duration = Duration::from_secs(2);
const LIENARD_BUDGET: Duration = Duration::from_secs(5);
const GENERATIVE_BUDGET: Duration = Duration::from_secs(60);
const GENERATIVE_CASES: usize = 200;
const GENERATIVE_SEED: u64 = 0x5EED_0005;
const RK4_TOLERANCE: f64 = 1e-5;
const RK4_STEP: f64 = 1e-3;

fn ctx() -> ParseContext {
    ParseContext::with_params(["b", "k", "c1", "c2"])
}

fn p(s: &str) -> Expr {
    parse_expr(s, &ctx()).unwrap()
}

fn ode(s: &str) -> CubicOde {
    parse_ode(s, &ctx()).unwrap()
}

fn aux(w: &str, z: &str) -> AuxPair {
    AuxPair::new(p(w), p(z)).unwrap()
}

fn tr(phi: &str, psi: &str) -> PointTransform {
    PointTransform::new(p(phi), p(psi)).unwrap()
}

fn exactly_zero(es: &[Expr]) -> bool {
    es.iter().all(Expr::is_zero_literal)
}

fn equivalent(a: &Expr, b: &str) -> bool {
    normalize(&(a.clone() - p(b))).unwrap().is_zero()
}

fn within(label: &str, budget: Duration, start: Instant) {
    let t = start.elapsed();
    assert!(t < budget, "{label} took {t:?}, budget {budget:?}");
}

fn criterion_1() {
    let start = Instant::now();
    let report = run_pipeline(EMDEN, &Options::default());
    within("Emden pipeline", EMDEN_BUDGET, start);
    assert_eq!(
        report.status.verdict,
        Verdict::Linearizable,
        "{}",
        report.to_json()
    );
    let lt = report.lie_tresse.as_ref().unwrap();
    assert_eq!(
        (lt.first.residual.as_str(), lt.second.residual.as_str()),
        ("0", "0")
    );
    assert_eq!(lt.first.verdict, ZeroVerdict::Zero);
    let o = ode(EMDEN);
    let t = report.transform.as_ref().unwrap();
    let ours = tr(&t.phi, &t.psi);
    assert!(transform_matches_ode(&ours, &o).unwrap().matches);
    assert!(
        transform_matches_ode(&tr("x - 1/y", "x^2/2 - x/y"), &o)
            .unwrap()
            .matches
    );
    assert!(equivalent(&ours.phi, "x - 1/y") && equivalent(&ours.psi, "x^2/2 - x/y"));
    let y = p("(2*x + c1)/(x^2 + c1*x + c2)");
    assert!(explicit_ode_residual(&o, &y).unwrap().is_zero_literal());
    let gs = report.general_solution.as_ref().unwrap();
    assert!(gs.verified && gs.explicit_check.as_ref().unwrap().verdict == ZeroVerdict::Zero);
}

fn criterion_2() {
    let start = Instant::now();
    let o = ode(LIENARD);
    let sc = detect_special_class(&o).unwrap();
    assert!(equivalent(&sc.a, "3*k") && equivalent(&sc.b, "b"));
    assert!(equivalent(&sc.c, "b^2/4") && sc.d.is_zero_literal());
    let (_, second) = build_linear_odes(&sc).unwrap();
    let h = solve_const_coeff(&second).unwrap();
    assert!(equivalent(&h.solutions[0], "exp(-b*x/2)"));
    assert!(equivalent(&h.solutions[1], "x*exp(-b*x/2)"));
    let generated = transforms_from_h(&sc, &h.solutions[0], &h.solutions[1], None).unwrap();
    assert!(transform_matches_ode(&generated, &o).unwrap().matches);
    let listed = tr(
        "(2*k*y + b)/(b*k*y)*exp(-b*x/2)",
        "(2*b*k*x*y + 4*k*y + b^2*x)/(b^2*k*y)*exp(-b*x/2)",
    );
    assert!(transform_matches_ode(&listed, &o).unwrap().matches);
    let y = p("b^2*(c1 - x)/(2*b*k*x + 4*k - 2*c1*b*k + c2*b^2*k*exp(b*x/2))");
    assert!(explicit_ode_residual(&o, &y).unwrap().is_zero_literal());
    let opts = Options {
        params: vec!["b".into(), "k".into()],
        ..Options::default()
    };
    let report = run_pipeline(LIENARD, &opts);
    assert_eq!(
        report.status.verdict,
        Verdict::Linearizable,
        "{}",
        report.to_json()
    );
    within("Lienard", LIENARD_BUDGET, start);
}

fn criterion_3() {
    let cases: [(&str, Vec<(&str, &str)>, (&str, &str)); 3] = [
        (
            RATIONAL_QUADRATIC,
            vec![
                ("-1/(x+y)", "0"),
                ("x/(y*(x+y))", "0"),
                ("x/((x+2*y)*(x+y))", "-2*(x+y)/(x*(x+2*y))"),
            ],
            ("y", "x*(x+2*y)"),
        ),
        (CUBIC_OVER_X, vec![("1/y", "0")], ("1/y", "y + x^2/y")),
        (
            LOG_KERNELS,
            vec![("(3*y^2-3)/(y^3-3*y)", "0")],
            ("1/(y*(y^2-3))", LOG_PSI),
        ),
    ];
    for (eq, pairs, (phi, psi)) in cases {
        let o = ode(eq);
        for (w, z) in &pairs {
            let a = aux(w, z);
            assert!(
                exactly_zero(&lie_conditions_residuals(&o, &a).unwrap()),
                "{eq}: ({w}, {z})"
            );
            assert!(
                exactly_zero(&aux_system_residuals(&o, &a).unwrap()),
                "{eq}: ({w}, {z})"
            );
            assert!(trace_condition_residual(&o, &a).unwrap().is_zero_literal());
        }
        let t = tr(phi, psi);
        let a = aux(pairs[0].0, pairs[0].1);
        assert!(
            exactly_zero(&s_system_residuals(&t.phi, &o, &a).unwrap()),
            "{eq}: phi"
        );
        assert!(
            exactly_zero(&s_system_residuals(&t.psi, &o, &a).unwrap()),
            "{eq}: psi"
        );
        let m = transform_matches_ode(&t, &o).unwrap();
        assert!(m.matches, "{eq}: {:?}", m.residuals);
    }
    // the last case must actually carry ln kernels
    assert!(p(LOG_PSI).to_string().contains("ln("));
}

fn criterion_4() {
    let opts = Options {
        mode: Mode::Check,
        ..Options::default()
    };
    let report = run_pipeline("y'' = y^2", &opts);
    let lt = report.lie_tresse.as_ref().unwrap();
    assert!(!lt.linearizable);
    assert_eq!(lt.second.residual, "-6");
    assert_eq!(report.status.verdict, Verdict::NotLinearizable);
    assert_eq!(report.exit_code(), 1);
    let direct = lie_tresse_residuals(&ode("y'' = y^2")).unwrap();
    assert_eq!(direct.second, Expr::int(-6));
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> Expr {
    let monomials = ["1", "x", "y", "x^2", "x*y", "y^2"];
    let terms: Vec<Expr> = monomials
        .iter()
        .map(|m| Expr::int(rng.gen_range(-3..=3)) * p(m))
        .collect();
    Expr::sum(terms)
}

fn generated_case(phi: &Expr, psi: &Expr) -> Result<bool, String> {
    let t = match PointTransform::new(phi.clone(), psi.clone()) {
        Ok(t) => t,
        Err(_) => return Ok(false),
    };
    let (pf, o) = pushforward_coefficients(&t).map_err(|e| e.to_string())?;
    let fail = |what: &str| Err(format!("{what} for phi = {phi}, psi = {psi}"));
    let lt = lie_tresse_residuals(&o).map_err(|e| e.to_string())?;
    if !(lt.first.is_zero_literal() && lt.second.is_zero_literal()) {
        return fail("Lie-Tresse residuals");
    }
    let a = pf.aux();
    if !exactly_zero(&lie_conditions_residuals(&o, &a).map_err(|e| e.to_string())?) {
        return fail("Lie conditions");
    }
    if !trace_condition_residual(&o, &a)
        .map_err(|e| e.to_string())?
        .is_zero_literal()
    {
        return fail("trace condition");
    }
    let l = lambda_from_aux(&o, &a, None).map_err(|e| e.to_string())?;
    if !lambda_determining_residual(&o, &l)
        .map_err(|e| e.to_string())?
        .is_zero_literal()
    {
        return fail("determining residual");
    }
    for s in [&t.phi, &t.psi] {
        if !exactly_zero(&s_system_residuals(s, &o, &a).map_err(|e| e.to_string())?) {
            return fail("linear system for the components");
        }
    }
    Ok(true)
}

fn criterion_5() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(GENERATIVE_SEED);
    let mut done = 0;
    let mut draws = 0;
    while done < GENERATIVE_CASES {
        draws += 1;
        assert!(draws < 20 * GENERATIVE_CASES, "too many degenerate draws");
        let (phi, psi) = (random_quadratic(&mut rng), random_quadratic(&mut rng));
        match generated_case(&phi, &psi) {
            Ok(true) => done += 1,
            Ok(false) => {}
            Err(msg) => panic!("{msg}"),
        }
    }
    within("generative round trip", GENERATIVE_BUDGET, start);
}

fn criterion_6() {
    let cases = [
        (EMDEN, "1/y", "y", true),
        (LIENARD, "1/y", "k*y", true),
        (RATIONAL_QUADRATIC, "-1/(x+y)", "0", true),
        (
            RATIONAL_QUADRATIC,
            "x/((x+2*y)*(x+y))",
            "-2*(x+y)/(x*(x+2*y))",
            true,
        ),
        (CUBIC_OVER_X, "1/y", "0", true),
        (LOG_KERNELS, "(3*y^2-3)/(y^3-3*y)", "0", true),
        (EMDEN, "0", "0", false),
        (EMDEN, "1/y", "x", false),
        (RATIONAL_QUADRATIC, "1/(x+y)", "0", false),
        (CUBIC_OVER_X, "y", "0", false),
        (LOG_KERNELS, "1/y", "0", false),
    ];
    let (mut passing, mut failing) = (0, 0);
    for (eq, w, z, expected) in cases {
        let o = ode(eq);
        let a = aux(w, z);
        let l = lambda_from_aux(&o, &a, None).unwrap();
        let determining = lambda_determining_residual(&o, &l)
            .unwrap()
            .is_zero_literal();
        let reduced = exactly_zero(&aux_system_residuals(&o, &a).unwrap());
        assert_eq!(determining, reduced, "{eq}: ({w}, {z})");
        assert_eq!(determining, expected, "{eq}: ({w}, {z})");
        if determining {
            passing += 1;
        } else {
            failing += 1;
        }
    }
    assert!(passing >= 3 && failing >= 3);
}

fn criterion_7() {
    let emden = ode(EMDEN);
    let y = p("(2*x + c1)/(x^2 + c1*x + c2)");
    let values = Assignment::new()
        .with(Symbol::param("c1"), 0.0)
        .with(Symbol::param("c2"), 1.0);
    let r = rk4_crosscheck(&emden, &y, &values, (0.0, 1.0), RK4_STEP).unwrap();
    assert!(
        r.max_deviation < RK4_TOLERANCE,
        "Emden deviation {}",
        r.max_deviation
    );

    let o = ode(RATIONAL_QUADRATIC);
    let gs = GeneralSolution::from_transform(&tr("y", "x*(x+2*y)")).unwrap();
    let branch = gs.explicit.expect("relation is linear in y");
    let values = Assignment::new()
        .with(Symbol::param("c1"), 0.0)
        .with(Symbol::param("c2"), 3.0);
    let direct = odelin::expr::eval_numeric(&branch, &values.clone().with(Symbol::X, 1.5)).unwrap();
    assert!(
        (direct - (3.0 - 2.25) / 3.0).abs() < 1e-12,
        "branch is (3 - x^2)/(2x)"
    );
    let r = rk4_crosscheck(&o, &branch, &values, (1.0, 2.0), RK4_STEP).unwrap();
    assert!(
        r.max_deviation < RK4_TOLERANCE,
        "rational-quadratic deviation {}",
        r.max_deviation
    );
}

fn criterion_8() {
    for identity in [
        "exp(x)*exp(y) - exp(x+y)",
        "exp(2*x) - exp(x)^2",
        "exp(x)/exp(x-y) - exp(y)",
        "exp(0) - 1",
        "exp(x/2)^2 - exp(x)",
        "exp(-b*x/2)*exp(b*x/2) - 1",
    ] {
        assert!(normalize(&p(identity)).unwrap().is_zero(), "{identity}");
        assert_eq!(is_zero(&p(identity)).unwrap(), ZeroVerdict::Zero);
    }
    let split = p("ln(x*y) - ln(x) - ln(y)");
    assert!(!normalize(&split).unwrap().is_zero());
    assert_eq!(is_zero(&split).unwrap(), ZeroVerdict::NumericOnlyZero);
    let opts = Options {
        mode: Mode::LambdaVerify {
            lambda: "ln(x*y) - ln(x) - ln(y)".into(),
        },
        ..Options::default()
    };
    let report = run_pipeline("y'' = 0", &opts);
    let l = report.lambda.as_ref().unwrap();
    assert_eq!(l.determining.verdict, ZeroVerdict::NumericOnlyZero);
    assert_ne!(l.determining.residual, "0");
    assert_eq!(report.numeric_only_zero.len(), 1);
    assert!(report.to_json().contains("numeric_only_zero"));
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn()); 8] = [
        ("1 modified Emden end to end", criterion_1),
        ("2 Lienard-type with symbolic b, k", criterion_2),
        (
            "3 cubic and quadratic examples, exact residuals",
            criterion_3,
        ),
        ("4 negative control y'' = y^2", criterion_4),
        ("5 generative round trip, 200 cases", criterion_5),
        ("6 lambda / reduced-system equivalence", criterion_6),
        ("7 RK4 cross-validation", criterion_7),
        ("8 kernel soundness", criterion_8),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {name}: PASS ({secs:.2} s)"),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {name}: FAIL ({secs:.2} s) {msg}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
