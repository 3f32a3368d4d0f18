//! Pipeline orchestration and the JSON report.
//!
//! A run walks the stages in order and stops at the first one that fails,
//! leaving the later sections empty. Every `verified` flag is derived from
//! the residual checks stored next to it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;
use crate::expr::{
    canonical, is_zero_seeded, normalize, parse_expr, Assignment, Expr, ParseContext, Symbol,
    ZeroVerdict,
};
use crate::lambda::{aux_system_residuals, lambda_determining_residual, lambda_from_aux, AuxPair};
use crate::lie_conditions::{lie_conditions_residuals, trace_condition_residual};
use crate::lie_tresse::{lie_tresse_residuals, raw_invariants};
use crate::numeric::{rk4_crosscheck, sample_residual, Rk4Result};
use crate::ode::{parse_ode, CoeffTexts, CubicOde};
use crate::special::{
    aux_from_g, build_linear_odes, detect_special_class, solve_const_coeff, transforms_from_h,
    SpecialClass,
};
use crate::transform::{
    explicit_ode_residual, first_integrals, implicit_ode_residual, pushforward_coefficients,
    s_system_residuals, solve_s_system, AnsatzConfig, AnsatzRung, GeneralSolution, PointTransform,
};

/// Absolute bound for the RK4 comparison.
pub const RK4_THRESHOLD: f64 = 1e-5;
/// Absolute bound for sampled raw residuals.
pub const SAMPLE_THRESHOLD: f64 = 1e-6;
const SAMPLE_COUNT: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    /// Lie-Tressé test only.
    Check,
    LieVerify,
    LambdaVerify {
        lambda: String,
    },
    TransformVerify {
        phi: String,
        psi: String,
    },
    Linearize,
    Solve,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub mode: Mode,
    pub seed: u64,
    pub params: Vec<String>,
    pub w: Option<String>,
    pub z: Option<String>,
    pub g: Option<String>,
    pub h: Option<(String, String)>,
    pub ansatz: Option<String>,
    /// RK4 steps over the comparison interval.
    pub steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Solve,
            seed: crate::expr::DEFAULT_SEED,
            params: Vec::new(),
            w: None,
            z: None,
            g: None,
            h: None,
            ansatz: None,
            steps: 1000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Linearizable,
    Verified,
    NotLinearizable,
    Inconclusive,
    Rejected,
    InputError,
    VerificationFailed,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Linearizable | Verdict::Verified => 0,
            Verdict::NotLinearizable => 1,
            Verdict::Inconclusive | Verdict::Rejected => 2,
            Verdict::InputError => 3,
            Verdict::VerificationFailed => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub residual: String,
    pub verdict: ZeroVerdict,
}

impl Check {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieTresseSection {
    pub first: Check,
    pub second: Check,
    pub linearizable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialSection {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub third_order: String,
    pub second_order: String,
    pub g: Option<String>,
    pub h: Option<[String; 2]>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuxProvenance {
    SpecialClassG,
    User,
    Ansatz,
    /// Read off the pushforward of a supplied transformation.
    Transform,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxSection {
    pub w: String,
    pub z: String,
    pub provenance: AuxProvenance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionsSection {
    /// `w_x, w_y, z_x, z_y` equations.
    pub lie: Vec<Check>,
    pub reduced: Vec<Check>,
    pub trace: Check,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaSection {
    pub lambda: String,
    pub determining: Check,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralEntry {
    pub expr: String,
    pub verdict: ZeroVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformSection {
    pub phi: String,
    pub psi: String,
    pub jacobian: String,
    /// Ansatz rung or `user`.
    pub source: String,
    pub dimension: Option<usize>,
    pub solutions: Vec<String>,
    pub s_system_phi: Option<Vec<Check>>,
    pub s_system_psi: Option<Vec<Check>>,
    /// `[F3, F2, F1, F]`, pushforward minus input.
    pub pushforward: Vec<Check>,
    pub first_integrals: Vec<IntegralEntry>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionSection {
    pub implicit: String,
    pub explicit: Option<String>,
    pub implicit_check: Check,
    pub explicit_check: Option<Check>,
    pub mode: &'static str,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rk4Entry {
    pub values: BTreeMap<String, f64>,
    pub result: Rk4Result,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericSection {
    pub seed: String,
    pub samples: usize,
    /// Largest sampled value of each raw (unsimplified) residual.
    pub maxima: BTreeMap<String, f64>,
    pub rk4: Option<Rk4Entry>,
    pub notes: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Status {
    pub verdict: Verdict,
    pub exit_code: i32,
    pub stage: String,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub input: String,
    pub params: Vec<String>,
    pub extracted: Option<CoeffTexts>,
    pub lie_tresse: Option<LieTresseSection>,
    pub special_class: Option<SpecialSection>,
    pub aux: Option<AuxSection>,
    pub conditions: Option<ConditionsSection>,
    pub lambda: Option<LambdaSection>,
    pub transform: Option<TransformSection>,
    pub general_solution: Option<SolutionSection>,
    pub numeric: Option<NumericSection>,
    /// Residuals that vanish at every sample without cancelling exactly.
    pub numeric_only_zero: Vec<String>,
    pub singular_loci: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Stop {
    verdict: Verdict,
    message: String,
}

impl Stop {
    fn new(verdict: Verdict, message: impl Into<String>) -> Stop {
        Stop {
            verdict,
            message: message.into(),
        }
    }
}

impl From<Error> for Stop {
    fn from(e: Error) -> Stop {
        let verdict = match &e {
            Error::Syntax { .. }
            | Error::UndeclaredSymbol(_)
            | Error::NonIntegerExponent { .. }
            | Error::NotCubic(_)
            | Error::DegenerateLeading
            | Error::SingularJacobian
            | Error::DivisionByZero
            | Error::GNotASolution(_)
            | Error::BasisInvalid(_)
            | Error::Input(_) => Verdict::InputError,
            Error::AnsatzExhausted(_)
            | Error::NotInClass(_)
            | Error::Unsolved(_)
            | Error::NonConstant(_)
            | Error::IntegrationUnavailable(_)
            | Error::NotIntegrable(_)
            | Error::AllSamplesSingular(_)
            | Error::SingularPoint(_)
            | Error::SingularTrajectory(_) => Verdict::Inconclusive,
            Error::AntiderivativeMismatch(_)
            | Error::FirstIntegralCheckFailed(_)
            | Error::AuxInvalid(_)
            | Error::SolutionCheckFailed(_) => Verdict::VerificationFailed,
        };
        Stop::new(verdict, e.to_string())
    }
}

type StageResult<T> = std::result::Result<T, Stop>;

struct Run<'a> {
    opts: &'a Options,
    ctx: ParseContext,
    report: Report,
    stage: &'static str,
}

/// Run the stages selected by `opts.mode` on `equation`.
pub fn run_pipeline(equation: &str, opts: &Options) -> Report {
    let mut run = Run {
        opts,
        ctx: ParseContext::with_params(opts.params.iter().map(String::as_str)),
        report: Report {
            input: equation.to_string(),
            params: opts.params.clone(),
            extracted: None,
            lie_tresse: None,
            special_class: None,
            aux: None,
            conditions: None,
            lambda: None,
            transform: None,
            general_solution: None,
            numeric: None,
            numeric_only_zero: Vec::new(),
            singular_loci: Vec::new(),
            status: Status {
                verdict: Verdict::Inconclusive,
                exit_code: 2,
                stage: String::new(),
                message: None,
            },
        },
        stage: "parse",
    };
    let (verdict, message) = match run.stages(equation) {
        Ok(v) => (v, None),
        Err(stop) => (stop.verdict, Some(stop.message)),
    };
    run.report.status = Status {
        verdict,
        exit_code: verdict.exit_code(),
        stage: run.stage.to_string(),
        message,
    };
    run.report
}

impl Run<'_> {
    fn parse(&self, text: &str) -> StageResult<Expr> {
        Ok(parse_expr(text, &self.ctx)?)
    }

    fn judge(&mut self, label: &str, e: &Expr) -> StageResult<Check> {
        let verdict = if e.is_zero_literal() {
            ZeroVerdict::Zero
        } else {
            is_zero_seeded(e, self.opts.seed)?
        };
        if verdict == ZeroVerdict::NumericOnlyZero {
            self.report.numeric_only_zero.push(format!("{label}: {e}"));
        }
        Ok(Check {
            residual: e.to_string(),
            verdict,
        })
    }

    fn judge_all(&mut self, label: &str, es: &[Expr]) -> StageResult<Vec<Check>> {
        es.iter()
            .enumerate()
            .map(|(i, e)| self.judge(&format!("{label}[{i}]"), e))
            .collect()
    }

    fn note_singular(&mut self, what: &str, e: &Expr) -> StageResult<()> {
        let den = normalize(e)?.denominator_expr();
        if den
            .free_symbols()
            .iter()
            .any(|s| matches!(s, Symbol::X | Symbol::Y))
        {
            let entry = format!("{what}: {den} = 0");
            if !self.report.singular_loci.contains(&entry) {
                self.report.singular_loci.push(entry);
            }
        }
        Ok(())
    }

    fn stages(&mut self, equation: &str) -> StageResult<Verdict> {
        self.stage = "extract";
        let ode = parse_ode(equation, &self.ctx)?;
        self.report.extracted = Some(ode.texts());

        if let Mode::LambdaVerify { lambda } = &self.opts.mode {
            return self.lambda_only(&ode, lambda);
        }
        if let Mode::TransformVerify { phi, psi } = &self.opts.mode {
            return self.transform_only(&ode, phi, psi);
        }

        self.stage = "lie-tresse";
        let lt = lie_tresse_residuals(&ode)?;
        let first = self.judge("lie-tresse first", &lt.first)?;
        let second = self.judge("lie-tresse second", &lt.second)?;
        let linearizable = first.holds() && second.holds();
        self.report.lie_tresse = Some(LieTresseSection {
            first,
            second,
            linearizable,
        });
        if self.opts.mode == Mode::Check {
            return Ok(if linearizable {
                Verdict::Linearizable
            } else {
                Verdict::NotLinearizable
            });
        }
        if self.opts.mode == Mode::LieVerify {
            let aux = self
                .user_aux()?
                .ok_or_else(|| Stop::new(Verdict::InputError, "--w and --z are required"))?;
            self.record_aux(&aux, AuxProvenance::User);
            self.stage = "lie-conditions";
            let ok = self.conditions(&ode, &aux)?;
            self.lambda_section(&ode, &aux)?;
            return Ok(if ok {
                Verdict::Verified
            } else {
                Verdict::Rejected
            });
        }
        if !linearizable {
            return Err(Stop::new(
                Verdict::NotLinearizable,
                "Lie-Tresse residuals do not vanish",
            ));
        }

        self.stage = "aux";
        let (aux, provenance, template) = self.find_aux(&ode)?;
        self.record_aux(&aux, provenance);

        self.stage = "lie-conditions";
        if !self.conditions(&ode, &aux)? {
            let verdict = if provenance == AuxProvenance::User {
                Verdict::InputError
            } else {
                Verdict::VerificationFailed
            };
            return Err(Stop::new(
                verdict,
                "(w, z) does not satisfy the Lie conditions",
            ));
        }
        self.stage = "lambda";
        if !self.lambda_section(&ode, &aux)? {
            return Err(Stop::new(
                Verdict::VerificationFailed,
                "determining residual of lambda does not vanish",
            ));
        }

        self.stage = "s-system";
        let mut rungs = Vec::new();
        if let Some(tr) = &template {
            rungs.push(AnsatzRung::Template(vec![tr.phi.clone(), tr.psi.clone()]));
        }
        let ladder = match &self.opts.ansatz {
            Some(text) => AnsatzConfig::parse(text, &self.ctx)?,
            None => AnsatzConfig::default(),
        };
        rungs.extend(ladder.rungs);
        let sol = solve_s_system(&ode, &aux, &AnsatzConfig { rungs })?;
        let tr = sol.transform.clone();
        let s_phi = s_system_residuals(&tr.phi, &ode, &aux)?;
        let s_psi = s_system_residuals(&tr.psi, &ode, &aux)?;
        let s_phi = self.judge_all("s-system phi", &s_phi)?;
        let s_psi = self.judge_all("s-system psi", &s_psi)?;
        self.stage = "transform";
        let ok = self.transform_section(
            &ode,
            &tr,
            sol.rung.clone(),
            Some(sol.dimension),
            sol.solutions.iter().map(|s| s.to_string()).collect(),
            Some((s_phi, s_psi)),
        )?;
        if !ok {
            return Err(Stop::new(
                Verdict::VerificationFailed,
                "transformation does not reach the free particle",
            ));
        }
        if self.opts.mode == Mode::Linearize {
            return Ok(Verdict::Linearizable);
        }

        self.stage = "general-solution";
        let gs = GeneralSolution::from_transform(&tr)?;
        if !self.solution_section(&ode, &gs)? {
            return Err(Stop::new(
                Verdict::VerificationFailed,
                "general solution residual does not vanish",
            ));
        }
        self.stage = "numeric";
        if !self.numeric_section(&ode, &gs)? {
            return Err(Stop::new(
                Verdict::VerificationFailed,
                "numeric cross-check exceeded its threshold",
            ));
        }
        Ok(Verdict::Linearizable)
    }

    fn user_aux(&self) -> StageResult<Option<AuxPair>> {
        match (&self.opts.w, &self.opts.z) {
            (Some(w), Some(z)) => Ok(Some(AuxPair::new(self.parse(w)?, self.parse(z)?)?)),
            (None, None) => Ok(None),
            _ => Err(Stop::new(
                Verdict::InputError,
                "--w and --z must be given together",
            )),
        }
    }

    fn record_aux(&mut self, aux: &AuxPair, provenance: AuxProvenance) {
        self.report.aux = Some(AuxSection {
            w: aux.w.to_string(),
            z: aux.z.to_string(),
            provenance,
        });
    }

    /// `(w, z)` from the user or the special class, plus a candidate
    /// transformation when the class formulas produce one.
    fn find_aux(
        &mut self,
        ode: &CubicOde,
    ) -> StageResult<(AuxPair, AuxProvenance, Option<PointTransform>)> {
        let user = self.user_aux()?;
        let sc = match detect_special_class(ode) {
            Ok(sc) => Some(sc),
            Err(Error::NotInClass(msg)) => {
                if user.is_none() {
                    return Err(Stop::new(
                        Verdict::Inconclusive,
                        format!("no (w, z) supplied and not in the special class: {msg}"),
                    ));
                }
                None
            }
            Err(e) => return Err(e.into()),
        };
        let template = match &sc {
            Some(sc) => self.special_section(sc)?,
            None => None,
        };
        if let Some(aux) = user {
            return Ok((aux, AuxProvenance::User, template));
        }
        let sc = sc.expect("special class present");
        let g = self.choose_g(&sc)?;
        if let Some(s) = self.report.special_class.as_mut() {
            s.g = Some(g.to_string());
        }
        let aux = aux_from_g(&sc, &g)?;
        Ok((aux, AuxProvenance::SpecialClassG, template))
    }

    fn choose_g(&mut self, sc: &SpecialClass) -> StageResult<Expr> {
        if let Some(g) = &self.opts.g {
            return self.parse(g);
        }
        if sc.d.is_zero_literal() {
            return Ok(Expr::one());
        }
        let (third, _) = build_linear_odes(sc)?;
        let basis = solve_const_coeff(&third)?;
        for g in basis.solutions {
            if aux_from_g(sc, &g).is_ok() {
                return Ok(g);
            }
        }
        Err(Stop::new(
            Verdict::Inconclusive,
            "no usable solution of the third-order ODE",
        ))
    }

    fn special_section(&mut self, sc: &SpecialClass) -> StageResult<Option<PointTransform>> {
        let (third, second) = build_linear_odes(sc)?;
        let mut section = SpecialSection {
            a: sc.a.to_string(),
            b: sc.b.to_string(),
            c: sc.c.to_string(),
            d: sc.d.to_string(),
            third_order: third.to_string(),
            second_order: second.to_string(),
            g: None,
            h: None,
            notes: Vec::new(),
        };
        let h = match &self.opts.h {
            Some((h1, h2)) => Some((self.parse(h1)?, self.parse(h2)?)),
            None if sc.d.is_zero_literal() => match solve_const_coeff(&second) {
                Ok(b) => Some((b.solutions[0].clone(), b.solutions[1].clone())),
                Err(e) => {
                    section.notes.push(format!("second-order ODE: {e}"));
                    None
                }
            },
            None => None,
        };
        let mut template = None;
        if let Some((h1, h2)) = h {
            section.h = Some([h1.to_string(), h2.to_string()]);
            match transforms_from_h(sc, &h1, &h2, None) {
                Ok(tr) => template = Some(tr),
                Err(e @ (Error::BasisInvalid(_) | Error::SingularJacobian))
                    if self.opts.h.is_some() =>
                {
                    self.report.special_class = Some(section);
                    return Err(e.into());
                }
                Err(e) => section.notes.push(format!("transformation formula: {e}")),
            }
        }
        self.report.special_class = Some(section);
        Ok(template)
    }

    fn conditions(&mut self, ode: &CubicOde, aux: &AuxPair) -> StageResult<bool> {
        let lie = lie_conditions_residuals(ode, aux)?;
        let reduced = aux_system_residuals(ode, aux)?;
        let trace = trace_condition_residual(ode, aux)?;
        let lie = self.judge_all("lie conditions", &lie)?;
        let reduced = self.judge_all("reduced system", &reduced)?;
        let trace = self.judge("trace condition", &trace)?;
        let verified = lie.iter().chain(&reduced).all(Check::holds) && trace.holds();
        self.note_singular("w", &aux.w)?;
        self.note_singular("z", &aux.z)?;
        self.report.conditions = Some(ConditionsSection {
            lie,
            reduced,
            trace,
            verified,
        });
        Ok(verified)
    }

    fn lambda_section(&mut self, ode: &CubicOde, aux: &AuxPair) -> StageResult<bool> {
        let lambda = lambda_from_aux(ode, aux, None)?;
        let r = lambda_determining_residual(ode, &lambda)?;
        let determining = self.judge("lambda determining", &r)?;
        let verified = determining.holds();
        self.report.lambda = Some(LambdaSection {
            lambda: lambda.to_string(),
            determining,
            verified,
        });
        Ok(verified)
    }

    fn lambda_only(&mut self, ode: &CubicOde, text: &str) -> StageResult<Verdict> {
        self.stage = "lambda";
        let lambda = canonical(&self.parse(text)?)?;
        let r = lambda_determining_residual(ode, &lambda)?;
        let determining = self.judge("lambda determining", &r)?;
        let verified = determining.holds();
        self.report.lambda = Some(LambdaSection {
            lambda: lambda.to_string(),
            determining,
            verified,
        });
        Ok(if verified {
            Verdict::Verified
        } else {
            Verdict::Rejected
        })
    }

    fn transform_only(&mut self, ode: &CubicOde, phi: &str, psi: &str) -> StageResult<Verdict> {
        self.stage = "transform";
        let tr = PointTransform::new(canonical(&self.parse(phi)?)?, canonical(&self.parse(psi)?)?)?;
        let (aux, provenance) = match self.user_aux()? {
            Some(aux) => (aux, AuxProvenance::User),
            None => (
                pushforward_coefficients(&tr)?.0.aux(),
                AuxProvenance::Transform,
            ),
        };
        self.record_aux(&aux, provenance);
        let s_phi = s_system_residuals(&tr.phi, ode, &aux)?;
        let s_psi = s_system_residuals(&tr.psi, ode, &aux)?;
        let s_phi = self.judge_all("s-system phi", &s_phi)?;
        let s_psi = self.judge_all("s-system psi", &s_psi)?;
        let ok = self.transform_section(
            ode,
            &tr,
            "user".into(),
            None,
            Vec::new(),
            Some((s_phi, s_psi)),
        )?;
        Ok(if ok {
            Verdict::Verified
        } else {
            Verdict::Rejected
        })
    }

    fn transform_section(
        &mut self,
        ode: &CubicOde,
        tr: &PointTransform,
        source: String,
        dimension: Option<usize>,
        solutions: Vec<String>,
        s: Option<(Vec<Check>, Vec<Check>)>,
    ) -> StageResult<bool> {
        let jacobian = tr.jacobian()?;
        let (pf, pushed) = pushforward_coefficients(tr)?;
        let _ = pf;
        let diffs: Vec<Expr> = pushed
            .coeffs()
            .iter()
            .zip(ode.coeffs())
            .map(|(a, b)| canonical(&((*a).clone() - b.clone())))
            .collect::<crate::Result<_>>()?;
        let pushforward = self.judge_all("pushforward", &diffs)?;
        let mut integrals = Vec::new();
        let mut integrals_ok = false;
        if pushforward.iter().all(Check::holds) {
            match first_integrals(tr, ode) {
                Ok((i1, i2)) => {
                    for (name, i) in [("first integral I1", &i1), ("first integral I2", &i2)] {
                        if i.check == ZeroVerdict::NumericOnlyZero {
                            self.report
                                .numeric_only_zero
                                .push(format!("{name}: {}", i.expr));
                        }
                        integrals.push(IntegralEntry {
                            expr: i.expr.to_string(),
                            verdict: i.check,
                        });
                    }
                    integrals_ok = true;
                }
                Err(Error::FirstIntegralCheckFailed(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        self.note_singular("jacobian", &(Expr::one() / jacobian.clone()))?;
        self.note_singular("phi", &tr.phi)?;
        self.note_singular("psi", &tr.psi)?;
        let s_ok = s
            .as_ref()
            .is_none_or(|(a, b)| a.iter().chain(b).all(Check::holds));
        let verified = s_ok && integrals_ok && pushforward.iter().all(Check::holds);
        let (s_phi, s_psi) = match s {
            Some((a, b)) => (Some(a), Some(b)),
            None => (None, None),
        };
        self.report.transform = Some(TransformSection {
            phi: tr.phi.to_string(),
            psi: tr.psi.to_string(),
            jacobian: jacobian.to_string(),
            source,
            dimension,
            solutions,
            s_system_phi: s_phi,
            s_system_psi: s_psi,
            pushforward,
            first_integrals: integrals,
            verified,
        });
        Ok(verified)
    }

    fn solution_section(&mut self, ode: &CubicOde, gs: &GeneralSolution) -> StageResult<bool> {
        let implicit = implicit_ode_residual(ode, &gs.implicit)?;
        let implicit_check = self.judge("implicit solution", &implicit)?;
        let explicit_check = match &gs.explicit {
            Some(y) => {
                self.note_singular("explicit solution", y)?;
                let r = explicit_ode_residual(ode, y)?;
                Some(self.judge("explicit solution", &r)?)
            }
            None => None,
        };
        let verified = implicit_check.holds() && explicit_check.as_ref().is_none_or(Check::holds);
        self.report.general_solution = Some(SolutionSection {
            implicit: format!("{} = 0", gs.implicit),
            explicit: gs.explicit.as_ref().map(|e| format!("y = {e}")),
            implicit_check,
            explicit_check,
            mode: if gs.explicit.is_some() {
                "explicit-substitution"
            } else {
                "implicit-differentiation"
            },
            verified,
        });
        Ok(verified)
    }

    fn numeric_section(&mut self, ode: &CubicOde, gs: &GeneralSolution) -> StageResult<bool> {
        let seed = self.opts.seed;
        let mut maxima = BTreeMap::new();
        let mut notes = Vec::new();
        let (r1, r2) = raw_invariants(ode);
        let mut raws = vec![("lie-tresse first", r1), ("lie-tresse second", r2)];
        if let Some(y) = &gs.explicit {
            let d1 = y.dx();
            let raw = d1.dx()
                + ode
                    .cubic()
                    .subst_all(&[(Symbol::Y, y.clone()), (Symbol::Yp, d1)]);
            raws.push(("explicit solution", raw));
        }
        let mut passed = true;
        for (name, raw) in raws {
            match sample_residual(&raw, SAMPLE_COUNT, seed) {
                Ok(m) => {
                    // relative to the size of the sampled terms
                    passed &= m < SAMPLE_THRESHOLD * scale(&raw, seed);
                    maxima.insert(name.to_string(), m);
                }
                Err(e) => notes.push(format!("{name}: {e}")),
            }
        }
        let rk4 = match &gs.explicit {
            Some(y) => self.rk4(ode, y, &mut notes),
            None => {
                notes.push("no explicit solution; RK4 comparison skipped".into());
                None
            }
        };
        if let Some(entry) = &rk4 {
            passed &= entry.passed;
        }
        self.report.numeric = Some(NumericSection {
            seed: format!("{seed:#x}"),
            samples: SAMPLE_COUNT,
            maxima,
            rk4,
            notes,
            passed,
        });
        Ok(passed)
    }

    /// First regular trajectory among a fixed list of constants and intervals.
    fn rk4(&self, ode: &CubicOde, y: &Expr, notes: &mut Vec<String>) -> Option<Rk4Entry> {
        const CONSTANTS: [(f64, f64); 5] =
            [(0.0, 1.0), (0.0, 3.0), (1.0, 2.0), (2.0, 1.0), (1.0, -1.0)];
        const INTERVALS: [(f64, f64); 4] = [(0.0, 1.0), (1.0, 2.0), (0.5, 1.5), (2.0, 3.0)];
        const PARAM_VALUES: [f64; 4] = [1.0, 2.0, 0.5, 3.0];
        let mut base = BTreeMap::new();
        for (i, name) in ode.params().iter().enumerate() {
            if name != "c1" && name != "c2" {
                base.insert(name.clone(), PARAM_VALUES[i % PARAM_VALUES.len()]);
            }
        }
        for s in y.free_symbols() {
            if let Symbol::Param(p) = &s {
                if &**p != "c1" && &**p != "c2" && !base.contains_key(&**p) {
                    let i = base.len();
                    base.insert(p.to_string(), PARAM_VALUES[i % PARAM_VALUES.len()]);
                }
            }
        }
        let interval_len = 1.0;
        let step = interval_len / self.opts.steps.max(1) as f64;
        for (c1, c2) in CONSTANTS {
            for interval in INTERVALS {
                let mut values = base.clone();
                values.insert("c1".into(), c1);
                values.insert("c2".into(), c2);
                let mut at = Assignment::new();
                for (k, v) in &values {
                    at.set(Symbol::param(k), *v);
                }
                match rk4_crosscheck(ode, y, &at, interval, step) {
                    Ok(result) => {
                        let passed = result.max_deviation < RK4_THRESHOLD;
                        return Some(Rk4Entry {
                            values,
                            result,
                            passed,
                        });
                    }
                    Err(Error::SingularTrajectory(_)) => continue,
                    Err(e) => {
                        notes.push(format!("RK4: {e}"));
                        return None;
                    }
                }
            }
        }
        notes.push("RK4: every candidate trajectory was singular".into());
        None
    }
}

/// Largest sampled magnitude bound of `e` (at least 1), used to make the
/// sampled residual threshold relative.
fn scale(e: &Expr, seed: u64) -> f64 {
    fn abs_tree(e: &Expr) -> Expr {
        match e {
            Expr::Add(ts) => Expr::Add(ts.iter().map(abs_tree).collect()),
            Expr::Mul(fs) => Expr::Mul(fs.iter().map(abs_tree).collect()),
            Expr::Num(q) => Expr::Num(num_traits::Signed::abs(q)),
            Expr::Pow(b, n) => Expr::Pow(Box::new(abs_tree(b)), *n),
            Expr::Div(a, b) => Expr::Div(Box::new(abs_tree(a)), b.clone()),
            other => other.clone(),
        }
    }
    sample_residual(&abs_tree(e), SAMPLE_COUNT, seed)
        .unwrap_or(1.0)
        .max(1.0)
}
