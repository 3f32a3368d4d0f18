use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),

    #[error("non-integer exponent at {pos}")]
    NonIntegerExponent { pos: usize },

    #[error("division by an expression that is identically zero")]
    DivisionByZero,

    #[error("singular point in `{0}`")]
    SingularPoint(String),

    #[error("all {0} sample points were singular")]
    AllSamplesSingular(usize),

    #[error("equation is not cubic in y': {0}")]
    NotCubic(String),

    #[error("coefficient of y'' vanishes identically")]
    DegenerateLeading,

    #[error("no rule applies to integrate `{0}`")]
    NotIntegrable(String),

    #[error("antiderivative check failed, residual `{0}`")]
    AntiderivativeMismatch(String),

    #[error("Jacobian of the point transformation vanishes identically")]
    SingularJacobian,

    #[error("first integral is not conserved, D_x I = `{0}`")]
    FirstIntegralCheckFailed(String),

    #[error("(w, z) does not satisfy the Lie conditions: {0:?}")]
    AuxInvalid(Vec<String>),

    #[error("ansatz exhausted: {0}")]
    AnsatzExhausted(String),

    #[error("not in the special class: {0}")]
    NotInClass(String),

    #[error("linear ODE not solved: {0}")]
    Unsolved(String),

    #[error("linear ODE has non-constant coefficients: {0}")]
    NonConstant(String),

    #[error("g is not a solution of the third-order auxiliary ODE, residual `{0}`")]
    GNotASolution(String),

    #[error("antiderivative unavailable: {0}")]
    IntegrationUnavailable(String),

    #[error("invalid basis: {0}")]
    BasisInvalid(String),

    #[error("trajectory singular near x = {0}")]
    SingularTrajectory(f64),

    #[error("general solution check failed, residual `{0}`")]
    SolutionCheckFailed(String),

    #[error("invalid input: {0}")]
    Input(String),
}
