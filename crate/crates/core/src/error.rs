use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not the square of a rational")]
    NotASquare(Rational),
    #[error("squarefree kernel of zero is undefined")]
    ZeroKernel,
    #[error("factorization budget exhausted on cofactor {0}")]
    FactorizationExceeded(String),
    #[error("points lie on different curves (N={0} vs N={1})")]
    CurveMismatch(String, String),
    #[error("curve parameter N must be a positive integer")]
    InvalidCurve,
    #[error("point ({x}, {y}) is not on the curve y^2 = x^3 - {n}^2 x")]
    NotOnCurve { n: String, x: String, y: String },
    #[error("no rational point with x = {x} on the curve y^2 = x^3 - {n}^2 x")]
    NoRationalY { n: String, x: String },
    #[error("secant through points with equal x-coordinate is vertical")]
    VerticalSecant,
    #[error("trivial input: {0}")]
    TrivialInput(&'static str),
    #[error("degenerate pair: {0}")]
    DegeneratePair(String),
    #[error("x-coordinate product {0} is not a square")]
    SquareCheckFailed(Rational),
    #[error("trivial parameter {0}")]
    TrivialParameter(Rational),
    #[error("cuboid has a zero side")]
    ZeroSide,
    #[error("not a nearly-perfect cuboid: {0}")]
    NotAnNpc(String),
    #[error("inconsistent congruent number: {0}")]
    InconsistentKernel(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("invalid search job: {0}")]
    InvalidJob(String),
}

impl Error {
    /// True for errors caused by exhausting a configured budget rather than by bad input.
    pub fn is_resource_exhaustion(&self) -> bool {
        matches!(self, Error::FactorizationExceeded(_))
    }
}
