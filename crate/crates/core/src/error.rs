use thiserror::Error;

use crate::oracle::VerificationResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("difference of {0} leaves the representable sequence class")]
    UnsupportedDifference(String),
    #[error("sequence {0} has no image in the transform algebra")]
    UnsupportedSequence(String),
    #[error("{0} has no antiderivative in span{{1, L, D}}")]
    NotIntegrableInAlgebra(String),
    #[error("{0} has a pole away from x = 1")]
    UnsupportedPole(String),
    #[error("{0} is not a proper rational function")]
    ImproperRational(String),
    #[error("{0} is not the image of a sequence on n >= 1")]
    NonCausalImage(String),
    #[error("missing initial condition: {0}")]
    MissingInitialCondition(String),
    #[error("malformed equation: {0}")]
    MalformedEquation(String),
    #[error("initial conditions contradict the equation: {0}")]
    InconsistentIc(String),
    #[error("initial conditions do not fix the free constant: {0}")]
    ConstantUnsolvable(String),
    #[error("initial condition needs f({index}) but stepping stops at n = {horizon}")]
    AnchorUnreachable { index: usize, horizon: usize },
    #[error("closed form failed verification: {0}")]
    VerificationFailed(Box<VerificationResult>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
