use thiserror::Error;

use crate::types::State;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CournotError {
    /// A parameter failed validation. The message names the violated constraint.
    #[error("{0}")]
    InvalidParameter(String),

    /// An expression was evaluated outside its domain (e.g. zero total supply).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root polish did not converge after {iterations} iterations (q_rival = {q_rival})")]
    NonConvergence { iterations: usize, q_rival: f64 },

    /// The orbit left the positive quadrant or became non-finite.
    #[error("orbit escaped at step {step}: ({:.6e}, {:.6e})", .state.q1, .state.q2)]
    Escape { step: usize, state: State },

    #[error("cost kinds of the two firms differ")]
    MixedCostKinds,

    #[error("axis {axis} is not applicable to model {model}")]
    AxisNotApplicable { axis: String, model: String },
}

pub type Result<T> = std::result::Result<T, CournotError>;

pub(crate) fn invalid(msg: impl Into<String>) -> CournotError {
    CournotError::InvalidParameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> CournotError {
    CournotError::Domain(msg.into())
}
