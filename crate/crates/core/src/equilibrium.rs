//! Closed-form Nash equilibrium shared by all five models.

use serde::{Deserialize, Serialize};

use crate::error::{CournotError, Result};
use crate::responses::foc_residual;
use crate::types::{CostKind, CostSide, State};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub state: State,
    /// FOC residual of firm 1 and firm 2 at `state`.
    pub residuals: [f64; 2],
    pub cost_kind: CostKind,
}

impl EquilibriumReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals[0].abs().max(self.residuals[1].abs())
    }
}

/// The unique positive equilibrium for two firms with the same cost kind.
///
/// Quadratic: `q_i = sqrt(c_j)/(sqrt(c1)+sqrt(c2)) / sqrt(2 sqrt(c1 c2))`.
/// Linear: `q_i = c_j/(c1+c2)^2`.
pub fn nash_equilibrium(costs: [CostSide; 2]) -> Result<EquilibriumReport> {
    let [a, b] = costs;
    if a.kind != b.kind {
        return Err(CournotError::MixedCostKinds);
    }
    for (i, side) in costs.iter().enumerate() {
        if !(side.c.is_finite() && side.c > 0.0) {
            return Err(CournotError::InvalidParameter(format!(
                "c{} must be positive",
                i + 1
            )));
        }
    }
    let state = match a.kind {
        CostKind::Quadratic => {
            let (s1, s2) = (a.c.sqrt(), b.c.sqrt());
            let scale = 1.0 / (2.0 * s1 * s2).sqrt();
            State::new(s2 / (s1 + s2) * scale, s1 / (s1 + s2) * scale)
        }
        CostKind::Linear => {
            let sum = a.c + b.c;
            State::new(b.c / (sum * sum), a.c / (sum * sum))
        }
    };
    let residuals = [
        foc_residual(a, state.q1, state.q2)?,
        foc_residual(b, state.q2, state.q1)?,
    ];
    Ok(EquilibriumReport {
        state,
        residuals,
        cost_kind: a.kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(c1: f64, c2: f64) -> [CostSide; 2] {
        [CostSide::quadratic(c1), CostSide::quadratic(c2)]
    }

    #[test]
    fn symmetric_quadratic() {
        let e = nash_equilibrium(q(0.5, 0.5)).unwrap();
        assert_relative_eq!(e.state.q1, 0.5, max_relative = 1e-15);
        assert_relative_eq!(e.state.q2, 0.5, max_relative = 1e-15);
        let e = nash_equilibrium(q(2.0, 2.0)).unwrap();
        assert_relative_eq!(e.state.q1, 0.25, max_relative = 1e-15);
        assert_relative_eq!(e.state.q2, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn asymmetric_quadratic() {
        // 1/6 = 2 (1/3)(1/4) and 1/3 = 8 (1/6)(1/4): both FOCs vanish exactly
        let e = nash_equilibrium(q(1.0, 4.0)).unwrap();
        assert_relative_eq!(e.state.q1, 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(e.state.q2, 1.0 / 6.0, max_relative = 1e-15);
        assert!(e.max_residual() < 1e-15);
    }

    #[test]
    fn symmetric_linear() {
        let e = nash_equilibrium([CostSide::linear(1.0), CostSide::linear(1.0)]).unwrap();
        assert_eq!(e.state, State::new(0.25, 0.25));
        assert_eq!(e.residuals, [0.0, 0.0]);
        assert_eq!(e.cost_kind, CostKind::Linear);
    }

    #[test]
    fn mixed_kinds_rejected() {
        let err = nash_equilibrium([CostSide::linear(1.0), CostSide::quadratic(1.0)]).unwrap_err();
        assert_eq!(err, CournotError::MixedCostKinds);
    }
}
