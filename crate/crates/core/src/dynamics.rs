//! One-step maps of the five models and orbit iteration.
//!
//! Firm 1 always adjusts by gradient: `q1' = q1 + K G1(q1, q2)`. Firm 2:
//!
//! | model | `q2'`                          |
//! |-------|--------------------------------|
//! | GR    | `R2(q1')` (reacts to the new q1) |
//! | GB    | `R2(q1)`                       |
//! | GL    | `S2(q2, q1)`                   |
//! | GA    | `(1-L) q2 + L R2(q1)`          |
//! | GG    | `q2 + K2 G2(q2, q1)`           |
//!
//! The maps are only defined on strictly positive outputs. Any step that
//! produces a non-positive or non-finite output is reported as an escape.

use serde::{Deserialize, Serialize};

use crate::error::{CournotError, Result};
use crate::responses::{best_response, gradient_term, lma_response, ResponseOptions};
use crate::types::{CostSide, Model, ModelSpec, State};

pub const DEFAULT_TRANSIENT: usize = 1_000;
pub const DEFAULT_STEPS: usize = 5_000;

fn escape(state: State) -> CournotError {
    CournotError::Escape { step: 0, state }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Gradient update of one firm; shared by every model so that GG is exactly
/// symmetric under relabeling.
fn gradient_update(cost: CostSide, speed: f64, q_self: f64, q_rival: f64) -> Result<f64> {
    Ok(q_self + speed * gradient_term(cost, q_self, q_rival)?)
}

/// Advances the state by one period.
pub fn step(spec: &ModelSpec, s: State) -> Result<State> {
    step_with(spec, s, &ResponseOptions::default())
}

pub fn step_with(spec: &ModelSpec, s: State, opts: &ResponseOptions) -> Result<State> {
    if !s.is_feasible() {
        return Err(escape(s));
    }
    let [c1, c2] = spec.costs;
    let q1 = gradient_update(c1, spec.k, s.q1, s.q2)?;
    if !positive(q1) {
        return Err(escape(State::new(q1, s.q2)));
    }
    let q2 = match spec.model {
        Model::Gr => best_response(c2, q1, opts)?,
        Model::Gb => best_response(c2, s.q1, opts)?,
        Model::Gl => lma_response(c2, s.q2, s.q1)?,
        Model::Ga => {
            let l = spec.l_or_one();
            (1.0 - l) * s.q2 + l * best_response(c2, s.q1, opts)?
        }
        Model::Gg => gradient_update(c2, spec.k2_or_k(), s.q2, s.q1)?,
    };
    let next = State::new(q1, q2);
    if !positive(q2) {
        return Err(escape(next));
    }
    Ok(next)
}

/// The GR model restricted to firm 1's output: firm 2 always sits on its
/// reaction curve, so `q1' = q1 + K G1(q1, R2(q1))`.
pub fn gr_reduced_step(
    costs: [CostSide; 2],
    k: f64,
    q1: f64,
    opts: &ResponseOptions,
) -> Result<f64> {
    if !positive(q1) {
        return Err(escape(State::new(q1, f64::NAN)));
    }
    let q2 = best_response(costs[1], q1, opts)?;
    if !positive(q2) {
        return Err(escape(State::new(q1, q2)));
    }
    let next = gradient_update(costs[0], k, q1, q2)?;
    if !positive(next) {
        return Err(escape(State::new(next, q2)));
    }
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    /// States recorded after the transient.
    pub states: Vec<State>,
    pub escaped: bool,
    /// Step index (1-based count of applied steps) at which the orbit left
    /// the positive quadrant.
    pub escape_index: Option<usize>,
}

impl Orbit {
    pub fn last(&self) -> Option<State> {
        self.states.last().copied()
    }
}

/// Iterates [`step`] `n_steps` times from `s0`, keeping the states produced
/// after the first `transient` steps. An escape stops the orbit.
pub fn orbit(spec: &ModelSpec, s0: State, n_steps: usize, transient: usize) -> Orbit {
    let opts = ResponseOptions::default();
    let transient = transient.min(n_steps);
    let mut states = Vec::with_capacity(n_steps - transient);
    let mut s = s0;
    for t in 1..=n_steps {
        match step_with(spec, s, &opts) {
            Ok(next) => {
                s = next;
                if t > transient {
                    states.push(s);
                }
            }
            Err(_) => {
                return Orbit {
                    states,
                    escaped: true,
                    escape_index: Some(t),
                }
            }
        }
    }
    Orbit {
        states,
        escaped: false,
        escape_index: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::nash_equilibrium;
    use approx::assert_relative_eq;

    fn quad(c1: f64, c2: f64) -> [CostSide; 2] {
        [CostSide::quadratic(c1), CostSide::quadratic(c2)]
    }

    fn lin(c1: f64, c2: f64) -> [CostSide; 2] {
        [CostSide::linear(c1), CostSide::linear(c2)]
    }

    fn all_models(costs: [CostSide; 2]) -> Vec<ModelSpec> {
        vec![
            ModelSpec::gr(costs, 0.7),
            ModelSpec::gb(costs, 0.7),
            ModelSpec::gl(costs, 0.7),
            ModelSpec::ga(costs, 0.7, 0.4),
            ModelSpec::gg(costs, 0.7, 1.3),
        ]
    }

    #[test]
    fn equilibrium_is_fixed() {
        for costs in [quad(1.0, 2.0), lin(1.0, 2.0), quad(0.5, 0.5), lin(3.0, 0.2)] {
            let e = nash_equilibrium(costs).unwrap().state;
            for spec in all_models(costs) {
                let next = step(&spec, e).unwrap();
                assert!(next.distance(&e) <= 1e-12, "{} {:?}", spec.model, next);
            }
        }
    }

    #[test]
    fn gr_updates_firm_two_after_firm_one() {
        let spec = ModelSpec::gr(quad(1.0, 1.0), 1.0);
        let s = State::new(0.3, 0.3);
        let next = step(&spec, s).unwrap();
        let r = best_response(spec.costs[1], next.q1, &ResponseOptions::default()).unwrap();
        assert_eq!(next.q2, r);
    }

    #[test]
    fn gr_converges_below_threshold() {
        let spec = ModelSpec::gr(quad(1.0, 1.0), 1.4);
        let o = orbit(&spec, State::new(0.3, 0.3), 10_000, 9_999);
        let e = 2f64.powf(-1.5);
        let last = o.last().unwrap();
        assert!(!o.escaped);
        assert!((last.q1 - e).abs() < 1e-8 && (last.q2 - e).abs() < 1e-8);
    }

    #[test]
    fn reduced_map_matches_two_dimensional_step() {
        let costs = quad(1.0, 1.0);
        let opts = ResponseOptions::default();
        let q1 = 0.3;
        let q2 = best_response(costs[1], q1, &opts).unwrap();
        let two_d = step(&ModelSpec::gr(costs, 1.0), State::new(q1, q2)).unwrap();
        assert_eq!(gr_reduced_step(costs, 1.0, q1, &opts).unwrap(), two_d.q1);

        let e = nash_equilibrium(costs).unwrap().state;
        assert_relative_eq!(
            gr_reduced_step(costs, 1.0, e.q1, &opts).unwrap(),
            e.q1,
            max_relative = 1e-12
        );
    }

    #[test]
    fn gr_reduced_period_two_above_threshold() {
        let costs = quad(1.0, 1.0);
        let opts = ResponseOptions::default();
        let mut q = 2f64.powf(-1.5) * 1.01;
        let mut tail = Vec::new();
        for t in 0..10_000 {
            q = gr_reduced_step(costs, 1.5, q, &opts).unwrap();
            if t >= 9_996 {
                tail.push(q);
            }
        }
        assert!((tail[0] - tail[2]).abs() < 1e-9 && (tail[1] - tail[3]).abs() < 1e-9);
        assert!((tail[0] - tail[1]).abs() > 1e-3);
    }

    #[test]
    fn gr_reduced_escapes_at_k_two() {
        // the cycle has already gone through period doubling into escape
        let costs = quad(1.0, 1.0);
        let opts = ResponseOptions::default();
        let mut q = 2f64.powf(-1.5) * 1.01;
        let escaped = (0..1_000).any(|_| match gr_reduced_step(costs, 2.0, q, &opts) {
            Ok(next) => {
                q = next;
                false
            }
            Err(_) => true,
        });
        assert!(escaped);
    }

    #[test]
    fn ga_unit_weight_equals_gb() {
        let costs = quad(1.0, 2.0);
        let ga = ModelSpec::ga_unit_weight(costs, 0.5);
        let gb = ModelSpec::gb(costs, 0.5);
        let s = State::new(0.2, 0.45);
        assert_eq!(step(&ga, s).unwrap(), step(&gb, s).unwrap());
    }

    #[test]
    fn orbit_at_equilibrium_is_constant() {
        let costs = quad(1.0, 4.0);
        let e = nash_equilibrium(costs).unwrap().state;
        let o = orbit(&ModelSpec::gb(costs, 0.5), e, 50, 0);
        assert_eq!(o.states.len(), 50);
        assert!(o.states.iter().all(|s| s.distance(&e) < 1e-14));
    }

    #[test]
    fn overshooting_gradient_escapes() {
        let o = orbit(
            &ModelSpec::gg(quad(1.0, 1.0), 100.0, 100.0),
            State::new(0.3, 0.3),
            100,
            0,
        );
        assert!(o.escaped);
        assert!(o.escape_index.is_some());
        assert!(o.states.iter().all(|s| s.is_feasible()));
    }

    #[test]
    fn infeasible_input_escapes() {
        let spec = ModelSpec::gb(quad(1.0, 1.0), 0.5);
        assert!(matches!(
            step(&spec, State::new(0.0, 1.0)),
            Err(CournotError::Escape { .. })
        ));
        assert!(matches!(
            step(&spec, State::new(f64::NAN, 1.0)),
            Err(CournotError::Escape { .. })
        ));
    }

    #[test]
    fn linear_clamped_response_escapes() {
        // R2(4) = max(0, 2 - 4) = 0
        let spec = ModelSpec::gb(lin(0.01, 1.0), 0.01);
        assert!(step(&spec, State::new(4.0, 0.1)).is_err());
    }
}
