//! Heterogeneous Cournot duopoly games with isoelastic demand `p = 1/Q` and
//! quadratic (or linear) costs.
//!
//! Firm 1 adjusts its output by gradient; firm 2 is rational (GR), boundedly
//! rational (GB), an LMA player (GL), adaptive (GA) or a second gradient
//! adjuster (GG). The crate provides the behavioural primitives, the
//! closed-form equilibrium, the one-step maps, local stability via Jury
//! conditions and via closed-form criterion polynomials, and parameter-space
//! analysis built on top of them.

pub mod analysis;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod polynomials;
pub mod responses;
pub mod stability;
pub mod types;

pub use analysis::{
    bifurcation, containment_probe, lyapunov, sweep2d, verify, BifurcationScan, ContainmentReport,
    Coordinate, Interval, ProbeBox, ProbeKind, SweepMode, VerifyReport,
};
pub use dynamics::{gr_reduced_step, orbit, step, Orbit};
pub use equilibrium::{nash_equilibrium, EquilibriumReport};
pub use error::{CournotError, Result};
pub use polynomials::{CriterionName, ParamPoint};
pub use responses::{
    best_response, foc_residual, gradient_term, lma_response, profit, ResponseOptions,
};
pub use stability::{agreement, criteria, jacobian, jury, Agreement, CriterionSet, Jacobian2};
pub use types::{
    Axis, CostKind, CostSide, Model, ModelSpec, Param, StabilityVerdict, State, SweepGrid,
    VerdictClass,
};
