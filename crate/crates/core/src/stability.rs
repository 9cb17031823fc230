//! Local stability of the equilibrium: analytic Jacobians, the Jury test for
//! 2x2 maps, and the closed-form criterion polynomials.

use serde::{Deserialize, Serialize};

use crate::equilibrium::nash_equilibrium;
use crate::error::{domain, Result};
use crate::polynomials::{CriterionName, ParamPoint};
use crate::responses::{
    best_response, best_response_slope, gradient_partials, lma_partials, ResponseOptions,
};
use crate::types::{
    CostKind, Model, ModelSpec, StabilityVerdict, State, VerdictClass, DEFAULT_BOUNDARY_TOL,
};

/// Band used by [`agreement`] for "too close to the boundary to judge".
pub const AGREEMENT_BAND: f64 = 1e-7;

/// Linearization of a one-step map at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jacobian2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Jacobian2 {
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Jacobian2 { a11, a12, a21, a22 }
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .all(|x| x.is_finite())
    }

    /// `[1 + Tr + Det, 1 - Tr + Det, 1 - Det]`
    pub fn jury_values(&self) -> [f64; 3] {
        let (tr, det) = (self.trace(), self.det());
        [1.0 + tr + det, 1.0 - tr + det, 1.0 - det]
    }

    /// Jury values divided by `1 + |Tr| + |Det|`.
    pub fn jury_normalized(&self) -> [f64; 3] {
        let scale = 1.0 + self.trace().abs() + self.det().abs();
        self.jury_values().map(|v| v / scale)
    }

    /// Largest eigenvalue modulus, from the closed-form 2x2 eigenvalues.
    pub fn spectral_radius(&self) -> f64 {
        let half = 0.5 * self.trace();
        let disc = half * half - self.det();
        if disc >= 0.0 {
            let root = disc.sqrt();
            (half + root).abs().max((half - root).abs())
        } else {
            // complex pair: |lambda|^2 = det
            self.det().sqrt()
        }
    }

    /// `J v`
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }
}

/// Exact linearization of the model's step at `s`.
///
/// For GR the map is one-dimensional (firm 2 sits on its reaction curve), so
/// the derivative of `q1 -> q1 + K G1(q1, R2(q1))` is returned in `a11` and
/// the other entries are zero.
pub fn jacobian(spec: &ModelSpec, s: State) -> Result<Jacobian2> {
    if !s.is_feasible() {
        return Err(domain(format!(
            "Jacobian needs positive outputs (got {}, {})",
            s.q1, s.q2
        )));
    }
    let opts = ResponseOptions::default();
    let [c1, c2] = spec.costs;
    let k = spec.k;

    if spec.model == Model::Gr {
        let r = best_response(c2, s.q1, &opts)?;
        let slope = best_response_slope(c2, r, s.q1)?;
        let (g_own, g_rival) = gradient_partials(c1, s.q1, r)?;
        return Ok(Jacobian2::new(
            1.0 + k * (g_own + g_rival * slope),
            0.0,
            0.0,
            0.0,
        ));
    }

    let (g_own, g_rival) = gradient_partials(c1, s.q1, s.q2)?;
    let (a11, a12) = (1.0 + k * g_own, k * g_rival);
    let (a21, a22) = match spec.model {
        Model::Gb => {
            let r = best_response(c2, s.q1, &opts)?;
            (best_response_slope(c2, r, s.q1)?, 0.0)
        }
        Model::Gl => {
            let (own, rival) = lma_partials(c2, s.q2, s.q1)?;
            (rival, own)
        }
        Model::Ga => {
            let l = spec.l_or_one();
            let r = best_response(c2, s.q1, &opts)?;
            (l * best_response_slope(c2, r, s.q1)?, 1.0 - l)
        }
        Model::Gg => {
            let k2 = spec.k2_or_k();
            let (own, rival) = gradient_partials(c2, s.q2, s.q1)?;
            (k2 * rival, 1.0 + k2 * own)
        }
        Model::Gr => unreachable!(),
    };
    Ok(Jacobian2::new(a11, a12, a21, a22))
}

/// Jury test with the default boundary band.
pub fn jury(j: &Jacobian2) -> StabilityVerdict {
    jury_with_tol(j, DEFAULT_BOUNDARY_TOL)
}

/// Classifies `j` from its normalized Jury values: Unstable if any is below
/// `-tol` (an eigenvalue is then certainly outside the unit circle),
/// Boundary if any other lies within `tol` of zero, Stable otherwise.
pub fn jury_with_tol(j: &Jacobian2, tol: f64) -> StabilityVerdict {
    if !j.is_finite() {
        return StabilityVerdict::infeasible();
    }
    let jury = j.jury_values();
    let normalized = j.jury_normalized();
    let class = if normalized.iter().any(|&v| v < -tol) {
        VerdictClass::Unstable
    } else if normalized.iter().any(|v| v.abs() <= tol) {
        VerdictClass::Boundary
    } else {
        VerdictClass::Stable
    };
    StabilityVerdict {
        class,
        jury,
        spectral_radius: j.spectral_radius(),
        criterion_values: Vec::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Positive => 1.0,
        }
    }
}

/// Sign conditions under which the equilibrium is locally stable.
///
/// The linear-cost GA and GG conditions hold with `R_GA2 < 0, R_GA3 > 0` and
/// `R_GG3 < 0, R_GG4 > 0`; this orientation is the one that matches the
/// Jacobian of the maps (e.g. GG with `c1 = c2 = K1 = K2 = 1` has a zero
/// Jacobian at the equilibrium, while `R_GG3 = -2`).
pub fn conditions(model: Model, kind: CostKind) -> &'static [(CriterionName, Sign)] {
    use CriterionName::*;
    use Sign::*;
    match (model, kind) {
        (Model::Gr, CostKind::Quadratic) => &[(RGr1, Negative)],
        (Model::Gr, CostKind::Linear) => &[(RGr2, Negative)],
        (Model::Gb, CostKind::Quadratic) => &[(RGb1, Negative)],
        (Model::Gb, CostKind::Linear) => &[(RGb2, Positive), (RGb3, Negative)],
        (Model::Gl, CostKind::Quadratic) => &[(RGl1, Negative)],
        (Model::Gl, CostKind::Linear) => &[(RGl2, Positive), (RGl3, Negative)],
        (Model::Ga, CostKind::Quadratic) => &[(RGa1, Negative)],
        (Model::Ga, CostKind::Linear) => &[(RGa2, Negative), (RGa3, Positive)],
        (Model::Gg, CostKind::Quadratic) => &[(RGg1, Positive), (RGg2, Negative)],
        (Model::Gg, CostKind::Linear) => &[(RGg3, Negative), (RGg4, Positive)],
    }
}

/// Polynomial criteria evaluated for one spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSet {
    pub names: Vec<CriterionName>,
    pub values: Vec<f64>,
    /// Values divided by the sum of absolute term values.
    pub normalized: Vec<f64>,
    pub stable: bool,
}

impl CriterionSet {
    /// Smallest signed normalized margin over the sign conditions; positive
    /// exactly when every condition holds.
    pub fn margin(&self, model: Model, kind: CostKind) -> f64 {
        conditions(model, kind)
            .iter()
            .zip(&self.normalized)
            .map(|((_, sign), v)| sign.factor() * v)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn near_boundary(&self, band: f64) -> bool {
        self.normalized.iter().any(|v| v.abs() < band)
    }

    pub fn named_values(&self) -> Vec<(String, f64)> {
        self.names
            .iter()
            .zip(&self.values)
            .map(|(n, v)| (n.to_string(), *v))
            .collect()
    }

    pub fn primary(&self) -> f64 {
        self.values[0]
    }
}

pub fn param_point(spec: &ModelSpec) -> ParamPoint {
    ParamPoint {
        c1: spec.c1(),
        c2: spec.c2(),
        k: spec.k,
        k2: spec.k2_or_k(),
        l: spec.l_or_one(),
    }
}

/// Evaluates the applicable criterion polynomials and their sign conditions.
pub fn criteria(spec: &ModelSpec) -> CriterionSet {
    let point = param_point(spec);
    let conds = conditions(spec.model, spec.cost_kind());
    let names: Vec<CriterionName> = conds.iter().map(|(n, _)| *n).collect();
    let values: Vec<f64> = names.iter().map(|n| n.eval(&point)).collect();
    let normalized: Vec<f64> = names.iter().map(|n| n.normalized(&point)).collect();
    let stable = conds
        .iter()
        .zip(&values)
        .all(|((_, sign), v)| sign.factor() * v > 0.0);
    CriterionSet {
        names,
        values,
        normalized,
        stable,
    }
}

/// Factors of the squarefree border polynomial of the GR stability system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorderFactorsGr {
    pub c1: f64,
    pub c2: f64,
    pub k: f64,
    pub difference: f64,
    pub sum: f64,
    /// `c1 - c2/9`
    pub ninth: f64,
    /// `c1^3 c2 K^4 - 3/2 c1^2 c2 K^2 - 81/64 c1^2 + 9/32 c1 c2 - 1/64 c2^2`
    pub quartic: f64,
}

impl BorderFactorsGr {
    pub fn as_array(&self) -> [f64; 7] {
        [
            self.c1,
            self.c2,
            self.k,
            self.difference,
            self.sum,
            self.ninth,
            self.quartic,
        ]
    }

    pub fn product(&self) -> f64 {
        self.as_array().iter().product()
    }

    /// True if some factor is exactly zero.
    pub fn on_border(&self) -> bool {
        self.as_array().contains(&0.0)
    }
}

pub fn border_poly_gr(c1: f64, c2: f64, k: f64) -> BorderFactorsGr {
    let point = ParamPoint {
        c1,
        c2,
        k,
        k2: 1.0,
        l: 1.0,
    };
    BorderFactorsGr {
        c1,
        c2,
        k,
        difference: c1 - c2,
        sum: c1 + c2,
        ninth: c1 - c2 / 9.0,
        quartic: CriterionName::SpGr.eval(&point),
    }
}

/// Numeric verdict at the closed-form equilibrium, with the criterion values
/// attached.
pub fn verdict(spec: &ModelSpec) -> Result<StabilityVerdict> {
    let e = nash_equilibrium(spec.costs)?.state;
    let mut v = match jacobian(spec, e) {
        Ok(j) => jury(&j),
        Err(_) => StabilityVerdict::infeasible(),
    };
    v.criterion_values = criteria(spec).named_values();
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Agreement {
    Agree,
    Disagree,
    NearBoundary,
}

impl Agreement {
    pub fn name(self) -> &'static str {
        match self {
            Agreement::Agree => "agree",
            Agreement::Disagree => "disagree",
            Agreement::NearBoundary => "near_boundary",
        }
    }
}

/// Everything [`agreement`] looked at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementDetail {
    pub outcome: Agreement,
    pub criteria: CriterionSet,
    pub jacobian: Jacobian2,
    pub numeric: StabilityVerdict,
}

/// Compares the polynomial verdict with the Jury verdict of the Jacobian at
/// the closed-form equilibrium.
pub fn agreement(spec: &ModelSpec) -> Result<Agreement> {
    Ok(agreement_detail(spec)?.outcome)
}

pub fn agreement_detail(spec: &ModelSpec) -> Result<AgreementDetail> {
    let spec = spec.validate()?;
    let e = nash_equilibrium(spec.costs)?.state;
    let j = jacobian(&spec, e)?;
    let numeric = jury(&j);
    let crit = criteria(&spec);
    let near = crit.near_boundary(AGREEMENT_BAND)
        || j.jury_normalized().iter().any(|v| v.abs() < AGREEMENT_BAND)
        || numeric.class == VerdictClass::Infeasible;
    let outcome = if near {
        Agreement::NearBoundary
    } else if crit.stable == (numeric.class == VerdictClass::Stable) {
        Agreement::Agree
    } else {
        Agreement::Disagree
    };
    Ok(AgreementDetail {
        outcome,
        criteria: crit,
        jacobian: j,
        numeric,
    })
}
