//! Shared domain vocabulary: cost models, model specifications, states and
//! stability verdicts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, CournotError, Result};

/// Default band for classifying a normalized Jury value as "on the boundary".
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CostKind {
    /// `C(q) = c q^2`
    Quadratic,
    /// `C(q) = c q`
    Linear,
}

impl CostKind {
    pub fn name(self) -> &'static str {
        match self {
            CostKind::Quadratic => "quadratic",
            CostKind::Linear => "linear",
        }
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostKind {
    type Err = CournotError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quadratic" | "q" => Ok(CostKind::Quadratic),
            "linear" | "l" => Ok(CostKind::Linear),
            other => Err(invalid(format!("unknown cost kind '{other}'"))),
        }
    }
}

/// One firm's cost model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSide {
    pub kind: CostKind,
    pub c: f64,
}

impl CostSide {
    pub const fn quadratic(c: f64) -> Self {
        CostSide {
            kind: CostKind::Quadratic,
            c,
        }
    }

    pub const fn linear(c: f64) -> Self {
        CostSide {
            kind: CostKind::Linear,
            c,
        }
    }

    pub const fn new(kind: CostKind, c: f64) -> Self {
        CostSide { kind, c }
    }
}

/// The five adjustment models. Firm 1 is always a gradient adjuster; the
/// second letter names firm 2's behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    /// Firm 2 is rational and reacts to firm 1's current-period output.
    Gr,
    /// Firm 2 is boundedly rational (naive expectation).
    Gb,
    /// Firm 2 uses a local monopolistic approximation.
    Gl,
    /// Firm 2 is adaptive with weight `L`.
    Ga,
    /// Both firms adjust by gradient, with speeds `K1` and `K2`.
    Gg,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::Gr, Model::Gb, Model::Gl, Model::Ga, Model::Gg];

    pub fn name(self) -> &'static str {
        match self {
            Model::Gr => "GR",
            Model::Gb => "GB",
            Model::Gl => "GL",
            Model::Ga => "GA",
            Model::Gg => "GG",
        }
    }

    /// Whether the parameter is meaningful for this model.
    pub fn uses(self, param: Param) -> bool {
        match param {
            Param::C1 | Param::C2 | Param::C | Param::K => true,
            Param::K2 | Param::KBoth => self == Model::Gg,
            Param::L => self == Model::Ga,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = CournotError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gr" => Ok(Model::Gr),
            "gb" => Ok(Model::Gb),
            "gl" => Ok(Model::Gl),
            "ga" => Ok(Model::Ga),
            "gg" => Ok(Model::Gg),
            other => Err(invalid(format!("unknown model '{other}'"))),
        }
    }
}

/// A scalar model parameter that sweeps and scans can vary.
///
/// `C` moves both cost coefficients together (the `c1 = c2` diagonal) and
/// `KBoth` moves both gradient speeds together (`K1 = K2`, GG only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Param {
    C1,
    C2,
    C,
    K,
    K2,
    KBoth,
    L,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::C1 => "c1",
            Param::C2 => "c2",
            Param::C => "c",
            Param::K => "k",
            Param::K2 => "k2",
            Param::KBoth => "kk",
            Param::L => "l",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = CournotError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c1" => Ok(Param::C1),
            "c2" => Ok(Param::C2),
            "c" => Ok(Param::C),
            "k" | "k1" => Ok(Param::K),
            "k2" => Ok(Param::K2),
            "kk" => Ok(Param::KBoth),
            "l" => Ok(Param::L),
            other => Err(invalid(format!("unknown parameter '{other}'"))),
        }
    }
}

/// Model identifier plus its adjustment parameters and the two cost sides.
///
/// Fields that do not apply to the model (`k2` outside GG, `l` outside GA)
/// are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    /// Gradient speed of firm 1 (`K`, or `K1` in GG).
    pub k: f64,
    pub k2: Option<f64>,
    pub l: Option<f64>,
    pub costs: [CostSide; 2],
    #[serde(skip)]
    unit_weight: bool,
}

impl ModelSpec {
    pub fn new(model: Model, costs: [CostSide; 2], k: f64) -> Self {
        ModelSpec {
            model,
            k,
            k2: None,
            l: None,
            costs,
            unit_weight: false,
        }
    }

    pub fn gr(costs: [CostSide; 2], k: f64) -> Self {
        Self::new(Model::Gr, costs, k)
    }

    pub fn gb(costs: [CostSide; 2], k: f64) -> Self {
        Self::new(Model::Gb, costs, k)
    }

    pub fn gl(costs: [CostSide; 2], k: f64) -> Self {
        Self::new(Model::Gl, costs, k)
    }

    pub fn ga(costs: [CostSide; 2], k: f64, l: f64) -> Self {
        Self::new(Model::Ga, costs, k).with_l(l)
    }

    pub fn gg(costs: [CostSide; 2], k1: f64, k2: f64) -> Self {
        Self::new(Model::Gg, costs, k1).with_k2(k2)
    }

    /// GA with `L = 1`, which makes firm 2 boundedly rational. Outside the
    /// admissible GA parameter set; only used to check the GA/GB degeneration.
    #[doc(hidden)]
    pub fn ga_unit_weight(costs: [CostSide; 2], k: f64) -> Self {
        let mut spec = Self::ga(costs, k, 1.0);
        spec.unit_weight = true;
        spec
    }

    pub fn with_k2(mut self, k2: f64) -> Self {
        self.k2 = Some(k2);
        self
    }

    pub fn with_l(mut self, l: f64) -> Self {
        self.l = Some(l);
        self
    }

    pub fn c1(&self) -> f64 {
        self.costs[0].c
    }

    pub fn c2(&self) -> f64 {
        self.costs[1].c
    }

    pub fn cost_kind(&self) -> CostKind {
        self.costs[0].kind
    }

    /// Gradient speed of firm 2 (GG), falling back to `k` when unset.
    pub fn k2_or_k(&self) -> f64 {
        self.k2.unwrap_or(self.k)
    }

    /// Adaptive weight (GA), or 1 when unset.
    pub fn l_or_one(&self) -> f64 {
        self.l.unwrap_or(1.0)
    }

    pub fn get(&self, param: Param) -> Option<f64> {
        match param {
            Param::C1 | Param::C => Some(self.c1()),
            Param::C2 => Some(self.c2()),
            Param::K => Some(self.k),
            Param::K2 => self.k2,
            Param::KBoth => Some(self.k),
            Param::L => self.l,
        }
    }

    /// Returns a copy with one parameter replaced. No validation.
    pub fn with(mut self, param: Param, value: f64) -> Self {
        match param {
            Param::C1 => self.costs[0].c = value,
            Param::C2 => self.costs[1].c = value,
            Param::C => {
                self.costs[0].c = value;
                self.costs[1].c = value;
            }
            Param::K => self.k = value,
            Param::K2 => self.k2 = Some(value),
            Param::KBoth => {
                self.k = value;
                self.k2 = Some(value);
            }
            Param::L => self.l = Some(value),
        }
        self
    }

    /// Same spec with both firms switched to `kind`.
    pub fn with_cost_kind(mut self, kind: CostKind) -> Self {
        self.costs[0].kind = kind;
        self.costs[1].kind = kind;
        self
    }

    /// Checks every invariant and returns the spec unchanged, or reports the
    /// first violated constraint.
    pub fn validate(self) -> Result<Self> {
        for (i, side) in self.costs.iter().enumerate() {
            if !(side.c.is_finite() && side.c > 0.0) {
                return Err(invalid(format!("c{} must be positive", i + 1)));
            }
        }
        if self.costs[0].kind != self.costs[1].kind {
            return Err(invalid("cost kinds must match"));
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(invalid("K must be positive"));
        }
        match self.model {
            Model::Gg => match self.k2 {
                None => return Err(invalid("K2 is required for model GG")),
                Some(k2) if !(k2.is_finite() && k2 > 0.0) => {
                    return Err(invalid("K2 must be positive"))
                }
                _ => {}
            },
            Model::Ga => match self.l {
                None => return Err(invalid("L is required for model GA")),
                Some(l) if self.unit_weight && l == 1.0 => {}
                Some(l) if !(l > 0.0 && l < 1.0) => return Err(invalid("L out of (0,1)")),
                _ => {}
            },
            _ => {}
        }
        Ok(self)
    }
}

/// Production quantities of the two firms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub q1: f64,
    pub q2: f64,
}

impl State {
    pub const fn new(q1: f64, q2: f64) -> Self {
        State { q1, q2 }
    }

    pub fn total(&self) -> f64 {
        self.q1 + self.q2
    }

    pub fn is_feasible(&self) -> bool {
        self.q1.is_finite() && self.q2.is_finite() && self.q1 > 0.0 && self.q2 > 0.0
    }

    /// Exchanges the roles of the two firms.
    pub fn swapped(&self) -> Self {
        State {
            q1: self.q2,
            q2: self.q1,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        State {
            q1: self.q1 * factor,
            q2: self.q2 * factor,
        }
    }

    pub fn distance(&self, other: &State) -> f64 {
        (self.q1 - other.q1).hypot(self.q2 - other.q2)
    }

    pub fn norm(&self) -> f64 {
        self.q1.hypot(self.q2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictClass {
    Stable,
    Unstable,
    Boundary,
    Infeasible,
}

impl VerdictClass {
    pub fn name(self) -> &'static str {
        match self {
            VerdictClass::Stable => "stable",
            VerdictClass::Unstable => "unstable",
            VerdictClass::Boundary => "boundary",
            VerdictClass::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for VerdictClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification of an equilibrium together with the numbers behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub class: VerdictClass,
    /// `1 + Tr + Det`, `1 - Tr + Det`, `1 - Det`.
    pub jury: [f64; 3],
    pub spectral_radius: f64,
    pub criterion_values: Vec<(String, f64)>,
}

impl StabilityVerdict {
    pub fn infeasible() -> Self {
        StabilityVerdict {
            class: VerdictClass::Infeasible,
            jury: [f64::NAN; 3],
            spectral_radius: f64::NAN,
            criterion_values: Vec::new(),
        }
    }
}

/// One swept axis: `n` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: Param,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(param: Param, min: f64, max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("axis {param} needs resolution >= 2")));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(invalid(format!("axis {param} needs finite min < max")));
        }
        Ok(Axis { param, min, max, n })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.value(i))
    }
}

impl FromStr for Axis {
    type Err = CournotError;

    /// Parses `name:min:max:n`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(invalid(format!("axis '{s}' must look like name:min:max:n")));
        }
        let param: Param = parts[0].parse()?;
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| invalid(format!("axis '{s}': bad number '{t}'")))
        };
        let n = parts[3]
            .parse::<usize>()
            .map_err(|_| invalid(format!("axis '{s}': bad resolution '{}'", parts[3])))?;
        Axis::new(param, num(parts[1])?, num(parts[2])?, n)
    }
}

/// Two-dimensional lattice of verdicts, row-major with `y` as the row index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub fixed: ModelSpec,
    pub cells: Vec<StabilityVerdict>,
    /// Cells where the criterion and numeric verdicts differ outside the
    /// boundary band (only filled in `both` mode).
    pub disagreements: Vec<usize>,
}

impl SweepGrid {
    pub fn cell(&self, ix: usize, iy: usize) -> &StabilityVerdict {
        &self.cells[iy * self.x_axis.n + ix]
    }
}
