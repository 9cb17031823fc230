//! Parameter-space analysis: stability sweeps, bifurcation scans, Lyapunov
//! exponents, randomized agreement checks and linear-vs-quadratic
//! containment probes.
//!
//! Every routine that touches many parameter points draws its samples
//! sequentially from a seeded ChaCha8 stream and then evaluates them with
//! rayon, collecting by index. Output is therefore identical for any thread
//! count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{orbit, step, DEFAULT_STEPS, DEFAULT_TRANSIENT};
use crate::equilibrium::nash_equilibrium;
use crate::error::{invalid, CournotError, Result};
use crate::polynomials::ParamPoint;
use crate::stability::{
    agreement_detail, criteria, jacobian, jury, param_point, Agreement, AgreementDetail,
};
use crate::types::{
    Axis, CostKind, CostSide, Model, ModelSpec, Param, StabilityVerdict, State, SweepGrid,
    VerdictClass, DEFAULT_BOUNDARY_TOL,
};

/// Margin below which a sweep cell in `both` mode is not counted as a
/// disagreement.
pub const SWEEP_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    /// Class from the criterion polynomials.
    Criterion,
    /// Class from the Jury test of the Jacobian at the equilibrium.
    Numeric,
    /// Numeric class, with disagreements against the criteria recorded.
    Both,
}

impl std::str::FromStr for SweepMode {
    type Err = CournotError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "criterion" => Ok(SweepMode::Criterion),
            "numeric" => Ok(SweepMode::Numeric),
            "both" => Ok(SweepMode::Both),
            other => Err(invalid(format!("unknown sweep mode '{other}'"))),
        }
    }
}

fn overlaps(a: Param, b: Param) -> bool {
    use Param::*;
    a == b
        || matches!((a, b), (C, C1) | (C, C2) | (C1, C) | (C2, C))
        || matches!((a, b), (KBoth, K) | (KBoth, K2) | (K, KBoth) | (K2, KBoth))
}

fn check_axis(model: Model, axis: &Axis) -> Result<()> {
    if model.uses(axis.param) {
        Ok(())
    } else {
        Err(CournotError::AxisNotApplicable {
            axis: axis.param.to_string(),
            model: model.to_string(),
        })
    }
}

fn sweep_cell(spec: ModelSpec, mode: SweepMode) -> (StabilityVerdict, bool) {
    let detail = match agreement_detail(&spec) {
        Ok(d) => d,
        Err(_) => return (StabilityVerdict::infeasible(), false),
    };
    let AgreementDetail {
        criteria: crit,
        jacobian: j,
        numeric,
        ..
    } = detail;
    let class = match mode {
        SweepMode::Criterion => {
            if crit.near_boundary(DEFAULT_BOUNDARY_TOL) {
                VerdictClass::Boundary
            } else if crit.stable {
                VerdictClass::Stable
            } else {
                VerdictClass::Unstable
            }
        }
        SweepMode::Numeric | SweepMode::Both => numeric.class,
    };
    let disagrees = mode == SweepMode::Both
        && numeric.class != VerdictClass::Infeasible
        && !crit.near_boundary(SWEEP_BAND)
        && !j.jury_normalized().iter().any(|v| v.abs() < SWEEP_BAND)
        && crit.stable != (numeric.class == VerdictClass::Stable);
    let verdict = StabilityVerdict {
        class,
        jury: numeric.jury,
        spectral_radius: numeric.spectral_radius,
        criterion_values: crit.named_values(),
    };
    (verdict, disagrees)
}

/// Local-stability verdicts of the equilibrium on a lattice over two
/// parameters, all other parameters taken from `template`.
pub fn sweep2d(
    template: &ModelSpec,
    x_axis: Axis,
    y_axis: Axis,
    mode: SweepMode,
) -> Result<SweepGrid> {
    check_axis(template.model, &x_axis)?;
    check_axis(template.model, &y_axis)?;
    if overlaps(x_axis.param, y_axis.param) {
        return Err(invalid(format!(
            "axes {} and {} are not distinct",
            x_axis.param, y_axis.param
        )));
    }
    let (nx, ny) = (x_axis.n, y_axis.n);
    let results: Vec<(StabilityVerdict, bool)> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = (idx % nx, idx / nx);
            let spec = template
                .with(x_axis.param, x_axis.value(ix))
                .with(y_axis.param, y_axis.value(iy));
            sweep_cell(spec, mode)
        })
        .collect();
    let disagreements = results
        .iter()
        .enumerate()
        .filter(|(_, (_, d))| *d)
        .map(|(i, _)| i)
        .collect();
    let cells = results.into_iter().map(|(v, _)| v).collect();
    Ok(SweepGrid {
        x_axis,
        y_axis,
        fixed: *template,
        cells,
        disagreements,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coordinate {
    Q1,
    Q2,
}

impl Coordinate {
    pub fn of(self, s: &State) -> f64 {
        match self {
            Coordinate::Q1 => s.q1,
            Coordinate::Q2 => s.q2,
        }
    }
}

impl std::str::FromStr for Coordinate {
    type Err = CournotError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q1" => Ok(Coordinate::Q1),
            "q2" => Ok(Coordinate::Q2),
            other => Err(invalid(format!("unknown coordinate '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationOptions {
    pub n_steps: usize,
    pub transient: usize,
    /// Number of trailing orbit values kept per parameter value.
    pub keep: usize,
    /// Orbits start at this multiple of the equilibrium.
    pub start_scale: f64,
}

impl Default for BifurcationOptions {
    fn default() -> Self {
        BifurcationOptions {
            n_steps: DEFAULT_STEPS,
            transient: DEFAULT_TRANSIENT,
            keep: 100,
            start_scale: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationScan {
    pub param: Param,
    pub coordinate: Coordinate,
    /// `(parameter value, retained orbit values)`; empty when the orbit
    /// escaped or the parameter value is inadmissible.
    pub samples: Vec<(f64, Vec<f64>)>,
}

impl BifurcationScan {
    /// First parameter value whose retained values spread by more than
    /// `threshold`.
    pub fn first_split(&self, threshold: f64) -> Option<f64> {
        self.samples.iter().find_map(|(p, values)| {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (!values.is_empty() && hi - lo > threshold).then_some(*p)
        })
    }
}

pub fn bifurcation(
    template: &ModelSpec,
    param: Param,
    range: (f64, f64),
    n_points: usize,
    coordinate: Coordinate,
    opts: &BifurcationOptions,
) -> Result<BifurcationScan> {
    if !template.model.uses(param) {
        return Err(CournotError::AxisNotApplicable {
            axis: param.to_string(),
            model: template.model.to_string(),
        });
    }
    let axis = Axis::new(param, range.0, range.1, n_points)?;
    let samples = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let value = axis.value(i);
            let spec = template.with(param, value);
            let values = match spec.validate().and_then(|s| nash_equilibrium(s.costs)) {
                Ok(e) => {
                    let o = orbit(
                        &spec,
                        e.state.scaled(opts.start_scale),
                        opts.n_steps,
                        opts.transient,
                    );
                    if o.escaped {
                        Vec::new()
                    } else {
                        let start = o.states.len().saturating_sub(opts.keep);
                        o.states[start..].iter().map(|s| coordinate.of(s)).collect()
                    }
                }
                Err(_) => Vec::new(),
            };
            (value, values)
        })
        .collect();
    Ok(BifurcationScan {
        param,
        coordinate,
        samples,
    })
}

/// Largest Lyapunov exponent along the orbit of `s0`: the mean log growth of
/// a tangent vector pushed through the Jacobian and renormalized each step.
pub fn lyapunov(spec: &ModelSpec, s0: State, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("lyapunov needs at least one step"));
    }
    let mut v = [0.8, 0.6];
    let mut s = s0;
    let mut sum = 0.0;
    for t in 0..n {
        let j = jacobian(spec, s)?;
        let w = j.apply(v);
        let norm = w[0].hypot(w[1]);
        if norm == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        sum += norm.ln();
        v = [w[0] / norm, w[1] / norm];
        s = step(spec, s).map_err(|e| match e {
            CournotError::Escape { state, .. } => CournotError::Escape { step: t + 1, state },
            other => other,
        })?;
    }
    Ok(sum / n as f64)
}

/// Half-open interval `(lo, hi]` sampled uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u: f64 = rng.random();
        self.lo + (self.hi - self.lo) * (1.0 - u)
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo.max(f64::MIN_POSITIVE), self.hi)
    }
}

/// Parameter box for a containment probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeBox {
    pub c1: Interval,
    pub c2: Interval,
    pub k: Interval,
    /// GG only; ignored when `tie_k` is set.
    pub k2: Option<Interval>,
    /// GA only.
    pub l: Option<Interval>,
    /// Force `K2 = K1` (GG).
    pub tie_k: bool,
}

impl ProbeBox {
    pub fn new(c1: Interval, c2: Interval, k: Interval) -> Self {
        ProbeBox {
            c1,
            c2,
            k,
            k2: None,
            l: None,
            tie_k: false,
        }
    }

    pub fn with_k2(mut self, k2: Interval) -> Self {
        self.k2 = Some(k2);
        self
    }

    pub fn with_l(mut self, l: Interval) -> Self {
        self.l = Some(l);
        self
    }

    pub fn tied(mut self) -> Self {
        self.tie_k = true;
        self
    }

    fn validate(&self, model: Model) -> Result<()> {
        let positive = |iv: &Interval, name: &str| {
            if iv.lo >= 0.0 && iv.hi > iv.lo && iv.hi.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} range must satisfy 0 <= lo < hi")))
            }
        };
        positive(&self.c1, "c1")?;
        positive(&self.c2, "c2")?;
        positive(&self.k, "K")?;
        if model == Model::Gg && !self.tie_k {
            positive(
                &self
                    .k2
                    .ok_or_else(|| invalid("GG probe needs a K2 range or tied K"))?,
                "K2",
            )?;
        }
        if model == Model::Ga {
            let l = self.l.ok_or_else(|| invalid("GA probe needs an L range"))?;
            if !(l.lo >= 0.0 && l.hi < 1.0 && l.lo < l.hi) {
                return Err(invalid("L range must lie in [0, 1)"));
            }
        }
        Ok(())
    }

    fn sample(&self, model: Model, rng: &mut ChaCha8Rng) -> ParamPoint {
        let c1 = self.c1.sample(rng);
        let c2 = self.c2.sample(rng);
        let k = self.k.sample(rng);
        let k2 = match (model, self.tie_k, self.k2) {
            (Model::Gg, false, Some(iv)) => iv.sample(rng),
            _ => k,
        };
        let l = match (model, self.l) {
            (Model::Ga, Some(iv)) => iv.sample(rng),
            _ => 1.0,
        };
        ParamPoint { c1, c2, k, k2, l }
    }

    fn clamp(&self, model: Model, p: ParamPoint) -> ParamPoint {
        let k = self.k.clamp(p.k);
        let k2 = match (model, self.tie_k, self.k2) {
            (Model::Gg, false, Some(iv)) => iv.clamp(p.k2),
            _ => k,
        };
        let l = match (model, self.l) {
            (Model::Ga, Some(iv)) => iv.clamp(p.l),
            _ => 1.0,
        };
        ParamPoint {
            c1: self.c1.clamp(p.c1),
            c2: self.c2.clamp(p.c2),
            k,
            k2,
            l,
        }
    }
}

pub fn spec_at(model: Model, kind: CostKind, p: &ParamPoint) -> ModelSpec {
    let costs = [CostSide::new(kind, p.c1), CostSide::new(kind, p.c2)];
    let spec = ModelSpec::new(model, costs, p.k);
    match model {
        Model::Gg => spec.with_k2(p.k2),
        Model::Ga => spec.with_l(p.l),
        _ => spec,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeKind {
    /// Look for violations of "linear-stable implies quadratic-stable".
    Containment,
    /// Find a linear-stable, quadratic-unstable point, refining near misses
    /// when plain sampling finds none.
    Witness,
}

/// A linear-stable, quadratic-unstable parameter point that the criteria and
/// the Jury test both confirm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: ParamPoint,
    /// Smaller of the two normalized criterion margins.
    pub score: f64,
    /// Orbits confirm it too: the linear-cost orbit returns to its
    /// equilibrium and the quadratic-cost orbit leaves its equilibrium.
    pub orbit_confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub model: Model,
    pub kind: ProbeKind,
    pub region: ProbeBox,
    pub n_samples: usize,
    pub seed: u64,
    /// Samples whose linear-cost equilibrium is stable by the criteria.
    pub linear_stable: usize,
    pub violations: Vec<Violation>,
    /// Criterion hits that the Jury test did not confirm (boundary noise).
    pub unconfirmed: usize,
    pub witness: Option<Violation>,
}

/// `min(linear margin, -quadratic margin)`: positive iff the criteria say
/// linear-stable and quadratic-unstable.
fn hit_score(model: Model, p: &ParamPoint) -> (f64, bool) {
    let lin = spec_at(model, CostKind::Linear, p);
    let quad = spec_at(model, CostKind::Quadratic, p);
    let lin_c = criteria(&lin);
    let quad_c = criteria(&quad);
    let lin_margin = lin_c.margin(model, CostKind::Linear);
    let quad_margin = quad_c.margin(model, CostKind::Quadratic);
    (lin_margin.min(-quad_margin), lin_c.stable)
}

fn numeric_class(spec: &ModelSpec) -> Option<VerdictClass> {
    let e = nash_equilibrium(spec.costs).ok()?.state;
    Some(jury(&jacobian(spec, e).ok()?).class)
}

fn orbit_returns(spec: &ModelSpec) -> bool {
    let Ok(e) = nash_equilibrium(spec.costs) else {
        return false;
    };
    let e = e.state;
    let start = State::new(e.q1 * (1.0 + 1e-3), e.q2 * (1.0 - 1e-3));
    let o = orbit(spec, start, 20_000, 19_999);
    !o.escaped && o.last().is_some_and(|s| s.distance(&e) <= 1e-6 * e.norm())
}

fn orbit_leaves(spec: &ModelSpec) -> bool {
    let Ok(e) = nash_equilibrium(spec.costs) else {
        return false;
    };
    let e = e.state;
    let start = State::new(e.q1 * (1.0 + 1e-6), e.q2 * (1.0 - 1e-6));
    let d0 = start.distance(&e);
    let o = orbit(spec, start, 20_000, 0);
    o.escaped || o.states.iter().any(|s| s.distance(&e) > 100.0 * d0)
}

/// Re-verifies a criterion hit: Some if the Jury test agrees.
fn confirm(model: Model, p: ParamPoint, score: f64) -> Option<Violation> {
    let lin = spec_at(model, CostKind::Linear, &p);
    let quad = spec_at(model, CostKind::Quadratic, &p);
    if numeric_class(&lin)? != VerdictClass::Stable
        || numeric_class(&quad)? != VerdictClass::Unstable
    {
        return None;
    }
    let orbit_confirmed = orbit_returns(&lin) && orbit_leaves(&quad);
    Some(Violation {
        point: p,
        score,
        orbit_confirmed,
    })
}

/// Local random search that pushes near misses towards positive scores.
fn refine(
    model: Model,
    region: &ProbeBox,
    start: ParamPoint,
    seed: u64,
    rounds: usize,
) -> (ParamPoint, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = start;
    let mut best_score = hit_score(model, &best).0;
    let mut radius = 0.2;
    for _ in 0..rounds {
        let mut jitter = |x: f64| x * (radius * (2.0 * rng.random::<f64>() - 1.0)).exp();
        let candidate = ParamPoint {
            c1: jitter(best.c1),
            c2: jitter(best.c2),
            k: jitter(best.k),
            k2: jitter(best.k2),
            l: best.l + radius * 0.5 * (2.0 * rng.random::<f64>() - 1.0),
        };
        let candidate = region.clamp(model, candidate);
        let score = hit_score(model, &candidate).0;
        if score > best_score {
            best = candidate;
            best_score = score;
        } else {
            radius = (radius * 0.97).max(1e-3);
        }
    }
    (best, best_score)
}

/// Samples `n_samples` points of `region` and compares the linear-cost and
/// quadratic-cost stability verdicts at each.
pub fn containment_probe(
    model: Model,
    region: &ProbeBox,
    n_samples: usize,
    seed: u64,
    kind: ProbeKind,
) -> Result<ContainmentReport> {
    region.validate(model)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<ParamPoint> = (0..n_samples)
        .map(|_| region.sample(model, &mut rng))
        .collect();
    let scored: Vec<(f64, bool)> = points.par_iter().map(|p| hit_score(model, p)).collect();
    let linear_stable = scored.iter().filter(|(_, s)| *s).count();

    let hits: Vec<usize> = (0..n_samples).filter(|&i| scored[i].0 > 0.0).collect();
    let confirmed: Vec<Option<Violation>> = hits
        .par_iter()
        .map(|&i| confirm(model, points[i], scored[i].0))
        .collect();
    let unconfirmed = confirmed.iter().filter(|c| c.is_none()).count();
    let mut violations: Vec<Violation> = confirmed.into_iter().flatten().collect();

    if kind == ProbeKind::Witness && violations.is_empty() && n_samples > 0 {
        // refine the best near misses
        let mut order: Vec<usize> = (0..n_samples).collect();
        order.sort_by(|&a, &b| scored[b].0.total_cmp(&scored[a].0).then(a.cmp(&b)));
        let refined: Vec<Option<Violation>> = order
            .iter()
            .take(16)
            .enumerate()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(rank, &i)| {
                let (p, score) = refine(
                    model,
                    region,
                    points[i],
                    seed.wrapping_add(1 + rank as u64),
                    400,
                );
                if score > 0.0 {
                    confirm(model, p, score)
                } else {
                    None
                }
            })
            .collect();
        violations.extend(refined.into_iter().flatten());
    }

    let witness = match kind {
        ProbeKind::Witness => violations
            .iter()
            .filter(|v| v.orbit_confirmed)
            .max_by(|a, b| a.score.total_cmp(&b.score))
            .copied(),
        ProbeKind::Containment => None,
    };
    Ok(ContainmentReport {
        model,
        kind,
        region: *region,
        n_samples,
        seed,
        linear_stable,
        violations,
        unconfirmed,
        witness,
    })
}

/// Ranges of the randomized agreement check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRanges {
    /// Log-uniform range of `c1`, `c2`.
    pub c: (f64, f64),
    /// Log-uniform range of `K`, `K2`.
    pub k: (f64, f64),
}

impl Default for SampleRanges {
    fn default() -> Self {
        SampleRanges {
            c: (0.05, 20.0),
            k: (0.01, 5.0),
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp()
}

/// Seeded random specs: `c` and `K` log-uniform, `L` uniform in `(0, 1)`.
pub fn random_specs(
    model: Model,
    kind: CostKind,
    n: usize,
    seed: u64,
    ranges: &SampleRanges,
) -> Vec<ModelSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let c1 = log_uniform(&mut rng, ranges.c);
            let c2 = log_uniform(&mut rng, ranges.c);
            let k = log_uniform(&mut rng, ranges.k);
            let k2 = log_uniform(&mut rng, ranges.k);
            let mut l: f64 = rng.random();
            while l == 0.0 {
                l = rng.random();
            }
            spec_at(model, kind, &ParamPoint { c1, c2, k, k2, l })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub model: Model,
    pub kind: CostKind,
    pub agree: usize,
    pub near_boundary: usize,
    pub disagree: usize,
    /// Outcome per sample, in sampling order.
    pub outcomes: Vec<(ModelSpec, Agreement)>,
}

/// Criterion-vs-Jacobian agreement over `n` random specs.
pub fn verify(
    model: Model,
    kind: CostKind,
    n: usize,
    seed: u64,
    ranges: &SampleRanges,
) -> Result<VerifyReport> {
    let specs = random_specs(model, kind, n, seed, ranges);
    let outcomes: Vec<(ModelSpec, Agreement)> = specs
        .par_iter()
        .map(|spec| Ok((*spec, agreement_detail(spec)?.outcome)))
        .collect::<Result<_>>()?;
    let count = |a: Agreement| outcomes.iter().filter(|(_, o)| *o == a).count();
    Ok(VerifyReport {
        model,
        kind,
        agree: count(Agreement::Agree),
        near_boundary: count(Agreement::NearBoundary),
        disagree: count(Agreement::Disagree),
        outcomes,
    })
}

/// Point at which `spec` was evaluated, for reporting.
pub fn point_of(spec: &ModelSpec) -> ParamPoint {
    param_point(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(c1: f64, c2: f64) -> [CostSide; 2] {
        [CostSide::quadratic(c1), CostSide::quadratic(c2)]
    }

    #[test]
    fn sweep_rejects_bad_axes() {
        let spec = ModelSpec::gr(quad(1.0, 1.0), 1.0);
        let l = Axis::new(Param::L, 0.1, 0.9, 3).unwrap();
        let k = Axis::new(Param::K, 0.1, 0.9, 3).unwrap();
        let c = Axis::new(Param::C, 0.1, 0.9, 3).unwrap();
        let c1 = Axis::new(Param::C1, 0.1, 0.9, 3).unwrap();
        assert!(matches!(
            sweep2d(&spec, l, k, SweepMode::Both),
            Err(CournotError::AxisNotApplicable { .. })
        ));
        assert!(sweep2d(&spec, k, k, SweepMode::Both).is_err());
        assert!(sweep2d(&spec, c, c1, SweepMode::Both).is_err());
    }

    #[test]
    fn tiny_speeds_are_stable_everywhere() {
        let spec = ModelSpec::gb(quad(1.0, 1.0), 1e-3);
        let x = Axis::new(Param::C1, 0.5, 2.0, 5).unwrap();
        let y = Axis::new(Param::C2, 0.5, 2.0, 4).unwrap();
        let grid = sweep2d(&spec, x, y, SweepMode::Both).unwrap();
        assert_eq!(grid.cells.len(), 20);
        assert!(grid.cells.iter().all(|c| c.class == VerdictClass::Stable));
        assert!(grid.disagreements.is_empty());
    }

    #[test]
    fn gr_diagonal_boundary_passes_through_sqrt_two() {
        let spec = ModelSpec::gr(quad(1.0, 1.0), 1.0);
        let x = Axis::new(Param::C, 0.5, 1.5, 3).unwrap();
        let y = Axis::new(Param::K, 1.40, 1.43, 4).unwrap();
        let grid = sweep2d(&spec, x, y, SweepMode::Criterion).unwrap();
        // column c = 1: K = 1.40, 1.41 stable; 1.42, 1.43 unstable
        let column: Vec<VerdictClass> = (0..4).map(|iy| grid.cell(1, iy).class).collect();
        assert_eq!(
            column,
            vec![
                VerdictClass::Stable,
                VerdictClass::Stable,
                VerdictClass::Unstable,
                VerdictClass::Unstable
            ]
        );
    }

    #[test]
    fn bifurcation_escape_is_empty() {
        let spec = ModelSpec::gg(quad(1.0, 1.0), 100.0, 1.0);
        let scan = bifurcation(
            &spec,
            Param::K,
            (100.0, 101.0),
            2,
            Coordinate::Q1,
            &Default::default(),
        )
        .unwrap();
        assert!(scan.samples.iter().all(|(_, v)| v.is_empty()));
    }

    #[test]
    fn lyapunov_negative_when_stable() {
        let spec = ModelSpec::gb(quad(1.0, 2.0), 0.5);
        let e = nash_equilibrium(spec.costs).unwrap().state;
        assert!(lyapunov(&spec, e.scaled(0.95), 2_000).unwrap() < 0.0);
    }

    #[test]
    fn lyapunov_reports_escape() {
        let spec = ModelSpec::gg(quad(1.0, 1.0), 100.0, 100.0);
        assert!(matches!(
            lyapunov(&spec, State::new(0.3, 0.3), 100),
            Err(CournotError::Escape { .. })
        ));
    }

    #[test]
    fn probe_box_validation() {
        let iv = Interval::new(0.0, 1.0);
        let b = ProbeBox::new(iv, iv, iv);
        assert!(containment_probe(Model::Gg, &b, 10, 1, ProbeKind::Containment).is_err());
        assert!(containment_probe(Model::Ga, &b, 10, 1, ProbeKind::Containment).is_err());
        assert!(containment_probe(Model::Gr, &b, 10, 1, ProbeKind::Containment).is_ok());
    }

    #[test]
    fn random_specs_are_valid_and_seeded() {
        let a = random_specs(Model::Ga, CostKind::Linear, 50, 9, &SampleRanges::default());
        let b = random_specs(Model::Ga, CostKind::Linear, 50, 9, &SampleRanges::default());
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.validate().is_ok()));
    }
}
