//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::path::Path;
use std::process::Command;

use cournot_core::analysis::{
    containment_probe, spec_at, verify, Interval, ProbeBox, ProbeKind, SampleRanges,
};
use cournot_core::dynamics::gr_reduced_step;
use cournot_core::responses::lma_response;
use cournot_core::stability::border_poly_gr;
use cournot_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    uniform(rng, lo.ln(), hi.ln()).exp()
}

const KINDS: [CostKind; 2] = [CostKind::Quadratic, CostKind::Linear];

fn random_point(rng: &mut ChaCha8Rng) -> ParamPoint {
    ParamPoint {
        c1: uniform(rng, 0.05, 20.0),
        c2: uniform(rng, 0.05, 20.0),
        k: log_uniform(rng, 0.01, 5.0),
        k2: log_uniform(rng, 0.01, 5.0),
        l: uniform(rng, 0.01, 0.99),
    }
}

fn equilibrium_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_foc, mut worst_fix) = (0.0f64, 0.0f64);
    for kind in KINDS {
        for _ in 0..1_000 {
            let p = random_point(&mut rng);
            let e =
                nash_equilibrium([CostSide::new(kind, p.c1), CostSide::new(kind, p.c2)]).unwrap();
            worst_foc = worst_foc.max(e.max_residual() / (1.0 + e.state.total()));
            for model in Model::ALL {
                let next = step(&spec_at(model, kind, &p), e.state).unwrap();
                worst_fix = worst_fix.max(next.distance(&e.state));
            }
        }
    }
    outcome(
        worst_foc <= 1e-10 && worst_fix <= 1e-10,
        format!("max FOC residual/(1+Q) {worst_foc:.2e}, max |step(E)-E| {worst_fix:.2e}"),
    )
}

/// Bracketed Newton on the quadratic-cost FOC, independent of the library.
fn newton_oracle(c: f64, r: f64) -> f64 {
    let f = |q: f64| r - 2.0 * c * q * (q + r) * (q + r);
    let df = |q: f64| -2.0 * c * (q + r) * (3.0 * q + r);
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..500 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let n = x - fx / df(x);
        x = if n > lo && n < hi { n } else { 0.5 * (lo + hi) };
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            break;
        }
    }
    x
}

fn best_response_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = ResponseOptions::default();
    let mut worst_rel = 0.0f64;
    let mut grid_failures = 0;
    for i in 0..1_000 {
        let c = uniform(&mut rng, 0.05, 20.0);
        let r = log_uniform(&mut rng, 1e-3, 10.0);
        let q = best_response(CostSide::quadratic(c), r, &opts).unwrap();
        let oracle = newton_oracle(c, r);
        worst_rel = worst_rel.max((q - oracle).abs() / oracle);

        let kind = KINDS[i % 2];
        let cost = CostSide::new(kind, c);
        let q = best_response(cost, r, &opts).unwrap();
        let best = profit(cost, q, r).unwrap();
        let top = 2.0 * (q + r);
        let spacing = top / 10_000.0;
        let (mut arg, mut max) = (0.0, f64::NEG_INFINITY);
        for j in 1..=10_000 {
            let x = spacing * j as f64;
            let v = profit(cost, x, r).unwrap();
            if v > max {
                (arg, max) = (x, v);
            }
        }
        // a linear-cost best response of zero sits at the grid's lower edge
        let near = (arg - q).abs() <= spacing || (q == 0.0 && arg <= spacing);
        if max > best + 1e-12 * (1.0 + best.abs()) || !near {
            grid_failures += 1;
        }
    }
    outcome(
        worst_rel <= 1e-9 && grid_failures == 0,
        format!("max relative error vs Newton oracle {worst_rel:.2e}, grid argmax failures {grid_failures}"),
    )
}

fn fd_entries(spec: &ModelSpec, s: State) -> Option<[f64; 4]> {
    let opts = ResponseOptions::default();
    if spec.model == Model::Gr {
        let h = 1e-6 * s.q1;
        let f = |x: f64| gr_reduced_step(spec.costs, spec.k, x, &opts).ok();
        return Some([(f(s.q1 + h)? - f(s.q1 - h)?) / (2.0 * h), 0.0, 0.0, 0.0]);
    }
    let (h1, h2) = (1e-6 * s.q1, 1e-6 * s.q2);
    let f = |a: f64, b: f64| step(spec, State::new(a, b)).ok();
    let (p1, m1) = (f(s.q1 + h1, s.q2)?, f(s.q1 - h1, s.q2)?);
    let (p2, m2) = (f(s.q1, s.q2 + h2)?, f(s.q1, s.q2 - h2)?);
    Some([
        (p1.q1 - m1.q1) / (2.0 * h1),
        (p2.q1 - m2.q1) / (2.0 * h2),
        (p1.q2 - m1.q2) / (2.0 * h1),
        (p2.q2 - m2.q2) / (2.0 * h2),
    ])
}

/// True when a clamped linear-cost response is active near `s` (the map is
/// not differentiable there).
fn near_kink(spec: &ModelSpec, s: State) -> bool {
    if spec.cost_kind() != CostKind::Linear {
        return false;
    }
    let opts = ResponseOptions::default();
    let c2 = spec.costs[1];
    match spec.model {
        Model::Gb | Model::Ga => best_response(c2, s.q1 * (1.0 - 1e-3), &opts).unwrap() <= 0.0,
        Model::Gr => {
            best_response(c2, s.q1 * (1.0 - 1e-3), &opts).unwrap() <= 0.0
                || best_response(c2, s.q1 * (1.0 + 1e-3), &opts).unwrap() <= 0.0
        }
        Model::Gl => {
            lma_response(c2, s.q2 * (1.0 + 1e-3), s.q1 * (1.0 + 1e-3)).unwrap() <= 1e-3 * s.q2
        }
        Model::Gg => false,
    }
}

fn jacobian_vs_differences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for model in Model::ALL {
        for kind in KINDS {
            let mut done = 0;
            while done < 1_000 {
                let p = random_point(&mut rng);
                let spec = spec_at(model, kind, &p);
                let e = nash_equilibrium(spec.costs).unwrap().state;
                let s = State::new(
                    e.q1 * uniform(&mut rng, 0.5, 1.5),
                    e.q2 * uniform(&mut rng, 0.5, 1.5),
                );
                let fd = if near_kink(&spec, s) {
                    None
                } else {
                    fd_entries(&spec, s)
                };
                let Some(fd) = fd else {
                    skipped += 1;
                    continue;
                };
                let j = jacobian(&spec, s).unwrap();
                let exact = [j.a11, j.a12, j.a21, j.a22];
                let scale = exact.iter().fold(1e-8f64, |m, v| m.max(v.abs()));
                for (a, b) in exact.iter().zip(fd) {
                    worst = worst.max((a - b).abs() / a.abs().max(1e-3 * scale));
                }
                done += 1;
            }
        }
    }
    outcome(
        worst <= 1e-5,
        format!("max relative entry error {worst:.2e} over 10000 draws ({skipped} redrawn at clamp kinks or escapes)"),
    )
}

fn criterion_agreement() -> Outcome {
    let ranges = SampleRanges::default();
    let mut parts = Vec::new();
    let mut total_disagree = 0;
    for (i, model) in Model::ALL.into_iter().enumerate() {
        for (j, kind) in KINDS.into_iter().enumerate() {
            let r = verify(model, kind, 10_000, 100 + (2 * i + j) as u64, &ranges).unwrap();
            total_disagree += r.disagree;
            parts.push(format!(
                "{}/{} {}:{}:{}",
                model.name(),
                &kind.name()[..1],
                r.agree,
                r.near_boundary,
                r.disagree
            ));
        }
    }
    outcome(
        total_disagree == 0,
        format!("agree:near:disagree {}", parts.join(" ")),
    )
}

fn bisect(mut lo: f64, mut hi: f64, unstable: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if unstable(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn gr_threshold() -> Outcome {
    let rho = |kind: CostKind, k: f64| {
        let spec = ModelSpec::gr([CostSide::new(kind, 1.0), CostSide::new(kind, 1.0)], k);
        let e = nash_equilibrium(spec.costs).unwrap().state;
        jacobian(&spec, e).unwrap().spectral_radius()
    };
    let k_quad = bisect(1.0, 2.0, |k| rho(CostKind::Quadratic, k) >= 1.0);
    let k_lin = bisect(1.0, 3.0, |k| rho(CostKind::Linear, k) >= 1.0);
    let lin_root = CriterionName::RGr2.eval(&ParamPoint {
        c1: 1.0,
        c2: 1.0,
        k: 2.0,
        k2: 2.0,
        l: 1.0,
    });

    let costs = [CostSide::quadratic(1.0), CostSide::quadratic(1.0)];
    let e = nash_equilibrium(costs).unwrap().state;
    let converge = orbit(&ModelSpec::gr(costs, 1.40), e.scaled(0.9), 10_000, 0);
    let hit = converge.states.iter().position(|s| s.distance(&e) < 1e-8);
    let cycle = orbit(&ModelSpec::gr(costs, 1.45), e.scaled(0.9), 10_000, 9_990);
    let s = &cycle.states;
    let period_two = !cycle.escaped
        && (0..s.len() - 2).all(|i| s[i].distance(&s[i + 2]) < 1e-9)
        && s[0].distance(&s[1]) > 1e-4;
    let pass = (k_quad - 2f64.sqrt()).abs() <= 1e-5
        && hit.is_some()
        && period_two
        && (k_lin - 2.0).abs() <= 1e-9
        && lin_root == 0.0;
    outcome(
        pass,
        format!(
            "K*={k_quad:.7} (sqrt2 {:.7}), K=1.40 within 1e-8 after {} steps, K=1.45 period-2 {period_two}, linear K*={k_lin:.10}",
            2f64.sqrt(),
            hit.map_or_else(|| "never".to_string(), |i| (i + 1).to_string())
        ),
    )
}

fn border_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_point(&mut rng);
        let quartic = border_poly_gr(p.c1, p.c2, p.k).quartic;
        let r = CriterionName::RGr1.eval(&p);
        worst = worst.max((64.0 * quartic - r).abs() / r.abs().max(f64::MIN_POSITIVE));
    }
    let samples = [
        (1.0, 0.5, 2.0),
        (1.0, 2.0, 1.0),
        (1.0, 2.0, 2.0),
        (1.0, 10.0, 1.0),
        (1.0, 10.0, 2.0),
    ];
    let vanishing = samples
        .iter()
        .filter(|&&(c1, c2, k)| border_poly_gr(c1, c2, k).on_border())
        .count();
    outcome(
        worst <= 1e-12 && vanishing == 0,
        format!("max relative |64 quartic - R_GR1| {worst:.2e}, sample points on the border {vanishing}"),
    )
}

fn containment() -> Outcome {
    let full = Interval::new(0.0, 20.0);
    let speeds = Interval::new(0.0, 5.0);
    let either = |model: Model, t1: f64, t2: f64| {
        let a = ProbeBox::new(Interval::new(t1, 20.0), full, speeds);
        let b = ProbeBox::new(full, Interval::new(t2, 20.0), speeds);
        let ra = containment_probe(model, &a, 50_000, 71, ProbeKind::Containment).unwrap();
        let rb = containment_probe(model, &b, 50_000, 72, ProbeKind::Containment).unwrap();
        ra.violations.len() + rb.violations.len()
    };
    let gr = either(Model::Gr, 4.0, 3.0);
    let gb = either(Model::Gb, 13.0, 7.0);
    let tied = ProbeBox::new(full, full, speeds).tied();
    let gg_tied = containment_probe(Model::Gg, &tied, 100_000, 73, ProbeKind::Containment).unwrap();
    let gl = containment_probe(
        Model::Gl,
        &ProbeBox::new(full, full, speeds),
        20_000,
        74,
        ProbeKind::Witness,
    )
    .unwrap();
    let free = ProbeBox::new(full, full, speeds).with_k2(speeds);
    let gg_free = containment_probe(Model::Gg, &free, 20_000, 75, ProbeKind::Witness).unwrap();
    let ga_box = ProbeBox::new(full, full, speeds).with_l(Interval::new(0.0, 0.999_999));
    let ga = containment_probe(Model::Ga, &ga_box, 100_000, 76, ProbeKind::Containment).unwrap();

    let witness_ok =
        |r: &cournot_core::ContainmentReport| r.witness.is_some_and(|w| w.orbit_confirmed);
    let gg_example = gg_tied
        .violations
        .iter()
        .max_by(|a, b| a.score.total_cmp(&b.score))
        .map(|v| {
            format!(
                " e.g. c1={:.4} c2={:.4} K1=K2={:.4}",
                v.point.c1, v.point.c2, v.point.k
            )
        })
        .unwrap_or_default();
    let pass = gr == 0
        && gb == 0
        && gg_tied.violations.is_empty()
        && witness_ok(&gl)
        && witness_ok(&gg_free);
    outcome(
        pass,
        format!(
            "violations GR {gr}, GB {gb}, GG K1=K2 {} ({} orbit-confirmed{gg_example}); witness GL {}, GG free {}; GA probe (reported only) {} violations",
            gg_tied.violations.len(),
            gg_tied.violations.iter().filter(|v| v.orbit_confirmed).count(),
            witness_ok(&gl),
            witness_ok(&gg_free),
            ga.violations.len()
        ),
    )
}

fn adaptive_unit_weight() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut mismatched = 0;
    for i in 0..1_000 {
        let kind = KINDS[i % 2];
        let p = random_point(&mut rng);
        let costs = [CostSide::new(kind, p.c1), CostSide::new(kind, p.c2)];
        let s = State::new(
            log_uniform(&mut rng, 0.01, 2.0),
            log_uniform(&mut rng, 0.01, 2.0),
        );
        match (
            step(&ModelSpec::ga_unit_weight(costs, p.k), s),
            step(&ModelSpec::gb(costs, p.k), s),
        ) {
            (Ok(a), Ok(b)) => worst = worst.max(a.distance(&b)),
            (Err(_), Err(_)) => {}
            _ => mismatched += 1,
        }
    }
    outcome(
        worst <= 1e-12 && mismatched == 0,
        format!("max |GA(L=1) - GB| {worst:.2e}, escape mismatches {mismatched}"),
    )
}

fn relabeling_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_step = 0.0f64;
    let mut worst_poly = 0.0f64;
    let mut mismatched = 0;
    for i in 0..1_000 {
        let kind = KINDS[i % 2];
        let p = random_point(&mut rng);
        let m = ParamPoint {
            c1: p.c2,
            c2: p.c1,
            k: p.k2,
            k2: p.k,
            l: p.l,
        };
        let s = State::new(
            log_uniform(&mut rng, 0.01, 2.0),
            log_uniform(&mut rng, 0.01, 2.0),
        );
        match (
            step(&spec_at(Model::Gg, kind, &p), s),
            step(&spec_at(Model::Gg, kind, &m), s.swapped()),
        ) {
            (Ok(a), Ok(b)) => worst_step = worst_step.max(a.swapped().distance(&b)),
            (Err(_), Err(_)) => {}
            _ => mismatched += 1,
        }
        for name in [CriterionName::RGg1, CriterionName::RGg2] {
            worst_poly = worst_poly.max((name.eval(&p) - name.eval(&m)).abs() / name.scale(&p));
        }
    }
    outcome(
        worst_step == 0.0 && worst_poly <= 1e-12 && mismatched == 0,
        format!("max step mismatch {worst_step:.2e}, max normalized R_GG1/R_GG2 change {worst_poly:.2e}"),
    )
}

fn run_cli(
    args: &[&str],
    threads: Option<&str>,
    env: Option<&str>,
    dir: &Path,
) -> (i32, Vec<u8>, Vec<u8>) {
    let out_file = dir.join("out.csv");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cournot"));
    cmd.args(args)
        .arg("-o")
        .arg(&out_file)
        .env_remove("COURNOT_THREADS");
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    if let Some(e) = env {
        cmd.env("COURNOT_THREADS", e);
    }
    let output = cmd.output().expect("run cournot");
    let file = std::fs::read(&out_file).unwrap_or_default();
    (output.status.code().unwrap_or(-1), output.stdout, file)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 3] = [
        &["verify", "--samples", "3000", "--seed", "11"],
        &[
            "containment",
            "--model",
            "gg",
            "--tie-k",
            "--samples",
            "20000",
            "--seed",
            "12",
        ],
        &[
            "containment",
            "--model",
            "gl",
            "--mode",
            "witness",
            "--samples",
            "5000",
            "--seed",
            "13",
        ],
    ];
    let mut identical = true;
    for args in runs {
        let reference = run_cli(args, Some("1"), None, dir.path());
        for (threads, env) in [
            (Some("2"), None),
            (Some("4"), None),
            (None, Some("3")),
            (None, None),
        ] {
            identical &= run_cli(args, threads, env, dir.path()) == reference;
        }
        identical &= !reference.1.is_empty() && !reference.2.is_empty();
    }
    outcome(
        identical,
        "verify and containment outputs byte-identical at 1, 2, 3, 4 and default threads",
    )
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("equilibrium correctness", equilibrium_correctness),
        ("best-response correctness", best_response_correctness),
        ("Jacobian vs finite differences", jacobian_vs_differences),
        ("criterion/numeric agreement", criterion_agreement),
        ("GR analytic threshold", gr_threshold),
        ("border polynomial identity", border_identity),
        ("linear-in-quadratic containment", containment),
        ("GA at L=1 equals GB", adaptive_unit_weight),
        ("GG relabeling symmetry", relabeling_symmetry),
        ("determinism across thread counts", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({:.1}s) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {} failed",
        criteria.len() - failed,
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
