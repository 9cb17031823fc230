//! Per-firm behavioural primitives under the isoelastic price `p = 1/Q`.
//!
//! Every function takes the firm's own output first and the rival's second.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, CournotError, Result};
use crate::types::{CostKind, CostSide};

/// Settings for the root polish inside [`best_response`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseOptions {
    pub newton_tol: f64,
    pub max_iter: usize,
    pub bracket_growth: f64,
}

impl Default for ResponseOptions {
    fn default() -> Self {
        ResponseOptions {
            newton_tol: 1e-12,
            max_iter: 200,
            bracket_growth: 2.0,
        }
    }
}

impl ResponseOptions {
    pub fn validate(self) -> Result<Self> {
        if self.newton_tol.is_nan() || self.newton_tol <= 0.0 {
            return Err(invalid("newton_tol must be positive"));
        }
        if self.max_iter < 1 {
            return Err(invalid("max_iter must be at least 1"));
        }
        if self.bracket_growth.is_nan() || self.bracket_growth <= 1.0 {
            return Err(invalid("bracket_growth must exceed 1"));
        }
        Ok(self)
    }
}

fn total(q_self: f64, q_rival: f64) -> Result<f64> {
    let q = q_self + q_rival;
    if q > 0.0 && q.is_finite() {
        Ok(q)
    } else {
        Err(domain(format!("total supply must be positive (got {q})")))
    }
}

/// Realized profit `q/(q+r) - C(q)`.
pub fn profit(cost: CostSide, q_self: f64, q_rival: f64) -> Result<f64> {
    let q = total(q_self, q_rival)?;
    let revenue = q_self / q;
    Ok(match cost.kind {
        CostKind::Quadratic => revenue - cost.c * q_self * q_self,
        CostKind::Linear => revenue - cost.c * q_self,
    })
}

/// Left-hand side of the first-order condition, scaled so that it is a
/// polynomial for quadratic costs: `r - 2c q (q+r)^2`. For linear costs it is
/// the plain marginal profit `r/(q+r)^2 - c`. Positive below the best
/// response, negative above it.
pub fn foc_residual(cost: CostSide, q_self: f64, q_rival: f64) -> Result<f64> {
    let q = total(q_self, q_rival)?;
    Ok(match cost.kind {
        CostKind::Quadratic => q_rival - 2.0 * cost.c * q_self * q * q,
        CostKind::Linear => q_rival / (q * q) - cost.c,
    })
}

/// Marginal profit `dΠ/dq` at `(q_self, q_rival)`.
pub fn marginal_profit(cost: CostSide, q_self: f64, q_rival: f64) -> Result<f64> {
    let q = total(q_self, q_rival)?;
    let revenue = q_rival / (q * q);
    Ok(match cost.kind {
        CostKind::Quadratic => revenue - 2.0 * cost.c * q_self,
        CostKind::Linear => revenue - cost.c,
    })
}

/// Output times marginal profit: the gradient adjuster's step direction.
pub fn gradient_term(cost: CostSide, q_self: f64, q_rival: f64) -> Result<f64> {
    Ok(q_self * marginal_profit(cost, q_self, q_rival)?)
}

/// Partial derivatives of [`gradient_term`] with respect to own and rival
/// output.
pub fn gradient_partials(cost: CostSide, q_self: f64, q_rival: f64) -> Result<(f64, f64)> {
    let q = total(q_self, q_rival)?;
    let q3 = q * q * q;
    let wrt_rival = q_self * (q_self - q_rival) / q3;
    let revenue_part = q_rival * (q_rival - q_self) / q3;
    let wrt_self = match cost.kind {
        CostKind::Quadratic => revenue_part - 4.0 * cost.c * q_self,
        CostKind::Linear => revenue_part - cost.c,
    };
    Ok((wrt_self, wrt_rival))
}

/// The closed-form positive root of `r - 2c q (q+r)^2 = 0`, without polish.
///
/// Loses relative accuracy when `c r^2` is small because the three terms
/// nearly cancel; [`best_response`] always polishes the result.
pub fn best_response_closed_form(c: f64, q_rival: f64) -> f64 {
    let r = q_rival;
    let cr2 = c * r * r;
    let inner = 4.0 * cr2 + 3.0 * 3f64.sqrt() * (8.0 * cr2 + 27.0).sqrt() + 27.0;
    // real branch of the cube root; the radicand is positive for r > 0
    let m = (c * c * r * inner).cbrt();
    2f64.cbrt() * m / (6.0 * c) + 4f64.cbrt() * cr2 / (3.0 * m) - 2.0 * r / 3.0
}

/// Safeguarded Newton on the quadratic-cost FOC, started from `guess`.
///
/// The residual is strictly decreasing on `q > 0` with value `r > 0` at zero,
/// so a bracket `[lo, hi]` with a sign change always exists.
fn polish_quadratic(c: f64, r: f64, guess: f64, opts: &ResponseOptions) -> Result<f64> {
    let f = |q: f64| r - 2.0 * c * q * (q + r) * (q + r);
    let df = |q: f64| -2.0 * c * ((q + r) * (q + r) + 2.0 * q * (q + r));

    let mut lo = 0.0;
    let mut hi = r.max((2.0 * c).powf(-0.5));
    let mut grow = 0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= opts.bracket_growth;
        grow += 1;
        if grow > 2048 || !hi.is_finite() {
            return Err(CournotError::NonConvergence {
                iterations: grow,
                q_rival: r,
            });
        }
    }

    let tol = opts.newton_tol * (1.0 + r);
    let mut x = if guess.is_finite() && guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..opts.max_iter {
        let fx = f(x);
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / df(x);
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        // bracket collapsed to adjacent floats: the best representable root
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(if f(lo).abs() < f(hi).abs() { lo } else { hi });
        }
    }
    Err(CournotError::NonConvergence {
        iterations: opts.max_iter,
        q_rival: r,
    })
}

/// Profit-maximizing output against a fixed rival output.
///
/// Quadratic costs: closed form polished by bracketed Newton. Linear costs:
/// `max(0, sqrt(r/c) - r)`.
pub fn best_response(cost: CostSide, q_rival: f64, opts: &ResponseOptions) -> Result<f64> {
    if !(q_rival > 0.0 && q_rival.is_finite()) {
        return Err(domain(format!(
            "best response needs a positive rival output (got {q_rival})"
        )));
    }
    match cost.kind {
        CostKind::Quadratic => {
            let guess = best_response_closed_form(cost.c, q_rival);
            polish_quadratic(cost.c, q_rival, guess, opts)
        }
        CostKind::Linear => Ok(((q_rival / cost.c).sqrt() - q_rival).max(0.0)),
    }
}

/// Slope of the reaction function `dR/dr`, obtained by implicit
/// differentiation of the FOC at the point `(q_self, q_rival)` which is
/// assumed to lie on the reaction curve.
pub fn best_response_slope(cost: CostSide, q_self: f64, q_rival: f64) -> Result<f64> {
    let q = total(q_self, q_rival)?;
    match cost.kind {
        CostKind::Quadratic => {
            let c = cost.c;
            Ok((1.0 - 4.0 * c * q_self * q) / (2.0 * c * (q * q + 2.0 * q_self * q)))
        }
        CostKind::Linear => {
            if q_self <= 0.0 {
                // clamped branch
                Ok(0.0)
            } else {
                Ok(0.5 / (q_rival * cost.c).sqrt() - 1.0)
            }
        }
    }
}

/// Output chosen by a local monopolistic approximation player, who
/// linearizes demand at the observed point and assumes the rival repeats.
pub fn lma_response(cost: CostSide, q_self: f64, q_rival: f64) -> Result<f64> {
    let q = total(q_self, q_rival)?;
    Ok(match cost.kind {
        CostKind::Quadratic => (2.0 * q_self + q_rival) / (2.0 * (1.0 + cost.c * q * q)),
        CostKind::Linear => ((2.0 * q_self + q_rival - cost.c * q * q) / 2.0).max(0.0),
    })
}

/// Partials of [`lma_response`] with respect to own and rival output.
pub fn lma_partials(cost: CostSide, q_self: f64, q_rival: f64) -> Result<(f64, f64)> {
    let q = total(q_self, q_rival)?;
    let c = cost.c;
    match cost.kind {
        CostKind::Quadratic => {
            let num = 2.0 * q_self + q_rival;
            let den = 2.0 * (1.0 + c * q * q);
            let dden = 4.0 * c * q;
            let d2 = den * den;
            Ok(((2.0 * den - num * dden) / d2, (den - num * dden) / d2))
        }
        CostKind::Linear => {
            if 2.0 * q_self + q_rival - c * q * q <= 0.0 {
                Ok((0.0, 0.0))
            } else {
                Ok((1.0 - c * q, 0.5 - c * q))
            }
        }
    }
}
