//! Weight computation: the regularized argmax over the probability simplex.
//!
//! For α ∈ [0, 1) the optimum has the form
//! `wᵢ = (η(1−α)ξᵢ(L̂ᵢ + ν) + 1)^{1/(α−1)}` with a scalar multiplier `ν`
//! fixed by `Σ wᵢ = 1`; for α = 1 it is `wᵢ = exp(−ηξᵢ(L̂ᵢ + ν))`. The α = ½,
//! symmetric case has a fast Newton path on the equivalent normalizer
//! `x = −ν − 2/η`, where `wᵢ = 4(η(L̂ᵢ − x))⁻²`.

use alloc::vec::Vec;

use crate::math;
use crate::types::{WeightVector, SIMPLEX_TOLERANCE};
use crate::{Error, Result};

/// Newton stops once `|Σ wᵢ − 1|` is at most this.
pub const NEWTON_TOLERANCE: f64 = 1e-12;
pub const NEWTON_MAX_ITERATIONS: usize = 100;
pub const BISECTION_MAX_ITERATIONS: usize = 200;
/// Bisection on `ν` stops once the bracket is this narrow (relative to `|ν|` when `|ν| > 1`).
pub const BISECTION_WIDTH: f64 = 1e-14;

fn half_weight(cum: f64, eta: f64, x: f64) -> f64 {
    let d = eta * (cum - x);
    4.0 / (d * d)
}

/// `(Σ wᵢ, Σ wᵢ^{3/2})` at normalizer `x`.
fn half_sums(cum: &[f64], eta: f64, x: f64) -> (f64, f64) {
    cum.iter().fold((0.0, 0.0), |(s, s32), &l| {
        let w = half_weight(l, eta, x);
        (s + w, s32 + w * math::sqrt(w))
    })
}

fn validate_inputs(cum: &[f64], eta: f64) -> Result<()> {
    if cum.is_empty() {
        return Err(Error::InvalidWeights("empty"));
    }
    if cum.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidConfig("cumulative estimates must be finite"));
    }
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(Error::InvalidConfig(
            "learning rate must be finite and non-negative",
        ));
    }
    Ok(())
}

/// α = ½ weights `wᵢ = 4(η(L̂ᵢ − x))⁻²` by Newton's method on `x`.
///
/// `warm_x` is the normalizer from the previous round; it is ignored unless it
/// lies on the valid branch `x < min L̂`. Returns the weights together with the
/// converged `x` for the next warm start.
///
/// `Σ wᵢ` is increasing and convex in `x`, so iterates started right of the
/// root stay on the valid branch. An iterate that overshoots from the left is
/// pulled back to `min L̂ − 2/η`, where the best arm alone has weight 1. If
/// Newton does not converge, bisection on `[min L̂ − 2√K/η, min L̂ − 2/η]`
/// takes over.
pub fn newton_weights_half(
    cum: &[f64],
    eta: f64,
    warm_x: Option<f64>,
) -> Result<(WeightVector, f64)> {
    validate_inputs(cum, eta)?;
    if eta == 0.0 {
        return Err(Error::InvalidConfig("learning rate must be positive"));
    }
    let k = cum.len() as f64;
    let min = math::min(cum);
    let right = min - 2.0 / eta;
    let left = min - 2.0 * math::sqrt(k) / eta;

    let mut x = match warm_x {
        Some(x) if x.is_finite() && x < min => x,
        _ => left,
    };
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let (sum, sum32) = half_sums(cum, eta, x);
        let residual = sum - 1.0;
        if residual.abs() <= NEWTON_TOLERANCE {
            return finish_half(cum, eta, x);
        }
        let mut next = x - residual / (eta * sum32);
        if !(next.is_finite() && next < min) {
            next = right;
        }
        if next == x {
            break;
        }
        x = next;
    }

    let (mut lo, mut hi) = (left, right);
    let mut residual = f64::NAN;
    for _ in 0..BISECTION_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        residual = half_sums(cum, eta, mid).0 - 1.0;
        if residual.abs() <= NEWTON_TOLERANCE {
            return finish_half(cum, eta, mid);
        }
        if residual > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::SolverFailed {
        solver: "newton",
        residual,
    })
}

fn finish_half(cum: &[f64], eta: f64, x: f64) -> Result<(WeightVector, f64)> {
    let weights = cum.iter().map(|&l| half_weight(l, eta, x)).collect();
    Ok((WeightVector::new(weights)?, x))
}

/// Exact maximizer of `⟨w, −L̂⟩ + (1/η)·Σ (wᵢ^α − αwᵢ)/(α(1−α)ξᵢ)` over the
/// simplex, including the log-barrier (α = 0) and negative-entropy (α = 1)
/// limits.
///
/// `η = 0` returns the regularizer's own minimizer (uniform when `ξ` is
/// symmetric). Otherwise `ν` is found by bisection; `Σ wᵢ(ν)` is strictly
/// decreasing in `ν`.
pub fn solve_weights_general(
    alpha: f64,
    eta: f64,
    xi: &[f64],
    cum: &[f64],
) -> Result<WeightVector> {
    validate_inputs(cum, eta)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig("alpha must lie in [0, 1]"));
    }
    if xi.len() != cum.len() {
        return Err(Error::ArmCountMismatch {
            expected: cum.len(),
            got: xi.len(),
        });
    }
    if xi.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::InvalidConfig("xi must be finite and positive"));
    }
    if eta == 0.0 {
        // Without losses the objective is −Ψ alone, whose maximizer does not
        // depend on the scale 1/η.
        let zeros = alloc::vec![0.0; cum.len()];
        return solve_weights_general(alpha, 1.0, xi, &zeros);
    }

    let min = math::min(cum);
    let shifted: Vec<f64> = cum.iter().map(|l| l - min).collect();
    let k = cum.len() as f64;

    if alpha == 1.0 && xi.windows(2).all(|p| p[0] == p[1]) {
        return softmax(&shifted, eta * xi[0]);
    }

    // Bracket: at ν = 0 the best arm alone has weight 1; at `hi` every weight is ≤ 1/K.
    let hi = if alpha == 1.0 {
        xi.iter()
            .map(|x| math::ln(k) / (eta * x))
            .fold(0.0, f64::max)
    } else {
        let target = math::powf(k, 1.0 - alpha) - 1.0;
        xi.iter()
            .map(|x| target / (eta * (1.0 - alpha) * x))
            .fold(0.0, f64::max)
    };
    let weights_at = |nu: f64| -> Vec<f64> {
        shifted
            .iter()
            .zip(xi)
            .map(|(&l, &x)| general_weight(alpha, eta * x, l + nu))
            .collect()
    };

    let (mut lo, mut hi) = (0.0_f64, hi);
    for _ in 0..BISECTION_MAX_ITERATIONS {
        if hi - lo <= BISECTION_WIDTH * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if math::sum(&weights_at(mid)) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let weights = weights_at(0.5 * (lo + hi));
    let residual = math::sum(&weights) - 1.0;
    if residual.abs() > SIMPLEX_TOLERANCE {
        return Err(Error::SolverFailed {
            solver: "bisection",
            residual,
        });
    }
    WeightVector::new(weights)
}

/// Weight of one arm at `offset = L̂ᵢ + ν`, with `scale = ηξᵢ`. Clamped away
/// from zero so the result stays in the open simplex when it underflows.
fn general_weight(alpha: f64, scale: f64, offset: f64) -> f64 {
    let w = if alpha == 1.0 {
        math::exp(-scale * offset)
    } else {
        math::powf(scale * (1.0 - alpha) * offset + 1.0, 1.0 / (alpha - 1.0))
    };
    w.max(f64::MIN_POSITIVE)
}

fn softmax(shifted: &[f64], scale: f64) -> Result<WeightVector> {
    let raw: Vec<f64> = shifted.iter().map(|l| math::exp(-scale * l)).collect();
    let total = math::sum(&raw);
    WeightVector::new(
        raw.into_iter()
            .map(|w| (w / total).max(f64::MIN_POSITIVE))
            .collect(),
    )
}
