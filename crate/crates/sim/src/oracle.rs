//! Randomized checks of the solvers and estimators against independent
//! reference computations.
//!
//! [`reference_weights`] solves the normalization condition with its own
//! bisection on the unshifted multiplier `ν`, using `std` float functions,
//! and shares no code with the library solvers.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsallis_core::tsallis::estimator::{estimate, rv_floor};
use tsallis_core::tsallis::{newton_weights_half, solve_weights_general};
use tsallis_core::{Estimator, WeightVector};

pub const ALPHA_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Outcome of one randomized suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed deviation (0 for purely boolean checks).
    pub worst: f64,
    pub tolerance: f64,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: {} cases, {} failures, worst {:.3e} (tol {:.0e}), {:.2?}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.failures,
            self.worst,
            self.tolerance,
            self.elapsed
        )
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    failures: usize,
    worst: f64,
    start: Instant,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            cases: 0,
            failures: 0,
            worst: 0.0,
            start: Instant::now(),
        }
    }

    fn deviation(&mut self, d: f64) {
        self.cases += 1;
        if d.is_nan() || d > self.tolerance {
            self.failures += 1;
        }
        if d.is_nan() || d > self.worst {
            self.worst = d;
        }
    }

    fn check(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            worst: self.worst,
            tolerance: self.tolerance,
            elapsed: self.start.elapsed(),
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, |m, d| if d.is_nan() { f64::NAN } else { m.max(d) })
}

/// Weights `wᵢ(ν)` on the unshifted estimates.
fn weights_at(alpha: f64, eta: f64, xi: &[f64], cum: &[f64], nu: f64) -> Vec<f64> {
    cum.iter()
        .zip(xi)
        .map(|(&l, &x)| {
            let z = eta * x * (l + nu);
            if alpha == 1.0 {
                (-z).exp()
            } else {
                (1.0 + (1.0 - alpha) * z).powf(1.0 / (alpha - 1.0))
            }
        })
        .collect()
}

/// Maximizer of `⟨w, −L̂⟩ − Ψ(w)/η` over the simplex, by bisection on `ν`
/// to adjacent floats. Needs `η > 0`.
pub fn reference_weights(alpha: f64, eta: f64, xi: &[f64], cum: &[f64]) -> Vec<f64> {
    let total = |nu: f64| weights_at(alpha, eta, xi, cum, nu).iter().sum::<f64>();
    // At ν = −min L̂ the best arm alone has weight 1.
    let mut lo = -cum.iter().copied().fold(f64::INFINITY, f64::min);
    let mut step = 1.0;
    let mut hi = lo + step;
    while total(hi) > 1.0 {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
    }
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if total(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = weights_at(alpha, eta, xi, cum, 0.5 * (lo + hi));
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn random_instance(rng: &mut ChaCha8Rng, asymmetric: bool) -> (usize, f64, Vec<f64>, Vec<f64>) {
    let k = rng.random_range(2..=64);
    // η uniform on (0, 4].
    let eta = 4.0 * (1.0 - rng.random::<f64>());
    let cum = (0..k).map(|_| 100.0 * rng.random::<f64>()).collect();
    let xi = (0..k)
        .map(|_| {
            if asymmetric {
                rng.random_range(0.25..4.0)
            } else {
                1.0
            }
        })
        .collect();
    (k, eta, cum, xi)
}

/// General solver against [`reference_weights`] over the α grid.
pub fn solver_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new("general solver vs bisection oracle", 1e-8);
    for case in 0..cases {
        let alpha = ALPHA_GRID[case % ALPHA_GRID.len()];
        let (_, eta, cum, xi) = random_instance(&mut rng, false);
        let d = match solve_weights_general(alpha, eta, &xi, &cum) {
            Ok(w) => max_abs_diff(w.as_slice(), &reference_weights(alpha, eta, &xi, &cum)),
            Err(_) => f64::NAN,
        };
        tally.deviation(d);
    }
    tally.finish()
}

/// Newton path against the general solver at α = ½.
pub fn newton_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new("newton vs general solver at alpha = 1/2", 1e-8);
    for _ in 0..cases {
        let (_, eta, cum, xi) = random_instance(&mut rng, false);
        let d = match (
            newton_weights_half(&cum, eta, None),
            solve_weights_general(0.5, eta, &xi, &cum),
        ) {
            (Ok((a, _)), Ok(b)) => max_abs_diff(a.as_slice(), b.as_slice()),
            _ => f64::NAN,
        };
        tally.deviation(d);
    }
    tally.finish()
}

/// Unbiasedness of both estimators and the RV floor.
pub fn estimator_suite(cases: usize, seed: u64) -> Vec<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut iw = Tally::new("IW unbiasedness", 1e-12);
    let mut rv = Tally::new("RV unbiasedness", 1e-12);
    let mut floor = Tally::new("RV floor", 0.0);
    for _ in 0..cases {
        let k = rng.random_range(1..=32);
        let raw: Vec<f64> = (0..k).map(|_| 1.0 - rng.random::<f64>()).collect();
        let s: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let losses: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        let eta = 4.0 * (1.0 - rng.random::<f64>());
        let Ok(wv) = WeightVector::new(w.clone()) else {
            iw.deviation(f64::NAN);
            continue;
        };
        for (est, tally) in [
            (Estimator::ImportanceWeighted, &mut iw),
            (Estimator::ReducedVariance, &mut rv),
        ] {
            let mut mean = vec![0.0; k];
            let mut ok = true;
            for i in 0..k {
                match estimate(est, i, losses[i], &wv, eta) {
                    Ok(e) => {
                        for (m, x) in mean.iter_mut().zip(e.as_slice()) {
                            *m += w[i] * x;
                        }
                        if est == Estimator::ReducedVariance {
                            floor.check(e.as_slice().iter().all(|&x| x >= rv_floor(eta)));
                        }
                    }
                    Err(_) => ok = false,
                }
            }
            tally.deviation(if ok {
                max_abs_diff(&mean, &losses)
            } else {
                f64::NAN
            });
        }
    }
    vec![iw.finish(), rv.finish(), floor.finish()]
}

/// Simplex, shift invariance, permutation equivariance and monotonicity of
/// the general solver on asymmetric instances, plus simplex and shift
/// invariance of the Newton path.
pub fn invariance_suite(cases: usize, seed: u64) -> Vec<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut simplex = Tally::new("simplex", 1e-9);
    let mut shift = Tally::new("shift invariance", 1e-10);
    let mut perm = Tally::new("permutation equivariance", 1e-10);
    let mut mono = Tally::new("monotonicity", 1e-12);
    for case in 0..cases {
        let alpha = ALPHA_GRID[case % ALPHA_GRID.len()];
        let (k, eta, cum, xi) = random_instance(&mut rng, true);
        let Ok(w) = solve_weights_general(alpha, eta, &xi, &cum) else {
            simplex.deviation(f64::NAN);
            continue;
        };
        let w = w.as_slice();
        let total: f64 = w.iter().sum();
        simplex.deviation(if w.iter().all(|&x| x > 0.0) {
            (total - 1.0).abs()
        } else {
            f64::NAN
        });
        if let Ok((n, _)) = newton_weights_half(&cum, eta, None) {
            let s: f64 = n.as_slice().iter().sum();
            simplex.deviation((s - 1.0).abs());
        } else {
            simplex.deviation(f64::NAN);
        }

        let c = rng.random_range(-50.0..50.0);
        let shifted: Vec<f64> = cum.iter().map(|l| l + c).collect();
        shift.deviation(match solve_weights_general(alpha, eta, &xi, &shifted) {
            Ok(v) => max_abs_diff(w, v.as_slice()),
            Err(_) => f64::NAN,
        });
        shift.deviation(
            match (
                newton_weights_half(&cum, eta, None),
                newton_weights_half(&shifted, eta, None),
            ) {
                (Ok((a, _)), Ok((b, _))) => max_abs_diff(a.as_slice(), b.as_slice()),
                _ => f64::NAN,
            },
        );

        let mut order: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let pc: Vec<f64> = order.iter().map(|&i| cum[i]).collect();
        let px: Vec<f64> = order.iter().map(|&i| xi[i]).collect();
        perm.deviation(match solve_weights_general(alpha, eta, &px, &pc) {
            Ok(v) => order
                .iter()
                .enumerate()
                .map(|(j, &i)| (v.as_slice()[j] - w[i]).abs())
                .fold(0.0, f64::max),
            Err(_) => f64::NAN,
        });

        let arm = rng.random_range(0..k);
        let mut raised = cum.clone();
        raised[arm] += rng.random_range(0.05..5.0);
        mono.deviation(match solve_weights_general(alpha, eta, &xi, &raised) {
            Ok(v) => {
                let v = v.as_slice();
                // Weights within rounding of 0 or 1 cannot move visibly.
                let own_ok = !(w[arm] > 1e-200 && w[arm] < 1.0 - 1e-6) || v[arm] < w[arm];
                let others = (0..k)
                    .filter(|&j| j != arm)
                    .map(|j| (w[j] - v[j]).max(0.0))
                    .fold(0.0, f64::max);
                if own_ok {
                    others
                } else {
                    f64::NAN
                }
            }
            Err(_) => f64::NAN,
        });
    }
    vec![
        simplex.finish(),
        shift.finish(),
        perm.finish(),
        mono.finish(),
    ]
}

/// Every suite with the case counts used by the acceptance run.
pub fn all_suites(seed: u64) -> Vec<SuiteReport> {
    let mut out = vec![solver_suite(1000, seed), newton_suite(1000, seed ^ 1)];
    out.extend(estimator_suite(10_000, seed ^ 2));
    out.extend(invariance_suite(1000, seed ^ 3));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_reproduces_frozen_newton_example() {
        let w = reference_weights(0.5, 1.0, &[1.0, 1.0], &[0.0, 3.0]);
        assert!((w[0] - 0.850_287_719_612_614).abs() < 1e-14);
    }

    #[test]
    fn reference_softmax_example() {
        let w = reference_weights(1.0, 0.5, &[1.0, 1.0], &[0.0, 2.0 * std::f64::consts::LN_2]);
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn small_suites_pass() {
        for r in [solver_suite(50, 1), newton_suite(50, 2)]
            .into_iter()
            .chain(estimator_suite(200, 3))
            .chain(invariance_suite(50, 4))
        {
            assert!(r.passed(), "{r}");
        }
    }
}
