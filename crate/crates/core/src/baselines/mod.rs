//! Reference learners: UCB1, Beta-Bernoulli Thompson Sampling and loss-based EXP3.
//!
//! All three work on losses in `[0, 1]`; UCB1 and Thompson Sampling convert
//! them to rewards `1 − ℓ` internally.

mod exp3;
mod thompson;
mod ucb;

pub use exp3::Exp3;
pub use thompson::Thompson;
pub use ucb::Ucb1;

/// First index of the maximum; NaNs never win.
fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}
