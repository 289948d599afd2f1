//! Random-walk Metropolis–Hastings on `(α, κ, λ)` in log coordinates.

use rand::Rng;
use rand_distr::StandardNormal;

use super::crp::crp_ln;
use super::stats::collapsed_pair_sum;
use super::{Assignment, BlockStats, Hyperparams};
use crate::special::ln_hyperprior;

/// Log-space proposal scale used by the chain.
pub const DEFAULT_STEP: f64 = 0.1;

/// Acceptance tallies for one update.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MhAccepts {
    pub alpha: bool,
    pub kappa: bool,
    pub lambda: bool,
}

/// Log acceptance ratio of a log-space random-walk move from `theta` to
/// `proposal`, including the `θ'/θ` Jacobian of the transform.
#[inline]
pub fn log_acceptance(ln_target_current: f64, ln_target_proposal: f64, theta: f64, proposal: f64) -> f64 {
    (ln_target_proposal + proposal.ln()) - (ln_target_current + theta.ln())
}

fn mh_step<R: Rng + ?Sized>(
    theta: f64,
    step: f64,
    ln_target: impl Fn(f64) -> f64,
    rng: &mut R,
) -> (f64, bool) {
    let xi: f64 = rng.sample(StandardNormal);
    let proposal = theta * (step * xi).exp();
    let log_a = log_acceptance(ln_target(theta), ln_target(proposal), theta, proposal);
    // draw u unconditionally so the stream advances identically
    let u: f64 = rng.gen();
    if log_a >= 0.0 || u.ln() < log_a {
        (proposal, true)
    } else {
        (theta, false)
    }
}

/// Updates `α`, then `κ`, then `λ`, each by one MH step. The `α` target is
/// the CRP density times the G(2, 1) prior; the `κ` and `λ` targets are the
/// collapsed likelihood times G(2, 1) priors.
pub fn mh_update_hyperparams<R: Rng + ?Sized>(
    hp: &Hyperparams,
    z: &Assignment,
    stats: &BlockStats,
    step: f64,
    rng: &mut R,
) -> (Hyperparams, MhAccepts) {
    let mut next = *hp;
    let mut acc = MhAccepts::default();
    let sizes = z.sizes();

    (next.alpha, acc.alpha) = mh_step(next.alpha, step, |a| crp_ln(sizes, a) + ln_hyperprior(a), rng);

    let lambda = next.lambda;
    (next.kappa, acc.kappa) = mh_step(
        next.kappa,
        step,
        |k| collapsed_pair_sum(stats, k, lambda) + ln_hyperprior(k),
        rng,
    );

    let kappa = next.kappa;
    (next.lambda, acc.lambda) = mh_step(
        next.lambda,
        step,
        |l| collapsed_pair_sum(stats, kappa, l) + ln_hyperprior(l),
        rng,
    );
    (next, acc)
}
