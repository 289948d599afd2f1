//! Per-dyad count samplers for the Heaviside superposition.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};

/// Rates at or below this are treated as this value on constrained dyads.
pub const RATE_FLOOR: f64 = 1e-12;

/// Above this rate the zero-truncated sampler switches from inversion to
/// rejection from the untruncated Poisson.
const INVERSION_LIMIT: f64 = 30.0;

/// Conditional law of a dyad's total latent count given its observation.
///
/// `a_star = 0` forces zero. `a_star = 1` draws from the zero-truncated
/// Poisson `P(k) = Pois(k | η) / (1 − e^{−η})`, `k ≥ 1`.
pub fn sample_total_count<R: Rng + ?Sized>(a_star: u8, eta: f64, rng: &mut R) -> Result<u32> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::arg(format!("total rate must be positive and finite, got {eta}")));
    }
    Ok(match a_star {
        0 => 0,
        _ => zero_truncated_poisson(eta, rng),
    })
}

pub(crate) fn zero_truncated_poisson<R: Rng + ?Sized>(eta: f64, rng: &mut R) -> u32 {
    if eta <= INVERSION_LIMIT {
        // P(1) = η e^{−η} / (1 − e^{−η}) = η / (e^η − 1)
        let mut p = eta / eta.exp_m1();
        let mut cdf = p;
        let u: f64 = rng.gen();
        let mut k = 1u32;
        while u >= cdf {
            k += 1;
            p *= eta / k as f64;
            let next = cdf + p;
            if next == cdf {
                // remaining tail below double precision
                break;
            }
            cdf = next;
        }
        k
    } else {
        let pois = Poisson::new(eta).expect("positive rate");
        loop {
            let k = pois.sample(rng) as u32;
            if k > 0 {
                return k;
            }
        }
    }
}

/// Untruncated Poisson draw.
pub(crate) fn poisson<R: Rng + ?Sized>(eta: f64, rng: &mut R) -> u32 {
    if eta <= 0.0 {
        return 0;
    }
    Poisson::new(eta).expect("positive rate").sample(rng) as u32
}

/// Multinomial split of `total` with probabilities proportional to `rates`.
pub fn split_count<R: Rng + ?Sized>(total: u32, rates: &[f64], rng: &mut R) -> Result<Vec<u32>> {
    if rates.is_empty() {
        return Err(Error::arg("cannot split a count over zero subnetworks"));
    }
    if let Some(bad) = rates.iter().find(|&&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::arg(format!("split rates must be positive and finite, got {bad}")));
    }
    let mut out = vec![0; rates.len()];
    split_into(total, rates, &mut out, rng);
    Ok(out)
}

/// Unchecked multinomial split into `out` (same length as `rates`).
pub(crate) fn split_into<R: Rng + ?Sized>(total: u32, rates: &[f64], out: &mut [u32], rng: &mut R) {
    out.iter_mut().for_each(|x| *x = 0);
    if total == 0 {
        return;
    }
    let s = rates.len();
    if s == 1 {
        out[0] = total;
        return;
    }
    let mass: f64 = rates.iter().sum();
    if total <= 16 {
        // one categorical draw per unit
        for _ in 0..total {
            let mut u = rng.gen::<f64>() * mass;
            let mut pick = s - 1;
            for (k, &r) in rates.iter().enumerate() {
                if u < r {
                    pick = k;
                    break;
                }
                u -= r;
            }
            out[pick] += 1;
        }
    } else {
        // conditional binomials
        let mut left = total as u64;
        let mut rest = mass;
        for k in 0..s - 1 {
            if left == 0 {
                break;
            }
            let p = (rates[k] / rest).clamp(0.0, 1.0);
            let x = Binomial::new(left, p).expect("valid binomial").sample(rng);
            out[k] = x as u32;
            left -= x;
            rest -= rates[k];
        }
        out[s - 1] += left as u32;
    }
}
