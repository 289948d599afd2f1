//! Chinese restaurant process prior over partitions.

use rand::Rng;

use super::Assignment;
use crate::error::{Error, Result};
use crate::special::ln_gamma;

/// `ln p(z | α) = L ln α + ln Γ(α) − ln Γ(n + α) + Σ_ℓ ln Γ(n_ℓ)`.
pub fn crp_log_density(z: &Assignment, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::arg(format!("CRP concentration must be positive, got {alpha}")));
    }
    Ok(crp_ln(z.sizes(), alpha))
}

pub(crate) fn crp_ln(sizes: &[usize], alpha: f64) -> f64 {
    let n: usize = sizes.iter().sum();
    let blocks: f64 = sizes.iter().map(|&s| ln_gamma(s as f64)).sum();
    sizes.len() as f64 * alpha.ln() + ln_gamma(alpha) - ln_gamma(n as f64 + alpha) + blocks
}

/// Draws a partition by sequential seating: customer `i` (0-based) joins
/// table `ℓ` with probability `n_ℓ / (i + α)` or opens a new table with
/// probability `α / (i + α)`.
pub fn sample_crp<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Result<Assignment> {
    if n == 0 {
        return Err(Error::arg("CRP needs at least one vertex"));
    }
    if !(alpha > 0.0) {
        return Err(Error::arg(format!("CRP concentration must be positive, got {alpha}")));
    }
    let mut labels = Vec::with_capacity(n);
    let mut sizes: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut u = rng.gen::<f64>() * (i as f64 + alpha);
        let mut table = sizes.len();
        for (l, &s) in sizes.iter().enumerate() {
            if u < s as f64 {
                table = l;
                break;
            }
            u -= s as f64;
        }
        if table == sizes.len() {
            sizes.push(0);
        }
        sizes[table] += 1;
        labels.push(table as u32);
    }
    Assignment::from_compact(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Phase};

    #[test]
    fn two_vertex_partitions_have_half_mass_each_at_unit_alpha() {
        let together = Assignment::from_labels(&[0, 0]);
        let apart = Assignment::from_labels(&[0, 1]);
        assert!((crp_log_density(&together, 1.0).unwrap() - 0.5f64.ln()).abs() < 1e-12);
        assert!((crp_log_density(&apart, 1.0).unwrap() - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn single_vertex_has_probability_one() {
        for &a in &[0.1, 1.0, 3.7] {
            assert!(crp_log_density(&Assignment::single_block(1), a).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        let z = Assignment::single_block(3);
        assert!(crp_log_density(&z, 0.0).is_err());
        assert!(crp_log_density(&z, -1.0).is_err());
        assert!(sample_crp(3, 0.0, &mut stream(0, Phase::Init, 0, 0)).is_err());
        assert!(sample_crp(0, 1.0, &mut stream(0, Phase::Init, 0, 0)).is_err());
    }

    #[test]
    fn one_vertex_sample_is_one_block() {
        let mut rng = stream(1, Phase::Init, 0, 0);
        for _ in 0..10 {
            assert_eq!(sample_crp(1, 2.0, &mut rng).unwrap().num_blocks(), 1);
        }
    }

    #[test]
    fn two_vertices_share_a_block_half_the_time() {
        let mut rng = stream(2, Phase::Init, 0, 0);
        let draws = 100_000;
        let together = (0..draws)
            .filter(|_| sample_crp(2, 1.0, &mut rng).unwrap().num_blocks() == 1)
            .count();
        let sigma = (0.25 / draws as f64).sqrt();
        let freq = together as f64 / draws as f64;
        assert!((freq - 0.5).abs() < 3.0 * sigma, "freq {freq}");
    }
}
