//! Special functions used by the densities.

/// Natural log of the Gamma function (Lanczos approximation, ~1e-15
/// relative accuracy for positive arguments).
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `ln(k!)`.
#[inline]
pub fn ln_factorial(k: u64) -> f64 {
    statrs::function::factorial::ln_factorial(k)
}

/// Log density of the Gamma(shape, rate) distribution at `x > 0`.
pub fn ln_gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

/// Log density of the G(2, 1) hyperprior, `x e^{-x}`.
#[inline]
pub fn ln_hyperprior(x: f64) -> f64 {
    x.ln() - x
}
