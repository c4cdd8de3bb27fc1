use crate::error::{Error, Result};

/// Zeroth-order Boys function `F₀(t) = ∫₀¹ exp(−t u²) du`.
///
/// Closed form `½√(π/t)·erf(√t)`; a Taylor series takes over near zero
/// where the closed form loses digits to cancellation.
pub fn boys_f0(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!(
            "Boys function argument {t} is negative"
        )));
    }
    if t < 1e-3 {
        // Σ (−t)^n / (n! (2n+1)); four terms leave an error below 1e-16
        return Ok(1.0 - t / 3.0 + t * t / 10.0 - t * t * t / 42.0 + t.powi(4) / 216.0);
    }
    let s = t.sqrt();
    Ok(0.5 * (std::f64::consts::PI / t).sqrt() * libm::erf(s))
}
