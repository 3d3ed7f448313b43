//! Gamma/Beta helpers in log space, so large parameters never overflow.

/// Natural log of the Gamma function.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b), via log space.
pub fn beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_small_integers() {
        assert!((beta(1.0, 1.0) - 1.0).abs() < 1e-14);
        assert!((beta(2.0, 1.0) - 0.5).abs() < 1e-14);
        // B(2,3) = 1!2!/4! = 1/12
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_of_half() {
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn beta_large_arguments_stay_finite() {
        let v = beta(200.0, 200.0);
        assert!(v > 0.0 && v.is_finite());
    }
}
