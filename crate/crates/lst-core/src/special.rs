//! Special functions behind the cash-buffer closed forms.
//!
//! ₂F₁(1−η, 5/2; 7/2; z) is evaluated through its Euler integral
//! (5/2)∫₀¹ x^{3/2}(1 − zx)^{η−1} dx, which stays valid for z ≤ −1 where the
//! power series diverges.

use crate::error::{domain, Result};
use crate::quad::integrate;

const TOL: f64 = 1e-14;

/// Gamma function (Lanczos approximation).
#[must_use]
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Beta function B(a, b).
#[must_use]
pub fn beta(a: f64, b: f64) -> f64 {
    (statrs::function::gamma::ln_gamma(a) + statrs::function::gamma::ln_gamma(b)
        - statrs::function::gamma::ln_gamma(a + b))
    .exp()
}

/// ₂F₁(1−η, 5/2; 7/2; z) for z ≤ 0.
pub fn hyp2f1_family(eta: f64, z: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return domain("eta must be positive");
    }
    if !(z <= 0.0) || !z.is_finite() {
        return domain("z must be finite and non-positive");
    }
    let mut breaks = Vec::new();
    if z < -1.0 {
        // the factor (1 − zx)^{η−1} changes regime around x = 1/|z|
        let k = -1.0 / z;
        breaks.extend([k, (10.0 * k).min(0.5), (100.0 * k).min(0.5)]);
    }
    let v = integrate(|x| x.powf(1.5) * (1.0 - z * x).powf(eta - 1.0), 0.0, 1.0, &breaks, TOL, TOL);
    Ok(2.5 * v)
}

/// I(w;η) = ∫_w^1 (x − w)^{3/2} x^{η−1} dx via the hypergeometric closed form,
/// with I(0;η) = 2/(2η+3).
pub fn integral_i_w(w: f64, eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return domain("w must lie in [0, 1]");
    }
    if !(eta > 0.0) {
        return domain("eta must be positive");
    }
    if w == 0.0 {
        return Ok(2.0 / (2.0 * eta + 3.0));
    }
    if w == 1.0 {
        return Ok(0.0);
    }
    let z = (w - 1.0) / w;
    Ok(0.4 * (1.0 - w).powf(2.5) * w.powf(eta - 1.0) * hyp2f1_family(eta, z)?)
}

/// I(w;η) by direct quadrature of its definition.
pub fn integral_i_w_quadrature(w: f64, eta: f64) -> Result<f64> {
    integral_i_ab_quadrature(w, 1.0, eta)
}

fn check_ab(a: f64, b: f64, eta: f64) -> Result<()> {
    if !(a >= 0.0 && b > a && b.is_finite()) {
        return domain("bounds must satisfy 0 <= a < b");
    }
    if !(eta > 0.0) {
        return domain("eta must be positive");
    }
    Ok(())
}

/// I(a,b;η) = ∫_a^b (x − a)^{3/2} x^{η−1} dx by adaptive quadrature.
pub fn integral_i_ab_quadrature(a: f64, b: f64, eta: f64) -> Result<f64> {
    if a == b && a >= 0.0 {
        return Ok(0.0);
    }
    check_ab(a, b, eta)?;
    Ok(integrate(|x| (x - a).max(0.0).powf(1.5) * x.powf(eta - 1.0), a, b, &[], TOL, TOL))
}

/// Closed forms of I(a,b;η) for η ∈ {0.5, 1, 2, 3}; `None` for other η.
pub fn integral_i_ab_closed(a: f64, b: f64, eta: f64) -> Result<Option<f64>> {
    check_ab(a, b, eta)?;
    let d = b - a;
    let d52 = d.powf(2.5);
    let v = if eta == 1.0 {
        0.4 * d52
    } else if eta == 2.0 {
        2.0 / 35.0 * d52 * (2.0 * a + 5.0 * b)
    } else if eta == 3.0 {
        2.0 / 315.0 * d52 * (8.0 * a * a + 20.0 * a * b + 35.0 * b * b)
    } else if eta == 0.5 {
        let log_term = if a == 0.0 { 0.0 } else { a * a * (b / a).sqrt().acosh() };
        0.25 * (d.sqrt() * b.sqrt() * (2.0 * b - 5.0 * a) + 3.0 * log_term)
    } else {
        return Ok(None);
    };
    Ok(Some(v))
}

/// I(a,b;η): closed form when one exists, quadrature otherwise.
pub fn integral_i_ab(a: f64, b: f64, eta: f64) -> Result<f64> {
    if a == b && a >= 0.0 {
        return Ok(0.0);
    }
    match integral_i_ab_closed(a, b, eta)? {
        Some(v) => Ok(v),
        None => integral_i_ab_quadrature(a, b, eta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_errors() {
        assert!(hyp2f1_family(0.0, -1.0).is_err());
        assert!(hyp2f1_family(1.0, 0.5).is_err());
        assert!(integral_i_ab(0.5, 0.2, 1.0).is_err());
    }

    #[test]
    fn beta_gamma_identity() {
        assert!((beta(2.5, 1.0) - 0.4).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
    }
}
