//! Gamma functions. Real arguments go through `statrs`; the complex gamma
//! function (needed for `Γₙ(μ)` at complex `μ`) uses a Lanczos approximation
//! with reflection.

use num_complex::Complex64;
use std::f64::consts::PI;

pub use statrs::function::gamma::{gamma, gamma_ur, ln_gamma};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` on the principal branch for `Re z ≥ ½`, continued by
/// reflection elsewhere.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(gamma(z.re), 0.0);
    }
    ln_gamma_complex(z).exp()
}

/// `1/Γ(z)`, entire; exactly zero at the poles `z ∈ −ℕ₀`.
pub fn rgamma_complex(z: Complex64) -> Complex64 {
    if is_gamma_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.im == 0.0 {
        return Complex64::new(1.0 / gamma(z.re), 0.0);
    }
    (-ln_gamma_complex(z)).exp()
}

pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_values() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn complex_matches_real_axis_and_recurrence() {
        let z = Complex64::new(2.3, 0.7);
        let lhs = gamma_complex(z + 1.0);
        let rhs = z * gamma_complex(z);
        assert!((lhs - rhs).norm() / lhs.norm() < 1e-13);
        let near = ln_gamma_complex(Complex64::new(3.7, 0.0)).exp().re;
        assert!((near - gamma(3.7)).abs() / gamma(3.7) < 1e-13);
        let refl = gamma_complex(Complex64::new(-1.5, 0.3));
        let up = gamma_complex(Complex64::new(0.5, 0.3)) / (Complex64::new(-1.5, 0.3) * Complex64::new(-0.5, 0.3));
        assert!((refl - up).norm() / up.norm() < 1e-12);
    }

    #[test]
    fn poles() {
        assert!(is_gamma_pole(Complex64::new(-2.0, 0.0)));
        assert_eq!(rgamma_complex(Complex64::new(0.0, 0.0)).norm(), 0.0);
        assert!(!is_gamma_pole(Complex64::new(0.5, 0.0)));
    }
}
