//! Lanczos approximation of the gamma function for complex arguments.

use num_complex::Complex64;
use std::f64::consts::PI;

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

/// Gamma function on the complex plane (poles at the non-positive integers
/// return an infinite value).
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (z * PI).sin();
        if s.norm() == 0.0 {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        return Complex64::new(PI, 0.0) / (s * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

/// Real gamma function.
pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..15 {
            let g = gamma_real(n as f64);
            assert!((g - f).abs() <= 1e-13 * f, "Gamma({n}) = {g}, expected {f}");
            f *= n as f64;
        }
    }

    #[test]
    fn half_integer() {
        assert!((gamma_real(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_real(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn reflection_formula_complex() {
        for &(re, im) in &[(0.3, 0.7), (-1.2, 0.4), (2.5, -3.0), (0.1, 5.0)] {
            let z = Complex64::new(re, im);
            let lhs = gamma(z) * gamma(Complex64::new(1.0, 0.0) - z);
            let rhs = Complex64::new(PI, 0.0) / (z * PI).sin();
            assert!(
                (lhs - rhs).norm() <= 1e-12 * rhs.norm(),
                "{z}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn recurrence() {
        let z = Complex64::new(1.3, -2.1);
        let lhs = gamma(z + 1.0);
        let rhs = z * gamma(z);
        assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm());
    }
}
