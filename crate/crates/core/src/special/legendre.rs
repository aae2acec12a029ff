//! Ferrers functions of the first kind `P^{-m}_nu(x)` on `(-1, 1)` for
//! complex degree `nu`.
//!
//! For `m >= 0` the function is evaluated from the Gauss series
//!
//! ```text
//! P^{-m}_nu(x) = 1/m! * ((1-x)/(1+x))^{m/2} * 2F1(-nu, nu+1; 1+m; (1-x)/2)
//! ```
//!
//! The series converges on `(-1, 1]`, slowly as `x -> -1`. Close to `-1`
//! the integral
//!
//! ```text
//! P^{-m}_nu(cos t) = sqrt(2/pi) sin(t)^-m / Gamma(m+1/2)
//!                    * int_0^t cos((nu+1/2) f) (cos f - cos t)^(m-1/2) df
//! ```
//!
//! is used instead, with `f = t - v^2` and adaptive Gauss-Kronrod in `v`.
//! Negative `m`
//! (positive order) is reduced to the series through
//! `P^{m}_nu = (-1)^m (nu-m+1)(nu-m+2)...(nu+m) P^{-m}_nu`.

use num_complex::Complex64;

use super::gamma::gamma_real;
use crate::error::{Error, Result};

/// Relative size below which a term counts as negligible.
const TERM_TOL: f64 = 1e-15;
/// Consecutive negligible terms required before truncation.
const QUIET_TERMS: usize = 3;
/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 20_000_000;

/// Computes `P^{-m}_nu(x)`.
pub fn legendre_p(nu: Complex64, m: i32, x: f64) -> Result<Complex64> {
    let (p, _) = series_pair(nu, m.unsigned_abs(), x, false)?;
    Ok(apply_order_sign(p, nu, m))
}

/// Computes `(P^{-m}_nu(x), P^{-m}_{nu+1}(x))` in a single pass over the
/// series.
pub fn legendre_pair(nu: Complex64, m: i32, x: f64) -> Result<(Complex64, Complex64)> {
    let (p0, p1) = series_pair(nu, m.unsigned_abs(), x, true)?;
    Ok((
        apply_order_sign(p0, nu, m),
        apply_order_sign(p1, nu + 1.0, m),
    ))
}

fn apply_order_sign(p: Complex64, nu: Complex64, m: i32) -> Complex64 {
    if m >= 0 {
        return p;
    }
    let k = -m;
    let mut factor = Complex64::new(1.0, 0.0);
    for j in (1 - k)..=k {
        factor *= nu + j as f64;
    }
    if k % 2 == 1 {
        factor = -factor;
    }
    factor * p
}

/// Computes `(P^{-m}_nu(x), P^{-m}_{nu+1}(x))` up to a common positive factor:
/// the returned `(p0, p1, s)` satisfy `P = p * exp(s)`. Stays finite where the
/// values themselves overflow (large imaginary degree with `x` near `-1`).
pub fn legendre_pair_scaled(nu: Complex64, m: i32, x: f64) -> Result<(Complex64, Complex64, f64)> {
    let (p0, p1, s) = pair_scaled(nu, m.unsigned_abs(), x, true)?;
    Ok((
        apply_order_sign(p0, nu, m),
        apply_order_sign(p1, nu + 1.0, m),
        s,
    ))
}

/// Below this argument the integral replaces the series.
const INTEGRAL_BELOW: f64 = -0.8;

fn series_pair(nu: Complex64, m: u32, x: f64, both: bool) -> Result<(Complex64, Complex64)> {
    let (p0, p1, s) = pair_scaled(nu, m, x, both)?;
    if s == 0.0 {
        return Ok((p0, p1));
    }
    let f = s.exp();
    Ok((p0 * f, p1 * f))
}

fn pair_scaled(nu: Complex64, m: u32, x: f64, both: bool) -> Result<(Complex64, Complex64, f64)> {
    if x > -1.0 && x < INTEGRAL_BELOW {
        integral_pair_scaled(nu, m, x)
    } else {
        series_pair_scaled(nu, m, x, both)
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

type Pair = (Complex64, Complex64);

/// Kronrod estimate, Gauss-Kronrod difference and `int |f|` on `[a, b]`.
fn gk15(f: &impl Fn(f64) -> Pair, a: f64, b: f64) -> (Pair, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let (mut k0, mut k1, mut g0, mut g1) = (zero, zero, zero, zero);
    let mut abs = 0.0;
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).enumerate() {
        let pts: &[f64] = if x == 0.0 {
            &[c]
        } else {
            &[c - h * x, c + h * x]
        };
        for &p in pts {
            let (v0, v1) = f(p);
            k0 += w * v0;
            k1 += w * v1;
            abs += w * (v0.norm() + v1.norm());
            if i % 2 == 1 {
                g0 += WG[i / 2] * v0;
                g1 += WG[i / 2] * v1;
            }
        }
    }
    let err = ((k0 - g0).norm() + (k1 - g1).norm()) * h;
    ((k0 * h, k1 * h), err, abs * h)
}

/// Globally adaptive integration over the panels `edges`, bisecting the
/// panel with the largest error estimate.
fn adaptive(f: &impl Fn(f64) -> Pair, edges: &[f64], rel_tol: f64) -> Pair {
    let mut parts: Vec<(f64, f64, Pair, f64)> = Vec::new();
    let mut mag = 0.0;
    for e in edges.windows(2) {
        let (v, err, abs) = gk15(f, e[0], e[1]);
        mag += abs;
        parts.push((e[0], e[1], v, err));
    }
    for _ in 0..MAX_PANELS {
        let mut worst = 0;
        let mut total_err = 0.0;
        for (k, p) in parts.iter().enumerate() {
            total_err += p.3;
            if p.3 > parts[worst].3 {
                worst = k;
            }
        }
        if total_err <= rel_tol * mag {
            break;
        }
        let (a, b, _, _) = parts[worst];
        let c = 0.5 * (a + b);
        let (lv, le, _) = gk15(f, a, c);
        let (rv, re, _) = gk15(f, c, b);
        parts[worst] = (a, c, lv, le);
        parts.push((c, b, rv, re));
    }
    let zero = Complex64::new(0.0, 0.0);
    parts
        .iter()
        .fold((zero, zero), |acc, p| (acc.0 + p.2 .0, acc.1 + p.2 .1))
}

const MAX_PANELS: usize = 400;

/// Mehler-type integral for `(P^{-m}_nu, P^{-m}_{nu+1})` scaled by
/// `exp(-|Im nu| theta)`.
fn integral_pair_scaled(nu: Complex64, m: u32, x: f64) -> Result<(Complex64, Complex64, f64)> {
    let theta = x.acos();
    let scale = nu.im.abs() * theta;
    let w0 = nu + 0.5;
    let w1 = nu + 1.5;
    let power = m as f64 - 0.5;
    let i = Complex64::i();
    let f = |v: f64| -> Pair {
        let v2 = v * v;
        let phi = theta - v2;
        let g = 2.0 * v * (2.0 * (theta - 0.5 * v2).sin() * (0.5 * v2).sin()).powf(power);
        let c = |w: Complex64| 0.5 * ((i * w * phi - scale).exp() + (-i * w * phi - scale).exp());
        (g * c(w0), g * c(w1))
    };
    // geometric panels resolve the peak at v = 0 of width 1/sqrt(|Im nu|)
    let top = theta.sqrt();
    let mut v = (0.5 / (nu.im.abs() + 1.0).sqrt())
        .min(0.5 * (std::f64::consts::PI - theta).sqrt())
        .min(top);
    let mut edges = vec![0.0];
    while v < top {
        edges.push(v);
        v *= 2.0;
    }
    edges.push(top);
    let total = adaptive(&f, &edges, 1e-14);
    let pre = (2.0 / std::f64::consts::PI).sqrt() * theta.sin().powi(-(m as i32))
        / gamma_real(m as f64 + 0.5);
    Ok((total.0 * pre, total.1 * pre, scale))
}

/// Magnitude at which running terms and sums are rescaled.
const RESCALE_AT: f64 = 1e200;

fn series_pair_scaled(
    nu: Complex64,
    m: u32,
    x: f64,
    both: bool,
) -> Result<(Complex64, Complex64, f64)> {
    if !(x > -1.0 && x < 1.0) {
        return Err(Error::Domain(x));
    }
    let z = 0.5 * (1.0 - x);
    let mf = m as f64;
    let nu1 = nu + 1.0;

    // term_n = (-nu)_n (nu+1)_n / (n! (1+m)_n) z^n
    let mut t0 = Complex64::new(1.0, 0.0);
    let mut t1 = Complex64::new(1.0, 0.0);
    let mut s0 = t0;
    let mut s1 = t1;
    let mut quiet = 0usize;
    let mut n = 0usize;
    let mut log_scale = 0.0;
    loop {
        let nf = n as f64;
        let common = z / ((nf + 1.0) * (nf + 1.0 + mf));
        t0 *= (nf - nu) * (nf + nu + 1.0) * common;
        s0 += t0;
        let small0 = t0.norm() <= TERM_TOL * s0.norm();
        let small1 = if both {
            t1 *= (nf - nu1) * (nf + nu1 + 1.0) * common;
            s1 += t1;
            t1.norm() <= TERM_TOL * s1.norm()
        } else {
            true
        };
        n += 1;
        if t0.norm() > RESCALE_AT || t1.norm() > RESCALE_AT {
            t0 /= RESCALE_AT;
            t1 /= RESCALE_AT;
            s0 /= RESCALE_AT;
            s1 /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        if small0 && small1 {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                break;
            }
        } else {
            quiet = 0;
        }
        if n >= MAX_TERMS {
            return Err(Error::SeriesNonConvergence(n));
        }
    }

    let mut pre = ((1.0 - x) / (1.0 + x)).powf(0.5 * mf);
    for k in 2..=m {
        pre /= k as f64;
    }
    Ok((s0 * pre, s1 * pre, log_scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn legendre_poly(n: usize, x: f64) -> f64 {
        let (mut p0, mut p1) = (1.0, x);
        if n == 0 {
            return p0;
        }
        for k in 1..n {
            let kf = k as f64;
            let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
            p0 = p1;
            p1 = p2;
        }
        p1
    }

    #[test]
    fn integral_matches_series() {
        for &x in &[-0.95, -0.81, -0.999, -0.9998] {
            for &m in &[0u32, 1, 2] {
                for &nu in &[
                    c(-0.5, 0.0),
                    c(-0.5, 3.0),
                    c(0.5, 12.0),
                    c(-0.499, 40.0),
                    c(1.3, -0.7),
                    c(-0.5, 150.0),
                ] {
                    let (a0, a1, sa) = series_pair_scaled(nu, m, x, true).unwrap();
                    let (b0, b1, sb) = integral_pair_scaled(nu, m, x).unwrap();
                    let r = (sb - sa).exp();
                    let (b0, b1) = (b0 * r, b1 * r);
                    let big = a0.norm().max(a1.norm());
                    assert!(
                        (a0 - b0).norm() <= 1e-11 * big,
                        "x={x} m={m} nu={nu}: {a0} {b0}"
                    );
                    assert!(
                        (a1 - b1).norm() <= 1e-11 * big,
                        "x={x} m={m} nu={nu}: {a1} {b1}"
                    );
                }
            }
        }
    }

    #[test]
    fn integral_stays_finite_near_minus_one() {
        let (p0, p1, s) =
            legendre_pair_scaled(c(-0.5, 900.0), 1, (179.5f64).to_radians().cos()).unwrap();
        assert!(p0.is_finite() && p1.is_finite() && s > 0.0);
        assert!(p0.norm() > 0.0);
    }

    #[test]
    fn low_degree_values() {
        assert!((legendre_p(c(1.0, 0.0), 0, 0.3).unwrap() - 0.3).norm() < 1e-15);
        assert!((legendre_p(c(2.0, 0.0), 0, 0.3).unwrap() - (-0.365)).norm() < 1e-15);
        let v = legendre_p(c(1.0, 0.0), 1, 0.5).unwrap();
        assert!((v - 0.75f64.sqrt() / 2.0).norm() < 1e-15);
    }

    #[test]
    fn integer_degree_matches_polynomials() {
        for n in 0..=5 {
            for &x in &[-0.9, -0.4, 0.0, 0.35, 0.8] {
                let p = legendre_p(c(n as f64, 0.0), 0, x).unwrap();
                let q = legendre_poly(n, x);
                assert!((p.re - q).abs() <= 1e-13 * q.abs().max(1.0), "n={n} x={x}");
                assert!(p.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degree_reflection() {
        for &nu in &[c(-0.5, 0.8), c(0.3, 1.7), c(2.2, -0.4)] {
            for &m in &[0, 1, 2] {
                let a = legendre_p(nu, m, 0.2).unwrap();
                let b = legendre_p(-nu - 1.0, m, 0.2).unwrap();
                assert!((a - b).norm() <= 1e-13 * a.norm(), "nu={nu} m={m}");
            }
        }
    }

    #[test]
    fn positive_order_of_integer_degree() {
        // P^1_1(x) = -sqrt(1-x^2), P^2_2(x) = 3(1-x^2)
        let x = 0.4;
        let p11 = legendre_p(c(1.0, 0.0), -1, x).unwrap();
        assert!((p11.re + (1.0 - x * x).sqrt()).abs() < 1e-14);
        let p22 = legendre_p(c(2.0, 0.0), -2, x).unwrap();
        assert!((p22.re - 3.0 * (1.0 - x * x)).abs() < 1e-13);
    }

    #[test]
    fn pair_agrees_with_single_evaluations() {
        let nu = c(-0.5, 3.2);
        for &m in &[-1, 0, 2] {
            let (a, b) = legendre_pair(nu, m, -0.6).unwrap();
            let a1 = legendre_p(nu, m, -0.6).unwrap();
            let b1 = legendre_p(nu + 1.0, m, -0.6).unwrap();
            assert!((a - a1).norm() <= 1e-14 * a1.norm());
            assert!((b - b1).norm() <= 1e-14 * b1.norm());
        }
    }

    #[test]
    fn three_term_recurrence_in_degree() {
        // (nu - mu + 1) P_{nu+1} = (2 nu + 1) x P_nu - (nu + mu) P_{nu-1}, mu = -m
        let nu = c(0.7, 1.3);
        let x = -0.3;
        for m in 0..3 {
            let mu = -(m as f64);
            let pm = legendre_p(nu - 1.0, m, x).unwrap();
            let p0 = legendre_p(nu, m, x).unwrap();
            let pp = legendre_p(nu + 1.0, m, x).unwrap();
            let lhs = (nu - mu + 1.0) * pp;
            let rhs = (2.0 * nu + 1.0) * x * p0 - (nu + mu) * pm;
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0), "m={m}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            legendre_p(c(1.0, 0.0), 0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            legendre_p(c(1.0, 0.0), 0, -1.5),
            Err(Error::Domain(_))
        ));
    }
}
