//! Gauss-Legendre and Gauss-Lobatto-Legendre rules on `[0, 1]`.

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        0.5 * nf * (nf + 1.0) * x.powi(n as i32 + 1)
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

/// `n`-point Gauss-Legendre rule mapped to `[0, 1]`; exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    let x = x.into_iter().map(|t| 0.5 * (t + 1.0)).collect();
    let w = w.into_iter().map(|t| 0.5 * t).collect();
    (x, w)
}

/// `n >= 2` Gauss-Lobatto-Legendre points on `[0, 1]`, endpoints included.
pub fn gll_points(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let p = n - 1;
    let mut x = vec![0.0; n];
    x[0] = -1.0;
    x[p] = 1.0;
    // interior points are the zeros of P_p'
    for i in 1..p {
        let mut z = -(std::f64::consts::PI * i as f64 / p as f64).cos();
        for _ in 0..100 {
            let (pp, dp) = legendre_with_derivative(p, z);
            // d/dz P_p' from the Legendre equation
            let d2 = (2.0 * z * dp - (p * (p + 1)) as f64 * pp) / (1.0 - z * z);
            let dz = dp / d2;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
    }
    x.into_iter().map(|t| 0.5 * (t + 1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_monomials_exactly() {
        for n in 1..=10 {
            let (x, w) = gauss_legendre(n);
            for k in 0..2 * n {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                assert!((s - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn gll_points_known_values() {
        assert_eq!(gll_points(2), vec![0.0, 1.0]);
        let g3 = gll_points(3);
        assert!((g3[1] - 0.5).abs() < 1e-15);
        let g4 = gll_points(4);
        let r = 0.5 * (1.0 - 1.0 / 5f64.sqrt());
        assert!((g4[1] - r).abs() < 1e-15 && (g4[2] - (1.0 - r)).abs() < 1e-15);
        let g9 = gll_points(9);
        assert!(g9.windows(2).all(|w| w[1] > w[0]));
        for i in 0..9 {
            assert!((g9[i] + g9[8 - i] - 1.0).abs() < 1e-15);
        }
    }
}
