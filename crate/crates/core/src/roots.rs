//! Bracketing and bisection for real-valued scalar equations.

/// Geometric grid of `n >= 2` points from `lo > 0` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    let mut out = Vec::with_capacity(n);
    let mut x = lo;
    for _ in 0..n - 1 {
        out.push(x);
        x *= ratio;
    }
    out.push(hi);
    out
}

/// Uniform grid of `n >= 2` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Adjacent grid intervals on which `f` changes sign (or hits zero exactly
/// at the left endpoint).
pub fn sign_change_brackets<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let fx = f(x);
        if let Some((xa, fa)) = prev {
            if fa == 0.0 || (fa < 0.0) != (fx < 0.0) && fx != 0.0 {
                out.push((xa, x));
            }
        }
        prev = Some((x, fx));
    }
    out
}

/// Bisection on a sign-changing bracket until the bracket is exhausted in
/// floating point or narrower than `xtol`. Returns the endpoint with the
/// smaller residual.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) || (b - a).abs() <= xtol {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    if fa.abs() <= fb.abs() {
        a
    } else {
        b
    }
}
