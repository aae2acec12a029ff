//! Argument-principle root counting and isolation for holomorphic functions
//! on axis-aligned rectangles of the complex plane.
//!
//! The winding number of `f` along the rectangle boundary is accumulated
//! from phase increments `arg(f(z_{k+1}) / f(z_k))` between adaptively
//! refined samples, so no derivative of `f` is needed.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[re_lo, re_hi] x [im_lo, im_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Rect {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        assert!(re_hi > re_lo && im_hi > im_lo, "degenerate rectangle");
        Self {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_lo + self.re_hi),
            0.5 * (self.im_lo + self.im_hi),
        )
    }

    pub fn width(&self) -> f64 {
        self.re_hi - self.re_lo
    }

    pub fn height(&self) -> f64 {
        self.im_hi - self.im_lo
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_lo - slack
            && z.re <= self.re_hi + slack
            && z.im >= self.im_lo - slack
            && z.im <= self.im_hi + slack
    }

    /// Splits across the longer side at `frac` of its length.
    pub fn split(&self, frac: f64) -> (Rect, Rect) {
        if self.height() >= self.width() {
            let mid = self.im_lo + frac * self.height();
            (
                Rect::new(self.re_lo, self.re_hi, self.im_lo, mid),
                Rect::new(self.re_lo, self.re_hi, mid, self.im_hi),
            )
        } else {
            let mid = self.re_lo + frac * self.width();
            (
                Rect::new(self.re_lo, mid, self.im_lo, self.im_hi),
                Rect::new(mid, self.re_hi, self.im_lo, self.im_hi),
            )
        }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_lo, self.im_lo),
            Complex64::new(self.re_hi, self.im_lo),
            Complex64::new(self.re_hi, self.im_hi),
            Complex64::new(self.re_lo, self.im_hi),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContourOptions {
    /// Largest accepted phase increment between neighbouring samples.
    pub max_phase_step: f64,
    /// Initial samples per unit length of the contour (at least 4 per edge).
    pub samples_per_unit: f64,
    /// Maximal bisection depth when refining a contour segment.
    pub max_refine_depth: u32,
    /// Allowed distance of the accumulated winding from an integer.
    pub integrality_tol: f64,
    /// Maximal subdivision depth during root isolation.
    pub max_isolation_depth: u32,
    /// Newton iterations used to polish an isolated root.
    pub newton_iters: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            max_phase_step: PI / 4.0,
            samples_per_unit: 8.0,
            max_refine_depth: 40,
            integrality_tol: 1e-8,
            max_isolation_depth: 48,
            newton_iters: 80,
        }
    }
}

fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

fn checked<F: FnMut(Complex64) -> Complex64>(f: &mut F, z: Complex64) -> Result<Complex64> {
    let v = f(z);
    if !v.re.is_finite() || !v.im.is_finite() || v.norm() == 0.0 {
        return Err(Error::ContourHitsZero);
    }
    Ok(v)
}

fn edge_phase<F: FnMut(Complex64) -> Complex64>(
    f: &mut F,
    za: Complex64,
    zb: Complex64,
    opts: &ContourOptions,
) -> Result<f64> {
    let len = (zb - za).norm();
    let n = ((len * opts.samples_per_unit).ceil() as usize).max(4);
    let mut total = 0.0;
    let mut z_prev = za;
    let mut f_prev = checked(f, za)?;
    for k in 1..=n {
        let z = za + (zb - za) * (k as f64 / n as f64);
        let fz = checked(f, z)?;
        total += refine(f, z_prev, f_prev, z, fz, 0, opts)?;
        z_prev = z;
        f_prev = fz;
    }
    Ok(total)
}

fn refine<F: FnMut(Complex64) -> Complex64>(
    f: &mut F,
    za: Complex64,
    fa: Complex64,
    zb: Complex64,
    fb: Complex64,
    depth: u32,
    opts: &ContourOptions,
) -> Result<f64> {
    let d = phase_step(fa, fb);
    if d.abs() <= opts.max_phase_step {
        return Ok(d);
    }
    if depth >= opts.max_refine_depth {
        return Err(Error::ContourHitsZero);
    }
    let zm = 0.5 * (za + zb);
    let fm = checked(f, zm)?;
    Ok(refine(f, za, fa, zm, fm, depth + 1, opts)? + refine(f, zm, fm, zb, fb, depth + 1, opts)?)
}

/// Number of zeros (with multiplicity) of a holomorphic `f` inside `rect`,
/// assuming no poles. Fails with [`Error::ContourHitsZero`] when the contour
/// runs through or too close to a zero to be resolved.
pub fn winding_number<F: FnMut(Complex64) -> Complex64>(
    f: &mut F,
    rect: &Rect,
    opts: &ContourOptions,
) -> Result<i64> {
    let c = rect.corners();
    let mut total = 0.0;
    for k in 0..4 {
        total += edge_phase(f, c[k], c[(k + 1) % 4], opts)?;
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > opts.integrality_tol {
        return Err(Error::Unresolved(format!("non-integral winding {w}")));
    }
    Ok(n as i64)
}

/// Newton iteration with a central-difference derivative. Returns the last
/// iterate and whether the step size dropped to rounding level (or, when
/// rounding noise in `f` stalls the iteration, below `1e-10` relative).
pub fn polish_newton<F: FnMut(Complex64) -> Complex64>(
    f: &mut F,
    z0: Complex64,
    max_iter: usize,
) -> (Complex64, bool) {
    let mut z = z0;
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let h = 1e-7 * z.norm().max(1.0);
        let fz = f(z);
        if fz.norm() == 0.0 {
            return (z, true);
        }
        let df = (f(z + h) - f(z - h)) / (2.0 * h);
        if df.norm() == 0.0 || !df.re.is_finite() {
            return (z, false);
        }
        let step = fz / df;
        if !step.re.is_finite() || !step.im.is_finite() {
            return (z, false);
        }
        z -= step;
        last = step.norm();
        if last <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            return (z, true);
        }
    }
    (z, last <= 1e-10 * z.norm().max(1.0))
}

/// Result of isolating the zeros inside a rectangle.
#[derive(Debug, Clone, Default)]
pub struct RootSearch {
    pub roots: Vec<Complex64>,
    /// Sub-rectangles whose zeros could not be isolated, with their counts.
    pub unresolved: Vec<(Rect, i64)>,
}

impl RootSearch {
    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Locates all zeros of `f` inside `rect` by recursive subdivision with
/// argument-principle counts, polishing each isolated zero with Newton.
pub fn isolate_roots<F: FnMut(Complex64) -> Complex64>(
    f: &mut F,
    rect: &Rect,
    opts: &ContourOptions,
) -> Result<RootSearch> {
    let count = winding_number(f, rect, opts)?;
    let mut out = RootSearch::default();
    isolate_inner(f, *rect, count, 0, opts, &mut out);
    Ok(out)
}

fn isolate_inner<F: FnMut(Complex64) -> Complex64>(
    f: &mut F,
    rect: Rect,
    count: i64,
    depth: u32,
    opts: &ContourOptions,
    out: &mut RootSearch,
) {
    if count <= 0 {
        return;
    }
    if count == 1 {
        let (z, ok) = polish_newton(f, rect.center(), opts.newton_iters);
        let slack = 1e-9 * rect.width().max(rect.height()).max(1.0);
        if ok && rect.contains(z, slack) {
            out.roots.push(z);
            return;
        }
    }
    if depth >= opts.max_isolation_depth {
        out.unresolved.push((rect, count));
        return;
    }
    // Split off-centre first; nudge the cut if it runs through a zero.
    for &frac in &[0.5, 0.4631, 0.5377, 0.3819, 0.6180] {
        let (a, b) = rect.split(frac);
        if let Ok(na) = winding_number(f, &a, opts) {
            let nb = count - na;
            if na < 0 || nb < 0 {
                continue;
            }
            isolate_inner(f, a, na, depth + 1, opts, out);
            isolate_inner(f, b, nb, depth + 1, opts, out);
            return;
        }
    }
    out.unresolved.push((rect, count));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn counts_polynomial_zeros() {
        let zeros = [c(0.5, 0.5), c(-0.3, 0.2), c(2.0, 2.0)];
        let mut f = |z: Complex64| zeros.iter().map(|r| z - r).product::<Complex64>();
        let opts = ContourOptions::default();
        let r = Rect::new(-1.0, 1.0, -1.0, 1.0);
        assert_eq!(winding_number(&mut f, &r, &opts).unwrap(), 2);
        let big = Rect::new(-3.0, 3.0, -3.0, 3.0);
        assert_eq!(winding_number(&mut f, &big, &opts).unwrap(), 3);
    }

    #[test]
    fn isolates_and_polishes() {
        let zeros = [c(0.5, 0.5), c(0.5001, 0.5), c(-0.3, 0.2)];
        let mut f = |z: Complex64| zeros.iter().map(|r| z - r).product::<Complex64>();
        let found = isolate_roots(
            &mut f,
            &Rect::new(-1.0, 1.0, -1.0, 1.0),
            &ContourOptions::default(),
        )
        .unwrap();
        assert!(found.is_resolved());
        assert_eq!(found.roots.len(), 3);
        for z in zeros {
            assert!(found.roots.iter().any(|r| (r - z).norm() < 1e-12));
        }
    }

    #[test]
    fn entire_function_zeros_of_sine() {
        let mut f = |z: Complex64| z.sin();
        let found = isolate_roots(
            &mut f,
            &Rect::new(0.5, 10.0, -1.0, 1.3),
            &ContourOptions::default(),
        )
        .unwrap();
        let mut re: Vec<f64> = found.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_eq!(re.len(), 3);
        for (k, x) in re.iter().enumerate() {
            assert!((x - PI * (k + 1) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn contour_through_zero_is_reported() {
        let mut f = |z: Complex64| z - c(1.0, 0.0);
        let r = Rect::new(1.0, 2.0, 0.0, 1.0);
        assert!(winding_number(&mut f, &r, &ContourOptions::default()).is_err());
    }
}
