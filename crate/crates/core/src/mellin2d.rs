//! Plane corners: the characteristic equation of the Cosserat operator on a
//! sector, the essential-spectrum interval it generates, and the associated
//! singular functions.
//!
//! For a sector of opening `omega` the Mellin determinant factors as
//!
//! ```text
//! M(lambda) = ((1 - 2 sigma) sin(lambda omega) / lambda)^2 - sin^2 omega
//!           = char_+(lambda) * char_-(lambda),
//! char_eps(lambda) = (1 - 2 sigma) sin(lambda omega) / lambda - eps sin omega.
//! ```
//!
//! On the critical line `lambda = i t` both factors are real-valued, and on
//! the positive real axis as well, so the roots that matter are found by
//! bracketing and bisection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::contour::{self, ContourOptions, Rect, RootSearch};
use crate::error::{Error, Result};
use crate::roots::{bisect, geometric_grid, sign_change_brackets};
use crate::types::{Branch, ComplexRoot, RootKind, SearchStatus, SpectrumInterval, TheoryTag};

/// Opening angle of a plane sector, `0 < omega <= 2 pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerSpec2D {
    omega: f64,
}

impl CornerSpec2D {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega <= 2.0 * PI) {
            return Err(Error::InvalidAngle(omega));
        }
        Ok(Self { omega })
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        // exact multiples of 90 degrees map onto the usual pi fractions
        Self::new(deg.to_radians().min(2.0 * PI))
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// `sin(lambda omega) / lambda`, continuous at `lambda = 0`.
fn sinc_scaled(lambda: Complex64, omega: f64) -> Complex64 {
    let x = lambda * omega;
    if x.norm() < 1e-6 {
        let x2 = x * x;
        omega * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        x.sin() / lambda
    }
}

/// Characteristic function `(1 - 2 sigma) sin(lambda omega)/lambda - eps sin omega`.
pub fn eval_char(lambda: Complex64, sigma: f64, corner: CornerSpec2D, branch: Branch) -> Complex64 {
    let w = corner.omega;
    (1.0 - 2.0 * sigma) * sinc_scaled(lambda, w) - branch.sign() * w.sin()
}

/// Mellin determinant of the corner in its Lame form
/// `lambda^-2 ((3 - 4 nu)^2 sin^2(lambda omega) - lambda^2 sin^2 omega)`,
/// `nu = (sigma + 1) / 2`, with its limit at `lambda = 0`.
pub fn mellin_det_2d(lambda: Complex64, sigma: f64, corner: CornerSpec2D) -> Complex64 {
    let w = corner.omega;
    let nu = 0.5 * (sigma + 1.0);
    let k = 3.0 - 4.0 * nu;
    let s = sinc_scaled(lambda, w);
    k * k * s * s - w.sin() * w.sin()
}

/// Essential-spectrum interval `[1/2 - |sin w|/(2w), 1/2 + |sin w|/(2w)]`
/// contributed by a corner.
pub fn essential_interval(corner: CornerSpec2D) -> SpectrumInterval {
    let w = corner.omega;
    let half = (w.sin() / (2.0 * w)).abs();
    SpectrumInterval {
        lo: 0.5 - half,
        hi: 0.5 + half,
    }
}

/// Essential spectrum of a polygon: merged corner intervals plus the point 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialSpectrum {
    /// Disjoint intervals sorted by their lower end.
    pub intervals: Vec<SpectrumInterval>,
    /// The isolated point `{1}` always belongs to the essential spectrum.
    pub includes_one: bool,
}

impl EssentialSpectrum {
    pub fn contains(&self, sigma: f64) -> bool {
        sigma == 1.0 || self.intervals.iter().any(|i| i.contains(sigma))
    }

    pub fn bottom(&self) -> f64 {
        self.intervals.first().map_or(1.0, |i| i.lo)
    }
}

pub fn essential_spectrum_polygon(corners: &[CornerSpec2D]) -> Result<EssentialSpectrum> {
    if corners.is_empty() {
        return Err(Error::InvalidArgument("empty corner list".into()));
    }
    let mut ivs: Vec<SpectrumInterval> = corners.iter().map(|c| essential_interval(*c)).collect();
    ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut merged: Vec<SpectrumInterval> = Vec::with_capacity(ivs.len());
    for iv in ivs {
        match merged.last_mut() {
            Some(last) if last.overlaps(&iv) => last.hi = last.hi.max(iv.hi),
            _ => merged.push(iv),
        }
    }
    Ok(EssentialSpectrum {
        intervals: merged,
        includes_one: true,
    })
}

/// Upper bound `min_c sqrt(1/2 - |sin w_c| / (2 w_c))` for the inf-sup constant.
pub fn lbb_upper_bound(corners: &[CornerSpec2D]) -> Result<f64> {
    let spec = essential_spectrum_polygon(corners)?;
    Ok(spec.bottom().sqrt())
}

/// Purely imaginary roots `lambda = +-i t` of the characteristic equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryRoots {
    /// Roots of both branches; each `i t` comes with its conjugate `-i t`.
    pub roots: Vec<ComplexRoot>,
    pub status: SearchStatus,
    pub tag: TheoryTag,
    /// Set when `lambda = 0` itself solves a branch (interval endpoints).
    pub zero_root: bool,
}

impl ImaginaryRoots {
    /// Roots with `Im lambda > 0`.
    pub fn upper(&self) -> impl Iterator<Item = &ComplexRoot> {
        self.roots.iter().filter(|r| r.lambda.im > 0.0)
    }
}

const T_MIN: f64 = 1e-10;
const GRID_POINTS: usize = 400;

/// Restriction of a branch to the imaginary axis:
/// `(1 - 2 sigma) sinh(t w)/t - eps sin w`.
fn char_on_imaginary_axis(t: f64, sigma: f64, omega: f64, branch: Branch) -> f64 {
    let x = t * omega;
    let sinh_over_t = if x.abs() < 1e-6 {
        omega * (1.0 + x * x / 6.0)
    } else {
        x.sinh() / t
    };
    (1.0 - 2.0 * sigma) * sinh_over_t - branch.sign() * omega.sin()
}

/// Whether a branch has a root `i t`, `t > 0`: the map `t -> sinh(tw)/(tw)`
/// is a bijection of `(0, inf)` onto `(1, inf)`.
fn predicts_imaginary_root(sigma: f64, omega: f64, branch: Branch) -> bool {
    let k = 1.0 - 2.0 * sigma;
    if k == 0.0 {
        return false;
    }
    branch.sign() * omega.sin() / (k * omega) > 1.0
}

pub fn imaginary_roots(sigma: f64, corner: CornerSpec2D, t_max: f64) -> Result<ImaginaryRoots> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::InvalidSigma(sigma));
    }
    if !(t_max > T_MIN) {
        return Err(Error::InvalidArgument(format!("t_max = {t_max}")));
    }
    let w = corner.omega;
    let grid = geometric_grid(T_MIN, t_max, GRID_POINTS);
    let mut roots = Vec::new();
    let mut status = SearchStatus::Resolved;
    let mut zero_root = false;
    for branch in Branch::BOTH {
        let f = |t: f64| char_on_imaginary_axis(t, sigma, w, branch);
        if eval_char(Complex64::new(0.0, 0.0), sigma, corner, branch).norm() <= 1e-14 {
            zero_root = true;
        }
        let expected = predicts_imaginary_root(sigma, w, branch);
        let brackets = sign_change_brackets(f, &grid);
        if expected && brackets.is_empty() {
            status = SearchStatus::Unresolved;
        }
        for (a, b) in brackets {
            let t = bisect(f, a, b, 0.0);
            roots.push(ComplexRoot::planar(Complex64::new(0.0, t), branch));
            roots.push(ComplexRoot::planar(Complex64::new(0.0, -t), branch));
        }
    }
    Ok(ImaginaryRoots {
        roots,
        status,
        tag: TheoryTag::for_sigma(sigma),
        zero_root,
    })
}

/// Smallest positive real characteristic root: the regularity exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityExponent {
    pub s: f64,
    pub branch: Branch,
    pub tag: TheoryTag,
}

/// Default right end of the real-axis scan.
pub const LAMBDA_MAX: f64 = 10.0;

pub fn min_positive_real_root(sigma: f64, corner: CornerSpec2D) -> Result<RegularityExponent> {
    min_positive_real_root_upto(sigma, corner, LAMBDA_MAX)
}

pub fn min_positive_real_root_upto(
    sigma: f64,
    corner: CornerSpec2D,
    lambda_max: f64,
) -> Result<RegularityExponent> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::InvalidSigma(sigma));
    }
    let iv = essential_interval(corner);
    if iv.contains(sigma) {
        return Err(Error::SigmaInEssentialSpectrum {
            sigma,
            lo: iv.lo,
            hi: iv.hi,
        });
    }
    let grid = real_axis_grid(corner.omega, lambda_max);
    let mut best: Option<(f64, Branch)> = None;
    for branch in Branch::BOTH {
        let f = |x: f64| eval_char(Complex64::new(x, 0.0), sigma, corner, branch).re;
        if let Some(&(a, b)) = sign_change_brackets(f, &grid).first() {
            let r = bisect(f, a, b, 0.0);
            if best.is_none_or(|(s, _)| r < s) {
                best = Some((r, branch));
            }
        }
    }
    let (s, branch) =
        best.ok_or_else(|| Error::Unresolved(format!("no positive real root below {lambda_max}")))?;
    Ok(RegularityExponent {
        s,
        branch,
        tag: TheoryTag::for_sigma(sigma),
    })
}

/// Uniform grid on `(0, lambda_max]` fine enough for `sin(lambda w)`, with a
/// geometric lead-in that resolves roots close to 0.
fn real_axis_grid(omega: f64, lambda_max: f64) -> Vec<f64> {
    let step = (PI / omega / 64.0).min(0.01);
    let n = (lambda_max / step).ceil() as usize;
    let mut grid = geometric_grid(1e-9, step, 80);
    grid.pop();
    grid.extend((1..=n).map(|k| k as f64 * step));
    grid
}

/// Zeros of one branch inside a rectangle of the lambda-plane (diagnostics).
pub fn complex_roots(
    sigma: f64,
    corner: CornerSpec2D,
    branch: Branch,
    rect: &Rect,
    opts: &ContourOptions,
) -> Result<(Vec<ComplexRoot>, RootSearch)> {
    let mut f = |z: Complex64| eval_char(z, sigma, corner, branch);
    let search = contour::isolate_roots(&mut f, rect, opts)?;
    let roots = search
        .roots
        .iter()
        .map(|z| ComplexRoot::planar(*z, branch))
        .collect();
    Ok((roots, search))
}

/// Homogeneous solution `w_lambda` of `sigma Delta w - grad div w = 0` on the
/// sector `|theta| < omega/2` with zero Dirichlet trace on both rays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularFunction {
    pub lambda: Complex64,
    pub sigma: f64,
    pub omega: f64,
    pub epsilon: f64,
    /// `sin((lambda - 1) omega) / sin(lambda omega)`
    pub a: Complex64,
    /// `sin(omega) / sin(lambda omega)`
    pub b: Complex64,
}

pub fn singular_function(
    root: &ComplexRoot,
    sigma: f64,
    corner: CornerSpec2D,
) -> Result<SingularFunction> {
    let lambda = root.lambda;
    let branch = root
        .branch
        .ok_or_else(|| Error::InvalidArgument("planar root without branch".into()))?;
    let w = corner.omega;
    if lambda.norm() < 1e-12 || (lambda - 1.0).norm() < 1e-12 {
        return Err(Error::NonGenericLambda(format!("{lambda}")));
    }
    let s = (lambda * w).sin();
    if s.norm() < 1e-12 {
        return Err(Error::NonGenericLambda(format!("{lambda}")));
    }
    let residual = eval_char(lambda, sigma, corner, branch).norm();
    let scale = ((1.0 - 2.0 * sigma) * sinc_scaled(lambda, w)).norm() + w.sin().abs();
    if residual > 1e-8 * scale.max(1e-300) {
        return Err(Error::InvalidArgument(format!(
            "lambda = {lambda} does not solve the characteristic equation (residual {residual:e})"
        )));
    }
    Ok(SingularFunction {
        lambda,
        sigma,
        omega: w,
        epsilon: branch.sign(),
        a: ((lambda - 1.0) * w).sin() / s,
        b: Complex64::new(w.sin(), 0.0) / s,
    })
}

impl SingularFunction {
    /// `w_lambda(r, theta)` as a complex 2-vector in Cartesian components.
    pub fn eval_polar(&self, r: f64, theta: f64) -> [Complex64; 2] {
        let i = Complex64::i();
        let lam = self.lambda;
        let log_z = Complex64::new(r.ln(), theta);
        let log_zb = log_z.conj();
        let z_l = (lam * log_z).exp();
        let zb_l = (lam * log_zb).exp();
        let z_lm1_zb = ((lam - 1.0) * log_z + log_zb).exp();
        let zb_lm1_z = ((lam - 1.0) * log_zb + log_z).exp();
        let kappa = (2.0 * self.sigma - 1.0) / lam;
        let eps = self.epsilon;

        // plain (1, i) f and tilde (1, -i) f families
        let plain = |f: Complex64| [f, i * f];
        let tilde = |f: Complex64| [f, -i * f];
        let add =
            |u: [Complex64; 2], v: [Complex64; 2], c: Complex64| [u[0] + c * v[0], u[1] + c * v[1]];

        let w1 = plain(z_l);
        let w2 = tilde(zb_l);
        let w3 = add(plain(z_lm1_zb), tilde(z_l), kappa);
        let w4 = add(tilde(zb_lm1_z), plain(zb_l), kappa);

        let mut out = add(w3, w4, Complex64::new(eps, 0.0));
        out = add(out, w1, -self.a);
        add(out, w2, -self.a * eps)
    }

    pub fn eval_cartesian(&self, x1: f64, x2: f64) -> [Complex64; 2] {
        self.eval_polar(x1.hypot(x2), x2.atan2(x1))
    }
}

/// One row of the 2D corner scan: `omega_rad,sigma,branch,kind,root_re,root_im,status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub omega_rad: f64,
    pub sigma: f64,
    pub branch: String,
    pub kind: String,
    pub root_re: Option<f64>,
    pub root_im: Option<f64>,
    pub status: String,
}

pub const SCAN_HEADER: [&str; 7] = [
    "omega_rad",
    "sigma",
    "branch",
    "kind",
    "root_re",
    "root_im",
    "status",
];

/// Scan rows for one `(omega, sigma)` point: per branch the imaginary root
/// `i t` (`t > 0`) and the smallest positive real root, or a `none` row.
pub fn scan_point(omega: f64, sigma: f64, t_max: f64) -> Result<Vec<ScanRow>> {
    let corner = CornerSpec2D::new(omega)?;
    let imag = imaginary_roots(sigma, corner, t_max)?;
    let status = match (imag.status, imag.tag) {
        (SearchStatus::Unresolved, _) => "unresolved",
        (_, TheoryTag::BoundaryOfTheory) => "boundary-of-theory",
        _ => "resolved",
    };
    let mut rows = Vec::new();
    for branch in Branch::BOTH {
        let mut any = false;
        for r in imag.upper().filter(|r| r.branch == Some(branch)) {
            any = true;
            rows.push(ScanRow {
                omega_rad: omega,
                sigma,
                branch: branch.to_string(),
                kind: RootKind::PurelyImaginary.as_str().into(),
                root_re: Some(0.0),
                root_im: Some(r.lambda.im),
                status: status.into(),
            });
        }
        if let Some(s) = smallest_real_root_of_branch(sigma, corner, branch) {
            any = true;
            rows.push(ScanRow {
                omega_rad: omega,
                sigma,
                branch: branch.to_string(),
                kind: RootKind::PositiveReal.as_str().into(),
                root_re: Some(s),
                root_im: Some(0.0),
                status: status.into(),
            });
        }
        if !any {
            rows.push(ScanRow {
                omega_rad: omega,
                sigma,
                branch: branch.to_string(),
                kind: "none".into(),
                root_re: None,
                root_im: None,
                status: status.into(),
            });
        }
    }
    Ok(rows)
}

fn smallest_real_root_of_branch(sigma: f64, corner: CornerSpec2D, branch: Branch) -> Option<f64> {
    if essential_interval(corner).contains(sigma) {
        return None;
    }
    let grid = real_axis_grid(corner.omega, LAMBDA_MAX);
    let f = |x: f64| eval_char(Complex64::new(x, 0.0), sigma, corner, branch).re;
    sign_change_brackets(f, &grid)
        .first()
        .map(|&(a, b)| bisect(f, a, b, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn corner(w: f64) -> CornerSpec2D {
        CornerSpec2D::new(w).unwrap()
    }

    /// Independent oracle: bisection on `0.4 sinh(t pi/2) = t` over `(0, 2)`.
    fn oracle_t_sigma03() -> f64 {
        let g = |t: f64| 0.4 * (t * FRAC_PI_2).sinh() - t;
        let (mut a, mut b) = (0.5, 2.0);
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if g(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn corner_validation() {
        assert!(CornerSpec2D::new(0.0).is_err());
        assert!(CornerSpec2D::new(-1.0).is_err());
        assert!(CornerSpec2D::new(2.0 * PI + 1e-9).is_err());
        assert!(CornerSpec2D::new(2.0 * PI).is_ok());
    }

    #[test]
    fn char_removable_singularity() {
        let v = eval_char(c(0.0, 0.0), 0.0, corner(FRAC_PI_2), Branch::Plus);
        assert!((v.re - (FRAC_PI_2 - 1.0)).abs() < 1e-15);
        let near = eval_char(c(1e-9, 0.0), 0.0, corner(FRAC_PI_2), Branch::Plus);
        assert!((near - v).norm() < 1e-14);
    }

    #[test]
    fn char_at_half() {
        let v = eval_char(c(0.7, 2.0), 0.5, corner(PI / 3.0), Branch::Plus);
        assert!((v.re + (PI / 3.0).sin()).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn char_vanishes_at_oracle_root() {
        let t = oracle_t_sigma03();
        assert!((t - 1.1118).abs() < 5e-4);
        let v = eval_char(c(0.0, 1.1118), 0.3, corner(FRAC_PI_2), Branch::Plus);
        assert!(v.norm() < 1e-3);
        let v = eval_char(c(0.0, t), 0.3, corner(FRAC_PI_2), Branch::Plus);
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn char_conjugate_symmetry() {
        let z = c(0.37, -1.2);
        let w = corner(2.3);
        for b in Branch::BOTH {
            let lhs = eval_char(z.conj(), 0.21, w, b);
            let rhs = eval_char(z, 0.21, w, b).conj();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn det_vanishes_for_half_plane() {
        let d = mellin_det_2d(c(1.0, 0.0), 0.3, corner(PI));
        assert!(d.norm() < 1e-14);
    }

    #[test]
    fn det_factorizes() {
        let z = c(0.7, 0.2);
        let w = corner(2.0);
        let d = mellin_det_2d(z, 0.25, w);
        let f = eval_char(z, 0.25, w, Branch::Plus) * eval_char(z, 0.25, w, Branch::Minus);
        assert!((d - f).norm() <= 1e-12 * d.norm());
        let t = oracle_t_sigma03();
        assert!(mellin_det_2d(c(0.0, t), 0.3, corner(FRAC_PI_2)).norm() < 1e-12);
    }

    #[test]
    fn square_interval_and_bound() {
        let iv = essential_interval(corner(FRAC_PI_2));
        assert!((iv.lo - (0.5 - 1.0 / PI)).abs() < 1e-12);
        assert!((iv.hi - (0.5 + 1.0 / PI)).abs() < 1e-12);
        assert!((iv.lo - 0.1816901138).abs() < 1e-10);
        let b = lbb_upper_bound(&[corner(FRAC_PI_2); 4]).unwrap();
        assert!((b - 0.4262512).abs() < 1e-7);
    }

    #[test]
    fn degenerate_intervals() {
        for w in [PI, 2.0 * PI] {
            let iv = essential_interval(corner(w));
            assert!((iv.lo - 0.5).abs() < 1e-15 && (iv.hi - 0.5).abs() < 1e-15);
        }
        let b = lbb_upper_bound(&[corner(PI)]).unwrap();
        assert!((b - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn reentrant_interval_is_ordered() {
        let iv = essential_interval(corner(1.5 * PI));
        assert!(iv.lo < 0.5 && iv.hi > 0.5);
        assert!((iv.lo + iv.hi - 1.0).abs() < 1e-15);
        assert!((iv.width() - 1.0 / (1.5 * PI)).abs() < 1e-15);
    }

    #[test]
    fn polygon_merging() {
        let rect = essential_spectrum_polygon(&[corner(FRAC_PI_2); 4]).unwrap();
        assert_eq!(rect.intervals.len(), 1);
        assert!(rect.includes_one && rect.contains(1.0));
        let with_flat = essential_spectrum_polygon(&[corner(FRAC_PI_2), corner(PI)]).unwrap();
        assert_eq!(with_flat.intervals, rect.intervals);

        // pi/3 and 3pi/2: both contain 1/2, so they always overlap
        let a = essential_interval(corner(PI / 3.0));
        let b = essential_interval(corner(1.5 * PI));
        let mixed = essential_spectrum_polygon(&[corner(PI / 3.0), corner(1.5 * PI)]).unwrap();
        assert_eq!(mixed.intervals.len(), 1);
        assert!((mixed.intervals[0].lo - a.lo.min(b.lo)).abs() < 1e-15);
        assert!((mixed.intervals[0].hi - a.hi.max(b.hi)).abs() < 1e-15);
        assert!(essential_spectrum_polygon(&[]).is_err());
    }

    #[test]
    fn lbb_bound_takes_minimum() {
        let a = (0.5 - 1.0 / PI).sqrt();
        let w = 2.0 * PI / 3.0;
        let b = (0.5 - w.sin() / (2.0 * w)).sqrt();
        let v = lbb_upper_bound(&[corner(FRAC_PI_2), corner(w)]).unwrap();
        assert!((v - a.min(b)).abs() < 1e-15);
    }

    #[test]
    fn imaginary_root_examples() {
        let none = imaginary_roots(0.0, corner(FRAC_PI_2), 20.0).unwrap();
        assert!(none.roots.is_empty());
        assert_eq!(none.tag, TheoryTag::BoundaryOfTheory);

        let r = imaginary_roots(0.3, corner(FRAC_PI_2), 20.0).unwrap();
        assert_eq!(r.status, SearchStatus::Resolved);
        assert_eq!(r.roots.len(), 2);
        let t = oracle_t_sigma03();
        assert!(r
            .roots
            .iter()
            .any(|z| (z.lambda - c(0.0, t)).norm() < 1e-12));
        assert!(r
            .roots
            .iter()
            .any(|z| (z.lambda - c(0.0, -t)).norm() < 1e-12));
        for z in &r.roots {
            assert_eq!(z.kind, RootKind::PurelyImaginary);
            let v = eval_char(z.lambda, 0.3, corner(FRAC_PI_2), z.branch.unwrap());
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn imaginary_root_at_interval_endpoint() {
        let w: f64 = 1.1;
        let lo = 0.5 - w.sin() / (2.0 * w);
        let r = imaginary_roots(lo, corner(w), 20.0).unwrap();
        assert!(r.zero_root);
        assert!(r.upper().all(|z| z.lambda.im < 1e-6));
    }

    #[test]
    fn too_small_t_max_is_unresolved() {
        // sigma close to the endpoint pushes t towards 0 ... and sigma near 1/2
        // pushes it far out
        let r = imaginary_roots(0.4999, corner(FRAC_PI_2), 1.0).unwrap();
        assert_eq!(r.status, SearchStatus::Unresolved);
        assert!(r.roots.is_empty());
    }

    #[test]
    fn branch_swap_symmetry() {
        let w = corner(1.3);
        let a = imaginary_roots(0.35, w, 30.0).unwrap();
        let b = imaginary_roots(0.65, w, 30.0).unwrap();
        for r in &a.roots {
            assert!(b
                .roots
                .iter()
                .any(|q| q.branch == Some(r.branch.unwrap().flip())
                    && (q.lambda - r.lambda).norm() < 1e-12));
        }
        assert_eq!(a.roots.len(), b.roots.len());
    }

    #[test]
    fn regularity_table_values() {
        let s1 = min_positive_real_root(0.031375609, corner(FRAC_PI_2)).unwrap();
        assert!((s1.s - 0.93189).abs() < 1e-4, "{}", s1.s);
        let s2 = min_positive_real_root(0.109538571, corner(FRAC_PI_2)).unwrap();
        assert!((s2.s - 0.69036).abs() < 1e-4, "{}", s2.s);
        let s0 = min_positive_real_root(0.0, corner(FRAC_PI_2)).unwrap();
        assert!((s0.s - 1.0).abs() < 1e-12);
        assert_eq!(s0.branch, Branch::Plus);
    }

    #[test]
    fn regularity_undefined_in_essential_spectrum() {
        let e = min_positive_real_root(0.3, corner(FRAC_PI_2)).unwrap_err();
        assert!(matches!(e, Error::SigmaInEssentialSpectrum { .. }));
    }

    #[test]
    fn regularity_decreases_towards_interval() {
        let lo = 0.5 - 1.0 / PI;
        let sig: Vec<f64> = (0..40).map(|k| lo * k as f64 / 40.0).collect();
        let s: Vec<f64> = sig
            .iter()
            .map(|&x| min_positive_real_root(x, corner(FRAC_PI_2)).unwrap().s)
            .collect();
        assert!(s.windows(2).all(|w| w[1] < w[0]));
        let near = min_positive_real_root(lo - 1e-8, corner(FRAC_PI_2))
            .unwrap()
            .s;
        assert!(near < 1e-2);
    }

    #[test]
    fn complex_roots_contain_real_root() {
        let w = corner(FRAC_PI_2);
        let (roots, search) = complex_roots(
            0.031375609,
            w,
            Branch::Plus,
            &Rect::new(0.05, 4.0, -3.0, 3.1),
            &ContourOptions::default(),
        )
        .unwrap();
        assert!(search.is_resolved());
        assert!(roots
            .iter()
            .any(|r| r.kind == RootKind::PositiveReal && (r.lambda.re - 0.93189).abs() < 1e-4));
        // closed under conjugation
        for r in &roots {
            assert!(roots
                .iter()
                .any(|q| (q.lambda - r.lambda.conj()).norm() < 1e-9));
        }
    }

    fn critical_line_function(sigma: f64, w: f64) -> SingularFunction {
        let cr = corner(w);
        let r = imaginary_roots(sigma, cr, 30.0).unwrap();
        let root = *r.upper().next().unwrap();
        singular_function(&root, sigma, cr).unwrap()
    }

    #[test]
    fn singular_function_dirichlet_and_homogeneity() {
        for (sigma, w) in [(0.3, FRAC_PI_2), (0.6, 1.0), (0.45, 1.5 * PI)] {
            let f = critical_line_function(sigma, w);
            for r in [0.3, 1.0, 2.5] {
                for th in [-0.5 * w, 0.5 * w] {
                    let v = f.eval_polar(r, th);
                    let scale = f.eval_polar(r, 0.1 * w)[0].norm().max(1.0);
                    assert!(v[0].norm() < 1e-10 * scale && v[1].norm() < 1e-10 * scale);
                }
            }
            let (r, th) = (0.7, 0.13 * w);
            let a = f.eval_polar(2.0 * r, th);
            let b = f.eval_polar(r, th);
            let fac = Complex64::new(2.0, 0.0).powc(f.lambda);
            for k in 0..2 {
                assert!((a[k] - fac * b[k]).norm() < 1e-12 * a[k].norm().max(1e-300));
            }
        }
    }

    #[test]
    fn singular_function_rejects_excluded_lambdas() {
        let w = corner(FRAC_PI_2);
        let zero = ComplexRoot::planar(c(0.0, 0.0), Branch::Plus);
        assert!(singular_function(&zero, 0.3, w).is_err());
        let one = ComplexRoot::planar(c(1.0, 0.0), Branch::Plus);
        assert!(singular_function(&one, 0.0, w).is_err());
        // lambda = 2 puts lambda*omega at pi
        let two = ComplexRoot::planar(c(2.0, 0.0), Branch::Plus);
        assert!(matches!(
            singular_function(&two, 0.3, w),
            Err(Error::NonGenericLambda(_))
        ));
    }
}
