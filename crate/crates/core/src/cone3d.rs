//! Axisymmetric cones: the 3x3 Mellin matrix of the Dirichlet trace of
//! Boussinesq-type solutions, its determinant, and the `(omega, sigma)`
//! regions where the determinant has zeros on the critical line
//! `Re lambda = -1/2`.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contour::{self, ContourOptions, Rect};
use crate::error::{Error, Result};
use crate::special::{legendre_pair, legendre_pair_scaled};
use crate::types::{ComplexRoot, SearchStatus, TheoryTag};

/// Critical abscissa of the 3D Mellin symbol.
pub const CRITICAL_RE: f64 = -0.5;
/// Default half-width of the box around the critical line.
pub const DEFAULT_DELTA: f64 = 1e-3;
/// Largest accepted Hadamard-normalized determinant at a reported root.
pub const ROOT_TOL: f64 = 1e-9;

/// Cone `{theta < omega}` in spherical coordinates, `0 < omega < pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    omega: f64,
}

impl ConeSpec {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega < PI) {
            return Err(Error::InvalidCone(omega));
        }
        Ok(Self { omega })
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::new(deg.to_radians())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

pub type ConeMatrix = Matrix3<Complex64>;

/// `(P^{-m}_lambda(cos w), P^{-m}_{lambda+1}(cos w))`.
pub fn legendre_column(
    lambda: Complex64,
    m: i32,
    cone: ConeSpec,
) -> Result<(Complex64, Complex64)> {
    legendre_pair(lambda, m, cone.omega.cos())
}

/// Assembles the matrix from precomputed Legendre values.
/// `misprint` drops the `-m` in the `(3,2)` entry.
fn assemble(
    sigma: f64,
    lambda: Complex64,
    m: i32,
    cone: ConeSpec,
    p0: Complex64,
    p1: Complex64,
    misprint: bool,
) -> ConeMatrix {
    let c = cone.omega.cos();
    let s2 = cone.omega.sin().powi(2);
    let mf = m as f64;
    let l1 = lambda + 1.0;
    let m32 = if misprint {
        l1 * c * p0 - l1 * p1
    } else {
        (l1 - mf) * c * p0 - l1 * p1
    };
    Matrix3::new(
        l1 * p1,
        mf * p1,
        (lambda + 2.0 * sigma - 1.0) * c * p0,
        l1 * c * p1 - (l1 - mf) * p0,
        mf * c * p1,
        (l1 + mf) * c * p1 + (1.0 - 2.0 * sigma) * s2 * p0 - l1 * c * c * p0,
        -mf * p1,
        m32,
        -mf * c * p0,
    )
}

pub fn mellin_matrix_3d(
    sigma: f64,
    lambda: Complex64,
    m: i32,
    cone: ConeSpec,
) -> Result<ConeMatrix> {
    let (p0, p1) = legendre_column(lambda, m, cone)?;
    Ok(assemble(sigma, lambda, m, cone, p0, p1, false))
}

/// Variant with the `-m` of the `(3,2)` entry left out.
pub fn mellin_matrix_3d_misprint(
    sigma: f64,
    lambda: Complex64,
    m: i32,
    cone: ConeSpec,
) -> Result<ConeMatrix> {
    let (p0, p1) = legendre_column(lambda, m, cone)?;
    Ok(assemble(sigma, lambda, m, cone, p0, p1, true))
}

pub fn mellin_det_3d(sigma: f64, lambda: Complex64, m: i32, cone: ConeSpec) -> Result<Complex64> {
    Ok(mellin_matrix_3d(sigma, lambda, m, cone)?.determinant())
}

/// Determinant divided by the product of the row norms, so that
/// `|det| <= 1` by Hadamard's inequality. The argument is unchanged.
pub fn normalized_det(mat: &ConeMatrix) -> Complex64 {
    let mut scaled = *mat;
    for i in 0..3 {
        let big = (0..3).map(|j| mat[(i, j)].norm()).fold(0.0, f64::max);
        if big == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut row = scaled.row_mut(i);
        row.unscale_mut(big);
        let r = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        row.unscale_mut(r);
    }
    scaled.determinant()
}

/// Legendre values along a contour, shared between parameter values that
/// only change `sigma`. Values are stored up to a common positive factor per
/// point, so matrices built from the cache have the zeros and the normalized
/// determinant of the true matrix but not its scale.
#[derive(Debug)]
pub struct LegendreCache {
    m: i32,
    cone: ConeSpec,
    values: HashMap<(u64, u64), (Complex64, Complex64)>,
}

impl LegendreCache {
    pub fn new(m: i32, cone: ConeSpec) -> Self {
        Self {
            m,
            cone,
            values: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&mut self, lambda: Complex64) -> Result<(Complex64, Complex64)> {
        let key = (lambda.re.to_bits(), lambda.im.to_bits());
        if let Some(v) = self.values.get(&key) {
            return Ok(*v);
        }
        let (p0, p1, _) = legendre_pair_scaled(lambda, self.m, self.cone.omega.cos())?;
        let v = (p0, p1);
        self.values.insert(key, v);
        Ok(v)
    }

    pub fn matrix(&mut self, sigma: f64, lambda: Complex64) -> Result<ConeMatrix> {
        let (p0, p1) = self.get(lambda)?;
        Ok(assemble(sigma, lambda, self.m, self.cone, p0, p1, false))
    }
}

/// Settings of the critical-line search.
#[derive(Debug, Clone, Copy)]
pub struct CriticalLineOptions {
    pub t_max: f64,
    pub delta: f64,
    pub contour: ContourOptions,
    /// Perturbed boxes tried when a contour runs through a zero.
    pub retries: usize,
    /// Raise `t_max` per column to [`scaled_t_max`] in grid scans.
    pub scale_t_max: bool,
}

/// Search height that keeps up with roots drifting to large `t` near degenerate cones.
///
/// Grows like `1/omega` and `1/(pi - omega)`; never below `floor`.
pub fn scaled_t_max(omega: f64, floor: f64) -> f64 {
    const K: f64 = 15.0;
    floor.max(K / omega).max(K / (PI - omega))
}

impl Default for CriticalLineOptions {
    fn default() -> Self {
        Self {
            t_max: 20.0,
            delta: DEFAULT_DELTA,
            contour: ContourOptions::default(),
            retries: 4,
            scale_t_max: false,
        }
    }
}

/// Outcome of a critical-line search for one `(sigma, omega, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalLineResult {
    /// Roots `-1/2 + i t` with `t >= 0` (conjugates implied).
    pub roots: Vec<ComplexRoot>,
    /// Zeros counted inside the search box.
    pub count: i64,
    /// Smallest normalized `|det|` seen on the search contour.
    pub min_abs_det: f64,
    pub status: SearchStatus,
    pub tag: TheoryTag,
}

impl CriticalLineResult {
    pub fn in_region(&self) -> bool {
        self.count > 0
    }

    pub fn first_root_t(&self) -> Option<f64> {
        self.roots.iter().map(|r| r.lambda.im).reduce(f64::min)
    }
}

pub fn critical_line_roots(
    sigma: f64,
    cone: ConeSpec,
    m: i32,
    opts: &CriticalLineOptions,
) -> Result<CriticalLineResult> {
    let mut cache = LegendreCache::new(m, cone);
    critical_line_roots_cached(sigma, &mut cache, opts)
}

/// Same as [`critical_line_roots`] with Legendre values taken from `cache`.
pub fn critical_line_roots_cached(
    sigma: f64,
    cache: &mut LegendreCache,
    opts: &CriticalLineOptions,
) -> Result<CriticalLineResult> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::InvalidSigma(sigma));
    }
    if !(opts.t_max > 0.0 && opts.delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_max = {}, delta = {}",
            opts.t_max, opts.delta
        )));
    }
    let m = cache.m;
    let tag = TheoryTag::for_sigma(sigma);
    if sigma == 0.5 {
        // the symbol is not elliptic here
        return Ok(CriticalLineResult {
            roots: Vec::new(),
            count: 0,
            min_abs_det: f64::NAN,
            status: SearchStatus::Unresolved,
            tag,
        });
    }

    let mut failure: Option<Error> = None;
    let mut min_abs = f64::INFINITY;
    // Newton iterates leaving this window are cut off; far from the line the
    // series gets expensive and the iterate is useless anyway.
    let window = Rect::new(
        CRITICAL_RE - 0.25,
        CRITICAL_RE + 0.25,
        -1.0,
        opts.t_max + 1.0,
    );
    let mut f = |z: Complex64| -> Complex64 {
        if !window.contains(z, 0.0) {
            return Complex64::new(f64::NAN, f64::NAN);
        }
        match cache.matrix(sigma, z) {
            Ok(mat) => {
                // same zeros and argument as the determinant, without overflow
                let n = normalized_det(&mat);
                min_abs = min_abs.min(n.norm());
                n
            }
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };

    let mut rect = Rect::new(
        CRITICAL_RE - opts.delta,
        CRITICAL_RE + opts.delta,
        0.0,
        opts.t_max,
    );
    let mut search = None;
    for attempt in 0..=opts.retries {
        match contour::isolate_roots(&mut f, &rect, &opts.contour) {
            Ok(s) => {
                search = Some(s);
                break;
            }
            Err(Error::ContourHitsZero) | Err(Error::Unresolved(_)) => {
                let k = (attempt + 1) as f64;
                rect = Rect::new(
                    CRITICAL_RE - opts.delta * (1.0 + 0.173 * k),
                    CRITICAL_RE + opts.delta * (1.0 + 0.131 * k),
                    -1e-4 * k,
                    opts.t_max * (1.0 + 1e-3 * k),
                );
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let Some(search) = search else {
        return Ok(CriticalLineResult {
            roots: Vec::new(),
            count: 0,
            min_abs_det: min_abs,
            status: SearchStatus::Unresolved,
            tag,
        });
    };

    let mut status = if search.is_resolved() {
        SearchStatus::Resolved
    } else {
        SearchStatus::Unresolved
    };
    let count = search.roots.len() as i64 + search.unresolved.iter().map(|u| u.1).sum::<i64>();
    let mut roots = Vec::new();
    for z in search.roots {
        let n = normalized_det(&cache.matrix(sigma, z)?).norm();
        if n >= ROOT_TOL {
            status = SearchStatus::Unresolved;
            continue;
        }
        // the lower edge may sit slightly below the axis after a retry
        let z = if z.im < 0.0 { z.conj() } else { z };
        roots.push(ComplexRoot::conical(z, m));
    }
    roots.sort_by(|a, b| a.lambda.im.total_cmp(&b.lambda.im));
    Ok(CriticalLineResult {
        roots,
        count,
        min_abs_det: min_abs,
        status,
        tag,
    })
}

/// One cell of a region scan: `m,omega_deg,sigma,in_region,num_roots,min_abs_det,first_root_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub m: i32,
    pub omega_deg: f64,
    pub sigma: f64,
    pub in_region: bool,
    pub num_roots: usize,
    pub min_abs_det: Option<f64>,
    pub first_root_t: Option<f64>,
    #[serde(skip)]
    pub status: Option<SearchStatus>,
    #[serde(skip)]
    pub max_root_det: f64,
}

pub const REGION_HEADER: [&str; 7] = [
    "m",
    "omega_deg",
    "sigma",
    "in_region",
    "num_roots",
    "min_abs_det",
    "first_root_t",
];

fn region_column(
    omega_deg: f64,
    sigmas: &[f64],
    m: i32,
    opts: &CriticalLineOptions,
) -> Result<Vec<RegionRow>> {
    let cone = ConeSpec::from_degrees(omega_deg)?;
    let scaled;
    let opts = if opts.scale_t_max {
        scaled = CriticalLineOptions {
            t_max: scaled_t_max(cone.omega, opts.t_max),
            ..*opts
        };
        &scaled
    } else {
        opts
    };
    let mut cache = LegendreCache::new(m, cone);
    let mut rows = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let r = critical_line_roots_cached(sigma, &mut cache, opts)?;
        let max_root_det = r
            .roots
            .iter()
            .map(|z| {
                cache
                    .matrix(sigma, z.lambda)
                    .map(|mat| normalized_det(&mat).norm())
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        rows.push(RegionRow {
            m,
            omega_deg,
            sigma,
            in_region: r.in_region(),
            num_roots: r.roots.len(),
            min_abs_det: r.min_abs_det.is_finite().then_some(r.min_abs_det),
            first_root_t: r.first_root_t(),
            status: Some(r.status),
            max_root_det,
        });
    }
    Ok(rows)
}

/// Region membership on an `omega x sigma` grid for each mode in `modes`.
/// Rows are ordered by mode, then angle, then `sigma`. Columns run in
/// parallel on the current rayon pool.
pub fn region_membership_grid(
    omegas_deg: &[f64],
    sigmas: &[f64],
    modes: &[i32],
    opts: &CriticalLineOptions,
) -> Result<Vec<RegionRow>> {
    let jobs: Vec<(i32, f64)> = modes
        .iter()
        .flat_map(|&m| omegas_deg.iter().map(move |&w| (m, w)))
        .collect();
    let columns: Vec<Result<Vec<RegionRow>>> = jobs
        .par_iter()
        .map(|&(m, w)| region_column(w, sigmas, m, opts))
        .collect();
    let mut rows = Vec::with_capacity(jobs.len() * sigmas.len());
    for c in columns {
        rows.extend(c?);
    }
    Ok(rows)
}
