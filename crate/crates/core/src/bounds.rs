//! Closed-form and series bounds for the Cosserat constant `sigma(Omega)` of
//! rectangles `1/a x 1`, channels `(0, pi/a) x omega` and cuboids
//! `1/a x 1 x 1`, and the conversion `beta = sqrt(sigma)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fem::scalar::reaction_diffusion_load;
use crate::mellin2d::{essential_interval, CornerSpec2D};
use crate::types::SpectrumInterval;

/// Default absolute tolerance of the certified double series.
pub const SERIES_TOL: f64 = 1e-8;

/// Aspect parameter `a in (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct AspectParam(f64);

impl AspectParam {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "aspect parameter a = {a} not in (0, 1]"
            )));
        }
        Ok(Self(a))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `beta = sqrt(sigma)`.
pub fn beta_from_sigma(sigma: f64) -> f64 {
    sigma.max(0.0).sqrt()
}

/// Lower bound `sin^2(arctan(a) / 2)` for rectangles.
pub fn horgan_payne_lower(a: f64) -> f64 {
    (0.5 * a.atan()).sin().powi(2)
}

/// Quasimode bound `1 - tanh(rho)/rho`, `rho = a pi / 2`, for rectangles.
pub fn rectangle_upper(a: f64) -> f64 {
    let rho = 0.5 * a * PI;
    one_minus_tanhc(rho)
}

/// `1 - tanh(x)/x` without cancellation for small `x`.
fn one_minus_tanhc(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        // tanh(x)/x = 1 - x^2/3 + 2x^4/15 - 17x^6/315
        x2 / 3.0 - 2.0 * x2 * x2 / 15.0 + 17.0 * x2 * x2 * x2 / 315.0
    } else {
        1.0 - x.tanh() / x
    }
}

/// Upper bound `pi^2 a^2 / 12` for rectangles.
pub fn chizhonkov_olshanskii_upper(a: f64) -> f64 {
    PI * PI * a * a / 12.0
}

/// A truncated double series with a rigorous bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    /// Largest odd index kept in each direction.
    pub k_max: u64,
    pub tail_bound: f64,
}

/// Tail of `sum_{k1,k2 odd} 1/(k1^2 k2^2 (k1^2 + k2^2 + c))`, `c >= 0`, over
/// pairs with `max(k1, k2) > k_max`: at most `pi^2 / (24 k_max^3)`.
pub fn odd_lattice_tail_bound(k_max: u64) -> f64 {
    PI * PI / (24.0 * (k_max as f64).powi(3))
}

/// `sum_{k1,k2 odd} 1/(k1^2 k2^2 (k1^2 + k2^2 + c))` truncated so that
/// `scale * tail < tol`.
pub fn odd_lattice_sum(c: f64, scale: f64, tol: f64) -> Result<SeriesSum> {
    if !(tol > 0.0) || c < 0.0 {
        return Err(Error::InvalidArgument(format!("c = {c}, tol = {tol}")));
    }
    let needed = (scale * PI * PI / (24.0 * tol)).cbrt().ceil() as u64;
    let k_max = needed.max(1) | 1;
    Ok(SeriesSum {
        value: odd_lattice_partial(c, k_max),
        k_max,
        tail_bound: odd_lattice_tail_bound(k_max),
    })
}

/// Partial sum over odd `k1, k2 <= k_max`.
pub fn odd_lattice_partial(c: f64, k_max: u64) -> f64 {
    let mut total = 0.0;
    // largest terms last is not needed at this accuracy; sum rows in
    // decreasing k1 for a little less rounding
    let mut k1 = if k_max % 2 == 1 { k_max } else { k_max - 1 };
    loop {
        let a2 = (k1 * k1) as f64;
        let mut row = 0.0;
        let mut k2 = if k_max % 2 == 1 { k_max } else { k_max - 1 };
        loop {
            let b2 = (k2 * k2) as f64;
            row += 1.0 / (b2 * (a2 + b2 + c));
            if k2 == 1 {
                break;
            }
            k2 -= 2;
        }
        total += row / a2;
        if k1 == 1 {
            break;
        }
        k1 -= 2;
    }
    total
}

fn cuboid_prefactor(a: f64) -> f64 {
    (8.0 * a / (PI * PI)).powi(2)
}

fn dobrowolski_prefactor(a: f64) -> f64 {
    (16.0 * 3f64.sqrt() * a / PI.powi(3)).powi(2)
}

/// Channel bound for the cuboid `1/a x 1 x 1`:
/// `(8a/pi^2)^2 sum_{odd} 1/(k1^2 k2^2 (k1^2 + k2^2 + a^2))`.
pub fn cuboid_upper(a: f64, tol: f64) -> Result<f64> {
    Ok(cuboid_upper_series(a, tol)?.0)
}

/// Value and series details of [`cuboid_upper`].
pub fn cuboid_upper_series(a: f64, tol: f64) -> Result<(f64, SeriesSum)> {
    let pre = cuboid_prefactor(a);
    let s = odd_lattice_sum(a * a, pre, tol)?;
    Ok((pre * s.value, s))
}

/// Earlier channel bound for the cuboid:
/// `(16 sqrt(3) a / pi^3)^2 sum_{odd} 1/(k1^2 k2^2 (k1^2 + k2^2))`.
pub fn dobrowolski_upper(a: f64, tol: f64) -> Result<f64> {
    let pre = dobrowolski_prefactor(a);
    let s = odd_lattice_sum(0.0, pre, tol)?;
    Ok(pre * s.value)
}

/// Integral `<psi_a, 1>` of the solution of `(-Delta' + a^2) psi = 1`,
/// `psi = 0` on the boundary of a cross-section, and the section measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionSolution {
    pub integral: f64,
    pub measure: f64,
}

pub trait CrossSectionSolver {
    fn solve(&self, a: f64) -> Result<CrossSectionSolution>;
}

/// Interval `(0, length)`, solved in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSection {
    pub length: f64,
}

impl CrossSectionSolver for IntervalSection {
    fn solve(&self, a: f64) -> Result<CrossSectionSolution> {
        let l = self.length;
        if !(l > 0.0) {
            return Err(Error::InvalidArgument(format!("section length {l}")));
        }
        let h = 0.5 * l;
        // psi = (1 - cosh(a x)/cosh(a h)) / a^2 on (-h, h)
        let integral = if a * h < 1e-3 {
            let x2 = (a * h).powi(2);
            // l h^2 (1/3 - 2x^2/15 + 17x^4/315)
            l * h * h * (1.0 / 3.0 - 2.0 * x2 / 15.0 + 17.0 * x2 * x2 / 315.0)
        } else {
            l * one_minus_tanhc(a * h) / (a * a)
        };
        Ok(CrossSectionSolution {
            integral,
            measure: l,
        })
    }
}

/// Rectangle `(0, l1) x (0, l2)`, solved by its sine series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangleSection {
    pub l1: f64,
    pub l2: f64,
    pub tol: f64,
}

impl RectangleSection {
    /// The square `(0, pi)^2` used for cuboids.
    pub fn pi_square(tol: f64) -> Self {
        Self {
            l1: PI,
            l2: PI,
            tol,
        }
    }
}

impl CrossSectionSolver for RectangleSection {
    fn solve(&self, a: f64) -> Result<CrossSectionSolution> {
        let (l1, l2) = (self.l1, self.l2);
        if !(l1 > 0.0 && l2 > 0.0 && self.tol > 0.0) {
            return Err(Error::InvalidArgument("rectangle section".into()));
        }
        // <psi, 1> = sum 64 l1 l2 / (pi^4 k1^2 k2^2) / ((k1 pi/l1)^2 + (k2 pi/l2)^2 + a^2)
        let (q1, q2) = ((PI / l1).powi(2), (PI / l2).powi(2));
        let qmin = q1.min(q2);
        let pre = 64.0 * l1 * l2 / PI.powi(4);
        let terms_for = |k: u64| -> f64 {
            // crude tail: sum over max(k1,k2) > K of 1/(k1^2 k2^2 qmin (k1^2+k2^2))
            pre / qmin * odd_lattice_tail_bound(k)
        };
        let mut k_max = 1u64;
        while terms_for(k_max) > self.tol * l1 * l2 {
            k_max = 2 * k_max + 1;
        }
        let mut total = 0.0;
        let mut k1 = k_max;
        loop {
            let mut k2 = k_max;
            loop {
                let (f1, f2) = ((k1 * k1) as f64, (k2 * k2) as f64);
                total += 1.0 / (f1 * f2 * (f1 * q1 + f2 * q2 + a * a));
                if k2 == 1 {
                    break;
                }
                k2 -= 2;
            }
            if k1 == 1 {
                break;
            }
            k1 -= 2;
        }
        Ok(CrossSectionSolution {
            integral: pre * total,
            measure: l1 * l2,
        })
    }
}

/// Box section `prod (0, extents[i])` in dimension 1 or 2, solved with
/// continuous tensor elements of degree `degree` on a uniform mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct FemSection {
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
    pub degree: usize,
}

impl CrossSectionSolver for FemSection {
    fn solve(&self, a: f64) -> Result<CrossSectionSolution> {
        let integral = reaction_diffusion_load(&self.extents, &self.cells, self.degree, a * a)?;
        Ok(CrossSectionSolution {
            integral,
            measure: self.extents.iter().product(),
        })
    }
}

/// Channel bound `a^2 <psi_a, 1> / mu(omega)` for `(0, pi/a) x omega`.
pub fn channel_upper(a: f64, section: &dyn CrossSectionSolver) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("a = {a}")));
    }
    let s = section.solve(a)?;
    Ok(a * a * s.integral / s.measure)
}

/// How a reported interval relates to the essential spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralRelation {
    Equal,
    ContainedIn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeInterval {
    pub interval: SpectrumInterval,
    pub relation: SpectralRelation,
}

/// Interval contributed by a 3D edge of opening `omega`; only a subset of
/// the essential spectrum is certified.
pub fn edge_interval_3d(omega: f64) -> Result<EdgeInterval> {
    Ok(EdgeInterval {
        interval: essential_interval(CornerSpec2D::new(omega)?),
        relation: SpectralRelation::ContainedIn,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Rectangle,
    Cuboid,
}

/// All bounds at one aspect parameter. `beta_lower` / `beta_upper` convert
/// the best lower / upper bound available for `shape`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub a: f64,
    pub lower_hp: f64,
    pub upper_rect: f64,
    pub upper_co: f64,
    pub upper_cuboid: f64,
    pub upper_dobrowolski: f64,
    pub beta_lower: Option<f64>,
    pub beta_upper: f64,
}

pub const BOUND_HEADER: [&str; 8] = [
    "a",
    "lower_hp",
    "upper_rect",
    "upper_co",
    "upper_cuboid",
    "upper_dobrowolski",
    "beta_lower",
    "beta_upper",
];

impl BoundReport {
    pub fn new(a: f64, shape: Shape, tol: f64) -> Result<Self> {
        let a = AspectParam::new(a)?.get();
        let lower_hp = horgan_payne_lower(a);
        let upper_rect = rectangle_upper(a);
        let upper_co = chizhonkov_olshanskii_upper(a);
        let upper_cuboid = cuboid_upper(a, tol)?;
        let upper_dobrowolski = dobrowolski_upper(a, tol)?;
        let (beta_lower, beta_upper) = match shape {
            Shape::Rectangle => (
                Some(beta_from_sigma(lower_hp)),
                beta_from_sigma(upper_rect.min(upper_co)),
            ),
            Shape::Cuboid => (None, beta_from_sigma(upper_cuboid.min(upper_dobrowolski))),
        };
        Ok(Self {
            a,
            lower_hp,
            upper_rect,
            upper_co,
            upper_cuboid,
            upper_dobrowolski,
            beta_lower,
            beta_upper,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horgan_payne_values() {
        let v = horgan_payne_lower(1.0);
        assert!((v - (1.0 - 0.5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((horgan_payne_lower(0.2) - 0.0097097).abs() < 5e-8);
        let a = 1e-3;
        assert!((horgan_payne_lower(a) / (a * a / 4.0) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn rectangle_values() {
        let rho = 0.2 * PI / 2.0;
        let direct = 1.0 - rho.sinh() / (rho * rho.cosh());
        assert!((rectangle_upper(0.2) - direct).abs() < 1e-15);
        assert!((rectangle_upper(0.2) - 0.0316498).abs() < 1e-7);
        assert!(rectangle_upper(0.2) < chizhonkov_olshanskii_upper(0.2));
        assert!((chizhonkov_olshanskii_upper(0.2) - 0.0328987).abs() < 1e-7);
        let a = 1e-2;
        assert!((rectangle_upper(a) - chizhonkov_olshanskii_upper(a)).abs() < 1e-6);
    }

    #[test]
    fn small_argument_branch_is_continuous() {
        let x = 1e-3;
        let series = one_minus_tanhc(x * (1.0 - 1e-12));
        let direct = 1.0 - x.tanh() / x;
        assert!((series - direct).abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_threshold() {
        let threshold = 0.5 - 1.0 / PI;
        let at = rectangle_upper(0.53127);
        assert!(at < threshold && rectangle_upper(0.5314) > threshold);
    }

    #[test]
    fn cuboid_and_dobrowolski_values() {
        let c = cuboid_upper(0.2, 1e-6).unwrap();
        assert!((c - 0.0136142).abs() < 2e-6, "{c}");
        let d = dobrowolski_upper(0.2, 1e-6).unwrap();
        assert!((d - 0.0168692).abs() < 2e-6, "{d}");
        let d2 = dobrowolski_upper(0.4, 1e-9).unwrap();
        let d1 = dobrowolski_upper(0.2, 1e-9).unwrap();
        assert!((d2 - 4.0 * d1).abs() < 1e-8);
        assert!(
            (dobrowolski_prefactor(1.0) / cuboid_prefactor(1.0) - 12.0 / (PI * PI)).abs() < 1e-14
        );
    }

    #[test]
    fn leading_term_dominates_at_one() {
        let pre = cuboid_prefactor(1.0);
        let first = pre * odd_lattice_partial(1.0, 1);
        let full = cuboid_upper(1.0, 1e-10).unwrap();
        assert!((first - pre / 3.0).abs() < 1e-15);
        assert!((full - 0.2359091).abs() < 1e-7, "{full}");
    }

    #[test]
    fn tail_bound_is_certified() {
        for c in [0.0, 0.04, 1.0] {
            let s = odd_lattice_sum(c, 1.0, 1e-6).unwrap();
            assert!(s.tail_bound < 1e-6);
            let doubled = odd_lattice_partial(c, 2 * s.k_max + 1);
            assert!(doubled - s.value >= 0.0 && doubled - s.value < s.tail_bound);
        }
    }

    #[test]
    fn interval_channel_matches_rectangle() {
        for a in [1e-4, 0.05, 0.2, 0.7, 1.0] {
            let v = channel_upper(a, &IntervalSection { length: PI }).unwrap();
            assert!((v - rectangle_upper(a)).abs() < 1e-12, "{a}");
        }
    }

    #[test]
    fn square_channel_matches_cuboid_series() {
        let v = channel_upper(0.2, &RectangleSection::pi_square(1e-9)).unwrap();
        let c = cuboid_upper(0.2, 1e-9).unwrap();
        assert!((v - c).abs() < 1e-8);
        assert!((v - 0.01361).abs() < 1e-4);
    }

    #[test]
    fn fem_sections_agree_with_series() {
        let a = 0.5;
        let fem1 = FemSection {
            extents: vec![PI],
            cells: vec![6],
            degree: 4,
        };
        let v1 = channel_upper(a, &fem1).unwrap();
        assert!((v1 - rectangle_upper(a)).abs() < 1e-9);
        let fem2 = FemSection {
            extents: vec![PI, PI],
            cells: vec![8, 8],
            degree: 4,
        };
        let v2 = channel_upper(a, &fem2).unwrap();
        let c = cuboid_upper(a, 1e-10).unwrap();
        assert!((v2 - c).abs() < 1e-6 * c, "{v2} {c}");
    }

    #[test]
    fn channel_limit_at_zero() {
        let s = IntervalSection { length: PI };
        let r0 = s.solve(1e-9).unwrap();
        // psi_0 = x (pi - x) / 2 integrates to pi^3 / 12
        assert!((r0.integral - PI.powi(3) / 12.0).abs() < 1e-12);
        let ratio = channel_upper(1e-3, &s).unwrap() / 1e-6;
        assert!((ratio - PI * PI / 12.0).abs() < 1e-5);
    }

    #[test]
    fn edge_interval() {
        let e = edge_interval_3d(PI / 2.0).unwrap();
        assert!((e.interval.lo - (0.5 - 1.0 / PI)).abs() < 1e-15);
        assert_eq!(e.relation, SpectralRelation::ContainedIn);
        assert!(edge_interval_3d(PI).unwrap().interval.is_degenerate());
    }

    #[test]
    fn report_orderings() {
        for k in 1..=20 {
            let a = 0.05 * k as f64;
            let r = BoundReport::new(a, Shape::Rectangle, 1e-8).unwrap();
            assert!(r.lower_hp <= r.upper_rect);
            assert!(r.upper_cuboid < r.upper_dobrowolski);
            assert!(r.beta_lower.unwrap() <= r.beta_upper);
            assert!((r.beta_upper - r.upper_rect.sqrt()).abs() < 1e-15);
        }
        assert!(BoundReport::new(0.0, Shape::Cuboid, 1e-8).is_err());
        assert!(BoundReport::new(1.5, Shape::Cuboid, 1e-8).is_err());
    }
}
