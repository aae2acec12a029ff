//! Mesh convergence studies and run reports.

use serde::{Deserialize, Serialize};
use std::time::Instant;

use super::assemble::{assemble, FeSpacePair, OperatorSet};
use super::eigen::{cosserat_eigs, EigOptions, EigReport};
use super::mesh::{build_mesh, MeshSpec};
use crate::error::{Error, Result};

/// Observed order from three successive values with halved mesh size,
/// or `None` when the differences are not monotone.
pub fn fitted_rate(s0: f64, s1: f64, s2: f64) -> Option<f64> {
    let (d1, d2) = (s0 - s1, s1 - s2);
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() {
        return None;
    }
    let r = (d1 / d2).log2();
    (r > 0.0).then_some(r)
}

/// Richardson extrapolation of a value sequence converging like `h^rate`.
pub fn extrapolate_with_rate(coarse: f64, fine: f64, rate: f64) -> f64 {
    fine - (coarse - fine) / (2f64.powf(rate) - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub level: u32,
    pub cells: Vec<usize>,
    pub ndof_u: usize,
    pub ndof_p: usize,
    pub sigmas: Vec<f64>,
    pub kernel_dim: usize,
    pub converged: bool,
    /// Wall time, left out of serialized output to keep it reproducible.
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenTrend {
    pub j: usize,
    pub rate: Option<f64>,
    pub reliable: bool,
    pub extrapolated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub levels: Vec<LevelResult>,
    pub trends: Vec<EigenTrend>,
}

/// Solve on uniform levels `levels` (`2^n` cells on the shortest axis)
/// and fit rates from the last three.
pub fn convergence_study(
    extents: &[f64],
    spaces: FeSpacePair,
    levels: &[u32],
    opts: &EigOptions,
) -> Result<ConvergenceStudy> {
    if levels.len() < 3 {
        return Err(Error::InvalidArgument(
            "a convergence study needs at least 3 levels".into(),
        ));
    }
    let mut out = Vec::with_capacity(levels.len());
    for &n in levels {
        let t0 = Instant::now();
        let mesh = build_mesh(extents, &MeshSpec::level(n))?;
        let ops = assemble(&mesh, spaces)?;
        let rep = cosserat_eigs(&ops, opts)?;
        out.push(LevelResult {
            level: n,
            cells: mesh.cells_per_axis(),
            ndof_u: rep.ndof_u,
            ndof_p: rep.ndof_p,
            sigmas: rep.sigmas(),
            kernel_dim: rep.kernel_dim,
            converged: rep.converged,
            seconds: t0.elapsed().as_secs_f64(),
        });
    }
    let l = out.len();
    let k = out.iter().map(|r| r.sigmas.len()).min().unwrap_or(0);
    let trends = (0..k)
        .map(|j| {
            let (a, b, c) = (
                out[l - 3].sigmas[j],
                out[l - 2].sigmas[j],
                out[l - 1].sigmas[j],
            );
            let rate = fitted_rate(a, b, c);
            EigenTrend {
                j: j + 1,
                rate,
                reliable: rate.is_some(),
                extrapolated: rate.map_or(c, |r| extrapolate_with_rate(b, c, r)),
            }
        })
        .collect();
    Ok(ConvergenceStudy {
        levels: out,
        trends,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainInfo {
    pub d: usize,
    pub a: f64,
    pub extents: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshInfo {
    pub spec: String,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceInfo {
    pub deg_u: usize,
    pub deg_p: usize,
    pub ndof_u: usize,
    pub ndof_p: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigSummary {
    pub j: usize,
    pub sigma: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub assemble_s: f64,
    pub solve_s: f64,
}

/// JSON summary of one finite element run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FemReport {
    pub domain: DomainInfo,
    pub mesh: MeshInfo,
    pub spaces: SpaceInfo,
    pub eigs: Vec<EigSummary>,
    pub kernel_dim: usize,
    pub converged: bool,
    /// Wall times, only filled on request since they vary between runs.
    pub timings: Option<Timings>,
}

impl FemReport {
    pub fn new(a: f64, ops: &OperatorSet, rep: &EigReport, timings: Option<Timings>) -> Self {
        Self {
            domain: DomainInfo {
                d: ops.dim(),
                a,
                extents: ops.mesh.extents.clone(),
            },
            mesh: MeshInfo {
                spec: ops.mesh.spec.to_string(),
                cells: ops.mesh.cells_per_axis(),
            },
            spaces: SpaceInfo {
                deg_u: ops.spaces.deg_u,
                deg_p: ops.spaces.deg_p,
                ndof_u: ops.ndof_u(),
                ndof_p: ops.ndof_p(),
            },
            eigs: rep
                .eigs
                .iter()
                .map(|e| EigSummary {
                    j: e.j,
                    sigma: e.sigma,
                    residual: e.residual,
                })
                .collect(),
            kernel_dim: rep.kernel_dim,
            converged: rep.converged,
            timings,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_model_rate() {
        let s = |n: i32| 0.3 + 0.7 * 4f64.powi(-n);
        let r = fitted_rate(s(3), s(4), s(5)).unwrap();
        assert!((r - 2.0).abs() < 1e-9);
        assert!((extrapolate_with_rate(s(4), s(5), r) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn non_monotone_is_unreliable() {
        assert_eq!(fitted_rate(1.0, 0.5, 0.6), None);
        assert_eq!(fitted_rate(1.0, 1.0, 1.0), None);
    }
}
