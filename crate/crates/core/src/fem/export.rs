//! Sampling of discrete pressure and velocity fields on uniform grids.

use serde::{Deserialize, Serialize};

use super::assemble::OperatorSet;
use super::basis::Lagrange1D;
use super::schur::SchurOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSamples {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub pressure: Vec<f64>,
    /// Velocity per point, when requested.
    pub velocity: Option<Vec<Vec<f64>>>,
}

impl FieldSamples {
    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["x", "y", "z"][..self.dim].to_vec();
        h.push("p");
        if self.velocity.is_some() {
            h.extend(["ux", "uy", "uz"][..self.dim].iter());
        }
        h
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.points.iter().enumerate().map(|(i, x)| {
            let mut r = x.clone();
            r.push(self.pressure[i]);
            if let Some(u) = &self.velocity {
                r.extend(&u[i]);
            }
            r
        })
    }
}

/// Evaluates a continuous tensor field with nodal values `coef(global index)`.
struct Evaluator<'a> {
    ops: &'a OperatorSet,
    basis: Lagrange1D,
    deg: usize,
}

impl Evaluator<'_> {
    /// Per-axis `(first global node, basis values)`.
    fn locate(&self, x: &[f64]) -> Result<Vec<(usize, Vec<f64>)>> {
        let mesh = &self.ops.mesh;
        x.iter()
            .enumerate()
            .map(|(a, &xa)| {
                let c = mesh
                    .locate(a, xa)
                    .ok_or_else(|| Error::OutsideMesh(x.to_vec()))?;
                let b = &mesh.breakpoints[a];
                let t = ((xa - b[c]) / (b[c + 1] - b[c])).clamp(0.0, 1.0);
                Ok((c * self.deg, self.basis.eval(t)))
            })
            .collect()
    }

    fn eval(&self, x: &[f64], coef: impl Fn(&[usize]) -> f64) -> Result<f64> {
        let loc = self.locate(x)?;
        let n = self.deg + 1;
        let dim = x.len();
        let mut total = 0.0;
        let mut g = vec![0; dim];
        for k in 0..n.pow(dim as u32) {
            let mut r = k;
            let mut w = 1.0;
            for (a, (start, vals)) in loc.iter().enumerate() {
                let i = r % n;
                r /= n;
                g[a] = start + i;
                w *= vals[i];
            }
            if w != 0.0 {
                total += w * coef(&g);
            }
        }
        Ok(total)
    }
}

/// Uniform grid with `counts[i]` points along axis `i`, endpoints included.
pub fn sample_grid(extents: &[f64], counts: &[usize]) -> Vec<Vec<f64>> {
    let total: usize = counts.iter().product();
    (0..total)
        .map(|mut k| {
            extents
                .iter()
                .zip(counts)
                .map(|(&e, &n)| {
                    let i = k % n;
                    k /= n;
                    if n == 1 {
                        0.5 * e
                    } else {
                        e * i as f64 / (n - 1) as f64
                    }
                })
                .collect()
        })
        .collect()
}

/// Samples the pressure `q` and, with `schur`, the associated velocity
/// `K^-1 B^T q` at `points`.
pub fn export_eigenfunction(
    ops: &OperatorSet,
    q: &[f64],
    points: &[Vec<f64>],
    schur: Option<&SchurOperator>,
) -> Result<FieldSamples> {
    if q.len() != ops.ndof_p() {
        return Err(Error::InvalidArgument(format!(
            "pressure vector has {} entries, expected {}",
            q.len(),
            ops.ndof_p()
        )));
    }
    let dim = ops.dim();
    let pe = Evaluator {
        ops,
        basis: Lagrange1D::new(ops.spaces.deg_p),
        deg: ops.spaces.deg_p,
    };
    let pressure = points
        .iter()
        .map(|x| pe.eval(x, |g| q[ops.p_layout.index(g)]))
        .collect::<Result<Vec<f64>>>()?;
    let velocity = match schur {
        None => None,
        Some(s) => {
            let u = s.velocity(q);
            let ue = Evaluator {
                ops,
                basis: Lagrange1D::new(ops.spaces.deg_u),
                deg: ops.spaces.deg_u,
            };
            let counts = &ops.u_layout.counts;
            let field = |comp: &[f64], g: &[usize]| -> f64 {
                if g.iter().zip(counts).any(|(&gi, &c)| gi == 0 || gi > c) {
                    return 0.0;
                }
                let inner: Vec<usize> = g.iter().map(|gi| gi - 1).collect();
                comp[ops.u_layout.index(&inner)]
            };
            let vals = points
                .iter()
                .map(|x| (0..dim).map(|k| ue.eval(x, |g| field(&u[k], g))).collect())
                .collect::<Result<Vec<Vec<f64>>>>()?;
            Some(vals)
        }
    };
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument("sample point dimension".into()));
    }
    Ok(FieldSamples {
        dim,
        points: points.to_vec(),
        pressure,
        velocity,
    })
}

/// `|<f, g>| / (|f| |g|)` over the samples.
pub fn correlation(f: &[f64], g: &[f64]) -> f64 {
    let fg: f64 = f.iter().zip(g).map(|(a, b)| a * b).sum();
    let ff: f64 = f.iter().map(|a| a * a).sum();
    let gg: f64 = g.iter().map(|a| a * a).sum();
    fg.abs() / (ff * gg).sqrt()
}
