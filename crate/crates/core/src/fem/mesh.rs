//! Tensor-product meshes of boxes `prod (0, extents[i])`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// How breakpoints are laid out along each axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MeshSpec {
    /// `n` cells on the shortest axis; other axes get `round(n * length / shortest)`
    /// cells so that cells are as close to cubes as possible.
    Uniform { n: usize },
    /// Explicit uniform cell counts per axis.
    Cells(Vec<usize>),
    /// `layers` geometrically graded cells towards each end of every axis,
    /// adjacent cells shrinking by `ratio` towards the boundary.
    CornerRefined { layers: usize, ratio: f64 },
}

impl MeshSpec {
    /// Level `n` of the uniform family with `2^n` cells on the shortest axis.
    pub fn level(n: u32) -> Self {
        MeshSpec::Uniform { n: 1 << n }
    }
}

impl fmt::Display for MeshSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSpec::Uniform { n } => write!(f, "uniform:{n}"),
            MeshSpec::Cells(c) => {
                let s: Vec<String> = c.iter().map(|k| k.to_string()).collect();
                write!(f, "cells:{}", s.join("x"))
            }
            MeshSpec::CornerRefined { layers, ratio } => write!(f, "refined:{layers},{ratio}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub extents: Vec<f64>,
    /// Strictly increasing breakpoints per axis, from 0 to the extent.
    pub breakpoints: Vec<Vec<f64>>,
    pub spec: MeshSpec,
}

/// Extents `1/a x 1` (d = 2) or `1/a x 1 x 1` (d = 3).
pub fn domain_extents(dim: usize, a: f64) -> Result<Vec<f64>> {
    if !(dim == 2 || dim == 3) {
        return Err(Error::InvalidMesh(format!("dimension {dim}")));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "aspect parameter a = {a} not in (0, 1]"
        )));
    }
    let mut e = vec![1.0; dim];
    e[0] = 1.0 / a;
    Ok(e)
}

fn uniform_axis(len: f64, n: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..=n).map(|k| len * k as f64 / n as f64).collect();
    b[n] = len;
    b
}

fn graded_axis(len: f64, layers: usize, ratio: f64) -> Vec<f64> {
    // cell sizes from the middle towards an end: s q^j, j = 0..layers-1
    let half = 0.5 * len;
    let total: f64 = (0..layers).map(|j| ratio.powi(j as i32)).sum();
    let sizes: Vec<f64> = (0..layers)
        .map(|j| half * ratio.powi(j as i32) / total)
        .collect();
    let mut left = vec![0.0];
    let mut x = 0.0;
    for s in sizes.iter().rev() {
        x += s;
        left.push(x);
    }
    left[layers] = half;
    let mut b = left.clone();
    for x in left.iter().rev().skip(1) {
        b.push(len - x);
    }
    b
}

pub fn build_mesh(extents: &[f64], spec: &MeshSpec) -> Result<Mesh> {
    if extents.is_empty() || extents.len() > 3 {
        return Err(Error::InvalidMesh(format!("{} axes", extents.len())));
    }
    if extents.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidMesh(format!("extents {extents:?}")));
    }
    let breakpoints = match spec {
        MeshSpec::Uniform { n } => {
            if *n == 0 {
                return Err(Error::InvalidMesh("uniform:0".into()));
            }
            let shortest = extents.iter().cloned().fold(f64::INFINITY, f64::min);
            extents
                .iter()
                .map(|&e| {
                    let k = ((e / shortest) * *n as f64).round().max(1.0) as usize;
                    uniform_axis(e, k)
                })
                .collect()
        }
        MeshSpec::Cells(c) => {
            if c.len() != extents.len() || c.contains(&0) {
                return Err(Error::InvalidMesh(format!("cells {c:?}")));
            }
            extents
                .iter()
                .zip(c)
                .map(|(&e, &k)| uniform_axis(e, k))
                .collect()
        }
        MeshSpec::CornerRefined { layers, ratio } => {
            if *layers == 0 || !(*ratio > 0.0 && *ratio < 1.0) {
                return Err(Error::InvalidMesh(format!("refined:{layers},{ratio}")));
            }
            extents
                .iter()
                .map(|&e| graded_axis(e, *layers, *ratio))
                .collect()
        }
    };
    let mesh = Mesh {
        extents: extents.to_vec(),
        breakpoints,
        spec: spec.clone(),
    };
    mesh.validate()?;
    Ok(mesh)
}

impl Mesh {
    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn cells_per_axis(&self) -> Vec<usize> {
        self.breakpoints.iter().map(|b| b.len() - 1).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.cells_per_axis().iter().product()
    }

    fn validate(&self) -> Result<()> {
        for (b, e) in self.breakpoints.iter().zip(&self.extents) {
            if b.len() < 2 || b[0] != 0.0 || b[b.len() - 1] != *e {
                return Err(Error::InvalidMesh(
                    "breakpoints do not cover the extent".into(),
                ));
            }
            if b.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvalidMesh("zero-volume cell".into()));
            }
        }
        Ok(())
    }

    /// Cell multi-indices, first axis fastest.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let n = self.cells_per_axis();
        let total: usize = n.iter().product();
        (0..total)
            .map(|mut k| {
                n.iter()
                    .map(|&na| {
                        let i = k % na;
                        k /= na;
                        i
                    })
                    .collect()
            })
            .collect()
    }

    /// Cell index along `axis` containing `x`, or `None` outside the mesh.
    pub fn locate(&self, axis: usize, x: f64) -> Option<usize> {
        let b = &self.breakpoints[axis];
        let tol = 1e-12 * self.extents[axis];
        if x < -tol || x > b[b.len() - 1] + tol {
            return None;
        }
        let i = b.partition_point(|&y| y <= x);
        Some(i.saturating_sub(1).min(b.len() - 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_follows_aspect_ratio() {
        let m = build_mesh(&domain_extents(2, 0.2).unwrap(), &MeshSpec::level(1)).unwrap();
        assert_eq!(m.cells_per_axis(), vec![10, 2]);
        assert_eq!(m.num_cells(), 20);
        let m = build_mesh(
            &domain_extents(2, 0.1).unwrap(),
            &MeshSpec::Uniform { n: 4 },
        )
        .unwrap();
        assert_eq!(m.cells_per_axis(), vec![40, 4]);
        let m = build_mesh(
            &domain_extents(3, 0.5).unwrap(),
            &MeshSpec::Uniform { n: 2 },
        )
        .unwrap();
        assert_eq!(m.cells_per_axis(), vec![4, 2, 2]);
    }

    #[test]
    fn graded_single_layer_is_uniform() {
        let m = build_mesh(
            &[1.0],
            &MeshSpec::CornerRefined {
                layers: 1,
                ratio: 0.3,
            },
        )
        .unwrap();
        assert_eq!(m.breakpoints[0], vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn graded_cells_shrink_by_ratio() {
        let m = build_mesh(
            &[1.0],
            &MeshSpec::CornerRefined {
                layers: 3,
                ratio: 0.5,
            },
        )
        .unwrap();
        let b = &m.breakpoints[0];
        assert_eq!(b.len(), 7);
        let h: Vec<f64> = b.windows(2).map(|w| w[1] - w[0]).collect();
        assert!((h[0] / h[1] - 0.5).abs() < 1e-14 && (h[1] / h[2] - 0.5).abs() < 1e-14);
        assert!((h[5] / h[4] - 0.5).abs() < 1e-14);
        assert!((b[1] - 1.0 / 14.0).abs() < 1e-15);
        let m = build_mesh(
            &[5.0, 1.0],
            &MeshSpec::CornerRefined {
                layers: 6,
                ratio: 0.5,
            },
        )
        .unwrap();
        assert_eq!(m.num_cells(), 144);
    }

    #[test]
    fn invalid_specs() {
        assert!(build_mesh(&[1.0, 1.0], &MeshSpec::Uniform { n: 0 }).is_err());
        assert!(build_mesh(&[1.0, 1.0], &MeshSpec::Cells(vec![2])).is_err());
        assert!(build_mesh(&[1.0, 0.0], &MeshSpec::Uniform { n: 1 }).is_err());
        assert!(build_mesh(
            &[1.0],
            &MeshSpec::CornerRefined {
                layers: 2,
                ratio: 1.0
            }
        )
        .is_err());
        assert!(domain_extents(2, 1.5).is_err());
        assert!(domain_extents(4, 0.5).is_err());
    }

    #[test]
    fn locate_cells() {
        let m = build_mesh(&[2.0], &MeshSpec::Cells(vec![4])).unwrap();
        assert_eq!(m.locate(0, 0.0), Some(0));
        assert_eq!(m.locate(0, 0.5), Some(1));
        assert_eq!(m.locate(0, 2.0), Some(3));
        assert_eq!(m.locate(0, 2.1), None);
    }
}
