//! Assembly of the velocity stiffness, divergence and pressure mass matrices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::basis::{Dense, Lagrange1D, Reference1D};
use super::mesh::Mesh;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Velocity and pressure polynomial degrees per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeSpacePair {
    pub deg_u: usize,
    pub deg_p: usize,
}

impl FeSpacePair {
    pub fn new(deg_u: usize, deg_p: usize) -> Result<Self> {
        if !(2..=8).contains(&deg_u) {
            return Err(Error::InvalidSpaces(format!(
                "velocity degree {deg_u} not in 2..=8"
            )));
        }
        if deg_p < 1 || !(deg_p + 1 == deg_u || deg_p + 2 == deg_u) {
            return Err(Error::InvalidSpaces(format!(
                "pressure degree {deg_p} must be {} or {} and at least 1",
                deg_u - 1,
                deg_u - 2
            )));
        }
        Ok(Self { deg_u, deg_p })
    }

    pub fn q2q1() -> Self {
        Self { deg_u: 2, deg_p: 1 }
    }
}

/// Lexicographic numbering of a tensor grid of nodes. The axis with the
/// fewest nodes runs fastest, which keeps the matrix profile narrow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorLayout {
    pub counts: Vec<usize>,
    strides: Vec<usize>,
}

impl TensorLayout {
    pub fn new(counts: Vec<usize>) -> Self {
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by_key(|&a| counts[a]);
        let mut strides = vec![0; counts.len()];
        let mut s = 1;
        for &a in &order {
            strides[a] = s;
            s *= counts[a];
        }
        Self { counts, strides }
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn multi_index(&self, k: usize) -> Vec<usize> {
        self.counts
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| (k / s) % n)
            .collect()
    }
}

/// Global node coordinates along `axis` for continuous elements of degree `deg`.
pub fn node_coordinates(mesh: &Mesh, deg: usize, axis: usize) -> Vec<f64> {
    let basis = Lagrange1D::new(deg);
    let b = &mesh.breakpoints[axis];
    let mut x = Vec::with_capacity((b.len() - 1) * deg + 1);
    for c in 0..b.len() - 1 {
        let h = b[c + 1] - b[c];
        for &t in &basis.nodes[..deg] {
            x.push(b[c] + h * t);
        }
    }
    x.push(b[b.len() - 1]);
    x
}

/// Matrices of the discrete Stokes problem with homogeneous Dirichlet
/// velocity. Velocity vectors are stacked by component, each component
/// numbered by `u_layout` over the interior nodes.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub mesh: Mesh,
    pub spaces: FeSpacePair,
    /// Scalar `int grad u . grad v`; the vector stiffness is one copy per component.
    pub stiffness: CsrMatrix,
    /// `B_k[p, u] = int d_k u p`, one matrix per component.
    pub div: Vec<CsrMatrix>,
    pub pressure_mass: CsrMatrix,
    pub u_layout: TensorLayout,
    pub p_layout: TensorLayout,
}

impl OperatorSet {
    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    /// Velocity unknowns per component.
    pub fn ndof_u_scalar(&self) -> usize {
        self.u_layout.len()
    }

    pub fn ndof_u(&self) -> usize {
        self.dim() * self.ndof_u_scalar()
    }

    pub fn ndof_p(&self) -> usize {
        self.p_layout.len()
    }

    /// Block diagonal vector stiffness as a dense matrix.
    pub fn stiffness_dense(&self) -> Dense {
        let n = self.ndof_u_scalar();
        let k = self.stiffness.to_dense();
        let mut r = vec![vec![0.0; n * self.dim()]; n * self.dim()];
        for c in 0..self.dim() {
            for i in 0..n {
                r[c * n + i][c * n..(c + 1) * n].copy_from_slice(&k[i]);
            }
        }
        r
    }
}

type Triplets = Vec<(usize, usize, f64)>;

fn multi_indices(n: usize, dim: usize) -> Vec<Vec<usize>> {
    let total = n.pow(dim as u32);
    (0..total)
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let i = k % n;
                    k /= n;
                    i
                })
                .collect()
        })
        .collect()
}

fn scale(m: &Dense, s: f64) -> Dense {
    m.iter()
        .map(|r| r.iter().map(|v| v * s).collect())
        .collect()
}

struct Local {
    u_idx: Vec<Vec<usize>>,
    p_idx: Vec<Vec<usize>>,
}

/// Global index of the velocity node at local multi-index `loc` in `cell`,
/// or `None` on the boundary.
fn velocity_dof(layout: &TensorLayout, cell: &[usize], loc: &[usize], deg: usize) -> Option<usize> {
    let mut g = Vec::with_capacity(cell.len());
    for a in 0..cell.len() {
        let x = cell[a] * deg + loc[a];
        if x == 0 || x > layout.counts[a] {
            return None;
        }
        g.push(x - 1);
    }
    Some(layout.index(&g))
}

fn pressure_dof(layout: &TensorLayout, cell: &[usize], loc: &[usize], deg: usize) -> usize {
    let g: Vec<usize> = cell.iter().zip(loc).map(|(c, l)| c * deg + l).collect();
    layout.index(&g)
}

pub fn assemble(mesh: &Mesh, spaces: FeSpacePair) -> Result<OperatorSet> {
    let FeSpacePair { deg_u, deg_p } = FeSpacePair::new(spaces.deg_u, spaces.deg_p)?;
    let dim = mesh.dim();
    let ub = Lagrange1D::new(deg_u);
    let pb = Lagrange1D::new(deg_p);
    let r = Reference1D::new(&ub, &pb, deg_u + 1);
    let cells_n = mesh.cells_per_axis();
    let u_layout = TensorLayout::new(cells_n.iter().map(|c| c * deg_u - 1).collect());
    let p_layout = TensorLayout::new(cells_n.iter().map(|c| c * deg_p + 1).collect());
    if u_layout.is_empty() {
        return Err(Error::InvalidMesh("no interior velocity nodes".into()));
    }
    let local = Local {
        u_idx: multi_indices(deg_u + 1, dim),
        p_idx: multi_indices(deg_p + 1, dim),
    };

    let per_cell: Vec<(Triplets, Vec<Triplets>, Triplets)> = mesh
        .cells()
        .par_iter()
        .map(|cell| {
            let h: Vec<f64> = (0..dim)
                .map(|a| mesh.breakpoints[a][cell[a] + 1] - mesh.breakpoints[a][cell[a]])
                .collect();
            let stiff: Vec<Dense> = h.iter().map(|&ha| scale(&r.stiff, 1.0 / ha)).collect();
            let mass: Vec<Dense> = h.iter().map(|&ha| scale(&r.mass, ha)).collect();
            let cross: Vec<Dense> = h.iter().map(|&ha| scale(&r.cross, ha)).collect();
            let pmass: Vec<Dense> = h.iter().map(|&ha| scale(&r.pmass, ha)).collect();

            let udofs: Vec<Option<usize>> = local
                .u_idx
                .iter()
                .map(|l| velocity_dof(&u_layout, cell, l, deg_u))
                .collect();
            let pdofs: Vec<usize> = local
                .p_idx
                .iter()
                .map(|l| pressure_dof(&p_layout, cell, l, deg_p))
                .collect();

            let mut kt = Vec::new();
            for (li, gi) in local.u_idx.iter().zip(&udofs) {
                let Some(gi) = gi else { continue };
                for (lj, gj) in local.u_idx.iter().zip(&udofs) {
                    let Some(gj) = gj else { continue };
                    let mut v = 0.0;
                    for a in 0..dim {
                        let mut t = stiff[a][li[a]][lj[a]];
                        for b in (0..dim).filter(|&b| b != a) {
                            t *= mass[b][li[b]][lj[b]];
                        }
                        v += t;
                    }
                    kt.push((*gi, *gj, v));
                }
            }

            let mut bt: Vec<Triplets> = vec![Vec::new(); dim];
            for (lp, gp) in local.p_idx.iter().zip(&pdofs) {
                for (lu, gu) in local.u_idx.iter().zip(&udofs) {
                    let Some(gu) = gu else { continue };
                    for (k, bk) in bt.iter_mut().enumerate() {
                        let mut t = r.grad_p[lu[k]][lp[k]];
                        for b in (0..dim).filter(|&b| b != k) {
                            t *= cross[b][lu[b]][lp[b]];
                        }
                        bk.push((*gp, *gu, t));
                    }
                }
            }

            let mut mt = Vec::new();
            for (li, gi) in local.p_idx.iter().zip(&pdofs) {
                for (lj, gj) in local.p_idx.iter().zip(&pdofs) {
                    let v: f64 = (0..dim).map(|a| pmass[a][li[a]][lj[a]]).product();
                    mt.push((*gi, *gj, v));
                }
            }
            (kt, bt, mt)
        })
        .collect();

    let (nu, np) = (u_layout.len(), p_layout.len());
    let mut kt = Vec::new();
    let mut bt: Vec<Triplets> = vec![Vec::new(); dim];
    let mut mt = Vec::new();
    for (k, b, m) in per_cell {
        kt.extend(k);
        for (acc, part) in bt.iter_mut().zip(b) {
            acc.extend(part);
        }
        mt.extend(m);
    }
    Ok(OperatorSet {
        mesh: mesh.clone(),
        spaces: FeSpacePair { deg_u, deg_p },
        stiffness: CsrMatrix::from_triplets(nu, nu, kt),
        div: bt
            .into_iter()
            .map(|t| CsrMatrix::from_triplets(np, nu, t))
            .collect(),
        pressure_mass: CsrMatrix::from_triplets(np, np, mt),
        u_layout,
        p_layout,
    })
}

/// Dirichlet matrix of `int grad u . grad v + c u v` and load `int v` for
/// continuous elements of degree `deg` on `mesh` (any dimension).
pub fn assemble_scalar(
    mesh: &Mesh,
    deg: usize,
    c: f64,
) -> Result<(CsrMatrix, Vec<f64>, TensorLayout)> {
    if deg < 1 {
        return Err(Error::InvalidSpaces("degree 0".into()));
    }
    let dim = mesh.dim();
    let ub = Lagrange1D::new(deg);
    let r = Reference1D::new(&ub, &Lagrange1D::new(1), deg + 1);
    let cells_n = mesh.cells_per_axis();
    let layout = TensorLayout::new(cells_n.iter().map(|n| n * deg - 1).collect());
    if layout.is_empty() {
        return Err(Error::InvalidMesh("no interior nodes".into()));
    }
    let lidx = multi_indices(deg + 1, dim);
    let mut t = Vec::new();
    let mut f = vec![0.0; layout.len()];
    for cell in mesh.cells() {
        let h: Vec<f64> = (0..dim)
            .map(|a| mesh.breakpoints[a][cell[a] + 1] - mesh.breakpoints[a][cell[a]])
            .collect();
        let dofs: Vec<Option<usize>> = lidx
            .iter()
            .map(|l| velocity_dof(&layout, &cell, l, deg))
            .collect();
        for (li, gi) in lidx.iter().zip(&dofs) {
            let Some(gi) = gi else { continue };
            f[*gi] += (0..dim).map(|a| r.load[li[a]] * h[a]).product::<f64>();
            for (lj, gj) in lidx.iter().zip(&dofs) {
                let Some(gj) = gj else { continue };
                let m: Vec<f64> = (0..dim).map(|a| r.mass[li[a]][lj[a]] * h[a]).collect();
                let mut v = c * m.iter().product::<f64>();
                for a in 0..dim {
                    let mut s = r.stiff[li[a]][lj[a]] / h[a];
                    for b in (0..dim).filter(|&b| b != a) {
                        s *= m[b];
                    }
                    v += s;
                }
                t.push((*gi, *gj, v));
            }
        }
    }
    let n = layout.len();
    Ok((CsrMatrix::from_triplets(n, n, t), f, layout))
}
