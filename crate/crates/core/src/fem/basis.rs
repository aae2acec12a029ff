//! One-dimensional Lagrange bases on `[0, 1]` and their element matrices.

use super::quadrature::{gauss_legendre, gll_points};

/// Lagrange basis interpolating at the GLL points of a given degree.
#[derive(Debug, Clone)]
pub struct Lagrange1D {
    pub nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Lagrange1D {
    pub fn new(degree: usize) -> Self {
        let nodes = gll_points(degree + 1);
        let weights = nodes
            .iter()
            .enumerate()
            .map(|(i, xi)| {
                let prod: f64 = nodes
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, xj)| xi - xj)
                    .product();
                1.0 / prod
            })
            .collect();
        Self { nodes, weights }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Values of all basis functions at `x`.
    pub fn eval(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n)
            .map(|i| {
                let mut v = self.weights[i];
                for j in 0..n {
                    if j != i {
                        v *= x - self.nodes[j];
                    }
                }
                v
            })
            .collect()
    }

    /// Derivatives of all basis functions at `x`.
    pub fn eval_deriv(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        (0..n)
            .map(|i| {
                let mut total = 0.0;
                for k in 0..n {
                    if k == i {
                        continue;
                    }
                    let mut v = self.weights[i];
                    for j in 0..n {
                        if j != i && j != k {
                            v *= x - self.nodes[j];
                        }
                    }
                    total += v;
                }
                total
            })
            .collect()
    }
}

/// Dense row-major matrix.
pub type Dense = Vec<Vec<f64>>;

/// Reference element matrices on `[0, 1]` for a velocity basis `u` and a
/// pressure basis `p`, integrated with `nq` Gauss points.
#[derive(Debug, Clone)]
pub struct Reference1D {
    /// `int u_i' u_j'`
    pub stiff: Dense,
    /// `int u_i u_j`
    pub mass: Dense,
    /// `int u_i' p_j`
    pub grad_p: Dense,
    /// `int u_i p_j`
    pub cross: Dense,
    /// `int p_i p_j`
    pub pmass: Dense,
    /// `int u_i`
    pub load: Vec<f64>,
}

impl Reference1D {
    pub fn new(u: &Lagrange1D, p: &Lagrange1D, nq: usize) -> Self {
        let (xq, wq) = gauss_legendre(nq);
        let (nu, np) = (u.len(), p.len());
        let mut r = Reference1D {
            stiff: vec![vec![0.0; nu]; nu],
            mass: vec![vec![0.0; nu]; nu],
            grad_p: vec![vec![0.0; np]; nu],
            cross: vec![vec![0.0; np]; nu],
            pmass: vec![vec![0.0; np]; np],
            load: vec![0.0; nu],
        };
        for (x, w) in xq.iter().zip(&wq) {
            let uv = u.eval(*x);
            let ud = u.eval_deriv(*x);
            let pv = p.eval(*x);
            for i in 0..nu {
                r.load[i] += w * uv[i];
                for j in 0..nu {
                    r.stiff[i][j] += w * ud[i] * ud[j];
                    r.mass[i][j] += w * uv[i] * uv[j];
                }
                for j in 0..np {
                    r.grad_p[i][j] += w * ud[i] * pv[j];
                    r.cross[i][j] += w * uv[i] * pv[j];
                }
            }
            for i in 0..np {
                for j in 0..np {
                    r.pmass[i][j] += w * pv[i] * pv[j];
                }
            }
        }
        r
    }
}
