//! Generalized eigenproblem `S q = sigma M_p q` on the mean-zero pressures.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assemble::OperatorSet;
use super::schur::SchurOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EigMethod {
    /// Pick dense below `dense_limit` pressure unknowns, Lanczos above.
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigOptions {
    /// Number of nonzero eigenvalues wanted.
    pub k: usize,
    pub method: EigMethod,
    pub dense_limit: usize,
    /// Required `|S q - sigma M q| / |M q|`.
    pub tol: f64,
    /// Eigenvalues below this count as discrete kernel.
    pub kernel_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            k: 6,
            method: EigMethod::Auto,
            dense_limit: 1000,
            tol: 1e-8,
            kernel_tol: 1e-10,
            max_iter: 2000,
            seed: 7,
        }
    }
}

impl EigOptions {
    pub fn with_k(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigPair {
    /// 1-based index among the nonzero eigenvalues.
    pub j: usize,
    pub sigma: f64,
    pub residual: f64,
    #[serde(skip)]
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigReport {
    pub eigs: Vec<EigPair>,
    /// Multiplicity of the zero eigenvalue, constants included.
    pub kernel_dim: usize,
    #[serde(skip)]
    pub kernel: Vec<Vec<f64>>,
    pub method: EigMethod,
    pub iterations: usize,
    /// False when fewer than `k` pairs met the residual tolerance.
    pub converged: bool,
    pub ndof_u: usize,
    pub ndof_p: usize,
}

impl EigReport {
    pub fn sigmas(&self) -> Vec<f64> {
        self.eigs.iter().map(|e| e.sigma).collect()
    }

    /// Groups of numerically equal eigenvalues as `(sigma, multiplicity)`.
    pub fn multiplicities(&self, rel_tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for e in &self.eigs {
            match out.last_mut() {
                Some((s, n)) if (e.sigma - *s).abs() <= rel_tol * s.abs().max(e.sigma.abs()) => {
                    *n += 1
                }
                _ => out.push((e.sigma, 1)),
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn residual(op: &SchurOperator, q: &[f64], sigma: f64) -> f64 {
    let sq = op.apply(q);
    let mq = op.mass_apply(q);
    let r: Vec<f64> = sq.iter().zip(&mq).map(|(s, m)| s - sigma * m).collect();
    norm(&r) / norm(&mq)
}

/// Eigenvalues with their pressure vectors.
type Pairs = Vec<(f64, Vec<f64>)>;

/// Eigenpairs of the discrete Cosserat problem, smallest first.
pub fn cosserat_eigs(ops: &OperatorSet, opts: &EigOptions) -> Result<EigReport> {
    let np = ops.ndof_p();
    if opts.k < 1 || opts.k + 1 >= np {
        return Err(Error::InvalidArgument(format!(
            "requested {} eigenvalues from {np} pressure unknowns",
            opts.k
        )));
    }
    let op = SchurOperator::new(ops)?;
    let dense = match opts.method {
        EigMethod::Dense => true,
        EigMethod::Lanczos => false,
        EigMethod::Auto => np <= opts.dense_limit,
    };
    let (pairs, iterations) = if dense {
        (dense_pairs(&op)?, np)
    } else {
        lanczos_pairs(&op, opts)?
    };
    let mut kernel = Vec::new();
    let mut eigs = Vec::new();
    for (sigma, v) in pairs {
        if sigma < opts.kernel_tol {
            kernel.push(v);
        } else if eigs.len() < opts.k {
            let res = residual(&op, &v, sigma);
            eigs.push(EigPair {
                j: eigs.len() + 1,
                sigma,
                residual: res,
                vector: v,
            });
        }
    }
    let converged = eigs.len() == opts.k && eigs.iter().all(|e| e.residual <= opts.tol);
    Ok(EigReport {
        kernel_dim: kernel.len(),
        kernel,
        eigs,
        method: if dense {
            EigMethod::Dense
        } else {
            EigMethod::Lanczos
        },
        iterations,
        converged,
        ndof_u: ops.ndof_u(),
        ndof_p: np,
    })
}

/// All eigenpairs from the explicitly formed `S`, M-orthonormal vectors.
fn dense_pairs(op: &SchurOperator) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = op.dim();
    let cols: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            op.apply(&e)
        })
        .collect();
    let s = DMatrix::from_fn(n, n, |i, j| 0.5 * (cols[j][i] + cols[i][j]));
    let md = op.ops.pressure_mass.to_dense();
    let m = DMatrix::from_fn(n, n, |i, j| md[i][j]);
    let l = m.cholesky().ok_or(Error::NotPositiveDefinite(0))?.l();
    let x = l
        .solve_lower_triangular(&s)
        .ok_or_else(|| Error::NonConvergence("singular mass factor".into()))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::NonConvergence("singular mass factor".into()))?;
    let c = 0.5 * (&c + c.transpose());
    let eig = SymmetricEigen::new(c);
    let lt = l.transpose();
    let mut out: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|i| {
            let y = eig.eigenvectors.column(i).into_owned();
            let q = lt.solve_upper_triangular(&y).unwrap_or(y);
            (eig.eigenvalues[i], q.iter().copied().collect())
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// M-orthonormal basis vectors together with their M images.
struct Basis {
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
}

impl Basis {
    fn new() -> Self {
        Self {
            v: Vec::new(),
            mv: Vec::new(),
        }
    }

    fn orthogonalize(&self, w: &mut [f64]) {
        for _ in 0..2 {
            for (v, mv) in self.v.iter().zip(&self.mv) {
                let c = dot(mv, w);
                for (x, y) in w.iter_mut().zip(v) {
                    *x -= c * y;
                }
            }
        }
    }

    fn push(&mut self, v: Vec<f64>, mv: Vec<f64>) {
        self.v.push(v);
        self.mv.push(mv);
    }
}

/// Smallest eigenpairs by Lanczos in the M inner product. Converged vectors
/// are locked and the iteration restarted from a fresh deflated start until
/// a run finds nothing below the current `k`-th value.
fn lanczos_pairs(op: &SchurOperator, opts: &EigOptions) -> Result<(Pairs, usize)> {
    let n = op.dim();
    let mut locked = Basis::new();
    let ones = vec![1.0; n];
    let m1 = op.mass_apply(&ones);
    let c = dot(&ones, &m1).sqrt();
    locked.push(
        ones.iter().map(|x| x / c).collect(),
        m1.iter().map(|x| x / c).collect(),
    );
    let mut found: Vec<(f64, Vec<f64>)> = vec![(0.0, locked.v[0].clone())];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut total_iter = 0;

    for _run in 0..(2 * opts.k + 8) {
        let nonzero = found.iter().filter(|p| p.0 >= opts.kernel_tol).count();
        let need = if nonzero >= opts.k {
            1
        } else {
            opts.k - nonzero
        };
        let threshold = if nonzero >= opts.k {
            let mut s: Vec<f64> = found
                .iter()
                .map(|p| p.0)
                .filter(|&s| s >= opts.kernel_tol)
                .collect();
            s.sort_by(f64::total_cmp);
            s[opts.k - 1]
        } else {
            f64::INFINITY
        };
        let room = n.saturating_sub(locked.v.len());
        if room == 0 {
            break;
        }
        let (pairs, iters) = lanczos_run(op, &locked, need, opts, &mut rng, room)?;
        total_iter += iters;
        let fresh: Vec<(f64, Vec<f64>)> = pairs
            .into_iter()
            .filter(|p| p.0 < threshold * (1.0 - 1e-12) - opts.tol)
            .collect();
        if fresh.is_empty() {
            break;
        }
        for (s, v) in fresh {
            let mut v = v;
            locked.orthogonalize(&mut v);
            let mv = op.mass_apply(&v);
            let nv = dot(&v, &mv).sqrt();
            if nv < 1e-8 {
                continue;
            }
            let v: Vec<f64> = v.iter().map(|x| x / nv).collect();
            locked.push(v.clone(), mv.iter().map(|x| x / nv).collect());
            found.push((s, v));
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok((found, total_iter))
}

/// One Lanczos run deflated against `locked`, returning the `need`
/// smallest converged Ritz pairs.
fn lanczos_run(
    op: &SchurOperator,
    locked: &Basis,
    need: usize,
    opts: &EigOptions,
    rng: &mut ChaCha8Rng,
    room: usize,
) -> Result<(Pairs, usize)> {
    let n = op.dim();
    let max_steps = opts.max_iter.min(room);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    locked.orthogonalize(&mut v);
    let mut mv = op.mass_apply(&v);
    let nv = dot(&v, &mv).sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    mv.iter_mut().for_each(|x| *x /= nv);

    let mut basis = Basis::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut next_check = 10.max(need * 2);
    loop {
        let sv = op.apply(&v);
        let a = dot(&sv, &v);
        let mut w = op.mass_solve(&sv);
        for (x, y) in w.iter_mut().zip(&v) {
            *x -= a * y;
        }
        if let (Some(b), Some(prev)) = (beta.last(), basis.v.last()) {
            for (x, y) in w.iter_mut().zip(prev) {
                *x -= b * y;
            }
        }
        basis.push(v, mv);
        alpha.push(a);
        locked.orthogonalize(&mut w);
        basis.orthogonalize(&mut w);
        let mw = op.mass_apply(&w);
        let b = dot(&w, &mw).max(0.0).sqrt();
        let m = alpha.len();
        let done = b < 1e-12 || m >= max_steps;
        if m >= next_check || done {
            next_check = m + 10.max(m / 5);
            let t = DMatrix::from_fn(m, m, |i, j| {
                if i == j {
                    alpha[i]
                } else if i + 1 == j {
                    beta[i]
                } else if j + 1 == i {
                    beta[j]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
            let take = need.min(m);
            // |S x - theta M x| = b |y_m| |M v_{m+1}| with |M v|^2 <= |M| <v, v>_M
            let mnorm = norm(&mw) / b.max(f64::MIN_POSITIVE);
            let ok = order[..take].iter().all(|&i| {
                let y = eig.eigenvectors.column(i);
                b * y[m - 1].abs() * mnorm <= 0.1 * opts.tol * mass_norm(&basis, &y)
            });
            if (ok && take == need) || done {
                let mut out = Vec::new();
                for &i in &order[..take] {
                    let y = eig.eigenvectors.column(i);
                    let mut x = vec![0.0; n];
                    for (c, vi) in y.iter().zip(&basis.v) {
                        for (xx, vv) in x.iter_mut().zip(vi) {
                            *xx += c * vv;
                        }
                    }
                    let theta = eig.eigenvalues[i];
                    if residual(op, &x, theta) <= opts.tol {
                        out.push((theta, x));
                    }
                }
                if !out.is_empty() || done {
                    if out.is_empty() && m >= max_steps {
                        return Err(Error::NonConvergence(format!(
                            "Lanczos stalled after {m} steps"
                        )));
                    }
                    return Ok((out, m));
                }
            }
        }
        beta.push(b);
        v = w.iter().map(|x| x / b).collect();
        mv = mw.iter().map(|x| x / b).collect();
    }
}

/// `|M x|` for the Ritz vector `x = V y`.
fn mass_norm(basis: &Basis, y: &nalgebra::DVectorView<f64>) -> f64 {
    let mut mx = vec![0.0; basis.mv[0].len()];
    for (c, mvi) in y.iter().zip(&basis.mv) {
        for (a, b) in mx.iter_mut().zip(mvi) {
            *a += c * b;
        }
    }
    norm(&mx)
}
