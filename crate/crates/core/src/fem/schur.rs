//! Pressure Schur complement `S = sum_k B_k K^-1 B_k^T`.

use rayon::prelude::*;

use super::assemble::OperatorSet;
use super::envelope::EnvelopeCholesky;
use crate::error::Result;

/// Factorized stiffness and pressure mass, ready for repeated applications.
#[derive(Debug, Clone)]
pub struct SchurOperator<'a> {
    pub ops: &'a OperatorSet,
    stiffness: EnvelopeCholesky,
    mass: EnvelopeCholesky,
}

impl<'a> SchurOperator<'a> {
    pub fn new(ops: &'a OperatorSet) -> Result<Self> {
        Ok(Self {
            ops,
            stiffness: EnvelopeCholesky::factor(&ops.stiffness)?,
            mass: EnvelopeCholesky::factor(&ops.pressure_mass)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.ops.ndof_p()
    }

    /// Velocity components `K^-1 B_k^T q`.
    pub fn velocity(&self, q: &[f64]) -> Vec<Vec<f64>> {
        self.ops
            .div
            .par_iter()
            .map(|b| self.stiffness.solve(&b.mul_vec_transposed(q)))
            .collect()
    }

    pub fn apply(&self, q: &[f64]) -> Vec<f64> {
        let u = self.velocity(q);
        let mut out = vec![0.0; q.len()];
        for (b, uk) in self.ops.div.iter().zip(&u) {
            for (o, v) in out.iter_mut().zip(b.mul_vec(uk)) {
                *o += v;
            }
        }
        out
    }

    pub fn mass_apply(&self, q: &[f64]) -> Vec<f64> {
        self.ops.pressure_mass.mul_vec(q)
    }

    pub fn mass_solve(&self, r: &[f64]) -> Vec<f64> {
        self.mass.solve(r)
    }
}

/// One-shot application of the Schur complement.
pub fn schur_apply(ops: &OperatorSet, q: &[f64]) -> Result<Vec<f64>> {
    Ok(SchurOperator::new(ops)?.apply(q))
}

/// `q - (<q, 1>_M / <1, 1>_M) 1`
pub fn project_mean_zero(ops: &OperatorSet, q: &[f64]) -> Vec<f64> {
    let m1 = ops.pressure_mass.mul_vec(&vec![1.0; q.len()]);
    let c: f64 = q.iter().zip(&m1).map(|(a, b)| a * b).sum::<f64>() / m1.iter().sum::<f64>();
    q.iter().map(|v| v - c).collect()
}
