//! Scalar reaction-diffusion solves on box cross-sections.

use super::assemble::assemble_scalar;
use super::envelope::EnvelopeCholesky;
use super::mesh::{build_mesh, MeshSpec};
use crate::error::{Error, Result};

/// `<psi, 1>` where `-Delta psi + c psi = 1` on `prod (0, extents[i])`,
/// `psi = 0` on the boundary, discretized with uniform cells.
pub fn reaction_diffusion_load(
    extents: &[f64],
    cells: &[usize],
    degree: usize,
    c: f64,
) -> Result<f64> {
    if extents.len() != cells.len() || extents.is_empty() {
        return Err(Error::InvalidMesh(
            "extents and cells differ in length".into(),
        ));
    }
    if c < 0.0 {
        return Err(Error::InvalidArgument(format!("reaction coefficient {c}")));
    }
    let mesh = build_mesh(extents, &MeshSpec::Cells(cells.to_vec()))?;
    let (k, f, _) = assemble_scalar(&mesh, degree, c)?;
    let psi = EnvelopeCholesky::factor(&k)?.solve(&f);
    Ok(psi.iter().zip(&f).map(|(a, b)| a * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_closed_form() {
        // psi = (1 - cosh(a(x - h)) / cosh(a h)) / a^2, <psi, 1> = (l - 2 tanh(a h) / a) / a^2
        let (l, a): (f64, f64) = (std::f64::consts::PI, 0.7);
        let exact = (l - 2.0 * (a * l / 2.0).tanh() / a) / (a * a);
        let v = reaction_diffusion_load(&[l], &[8], 4, a * a).unwrap();
        assert!((v - exact).abs() < 1e-8 * exact);
    }
}
