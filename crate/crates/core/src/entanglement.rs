//! Two-qubit concurrence and negativity.

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::qlinalg::{hermitian_eig, kron, partial_transpose, pauli, trace_norm, ComplexMatrix};

const CLAMP_TOL: f64 = 1e-12;

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::BadDimension { expected: 4, found: rho.dim() });
    }
    Ok(())
}

/// Wootters concurrence `max(0, mu_1 - mu_2 - mu_3 - mu_4)`.
///
/// The `mu_k` are the square roots of the eigenvalues of `rho * rho_tilde`,
/// `rho_tilde = (Y ⊗ Y) rho^* (Y ⊗ Y)`. They are read off the Hermitian
/// matrix `sqrt(rho) rho_tilde sqrt(rho)`, which has the same spectrum.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let yy = kron(&pauli::sigma_y(), &pauli::sigma_y());
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;
    let sqrt_rho = rho.eig().reconstruct_with(|p| p.max(0.0).sqrt().into());
    let product = &(&sqrt_rho * &flipped) * &sqrt_rho;
    let eig = hermitian_eig(&product.hermitian_part())?;

    let mut mu: Vec<f64> = eig
        .eigenvalues()
        .iter()
        .map(|&l| if (-CLAMP_TOL..0.0).contains(&l) { 0.0 } else { l })
        .map(|l| l.max(0.0).sqrt())
        .collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

/// `(||rho^{T_2}||_1 - 1) / 2`; 1/2 for a Bell state. Round-off within
/// 1e-12 of zero is reported as exactly zero.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let pt = partial_transpose(rho.matrix(), 2)?;
    let n = (trace_norm(&pt)? - 1.0) / 2.0;
    Ok(if n.abs() <= CLAMP_TOL { 0.0 } else { n })
}

/// Smallest eigenvalue of the partial transpose; negative iff the state is NPT.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let pt: ComplexMatrix = partial_transpose(rho.matrix(), 2)?;
    Ok(hermitian_eig(&pt)?.eigenvalues()[0])
}
