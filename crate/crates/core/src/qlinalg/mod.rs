//! Small dense complex linear algebra for two-qubit problems.
//!
//! Basis order is `|00>, |01>, |10>, |11>` with qubit 1 the left tensor factor.

mod eig;
mod matrix;

pub use eig::{fix_phase, hermitian_eig, HermitianEig, HERMITIAN_TOL, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{pauli, ComplexMatrix, I, ONE, ZERO};

use crate::error::{Error, Result};

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

fn check_two_qubit(m: &ComplexMatrix, qubit: usize) -> Result<()> {
    if m.dim() != 4 {
        return Err(Error::BadDimension { expected: 4, found: m.dim() });
    }
    if qubit != 1 && qubit != 2 {
        return Err(Error::BadQubit(qubit));
    }
    Ok(())
}

/// Traces out `qubit` (1 or 2) of a two-qubit operator.
pub fn partial_trace(m: &ComplexMatrix, qubit: usize) -> Result<ComplexMatrix> {
    check_two_qubit(m, qubit)?;
    let mut out = ComplexMatrix::zeros(2);
    for a in 0..2 {
        for b in 0..2 {
            out[(a, b)] = (0..2)
                .map(|k| match qubit {
                    1 => m[(2 * k + a, 2 * k + b)],
                    _ => m[(2 * a + k, 2 * b + k)],
                })
                .sum();
        }
    }
    Ok(out)
}

/// Transposes the indices of `qubit` (1 or 2) in a two-qubit operator.
pub fn partial_transpose(m: &ComplexMatrix, qubit: usize) -> Result<ComplexMatrix> {
    check_two_qubit(m, qubit)?;
    let mut out = ComplexMatrix::zeros(4);
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let (r, c) = match qubit {
                        1 => ((j1, i2), (i1, j2)),
                        _ => ((i1, j2), (j1, i2)),
                    };
                    out[(2 * i1 + i2, 2 * j1 + j2)] = m[(2 * r.0 + r.1, 2 * c.0 + c.1)];
                }
            }
        }
    }
    Ok(out)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.eigenvalues().iter().map(|l| l.abs()).sum())
}
