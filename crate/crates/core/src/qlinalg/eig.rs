//! Cyclic Jacobi diagonalization of complex Hermitian matrices.
//!
//! Each step applies a unitary plane rotation `U = D R` on the `(p, q)` plane,
//! where `D = diag(1, e^{-i phi})` makes the pivot `a_pq = |a_pq| e^{i phi}`
//! real and `R` is the usual real Jacobi rotation that annihilates it:
//!
//! ```text
//! A <- U^dag A U,   V <- V U
//! ```
//!
//! Sweeps over all pivots repeat until the off-diagonal Frobenius norm drops
//! below `OFF_DIAGONAL_TOL * ||A||_F`.

use num_complex::Complex64 as C64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 100;
const PHASE_CUTOFF: f64 = 1e-12;

/// Eigenvalues in ascending order with paired orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    eigenvalues: Vec<f64>,
    /// Column `k` holds the eigenvector of `eigenvalues[k]`.
    vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary whose columns are the eigenvectors.
    pub fn eigenvector_matrix(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_k f(lambda_k) v_k v_k^dag`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let w = f(self.eigenvalues[k]);
            for i in 0..n {
                let vik = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| C64::new(l, 0.0))
    }
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let deviation = m.hermiticity_error();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence { what: "Jacobi eigensolver", iterations: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));

    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let mut vec = v.column(k);
        fix_phase(&mut vec);
        for (i, z) in vec.into_iter().enumerate() {
            vectors[(i, col)] = z;
        }
    }
    Ok(HermitianEig { eigenvalues, vectors })
}

/// Multiplies `v` by the phase that makes its first non-negligible component
/// real and positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(k) = v.iter().position(|z| z.norm() > PHASE_CUTOFF) {
        let lead = v[k];
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
        v[k] = C64::new(lead.norm(), 0.0);
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    } else {
        0.0
    };
    if t == 0.0 {
        // Pivot is negligible against the diagonal gap.
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let phase = apq.conj() / mag; // e^{-i phi}

    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = phase * (-s);
    let uqq = phase * c;

    let n = a.dim();
    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A <- U^dag A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}
