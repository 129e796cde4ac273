//! Quantum Fisher information for SU(2) rotations generated by the collective
//! spin `J_n = n_x J_x + n_y J_y + n_z J_z`, `J_a = 1/2 sum_i sigma_a^(i)`.
//!
//! For `rho = sum_i p_i |i><i|` the directional QFI is the quadratic form
//! `F(n) = n^T C n` with
//!
//! ```text
//! C_kl = sum_{i != j} (p_i - p_j)^2 / (p_i + p_j)
//!          * (<i|J_k|j><j|J_l|i> + <i|J_l|j><j|J_k|i>)
//! ```
//!
//! and the best achievable value per particle is `lambda_max(C) / N`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::qlinalg::{hermitian_eig, kron, pauli, ComplexMatrix, HermitianEig};

/// Pairs with `p_i + p_j` at or below this are dropped from the spectral sums.
pub const EIGENVALUE_SUM_CUTOFF: f64 = 1e-12;
/// Largest imaginary residue tolerated on an entry of `C`.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-10;
/// Eigenvalues of `C` within this (relative) distance of the maximum are tied.
const TIE_TOL: f64 = 1e-10;
const MAX_PARTICLES: usize = 4;

/// A unit vector in R^3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction([f64; 3]);

impl Direction {
    /// Normalizes `(x, y, z)`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroDirection);
        }
        Ok(Self([x / norm, y / norm, z / norm]))
    }

    pub const X: Direction = Direction([1.0, 0.0, 0.0]);
    pub const Y: Direction = Direction([0.0, 1.0, 0.0]);
    pub const Z: Direction = Direction([0.0, 0.0, 1.0]);

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// Zeroes components below `1e-12` in magnitude, renormalizes and makes
    /// the first remaining component positive.
    fn canonical(v: [f64; 3]) -> Result<Self> {
        let snapped = v.map(|c| if c.abs() <= UNIT_TOL { 0.0 } else { c });
        let mut d = Self::new(snapped[0], snapped[1], snapped[2])?;
        if let Some(lead) = d.0.iter().copied().find(|c| *c != 0.0) {
            if lead < 0.0 {
                d.0 = d.0.map(|c| -c);
            }
        }
        Ok(d)
    }
}

/// Collective angular momentum operators of `n_particles` spin-1/2 particles.
#[derive(Clone, Debug)]
pub struct CollectiveSpin {
    ops: [ComplexMatrix; 3],
    n_particles: usize,
}

impl CollectiveSpin {
    pub fn jx(&self) -> &ComplexMatrix {
        &self.ops[0]
    }

    pub fn jy(&self) -> &ComplexMatrix {
        &self.ops[1]
    }

    pub fn jz(&self) -> &ComplexMatrix {
        &self.ops[2]
    }

    pub fn components(&self) -> &[ComplexMatrix; 3] {
        &self.ops
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// `J_n = n_x J_x + n_y J_y + n_z J_z`
    pub fn along(&self, dir: &Direction) -> ComplexMatrix {
        let [a, b, c] = dir.components();
        let mut out = self.ops[0].scale_real(a);
        out = &out + &self.ops[1].scale_real(b);
        &out + &self.ops[2].scale_real(c)
    }
}

pub fn collective_spin_ops(n_particles: usize) -> Result<CollectiveSpin> {
    if n_particles == 0 || n_particles > MAX_PARTICLES {
        return Err(Error::TooManyParticles(n_particles));
    }
    let paulis = [pauli::sigma_x(), pauli::sigma_y(), pauli::sigma_z()];
    let dim = 1usize << n_particles;
    let ops = paulis.map(|sigma| {
        let mut total = ComplexMatrix::zeros(dim);
        for site in 0..n_particles {
            let mut term = if site == 0 { sigma.clone() } else { ComplexMatrix::identity(2) };
            for k in 1..n_particles {
                let factor = if k == site { sigma.clone() } else { ComplexMatrix::identity(2) };
                term = kron(&term, &factor);
            }
            total = &total + &term;
        }
        total.scale_real(0.5)
    });
    Ok(CollectiveSpin { ops, n_particles })
}

fn check_dims(rho: &DensityMatrix, spin: &CollectiveSpin) -> Result<()> {
    if rho.dim() != spin.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: spin.dim() });
    }
    Ok(())
}

/// `V^dag A V` for the eigenvector matrix `V` of `rho`.
fn in_eigenbasis(eig: &HermitianEig, op: &ComplexMatrix) -> ComplexMatrix {
    let v = eig.eigenvector_matrix();
    &(&v.adjoint() * op) * v
}

/// Spectral weights `(p_i - p_j)^2 / (p_i + p_j)`, zero on the diagonal and
/// for pairs below the cutoff.
fn spectral_weights(eig: &HermitianEig) -> Vec<Vec<f64>> {
    let p = eig.eigenvalues();
    let n = p.len();
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let sum = p[i] + p[j];
            if i != j && sum > EIGENVALUE_SUM_CUTOFF {
                w[i][j] = (p[i] - p[j]).powi(2) / sum;
            }
        }
    }
    w
}

/// QFI of `rho` for rotations about `dir`.
pub fn qfi_direction(rho: &DensityMatrix, dir: &Direction, spin: &CollectiveSpin) -> Result<f64> {
    check_dims(rho, spin)?;
    let jn = in_eigenbasis(rho.eig(), &spin.along(dir));
    let w = spectral_weights(rho.eig());
    let mut f = 0.0;
    for (i, row) in w.iter().enumerate() {
        for (j, &wij) in row.iter().enumerate() {
            if wij != 0.0 {
                f += 2.0 * wij * jn[(i, j)].norm_sqr();
            }
        }
    }
    Ok(f)
}

/// Real symmetric 3x3 matrix stored row-major.
pub type Mat3 = [[f64; 3]; 3];

pub fn c_matrix(rho: &DensityMatrix, spin: &CollectiveSpin) -> Result<Mat3> {
    check_dims(rho, spin)?;
    let js = spin.components().clone().map(|j| in_eigenbasis(rho.eig(), &j));
    let w = spectral_weights(rho.eig());
    let mut c = [[0.0; 3]; 3];
    for k in 0..3 {
        for l in k..3 {
            let mut acc = C64::new(0.0, 0.0);
            for (i, row) in w.iter().enumerate() {
                for (j, &wij) in row.iter().enumerate() {
                    if wij != 0.0 {
                        let term = js[k][(i, j)] * js[l][(j, i)] + js[l][(i, j)] * js[k][(j, i)];
                        acc += term * wij;
                    }
                }
            }
            if acc.im.abs() > IMAGINARY_RESIDUE_TOL {
                return Err(Error::NotHermitian { deviation: acc.im.abs() });
            }
            c[k][l] = acc.re;
            c[l][k] = acc.re;
        }
    }
    Ok(c)
}

/// `4 (<J_n^2> - <J_n>^2)` for a normalized pure state.
pub fn qfi_pure(psi: &[C64], dir: &Direction, spin: &CollectiveSpin) -> Result<f64> {
    if psi.len() != spin.dim() {
        return Err(Error::DimensionMismatch { left: psi.len(), right: spin.dim() });
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let jn = spin.along(dir);
    let jpsi = jn.apply(psi);
    let mean: f64 = psi.iter().zip(&jpsi).map(|(a, b)| (a.conj() * b).re).sum();
    let second: f64 = jpsi.iter().map(|z| z.norm_sqr()).sum();
    Ok(4.0 * (second - mean * mean))
}

/// The maximal QFI over rotation axes and the axis achieving it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QfiResult {
    pub c: Mat3,
    pub lambda_max: f64,
    pub f_max: f64,
    /// QFI per particle.
    pub mean_f: f64,
    pub opt_dir: Direction,
}

fn mat3_eig(c: &Mat3) -> Result<HermitianEig> {
    let deviation = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| (c[i][j] - c[j][i]).abs())
        .fold(0.0, f64::max);
    if deviation > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    hermitian_eig(&ComplexMatrix::from_real_rows(c))
}

pub fn mean_qfi_max(rho: &DensityMatrix, spin: &CollectiveSpin) -> Result<QfiResult> {
    let c = c_matrix(rho, spin)?;
    let eig = mat3_eig(&c)?;
    let lambda_max = eig.eigenvalues()[2].max(0.0);
    let opt_dir = optimal_direction_from(&eig)?;
    Ok(QfiResult {
        c,
        lambda_max,
        f_max: lambda_max,
        mean_f: lambda_max / spin.n_particles() as f64,
        opt_dir,
    })
}

/// Unit eigenvector of the largest eigenvalue of `c`.
///
/// Among tied eigenvalues the candidate with the largest `|n_x|`, then `|n_y|`
/// wins; the first non-negligible component is made positive.
pub fn optimal_direction(c: &Mat3) -> Result<Direction> {
    optimal_direction_from(&mat3_eig(c)?)
}

fn optimal_direction_from(eig: &HermitianEig) -> Result<Direction> {
    let vals = eig.eigenvalues();
    let top = vals[2];
    let tol = TIE_TOL * top.abs().max(1.0);
    let key = |v: &[f64; 3]| (v[0].abs(), v[1].abs());
    let mut best: Option<[f64; 3]> = None;
    for k in (0..3).filter(|&k| top - vals[k] <= tol) {
        let col = eig.eigenvector(k);
        let v = [col[0].re, col[1].re, col[2].re];
        best = match best {
            None => Some(v),
            Some(b) => {
                let (bx, by) = key(&b);
                let (vx, vy) = key(&v);
                let better = vx > bx + UNIT_TOL || ((vx - bx).abs() <= UNIT_TOL && vy > by + UNIT_TOL);
                Some(if better { v } else { b })
            }
        };
    }
    Direction::canonical(best.expect("3x3 spectrum is non-empty"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Usefulness {
    WithinShotNoise,
    SubShotNoiseUseful,
}

/// Whether a QFI per particle beats the separable bound of 1.
pub fn classify(mean_f: f64, n_particles: usize) -> Result<Usefulness> {
    if mean_f.is_nan() || mean_f < -1e-9 || mean_f > n_particles as f64 + 1e-9 {
        return Err(Error::OutOfRange { mean_f, n_particles });
    }
    Ok(if mean_f > 1.0 + 1e-12 {
        Usefulness::SubShotNoiseUseful
    } else {
        Usefulness::WithinShotNoise
    })
}

/// `U rho U^dag` with `U = exp(i phi J_n)`.
pub fn rotate(rho: &DensityMatrix, dir: &Direction, phi: f64, spin: &CollectiveSpin) -> Result<DensityMatrix> {
    check_dims(rho, spin)?;
    let gen = hermitian_eig(&spin.along(dir))?;
    let u = gen.reconstruct_with(|m| C64::from_polar(1.0, phi * m));
    let out = &(&u * rho.matrix()) * &u.adjoint();
    DensityMatrix::new(out.hermitian_part())
}

/// Quantum Cramér-Rao bound on the phase uncertainty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    pub n_measurements: u64,
    pub delta_phi: f64,
}

pub fn qcrb(f: f64, n_measurements: u64) -> Result<PhaseEstimate> {
    if !f.is_finite() || f <= 0.0 {
        return Err(Error::NonPositiveF(f));
    }
    if n_measurements == 0 {
        return Err(Error::NoMeasurements);
    }
    Ok(PhaseEstimate { n_measurements, delta_phi: 1.0 / (n_measurements as f64 * f).sqrt() })
}
