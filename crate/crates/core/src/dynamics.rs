//! Two-qubit master equation with ZZ coupling, local dephasing and reset
//! towards `|+>`, and its steady state.
//!
//! ```text
//! d rho/dt = -i [H, rho]
//!            + (gamma/2) sum_i (Z_i rho Z_i - rho)
//!            + r sum_i (|chi><chi|_i ⊗ tr_i rho - rho),      H = g Z ⊗ Z
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlinalg::{hermitian_eig, kron, partial_trace, pauli, ComplexMatrix, HermitianEig, ONE, ZERO};

const NORMALIZATION_TOL: f64 = 1e-12;
const STATE_TOL: f64 = 1e-10;
/// Second-smallest eigenvalue of `L^dag L` below which the kernel counts as
/// multi-dimensional.
pub const DEGENERACY_GAP: f64 = 1e-10;
/// Residual `max |L(rho)|` every numerical steady state must satisfy.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-9;
/// Integration stops once `max |d rho/dt|` falls below this.
pub const INTEGRATION_TOL: f64 = 1e-12;
pub const MAX_RK4_STEPS: usize = 10_000_000;
const REHERMITIZE_EVERY: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    r: f64,
    gamma: f64,
    g: f64,
    reset_state: [C64; 2],
}

impl ModelParams {
    /// Reset strength `r`, dephasing strength `gamma` and ZZ coupling `g`,
    /// with the `|+>` reset state.
    pub fn new(r: f64, gamma: f64, g: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("gamma", gamma), ("g", g)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(Self { r, gamma, g, reset_state: pauli::plus() })
    }

    pub fn with_reset_state(mut self, state: [C64; 2]) -> Result<Self> {
        let norm = (state[0].norm_sqr() + state[1].norm_sqr()).sqrt();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidParams(format!("reset state has norm {norm}")));
        }
        self.reset_state = state;
        Ok(self)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn reset_state(&self) -> [C64; 2] {
        self.reset_state
    }

    /// True when the reset state equals `|+>` up to a global phase.
    pub fn resets_to_plus(&self) -> bool {
        let plus = pauli::plus();
        let overlap: C64 = plus.iter().zip(&self.reset_state).map(|(a, b)| a.conj() * b).sum();
        (overlap.norm() - 1.0).abs() <= NORMALIZATION_TOL
    }

    fn reset_projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.reset_state)
    }
}

/// A validated two-qubit state with its eigendecomposition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    eig: HermitianEig,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity (all within 1e-10).
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herm = mat.hermiticity_error();
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = mat.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let eig = hermitian_eig(&mat)?;
        let min = eig.eigenvalues()[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat, eig })
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(ComplexMatrix::projector(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64)).expect("I/d is a valid state")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn eig(&self) -> &HermitianEig {
        &self.eig
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

pub fn hamiltonian(p: &ModelParams) -> ComplexMatrix {
    kron(&pauli::sigma_z(), &pauli::sigma_z()).scale_real(p.g)
}

fn embed(op: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    match qubit {
        1 => kron(op, &id),
        _ => kron(&id, op),
    }
}

/// Right-hand side of the master equation for a (not necessarily normalized)
/// two-qubit operator.
pub fn liouvillian_apply(p: &ModelParams, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(Error::BadDimension { expected: 4, found: rho.dim() });
    }
    let h = hamiltonian(p);
    let mut out = h.commutator(rho).scale(C64::new(0.0, -1.0));

    let z = pauli::sigma_z();
    let chi = p.reset_projector();
    for qubit in [1, 2] {
        let zi = embed(&z, qubit);
        let dephased = &(&(&zi * rho) * &zi) - rho;
        out = &out + &dephased.scale_real(p.gamma / 2.0);

        let rest = partial_trace(rho, qubit)?;
        let fresh = match qubit {
            1 => kron(&chi, &rest),
            _ => kron(&rest, &chi),
        };
        out = &out + &(&fresh - rho).scale_real(p.r);
    }
    Ok(out)
}

/// Superoperator of `X rho Y` under column stacking: `Y^T ⊗ X`.
fn sandwich_superop(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    kron(&y.transpose(), x)
}

/// 16x16 matrix `L` with `L vec(rho) = vec(liouvillian_apply(p, rho))`.
///
/// The reset channel is written in Kraus form,
/// `|chi><chi| ⊗ tr_1 rho = sum_k (|chi><k| ⊗ 1) rho (|k><chi| ⊗ 1)`.
pub fn liouvillian_superoperator(p: &ModelParams) -> ComplexMatrix {
    let id4 = ComplexMatrix::identity(4);
    let h = hamiltonian(p);
    let minus_i = C64::new(0.0, -1.0);

    let mut l = &sandwich_superop(&h, &id4) - &sandwich_superop(&id4, &h);
    l = l.scale(minus_i);

    let z = pauli::sigma_z();
    let chi = p.reset_state();
    let id16 = ComplexMatrix::identity(16);
    for qubit in [1, 2] {
        let zi = embed(&z, qubit);
        let deph = &sandwich_superop(&zi, &zi) - &id16;
        l = &l + &deph.scale_real(p.gamma / 2.0);

        let mut reset = id16.scale_real(-1.0);
        for k in 0..2 {
            let mut basis = [ZERO; 2];
            basis[k] = ONE;
            let kraus = embed(&ComplexMatrix::outer(&chi, &basis), qubit);
            reset = &reset + &sandwich_superop(&kraus, &kraus.adjoint());
        }
        l = &l + &reset.scale_real(p.r);
    }
    l
}

/// Steady state from the closed-form matrix elements (valid for `|+>` reset).
///
/// At `r = 0` this returns the `r -> 0` limit `I/4`.
pub fn closed_form_steady_state(p: &ModelParams) -> Result<DensityMatrix> {
    if !p.resets_to_plus() {
        return Err(Error::UnsupportedResetState);
    }
    let (r, gamma, g) = (p.r, p.gamma, p.g);
    if r == 0.0 && gamma == 0.0 && g == 0.0 {
        return Err(Error::DegenerateLimit);
    }
    let mut m = ComplexMatrix::identity(4).scale_real(0.25);
    if r == 0.0 {
        return DensityMatrix::new(m);
    }

    let denom = 2.0 * g * g + (r + gamma / 2.0) * (r + gamma);
    let anti = r * r * (r + gamma / 2.0) / (4.0 * (r + gamma) * denom);
    let upper = C64::new(r + gamma / 2.0, -g) * (r / (4.0 * denom));
    let lower = upper.conj();

    for (i, j) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
        m[(i, j)] = C64::new(anti, 0.0);
    }
    for (i, j) in [(0, 1), (0, 2), (3, 1), (3, 2)] {
        m[(i, j)] = upper;
    }
    for (i, j) in [(1, 0), (1, 3), (2, 0), (2, 3)] {
        m[(i, j)] = lower;
    }
    DensityMatrix::new(m)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SteadyStateMethod {
    #[default]
    ClosedForm,
    Nullspace,
    Integrate,
}

impl SteadyStateMethod {
    pub const ALL: [SteadyStateMethod; 3] = [Self::ClosedForm, Self::Nullspace, Self::Integrate];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::Nullspace => "nullspace",
            Self::Integrate => "integrate",
        }
    }
}

impl fmt::Display for SteadyStateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SteadyStateMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown steady-state method '{s}'")))
    }
}

pub fn steady_state(p: &ModelParams, method: SteadyStateMethod) -> Result<DensityMatrix> {
    match method {
        SteadyStateMethod::ClosedForm => closed_form_steady_state(p),
        SteadyStateMethod::Nullspace => nullspace_steady_state(p),
        SteadyStateMethod::Integrate => integrated_steady_state(p),
    }
}

/// Eigendecomposition of `L^dag L`; errors when its kernel is not one-dimensional.
fn kernel_of(l: &ComplexMatrix) -> Result<HermitianEig> {
    let gram = &l.adjoint() * l;
    let eig = hermitian_eig(&gram)?;
    let gap = eig.eigenvalues()[1];
    if gap < DEGENERACY_GAP {
        return Err(Error::DegenerateSteadyState { gap });
    }
    Ok(eig)
}

fn finish_state(p: &ModelParams, raw: ComplexMatrix) -> Result<DensityMatrix> {
    let tr = raw.trace();
    if tr.norm() < 1e-300 {
        return Err(Error::InvalidState("kernel vector has zero trace".into()));
    }
    let rho = raw.scale(tr.inv()).hermitian_part();
    let residual = liouvillian_apply(p, &rho)?.max_abs();
    if residual > STEADY_RESIDUAL_TOL {
        return Err(Error::NoConvergence { what: "steady-state residual check", iterations: 0 });
    }
    DensityMatrix::new(rho)
}

fn nullspace_steady_state(p: &ModelParams) -> Result<DensityMatrix> {
    let l = liouvillian_superoperator(p);
    let eig = kernel_of(&l)?;
    let raw = ComplexMatrix::unvectorize(&eig.eigenvector(0))?;
    finish_state(p, raw)
}

/// Step size used by the RK4 route.
pub fn rk4_step_size(p: &ModelParams) -> f64 {
    0.01 / p.r.max(p.gamma).max(4.0 * p.g).max(1.0)
}

/// Classical RK4 from `I/4`. The generator is time independent, so one step
/// is the fixed polynomial `1 + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24` in the
/// superoperator; it is assembled once and reused.
fn integrated_steady_state(p: &ModelParams) -> Result<DensityMatrix> {
    let l = liouvillian_superoperator(p);
    kernel_of(&l)?;
    let h = rk4_step_size(p);
    let hl = l.scale_real(h);
    let mut step = ComplexMatrix::identity(16);
    let mut term = ComplexMatrix::identity(16);
    for k in 1..=4 {
        term = (&term * &hl).scale_real(1.0 / k as f64);
        step = &step + &term;
    }

    let mut v = ComplexMatrix::identity(4).scale_real(0.25).vectorize();
    let mut taken = 0;
    while taken < MAX_RK4_STEPS {
        for _ in 0..REHERMITIZE_EVERY {
            v = step.apply(&v);
        }
        taken += REHERMITIZE_EVERY;
        let rho = ComplexMatrix::unvectorize(&v)?.hermitian_part();
        let rate = l.apply(&rho.vectorize()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        v = rho.vectorize();
        if rate < INTEGRATION_TOL {
            return finish_state(p, rho);
        }
    }
    Err(Error::NoConvergence { what: "RK4 integration", iterations: MAX_RK4_STEPS })
}
