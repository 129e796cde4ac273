//! One-dimensional parameter sweeps over the steady state, plus location of
//! the point where the optimal rotation axis jumps between the x axis and the
//! yz plane.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{steady_state, DensityMatrix, ModelParams, SteadyStateMethod};
use crate::entanglement::{concurrence, negativity};
use crate::error::{Error, Result};
use crate::metrology::{collective_spin_ops, mean_qfi_max, Mat3};

/// Bisection stops once the bracket is at most this wide.
pub const CRITICAL_BRACKET: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    R,
    Gamma,
}

impl SweepVar {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVar::R => "r",
            SweepVar::Gamma => "gamma",
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" => Ok(SweepVar::R),
            "gamma" => Ok(SweepVar::Gamma),
            other => Err(Error::InvalidSweep(format!("cannot vary '{other}' (expected r or gamma)"))),
        }
    }
}

/// How the coupling `g` is chosen at each point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GRule {
    Fixed(f64),
    /// `g = k * gamma`
    Ratio(f64),
}

impl GRule {
    pub fn coupling(&self, gamma: f64) -> f64 {
        match *self {
            GRule::Fixed(g) => g,
            GRule::Ratio(k) => k * gamma,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub vary: SweepVar,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Value of whichever of `r`, `gamma` is not varied.
    pub fixed: f64,
    pub g_rule: GRule,
    pub method: SteadyStateMethod,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSweep(msg));
        if !self.from.is_finite() || !self.to.is_finite() {
            return bad("range bounds must be finite".into());
        }
        if self.from >= self.to {
            return bad(format!("need from < to, got from={} to={}", self.from, self.to));
        }
        if self.from < 0.0 {
            return bad(format!("{} must be non-negative, got {}", self.vary, self.from));
        }
        if self.steps < 2 {
            return bad(format!("need at least 2 steps, got {}", self.steps));
        }
        if !self.fixed.is_finite() || self.fixed < 0.0 {
            return bad(format!("fixed value must be finite and non-negative, got {}", self.fixed));
        }
        let g = match self.g_rule {
            GRule::Fixed(g) | GRule::Ratio(g) => g,
        };
        if !g.is_finite() || g < 0.0 {
            return bad(format!("coupling rule value must be finite and non-negative, got {g}"));
        }
        Ok(())
    }

    /// Uniform grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|k| {
                if k == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / n as f64
                }
            })
            .collect()
    }

    /// Model parameters with the varied quantity set to `value`.
    pub fn params_at(&self, value: f64) -> Result<ModelParams> {
        let (r, gamma) = match self.vary {
            SweepVar::R => (value, self.fixed),
            SweepVar::Gamma => (self.fixed, value),
        };
        ModelParams::new(r, gamma, self.g_rule.coupling(gamma))
    }
}

/// Everything derived at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    pub gamma: f64,
    pub g: f64,
    #[serde(rename = "mean_qfi")]
    pub mean_f: f64,
    pub lambda_x: f64,
    pub lambda_yz_hi: f64,
    pub lambda_yz_lo: f64,
    pub concurrence: f64,
    pub negativity: f64,
    pub opt_nx: f64,
    pub opt_ny: f64,
    pub opt_nz: f64,
}

/// Eigenvalues `(lambda_x, yz_hi, yz_lo)` of a C matrix with the block form
/// `C_xy = C_xz = 0`.
pub fn branch_eigenvalues(c: &Mat3) -> (f64, f64, f64) {
    let mean = 0.5 * (c[1][1] + c[2][2]);
    let half_diff = 0.5 * (c[1][1] - c[2][2]);
    let radius = half_diff.hypot(c[1][2]);
    (c[0][0], mean + radius, mean - radius)
}

/// Evaluates one point from an already computed steady state.
pub fn row_from_state(p: &ModelParams, rho: &DensityMatrix) -> Result<SweepRow> {
    let spin = collective_spin_ops(2)?;
    let qfi = mean_qfi_max(rho, &spin)?;
    let (lambda_x, lambda_yz_hi, lambda_yz_lo) = branch_eigenvalues(&qfi.c);
    let [opt_nx, opt_ny, opt_nz] = qfi.opt_dir.components();
    Ok(SweepRow {
        r: p.r(),
        gamma: p.gamma(),
        g: p.g(),
        mean_f: qfi.mean_f,
        lambda_x,
        lambda_yz_hi,
        lambda_yz_lo,
        concurrence: concurrence(rho)?,
        negativity: negativity(rho)?,
        opt_nx,
        opt_ny,
        opt_nz,
    })
}

pub fn evaluate(p: &ModelParams, method: SteadyStateMethod) -> Result<SweepRow> {
    row_from_state(p, &steady_state(p, method)?)
}

fn evaluate_at(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    spec.params_at(value)
        .and_then(|p| evaluate(&p, spec.method))
        .map_err(|e| Error::AtPoint { param: spec.vary.name(), value, source: Box::new(e) })
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid().into_par_iter().map(|v| evaluate_at(spec, v)).collect()
}

/// Single-threaded [`run_sweep`].
pub fn run_sweep_serial(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid().into_iter().map(|v| evaluate_at(spec, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub vary: SweepVar,
    pub value: f64,
    /// Half-width of the final bracket around `value`.
    pub bracket_width: f64,
}

/// `lambda_x - lambda_yz_hi` at a point.
fn branch_gap(spec: &SweepSpec, value: f64) -> Result<f64> {
    let row = evaluate_at(spec, value)?;
    Ok(row.lambda_x - row.lambda_yz_hi)
}

/// Bisects on the sign of `lambda_x - lambda_yz_hi` over `[spec.from, spec.to]`.
/// `spec.steps` is ignored.
pub fn find_critical_point(spec: &SweepSpec) -> Result<CriticalPoint> {
    let probe = SweepSpec { steps: 2, ..spec.clone() };
    probe.validate()?;
    let (mut lo, mut hi) = (spec.from, spec.to);
    let mut f_lo = branch_gap(spec, lo)?;
    let f_hi = branch_gap(spec, hi)?;
    if f_lo == 0.0 || f_hi == 0.0 || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > CRITICAL_BRACKET {
        let mid = 0.5 * (lo + hi);
        let f_mid = branch_gap(spec, mid)?;
        if f_mid == 0.0 {
            return Ok(CriticalPoint { vary: spec.vary, value: mid, bracket_width: 0.0 });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(CriticalPoint { vary: spec.vary, value: 0.5 * (lo + hi), bracket_width: 0.5 * (hi - lo) })
}
