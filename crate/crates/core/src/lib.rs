//! Steady state of two ZZ-coupled qubits under dephasing and reset towards
//! `|+>`, and the metrological quantities built on it: quantum Fisher
//! information per particle, the optimal rotation axis, concurrence and
//! negativity.
//!
//! ```
//! use steadyqfi::{closed_form_steady_state, collective_spin_ops, mean_qfi_max, ModelParams};
//!
//! let p = ModelParams::new(14.0, 0.5, 2.5).unwrap();
//! let rho = closed_form_steady_state(&p).unwrap();
//! let qfi = mean_qfi_max(&rho, &collective_spin_ops(2).unwrap()).unwrap();
//! assert!(qfi.mean_f > 1.0);
//! ```

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod metrology;
pub mod output;
pub mod qlinalg;
pub mod sweep;

pub use dynamics::{
    closed_form_steady_state, hamiltonian, liouvillian_apply, liouvillian_superoperator, steady_state,
    DensityMatrix, ModelParams, SteadyStateMethod,
};
pub use entanglement::{concurrence, negativity};
pub use error::{Error, Result};
pub use metrology::{
    c_matrix, classify, collective_spin_ops, mean_qfi_max, optimal_direction, qcrb, qfi_direction, qfi_pure, rotate,
    CollectiveSpin, Direction, Mat3, PhaseEstimate, QfiResult, Usefulness,
};
pub use output::Format;
pub use qlinalg::{ComplexMatrix, HermitianEig};
pub use sweep::{
    evaluate, find_critical_point, run_sweep, run_sweep_serial, CriticalPoint, GRule, SweepRow, SweepSpec, SweepVar,
};

pub use num_complex::Complex64 as C64;
