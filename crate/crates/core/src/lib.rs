//! Statevector simulation of symmetry restoration via phase oracles.
//!
//! The crate builds, for a symmetry operator with known discrete spectrum
//! (parity, particle number, total spin), the projector onto one eigenvalue
//! as a linear combination of phase evolutions, and the associated oracle
//! that marks target-sector states with `e^{i phi}` and everything else
//! with `e^{i mu}`. On top of those it provides:
//!
//! - a dense statevector simulator with bitmask gate kernels and seeded,
//!   binomial shot sampling ([`state`], [`gate`]);
//! - symmetry eigenvalue ladders and exact or Trotterised phase evolutions
//!   ([`symmetry`]);
//! - projected expectation values by term recombination, by the oracle
//!   ratio identity, and by single-ancilla Hadamard tests ([`projection`]);
//! - the simplified LCU circuit with post-selection and the equiprobable
//!   un-preparation that raises its success probability ([`lcu`]);
//! - the picket-fence pairing model with exact sector diagonalisation,
//!   real-time evolution and generating-function energy extraction
//!   ([`pairing`]);
//! - variation-after-projection of the pairing ground state through the
//!   oracle objective ([`qvap`]).

pub mod dense;
pub mod error;
pub mod gate;
pub mod lcu;
pub mod operator;
pub mod optim;
pub mod pairing;
pub mod projection;
pub mod qvap;
pub mod state;
pub mod symmetry;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use gate::{apply_gate, BaseGate, GateKind, GateOp};
pub use operator::{expectation, OperatorHandle};
pub use projection::{
    build_oracle, build_projector, hadamard_test, oracle_phase_scan, LcuDecomposition,
    MeasurementPart, OracleDecomposition, OraclePhases, SampleMode,
};
pub use state::{inner_product, StateVector};
pub use symmetry::{PhaseEvolution, Realization, SymmetryLabel, SymmetryLadder};
