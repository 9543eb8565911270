//! Symmetry operators as eigenvalue ladders plus executable phase evolutions.
//!
//! A symmetry operator `S` with known discrete spectrum is described by a
//! ladder `(lambda_1, a, {m_alpha})` such that every eigenvalue reads
//! `lambda_alpha = lambda_1 + a * m_alpha` with non-negative integers
//! `m_alpha`. The ladder fixes the phases of the projector decomposition
//! (see [`crate::projection`]); this module supplies ladders for parity,
//! particle number and total spin, together with the phase evolutions
//! `exp(i phi S)` those decompositions are built from.
//!
//! Parity and particle number are diagonal in the computational basis and
//! evolve exactly. The total spin
//!
//!   `S^2 = 3 n / 4 + (1/2) sum_{i<j} (X_i X_j + Y_i Y_j + Z_i Z_j)`
//!
//! is not diagonal; its phase evolution is realised either exactly through
//! the spectral decomposition on the ladder, or as a circuit: the `Z_i Z_j`
//! factors commute and are applied once through the `R_ZZ` construction
//! (CNOT - Rz - CNOT), while the `X_i X_j + Y_i Y_j` factors are
//! Trotterised with `n_t` repetitions of CNOT / controlled-Rx / CNOT pair
//! circuits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{apply_gate, BaseGate, GateOp};
use crate::operator::OperatorHandle;
use crate::state::StateVector;

/// Default Trotter step count for spin phase evolutions.
///
/// First-order Trotterisation of the pair circuits converges as `1/n_t`;
/// 256 steps keep the sector-weight error of an 8-qubit spin projection
/// below 1e-3 (8 steps leave it near 2e-1, see the acceptance suite).
pub const DEFAULT_SPIN_TROTTER_STEPS: u32 = 256;

/// Which symmetry a ladder or evolution refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryLabel {
    Parity,
    Number,
    Spin,
}

impl std::fmt::Display for SymmetryLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SymmetryLabel::Parity => "parity",
            SymmetryLabel::Number => "number",
            SymmetryLabel::Spin => "spin",
        };
        f.write_str(s)
    }
}

/// Eigenvalue structure `(lambda_1, a, {m_alpha})` of a symmetry operator.
#[derive(Clone, Debug)]
pub struct SymmetryLadder {
    label: SymmetryLabel,
    lambda1: f64,
    spacing: f64,
    m_values: Vec<u64>,
}

impl SymmetryLadder {
    /// Parity: eigenvalues `{-1, +1}`, i.e. `lambda_1 = -1`, `a = 2`,
    /// `m = {0, 1}`.
    pub fn parity() -> Self {
        SymmetryLadder {
            label: SymmetryLabel::Parity,
            lambda1: -1.0,
            spacing: 2.0,
            m_values: vec![0, 1],
        }
    }

    /// Particle number on `n_qubits` qubits: eigenvalues `0..=n`, using the
    /// smallest admissible `M = n` (hence `n + 1` phase terms).
    pub fn number(n_qubits: usize) -> Self {
        SymmetryLadder {
            label: SymmetryLabel::Number,
            lambda1: 0.0,
            spacing: 1.0,
            m_values: (0..=n_qubits as u64).collect(),
        }
    }

    /// Total spin `S^2` on `n_qubits` spins-1/2.
    ///
    /// Even `n`: eigenvalues `S(S+1)` for `S = 0..n/2`, written with `a = 2`
    /// so that `m = S(S+1)/2` (0, 1, 3, 6, ...). Odd `n`: `S` half-integer,
    /// `lambda_1 = 3/4` and `a = 1` with `m = S(S+1) - 3/4` (0, 3, 8, ...),
    /// generated programmatically for any size.
    pub fn spin(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1, "spin ladder needs at least one qubit");
        if n_qubits.is_multiple_of(2) {
            let k_q = n_qubits as u64 / 2;
            SymmetryLadder {
                label: SymmetryLabel::Spin,
                lambda1: 0.0,
                spacing: 2.0,
                m_values: (0..=k_q).map(|s| s * (s + 1) / 2).collect(),
            }
        } else {
            let k_q = (n_qubits as u64 - 1) / 2;
            SymmetryLadder {
                label: SymmetryLabel::Spin,
                lambda1: 0.75,
                spacing: 1.0,
                m_values: (0..=k_q).map(|k| k * (k + 2)).collect(),
            }
        }
    }

    /// Ladder with caller-supplied structure. Fails loudly when the
    /// m-values do not start at zero or collide.
    pub fn custom(
        label: SymmetryLabel,
        lambda1: f64,
        spacing: f64,
        m_values: Vec<u64>,
    ) -> Result<Self> {
        if m_values.first() != Some(&0) || m_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateLadder);
        }
        Ok(SymmetryLadder {
            label,
            lambda1,
            spacing,
            m_values,
        })
    }

    pub fn label(&self) -> SymmetryLabel {
        self.label
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    /// Eigenvalue spacing unit `a`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn m_values(&self) -> &[u64] {
        &self.m_values
    }

    /// `M`, the largest m-value.
    pub fn m_max(&self) -> u64 {
        *self.m_values.last().expect("ladder is non-empty")
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.m_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m_values.is_empty()
    }

    /// `lambda_alpha = lambda_1 + a * m_alpha`.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        let m = self
            .m_values
            .get(index)
            .ok_or(Error::LadderIndexOutOfRange {
                index,
                len: self.m_values.len(),
            })?;
        Ok(self.lambda1 + self.spacing * (*m as f64))
    }

    /// All eigenvalues in ladder order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.eigenvalue(i).expect("index in range"))
            .collect()
    }

    /// Index of the eigenvalue closest to `value` within `tol`.
    pub fn index_of_eigenvalue(&self, value: f64, tol: f64) -> Option<usize> {
        (0..self.len()).find(|&i| (self.eigenvalue(i).expect("in range") - value).abs() <= tol)
    }
}

/// How a phase evolution `exp(i phi S)` is realised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    /// Diagonal application for parity/number; spectral (ladder-exact)
    /// application for spin.
    Exact,
    /// First-order Trotter circuit; spin only.
    Trotter { steps: u32 },
}

/// Executable `exp(i phi S)` for one symmetry.
#[derive(Clone, Copy, Debug)]
pub struct PhaseEvolution {
    label: SymmetryLabel,
    realization: Realization,
}

impl PhaseEvolution {
    pub fn exact(label: SymmetryLabel) -> Self {
        PhaseEvolution {
            label,
            realization: Realization::Exact,
        }
    }

    /// Trotterised spin evolution. Parity and particle number are diagonal
    /// and only support the exact realisation.
    pub fn trotter(steps: u32) -> Result<Self> {
        if steps == 0 {
            return Err(Error::ZeroTrotterSteps);
        }
        Ok(PhaseEvolution {
            label: SymmetryLabel::Spin,
            realization: Realization::Trotter { steps },
        })
    }

    pub fn label(&self) -> SymmetryLabel {
        self.label
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    /// Apply `exp(i phi S)` to `state`.
    pub fn apply(&self, state: &mut StateVector, phi: f64) -> Result<()> {
        match (self.label, self.realization) {
            (SymmetryLabel::Parity, _) => {
                parity_phase(state, phi);
                Ok(())
            }
            (SymmetryLabel::Number, _) => {
                number_phase(state, phi);
                Ok(())
            }
            (SymmetryLabel::Spin, Realization::Exact) => spin_phase_exact(state, phi),
            (SymmetryLabel::Spin, Realization::Trotter { steps }) => {
                spin_phase_trotter(state, phi, steps)
            }
        }
    }

    /// The evolution at a fixed angle as an operator handle.
    pub fn operator(&self, phi: f64) -> OperatorHandle {
        let evolution = *self;
        OperatorHandle::unitary(move |state| {
            evolution
                .apply(state, phi)
                .expect("phase evolution valid for this register");
        })
    }
}

/// `exp(i phi * parity)`: even-popcount amplitudes pick up `e^{i phi}`,
/// odd ones `e^{-i phi}`.
pub fn parity_phase(state: &mut StateVector, phi: f64) {
    state.apply_diagonal(|k| if k.count_ones() % 2 == 0 { phi } else { -phi });
}

/// `exp(i phi * N)`: amplitude of `|k>` picks up `e^{i phi popcount(k)}`.
pub fn number_phase(state: &mut StateVector, phi: f64) {
    state.apply_diagonal(|k| phi * f64::from(k.count_ones()));
}

/// `S^2 |psi>` through the permutation-operator sum (non-unitary action).
pub fn spin_squared_apply(state: &StateVector) -> StateVector {
    let n = state.n_qubits();
    let dim = state.dim();
    let constant = (n as f64) * (4.0 - n as f64) / 4.0;
    let mut out = vec![Complex64::ZERO; dim];
    for (k, &amp) in state.amplitudes().iter().enumerate() {
        out[k] += constant * amp;
        for i in 0..n {
            for j in (i + 1)..n {
                let bi = (k >> i) & 1;
                let bj = (k >> j) & 1;
                let swapped = if bi == bj { k } else { k ^ ((1 << i) | (1 << j)) };
                out[swapped] += amp;
            }
        }
    }
    StateVector::from_amplitudes(out)
}

/// Exact `exp(i phi S^2)` through the spectral decomposition on the spin
/// ladder: each ladder component is isolated with the polynomial projector
/// `prod_{beta != alpha} (S^2 - lambda_beta) / (lambda_alpha - lambda_beta)`
/// and re-phased with its eigenvalue. Matrix-free, but still `O(4^n)` work
/// overall, so it is capped at the dense-register limit.
pub fn spin_phase_exact(state: &mut StateVector, phi: f64) -> Result<()> {
    crate::dense::check_dense_size(state.n_qubits())?;
    let ladder = SymmetryLadder::spin(state.n_qubits());
    let eigenvalues = ladder.eigenvalues();
    let dim = state.dim();
    let mut result = vec![Complex64::ZERO; dim];
    for (alpha, &lambda_alpha) in eigenvalues.iter().enumerate() {
        let mut component = state.clone();
        for (beta, &lambda_beta) in eigenvalues.iter().enumerate() {
            if beta == alpha {
                continue;
            }
            let shifted = spin_squared_apply(&component);
            let scale = 1.0 / (lambda_alpha - lambda_beta);
            for (c, s) in component.amplitudes_mut().iter_mut().zip(shifted.amplitudes()) {
                *c = scale * (*s - lambda_beta * *c);
            }
        }
        let factor = Complex64::from_polar(1.0, phi * lambda_alpha);
        for (r, c) in result.iter_mut().zip(component.amplitudes()) {
            *r += factor * *c;
        }
    }
    state.amplitudes_mut().copy_from_slice(&result);
    Ok(())
}

/// Trotterised `exp(i phi S^2)`.
///
/// The constant `3 n / 4` is applied as a global phase, every `Z_i Z_j`
/// factor exactly as an `R_ZZ(-phi)` circuit (these commute with everything
/// else in the sum), and the non-commuting `X_i X_j + Y_i Y_j` factors as
/// `n_t` repetitions of the pair circuit with `theta = -2 phi / n_t`,
/// pairs ordered lexicographically.
pub fn spin_phase_trotter(state: &mut StateVector, phi: f64, n_t: u32) -> Result<()> {
    if n_t == 0 {
        return Err(Error::ZeroTrotterSteps);
    }
    let n = state.n_qubits();
    state.global_phase(phi * 3.0 * (n as f64) / 4.0);
    for i in 0..n {
        for j in (i + 1)..n {
            apply_rzz(state, i, j, -phi)?;
        }
    }
    let theta = -2.0 * phi / f64::from(n_t);
    for _ in 0..n_t {
        for i in 0..n {
            for j in (i + 1)..n {
                apply_xx_yy(state, i, j, theta)?;
            }
        }
    }
    Ok(())
}

/// `R_ZZ(theta) = exp(-i theta Z_i Z_j / 2)` as CNOT - Rz(theta) - CNOT.
fn apply_rzz(state: &mut StateVector, i: usize, j: usize, theta: f64) -> Result<()> {
    apply_gate(state, &GateOp::cnot(i, j))?;
    apply_gate(state, &GateOp::rz(theta, j))?;
    apply_gate(state, &GateOp::cnot(i, j))
}

/// `exp(-i theta (X_i X_j + Y_i Y_j) / 4)` as CNOT / controlled-Rx / CNOT.
fn apply_xx_yy(state: &mut StateVector, i: usize, j: usize, theta: f64) -> Result<()> {
    apply_gate(state, &GateOp::cnot(j, i))?;
    apply_gate(
        state,
        &GateOp::controlled(BaseGate::Rx(theta), &[(i, true)], j),
    )?;
    apply_gate(state, &GateOp::cnot(j, i))
}
