//! LCU projectors, phase oracles and projected expectation values.
//!
//! Given a symmetry ladder, the projector onto the eigenvalue
//! `lambda_alpha = lambda_1 + a m_alpha` is a linear combination of
//! unitaries
//!
//!   `P_alpha = sum_{k=0}^{M} alpha_k exp(i phi_k S)`,
//!   `alpha_k = exp(-i phi_k (xi_alpha + lambda_1)) / (M+1)`,
//!   `phi_k   = 2 pi k / (a (M+1))`,
//!
//! which reduces to the discrete delta `(1/(M+1)) sum_k e^{2 pi i k (m-n)/(M+1)}`
//! on the spectrum. The associated oracle
//!
//!   `O_alpha = e^{i mu} I + (e^{i phi} - e^{i mu}) P_alpha`
//!
//! multiplies target-sector states by `e^{i phi}` and everything else by
//! `e^{i mu}`, and stays unitary, so it can sit under a control in a
//! Hadamard test. Projected expectation values are evaluated three ways:
//! term-by-term recombination of `<A exp(i phi_k S)>`, the oracle ratio
//! `(<A O> - e^{i mu} <A>) / (<O> - e^{i mu})`, and single-ancilla Hadamard
//! tests (exact bias or shot-sampled counts).

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::gate::{apply_gate, GateOp};
use crate::operator::OperatorHandle;
use crate::state::StateVector;
use crate::symmetry::{PhaseEvolution, SymmetryLabel, SymmetryLadder};

/// Below this magnitude a projected norm (or oracle-ratio denominator) is
/// treated as an empty target sector.
pub const DEFAULT_SECTOR_FLOOR: f64 = 1e-10;

/// The pair of phases `(phi, mu)` parameterising a generalised oracle:
/// target-sector states acquire `e^{i phi}`, all others `e^{i mu}`.
#[derive(Clone, Copy, Debug)]
pub struct OraclePhases {
    phi: f64,
    mu: f64,
}

impl OraclePhases {
    /// Requires `e^{i phi} != e^{i mu}`; equal phases make the oracle
    /// proportional to the identity and every ratio formula degenerate.
    pub fn new(phi: f64, mu: f64) -> Result<Self> {
        let separation = (Complex64::from_polar(1.0, phi) - Complex64::from_polar(1.0, mu)).norm();
        if separation < 1e-12 {
            return Err(Error::DegenerateOracle);
        }
        Ok(OraclePhases { phi, mu })
    }

    /// `(0, pi/2)`: for Hermitian observables a single real-part Hadamard
    /// test per expectation value suffices.
    pub fn hermitian_default() -> Self {
        OraclePhases {
            phi: 0.0,
            mu: FRAC_PI_2,
        }
    }

    /// The Grover-style marking `(pi, 0)`.
    pub fn grover() -> Self {
        OraclePhases {
            phi: std::f64::consts::PI,
            mu: 0.0,
        }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn good_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phi)
    }

    pub fn bad_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.mu)
    }
}

impl Default for OraclePhases {
    fn default() -> Self {
        Self::hermitian_default()
    }
}

/// A projector as an ordered list of `(coefficient, phase)` pairs over one
/// symmetry's phase evolution.
#[derive(Clone, Debug)]
pub struct LcuDecomposition {
    terms: Vec<(Complex64, f64)>,
    symmetry: SymmetryLabel,
    target_m: u64,
}

impl LcuDecomposition {
    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }

    pub fn symmetry(&self) -> SymmetryLabel {
        self.symmetry
    }

    /// The `m_alpha` selected by this projector.
    pub fn target_m(&self) -> u64 {
        self.target_m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `P|psi>` by applying every phase evolution and recombining.
    pub fn apply(&self, state: &StateVector, evolver: &PhaseEvolution) -> Result<StateVector> {
        let mut out = StateVector::from_amplitudes(vec![Complex64::ZERO; state.dim()]);
        for &(coefficient, phi_k) in &self.terms {
            let mut term = state.clone();
            evolver.apply(&mut term, phi_k)?;
            for (acc, amp) in out.amplitudes_mut().iter_mut().zip(term.amplitudes()) {
                *acc += coefficient * amp;
            }
        }
        Ok(out)
    }

    /// The projector as a (non-unitary) operator handle.
    pub fn operator(&self, evolver: &PhaseEvolution) -> OperatorHandle {
        let decomposition = self.clone();
        let evolver = *evolver;
        OperatorHandle::non_unitary(move |state| {
            let projected = decomposition
                .apply(state, &evolver)
                .expect("projector evolution valid for this register");
            state.amplitudes_mut().copy_from_slice(projected.amplitudes());
        })
    }
}

/// Build the `M+1`-term projector onto ladder eigenvalue `alpha`.
pub fn build_projector(ladder: &SymmetryLadder, alpha: usize) -> Result<LcuDecomposition> {
    if alpha >= ladder.len() {
        return Err(Error::LadderIndexOutOfRange {
            index: alpha,
            len: ladder.len(),
        });
    }
    let m_alpha = ladder.m_values()[alpha];
    let m_max = ladder.m_max();
    let order = m_max as f64 + 1.0;
    let xi_alpha = ladder.spacing() * m_alpha as f64;
    let shift = xi_alpha + ladder.lambda1();
    let terms = (0..=m_max)
        .map(|k| {
            let phi_k = 2.0 * std::f64::consts::PI * k as f64 / (ladder.spacing() * order);
            let coefficient = Complex64::from_polar(1.0 / order, -phi_k * shift);
            (coefficient, phi_k)
        })
        .collect();
    Ok(LcuDecomposition {
        terms,
        symmetry: ladder.label(),
        target_m: m_alpha,
    })
}

/// An oracle as an LCU over the same phase evolutions as its projector.
#[derive(Clone, Debug)]
pub struct OracleDecomposition {
    terms: Vec<(Complex64, f64)>,
    phases: OraclePhases,
    base: LcuDecomposition,
}

impl OracleDecomposition {
    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }

    pub fn phases(&self) -> OraclePhases {
        self.phases
    }

    pub fn base(&self) -> &LcuDecomposition {
        &self.base
    }

    pub fn symmetry(&self) -> SymmetryLabel {
        self.base.symmetry()
    }

    /// `O|psi>` by linearity over the phase-evolution terms.
    pub fn apply(&self, state: &StateVector, evolver: &PhaseEvolution) -> Result<StateVector> {
        let mut out = StateVector::from_amplitudes(vec![Complex64::ZERO; state.dim()]);
        for &(coefficient, phi_k) in &self.terms {
            let mut term = state.clone();
            evolver.apply(&mut term, phi_k)?;
            for (acc, amp) in out.amplitudes_mut().iter_mut().zip(term.amplitudes()) {
                *acc += coefficient * amp;
            }
        }
        Ok(out)
    }

    /// The oracle as a unitary operator handle (its eigenvalues are
    /// `e^{i phi}` and `e^{i mu}`), suitable for controlled insertion.
    pub fn operator(&self, evolver: &PhaseEvolution) -> OperatorHandle {
        let decomposition = self.clone();
        let evolver = *evolver;
        OperatorHandle::unitary(move |state| {
            let marked = decomposition
                .apply(state, &evolver)
                .expect("oracle evolution valid for this register");
            state.amplitudes_mut().copy_from_slice(marked.amplitudes());
        })
    }
}

/// `O = e^{i mu} I + (e^{i phi} - e^{i mu}) P`, term by term:
/// `beta_0 = e^{i mu} + (e^{i phi} - e^{i mu}) alpha_0`,
/// `beta_k = (e^{i phi} - e^{i mu}) alpha_k` for `k != 0`.
pub fn build_oracle(projector: &LcuDecomposition, phases: OraclePhases) -> OracleDecomposition {
    let good = phases.good_factor();
    let bad = phases.bad_factor();
    let weight = good - bad;
    let terms = projector
        .terms()
        .iter()
        .enumerate()
        .map(|(k, &(alpha_k, phi_k))| {
            let beta_k = if k == 0 {
                bad + weight * alpha_k
            } else {
                weight * alpha_k
            };
            (beta_k, phi_k)
        })
        .collect();
    OracleDecomposition {
        terms,
        phases,
        base: projector.clone(),
    }
}

/// Numerator and norm of a projected expectation value.
#[derive(Clone, Copy, Debug)]
pub struct ProjectedExpectation {
    /// `sum_k alpha_k <A exp(i phi_k S)>`.
    pub numerator: Complex64,
    /// `sum_k alpha_k <exp(i phi_k S)>`, i.e. the sector weight `<P>`.
    pub norm: Complex64,
}

impl ProjectedExpectation {
    /// The projected value `numerator / norm`.
    pub fn value(&self) -> Complex64 {
        self.numerator / self.norm
    }
}

/// Term-by-term recombination route with the default sector floor.
pub fn projected_expectation_lcu(
    state: &StateVector,
    observable: &OperatorHandle,
    projector: &LcuDecomposition,
    evolver: &PhaseEvolution,
) -> Result<ProjectedExpectation> {
    projected_expectation_lcu_with_floor(state, observable, projector, evolver, DEFAULT_SECTOR_FLOOR)
}

/// Term-by-term recombination: `<A P> = sum_k alpha_k <A exp(i phi_k S)>`
/// and `<P> = sum_k alpha_k <exp(i phi_k S)>`, each term an independently
/// measurable expectation value. Errors with `EmptySector` when `|<P>|`
/// falls below `floor`.
pub fn projected_expectation_lcu_with_floor(
    state: &StateVector,
    observable: &OperatorHandle,
    projector: &LcuDecomposition,
    evolver: &PhaseEvolution,
    floor: f64,
) -> Result<ProjectedExpectation> {
    let mut numerator = Complex64::ZERO;
    let mut norm = Complex64::ZERO;
    for &(coefficient, phi_k) in projector.terms() {
        let mut evolved = state.clone();
        evolver.apply(&mut evolved, phi_k)?;
        norm += coefficient * state.inner_product(&evolved)?;
        let mut observed = evolved;
        observable.apply_to(&mut observed);
        numerator += coefficient * state.inner_product(&observed)?;
    }
    if norm.norm() < floor {
        return Err(Error::EmptySector {
            magnitude: norm.norm(),
            floor,
        });
    }
    Ok(ProjectedExpectation { numerator, norm })
}

/// Oracle-ratio route: `<A P> / <P> = (<A O> - e^{i mu} <A>) / (<O> - e^{i mu})`,
/// independent of the retained `(phi, mu)`.
pub fn projected_expectation_oracle_ratio(
    state: &StateVector,
    observable: &OperatorHandle,
    oracle: &OracleDecomposition,
    evolver: &PhaseEvolution,
) -> Result<Complex64> {
    projected_expectation_oracle_ratio_with_floor(
        state,
        observable,
        oracle,
        evolver,
        DEFAULT_SECTOR_FLOOR,
    )
}

pub fn projected_expectation_oracle_ratio_with_floor(
    state: &StateVector,
    observable: &OperatorHandle,
    oracle: &OracleDecomposition,
    evolver: &PhaseEvolution,
    floor: f64,
) -> Result<Complex64> {
    let mut oracle_expectation = Complex64::ZERO;
    let mut observable_oracle = Complex64::ZERO;
    for &(beta_k, phi_k) in oracle.terms() {
        let mut evolved = state.clone();
        evolver.apply(&mut evolved, phi_k)?;
        oracle_expectation += beta_k * state.inner_product(&evolved)?;
        let mut observed = evolved;
        observable.apply_to(&mut observed);
        observable_oracle += beta_k * state.inner_product(&observed)?;
    }
    let mut observed = state.clone();
    observable.apply_to(&mut observed);
    let observable_expectation = state.inner_product(&observed)?;

    let bad = oracle.phases().bad_factor();
    let denominator = oracle_expectation - bad;
    if denominator.norm() < floor {
        return Err(Error::EmptySector {
            magnitude: denominator.norm(),
            floor,
        });
    }
    Ok((observable_oracle - bad * observable_expectation) / denominator)
}

/// Keep only the amplitudes with `popcount == particles`, returning the
/// (unnormalised) masked state and its weight. Classical reference route
/// for particle-number projection.
pub fn mask_number_sector(state: &StateVector, particles: u32) -> (StateVector, f64) {
    let mut masked = state.clone();
    for (k, amp) in masked.amplitudes_mut().iter_mut().enumerate() {
        if k.count_ones() != particles {
            *amp = Complex64::ZERO;
        }
    }
    let weight = masked.norm_sqr();
    (masked, weight)
}

/// Normalised classical projection onto a particle number.
pub fn project_number_classical(state: &StateVector, particles: u32) -> Result<StateVector> {
    let (mut masked, weight) = mask_number_sector(state, particles);
    if weight < DEFAULT_SECTOR_FLOOR {
        return Err(Error::EmptySector {
            magnitude: weight,
            floor: DEFAULT_SECTOR_FLOOR,
        });
    }
    masked.normalize();
    Ok(masked)
}

/// Which part of the expectation value a Hadamard test estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementPart {
    Real,
    Imag,
}

/// Exact bias or seeded shot sampling.
#[derive(Clone, Copy, Debug)]
pub enum SampleMode {
    Exact,
    Shots { n_shots: u64, seed: u64 },
}

/// Outcome of a Hadamard test.
#[derive(Clone, Copy, Debug)]
pub struct HadamardOutcome {
    /// `p0 - p1`: exact in `Exact` mode, `(count0 - count1)/n_shots` in
    /// shot mode.
    pub estimate: f64,
    /// `(count0, count1)` in shot mode. Every shot lands in one of the two
    /// counters; nothing is discarded.
    pub counts: Option<(u64, u64)>,
}

/// Single-ancilla Hadamard test.
///
/// A fresh ancilla is appended on top of the register, Hadamard-rotated,
/// (for the imaginary part) phase-shifted by `-pi/2`, and used to control
/// the listed operators in order; after the closing Hadamard the outcome
/// bias `p0 - p1` equals the real (or imaginary) part of
/// `<psi| op_last ... op_first |psi>`.
pub fn hadamard_test(
    state: &StateVector,
    controlled_ops: &[OperatorHandle],
    part: MeasurementPart,
    mode: SampleMode,
) -> Result<HadamardOutcome> {
    if controlled_ops.iter().any(|op| !op.is_unitary()) {
        return Err(Error::NonUnitaryOperator);
    }
    let n = state.n_qubits();
    let ancilla = n;
    let mut register = state.with_appended_zeros(1);
    apply_gate(&mut register, &GateOp::h(ancilla))?;
    if part == MeasurementPart::Imag {
        apply_gate(&mut register, &GateOp::phase(-FRAC_PI_2, ancilla))?;
    }
    // the ancilla is the top bit, so the ancilla=1 branch is the contiguous
    // upper half of the amplitude buffer
    let dim = 1usize << n;
    for op in controlled_ops {
        let branch: Vec<Complex64> = register.amplitudes()[dim..].to_vec();
        let mut branch_state = StateVector::from_amplitudes(branch);
        op.apply_to(&mut branch_state);
        register.amplitudes_mut()[dim..].copy_from_slice(branch_state.amplitudes());
    }
    apply_gate(&mut register, &GateOp::h(ancilla))?;

    match mode {
        SampleMode::Exact => {
            let p1 = register.probability_one(ancilla)?;
            Ok(HadamardOutcome {
                estimate: 1.0 - 2.0 * p1,
                counts: None,
            })
        }
        SampleMode::Shots { n_shots, seed } => {
            let (count0, count1) = register.sample_qubit(ancilla, n_shots, seed)?;
            Ok(HadamardOutcome {
                estimate: (count0 as f64 - count1 as f64) / n_shots as f64,
                counts: Some((count0, count1)),
            })
        }
    }
}

/// The `Re[<psi|O(phi, mu)|psi>]` surface over a phase grid.
#[derive(Clone, Debug)]
pub struct PhaseScan {
    /// `<Psi_G|Psi_G>`, the target-sector weight.
    pub good_weight: f64,
    /// `<Psi_B|Psi_B>`.
    pub bad_weight: f64,
    pub phi_values: Vec<f64>,
    pub mu_values: Vec<f64>,
    /// `values[i][j]` for `(phi_values[i], mu_values[j])`.
    pub values: Vec<Vec<f64>>,
}

impl PhaseScan {
    pub fn reconstruct(&self, phi: f64, mu: f64) -> f64 {
        phi.cos() * self.good_weight + mu.cos() * self.bad_weight
    }
}

/// Scan `Re[<O(phi, mu)>]` over a grid.
///
/// The whole surface depends on the state only through the two scalars
/// `g = <Psi_G|Psi_G>` and `b = <Psi_B|Psi_B>`, so those are measured once
/// (through the projector LCU) and the grid is reconstructed as
/// `cos(phi) g + cos(mu) b`.
pub fn oracle_phase_scan(
    state: &StateVector,
    projector: &LcuDecomposition,
    evolver: &PhaseEvolution,
    phi_values: &[f64],
    mu_values: &[f64],
) -> Result<PhaseScan> {
    let mut sector = Complex64::ZERO;
    for &(coefficient, phi_k) in projector.terms() {
        let mut evolved = state.clone();
        evolver.apply(&mut evolved, phi_k)?;
        sector += coefficient * state.inner_product(&evolved)?;
    }
    let good_weight = sector.re;
    let bad_weight = state.norm_sqr() - good_weight;
    let values = phi_values
        .iter()
        .map(|&phi| {
            mu_values
                .iter()
                .map(|&mu| phi.cos() * good_weight + mu.cos() * bad_weight)
                .collect()
        })
        .collect();
    Ok(PhaseScan {
        good_weight,
        bad_weight,
        phi_values: phi_values.to_vec(),
        mu_values: mu_values.to_vec(),
        values,
    })
}
