//! Picket-fence pairing model.
//!
//! One qubit per doubly degenerate level: `|1>_p` means level `p` holds a
//! pair. With `n_p = (I - Z_p)/2`, `S+_p = (X_p - i Y_p)/2` and
//! single-particle energies `eps_p = p * delta_e`,
//!
//!   `H = sum_p 2 eps_p n_p - g sum_{p,q} S+_p S-_q`
//!
//! where the pairing sum runs over all `(p, q)` including `p = q`. The
//! Hamiltonian conserves pair number, so it can serve as the
//! symmetry-preserving `U` (as `exp(-i t H)`) in oracle expectation values,
//! and the fixed-sector ground state from dense diagonalisation is the
//! baseline every projected-energy route is compared against.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

use crate::dense;
use crate::error::{Error, Result};
use crate::operator::OperatorHandle;
use crate::projection::{
    build_oracle, hadamard_test, LcuDecomposition, MeasurementPart, OraclePhases, SampleMode,
    DEFAULT_SECTOR_FLOOR,
};
use crate::state::StateVector;
use crate::symmetry::PhaseEvolution;

/// Level count, spacing and pairing strength.
#[derive(Clone, Copy, Debug)]
pub struct PairingModel {
    pub n_levels: usize,
    pub delta_e: f64,
    pub g: f64,
}

impl PairingModel {
    pub fn new(n_levels: usize, delta_e: f64, g: f64) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::InvalidModel {
                reason: format!("need at least 2 levels, got {n_levels}"),
            });
        }
        if !delta_e.is_finite() || delta_e <= 0.0 {
            return Err(Error::InvalidModel {
                reason: format!("level spacing must be positive, got {delta_e}"),
            });
        }
        if g < 0.0 {
            return Err(Error::InvalidModel {
                reason: format!("pairing strength must be non-negative, got {g}"),
            });
        }
        Ok(PairingModel {
            n_levels,
            delta_e,
            g,
        })
    }

    /// `eps_p = p * delta_e` (levels counted from zero).
    pub fn single_particle_energy(&self, level: usize) -> f64 {
        level as f64 * self.delta_e
    }

    /// Diagonal matrix element of `H` on basis state `k`.
    fn diagonal(&self, k: usize) -> f64 {
        let mut value = -self.g * f64::from(k.count_ones());
        for p in 0..self.n_levels {
            if (k >> p) & 1 == 1 {
                value += 2.0 * self.single_particle_energy(p);
            }
        }
        value
    }
}

/// Matrix-free Hamiltonian action plus dense/spectral views.
#[derive(Clone, Debug)]
pub struct PairingHamiltonian {
    model: PairingModel,
}

impl PairingHamiltonian {
    pub fn new(model: PairingModel) -> Self {
        PairingHamiltonian { model }
    }

    pub fn model(&self) -> &PairingModel {
        &self.model
    }

    /// `H |psi>`.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        let n = self.model.n_levels;
        assert_eq!(n, state.n_qubits(), "state register must match the model");
        let mut out = vec![Complex64::ZERO; state.dim()];
        let g = self.model.g;
        for (k, &amp) in state.amplitudes().iter().enumerate() {
            if amp == Complex64::ZERO {
                continue;
            }
            out[k] += self.model.diagonal(k) * amp;
            // pair hop q -> p
            for q in 0..n {
                if (k >> q) & 1 == 0 {
                    continue;
                }
                for p in 0..n {
                    if p != q && (k >> p) & 1 == 0 {
                        let hopped = k - (1 << q) + (1 << p);
                        out[hopped] += -g * amp;
                    }
                }
            }
        }
        StateVector::from_amplitudes(out)
    }

    /// The Hamiltonian as a (non-unitary, Hermitian) operator handle.
    pub fn operator(&self) -> OperatorHandle {
        let hamiltonian = self.clone();
        OperatorHandle::non_unitary(move |state| {
            let image = hamiltonian.apply(state);
            state.amplitudes_mut().copy_from_slice(image.amplitudes());
        })
    }

    /// Dense real-symmetric matrix (register capped at the dense limit).
    pub fn dense(&self) -> Result<DMatrix<f64>> {
        dense::check_dense_size(self.model.n_levels)?;
        let dim = 1usize << self.model.n_levels;
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = self.model.diagonal(k);
            for q in 0..self.model.n_levels {
                if (k >> q) & 1 == 0 {
                    continue;
                }
                for p in 0..self.model.n_levels {
                    if p != q && (k >> p) & 1 == 0 {
                        m[(k - (1 << q) + (1 << p), k)] += -self.model.g;
                    }
                }
            }
        }
        Ok(m)
    }

    /// Pauli-term expansion `H = c_I I + sum_p c_p Z_p - (g/2) sum_{p<q}
    /// (X_p X_q + Y_p Y_q)`; every term is unitary, so the expansion feeds
    /// per-term Hadamard tests.
    pub fn pauli_terms(&self) -> Vec<PauliTerm> {
        let n = self.model.n_levels;
        let g = self.model.g;
        let mut terms = Vec::new();
        let constant: f64 = (0..n)
            .map(|p| self.model.single_particle_energy(p))
            .sum::<f64>()
            - g * n as f64 / 2.0;
        terms.push(PauliTerm {
            coefficient: constant,
            kind: PauliKind::Identity,
        });
        for p in 0..n {
            terms.push(PauliTerm {
                coefficient: g / 2.0 - self.model.single_particle_energy(p),
                kind: PauliKind::Z(p),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                terms.push(PauliTerm {
                    coefficient: -g / 2.0,
                    kind: PauliKind::XX(p, q),
                });
                terms.push(PauliTerm {
                    coefficient: -g / 2.0,
                    kind: PauliKind::YY(p, q),
                });
            }
        }
        terms
    }

    /// Gershgorin bound on the spectral radius: `max_k (|H_kk| + sum of
    /// off-diagonal magnitudes in row k)`; row `k` has `w (n - w)` pair
    /// hops of size `g`, `w = popcount(k)`.
    pub fn gershgorin_bound(&self) -> f64 {
        let n = self.model.n_levels;
        (0..(1usize << n))
            .map(|k| {
                let w = f64::from(k.count_ones());
                self.model.diagonal(k).abs() + self.model.g * w * (n as f64 - w)
            })
            .fold(0.0, f64::max)
    }
}

/// Pauli strings appearing in the pairing Hamiltonian expansion.
#[derive(Clone, Copy, Debug)]
pub enum PauliKind {
    Identity,
    Z(usize),
    XX(usize, usize),
    YY(usize, usize),
}

/// One `coefficient * PauliString` term.
#[derive(Clone, Copy, Debug)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub kind: PauliKind,
}

impl PauliTerm {
    /// The bare Pauli string (without coefficient) as a unitary handle.
    pub fn operator(&self) -> OperatorHandle {
        let kind = self.kind;
        OperatorHandle::unitary(move |state| apply_pauli(state, kind))
    }
}

fn apply_pauli(state: &mut StateVector, kind: PauliKind) {
    match kind {
        PauliKind::Identity => {}
        PauliKind::Z(p) => {
            let mask = 1usize << p;
            for (k, a) in state.amplitudes_mut().iter_mut().enumerate() {
                if k & mask != 0 {
                    *a = -*a;
                }
            }
        }
        PauliKind::XX(p, q) => {
            let flip = (1usize << p) | (1usize << q);
            let amps = state.amplitudes_mut();
            for k in 0..amps.len() {
                if k < (k ^ flip) {
                    amps.swap(k, k ^ flip);
                }
            }
        }
        PauliKind::YY(p, q) => {
            // Y_p Y_q |k> = -(+1 if bits differ, -1 if equal) ... sign is
            // -1 when the two bits are equal, +1 when they differ
            let pm = 1usize << p;
            let qm = 1usize << q;
            let flip = pm | qm;
            let amps = state.amplitudes_mut();
            for k in 0..amps.len() {
                let j = k ^ flip;
                if k < j {
                    let sign = if (k & pm != 0) == (k & qm != 0) { -1.0 } else { 1.0 };
                    let a = amps[k];
                    amps[k] = sign * amps[j];
                    amps[j] = sign * a;
                }
            }
        }
    }
}

/// Basis indices of the fixed-pair-number sector, ascending.
pub fn sector_basis(n_levels: usize, pairs: usize) -> Vec<usize> {
    (0..(1usize << n_levels))
        .filter(|k| k.count_ones() as usize == pairs)
        .collect()
}

/// Ground-state energy of `H` restricted to the `pairs`-pair sector,
/// from dense diagonalisation of the sector block.
pub fn exact_sector_ground(model: &PairingModel, pairs: usize) -> Result<f64> {
    if pairs > model.n_levels {
        return Err(Error::EmptySector {
            magnitude: 0.0,
            floor: DEFAULT_SECTOR_FLOOR,
        });
    }
    dense::check_dense_size(model.n_levels)?;
    let basis = sector_basis(model.n_levels, pairs);
    let index_of: std::collections::HashMap<usize, usize> =
        basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let dim = basis.len();
    let mut block = DMatrix::zeros(dim, dim);
    for (col, &k) in basis.iter().enumerate() {
        block[(col, col)] = model.diagonal(k);
        for q in 0..model.n_levels {
            if (k >> q) & 1 == 0 {
                continue;
            }
            for p in 0..model.n_levels {
                if p != q && (k >> p) & 1 == 0 {
                    let hopped = k - (1 << q) + (1 << p);
                    block[(index_of[&hopped], col)] += -model.g;
                }
            }
        }
    }
    let (values, _) = dense::symmetric_eigen(&block);
    Ok(values[0])
}

/// Exact real-time evolution `exp(-i t H)` through the cached spectral
/// decomposition of the dense Hamiltonian.
#[derive(Clone)]
pub struct TimeEvolution {
    inner: Arc<SpectralData>,
}

struct SpectralData {
    n_qubits: usize,
    eigenvalues: Vec<f64>,
    // eigenvectors as columns, row-major storage
    eigenvectors: DMatrix<f64>,
}

impl TimeEvolution {
    pub fn new(model: &PairingModel) -> Result<Self> {
        let hamiltonian = PairingHamiltonian::new(*model);
        let (values, vectors) = dense::symmetric_eigen(&hamiltonian.dense()?);
        Ok(TimeEvolution {
            inner: Arc::new(SpectralData {
                n_qubits: model.n_levels,
                eigenvalues: values.iter().copied().collect(),
                eigenvectors: vectors,
            }),
        })
    }

    /// `exp(-i t H) |psi>`.
    pub fn evolve(&self, state: &StateVector, t: f64) -> StateVector {
        let data = &self.inner;
        assert_eq!(data.n_qubits, state.n_qubits());
        let dim = state.dim();
        // project onto eigenvectors, phase, resum
        let mut coefficients = vec![Complex64::ZERO; dim];
        for (i, slot) in coefficients.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for r in 0..dim {
                acc += data.eigenvectors[(r, i)] * state.amplitude(r);
            }
            *slot = acc * Complex64::from_polar(1.0, -t * data.eigenvalues[i]);
        }
        let mut out = vec![Complex64::ZERO; dim];
        for (i, c) in coefficients.iter().enumerate() {
            if *c == Complex64::ZERO {
                continue;
            }
            for (r, slot) in out.iter_mut().enumerate() {
                *slot += data.eigenvectors[(r, i)] * c;
            }
        }
        StateVector::from_amplitudes(out)
    }

    /// The evolution at fixed `t` as a unitary handle.
    pub fn operator(&self, t: f64) -> OperatorHandle {
        let evolution = self.clone();
        OperatorHandle::unitary(move |state| {
            let evolved = evolution.evolve(state, t);
            state.amplitudes_mut().copy_from_slice(evolved.amplitudes());
        })
    }
}

/// First-order Trotter evolution: per slice, the diagonal part exactly,
/// then `exp(i (dt g / 2) (X_p X_q + Y_p Y_q))` for every pair in
/// lexicographic order.
pub fn time_evolve_trotter(
    state: &mut StateVector,
    model: &PairingModel,
    t: f64,
    n_steps: u32,
) -> Result<()> {
    if n_steps == 0 {
        return Err(Error::ZeroTrotterSteps);
    }
    let n = model.n_levels;
    assert_eq!(n, state.n_qubits(), "state register must match the model");
    let dt = t / f64::from(n_steps);
    let beta = dt * model.g / 2.0;
    let (cos2b, sin2b) = ((2.0 * beta).cos(), (2.0 * beta).sin());
    for _ in 0..n_steps {
        state.apply_diagonal(|k| -dt * model.diagonal(k));
        for p in 0..n {
            for q in (p + 1)..n {
                let pm = 1usize << p;
                let qm = 1usize << q;
                let amps = state.amplitudes_mut();
                for k in 0..amps.len() {
                    // act once per (|01>, |10>) pair of the (p, q) block
                    if k & pm != 0 && k & qm == 0 {
                        let j = k ^ pm ^ qm;
                        let a = amps[k];
                        let b = amps[j];
                        let i_sin = Complex64::new(0.0, sin2b);
                        amps[k] = cos2b * a + i_sin * b;
                        amps[j] = cos2b * b + i_sin * a;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Samples of `F_G(t) = <Psi_G| exp(-i t H) |Psi_G>`.
#[derive(Clone, Debug)]
pub struct GeneratingFunctionSeries {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    /// `F_G(0)`, the projected norm.
    pub norm: f64,
}

/// Evaluate the generating function through the oracle route.
///
/// Each sample combines four exact Hadamard tests (real and imaginary
/// parts of `<U(t) O>` and `<U(t)>`) into
/// `F_G(t) = (<U(t) O> - e^{i mu} <U(t)>) / (e^{i phi} - e^{i mu})`,
/// so the projected state is never constructed.
pub fn generating_function(
    state: &StateVector,
    evolution: &TimeEvolution,
    projector: &LcuDecomposition,
    evolver: &PhaseEvolution,
    phases: OraclePhases,
    times: &[f64],
) -> Result<GeneratingFunctionSeries> {
    let oracle = build_oracle(projector, phases);
    let oracle_op = oracle.operator(evolver);
    let weight = phases.good_factor() - phases.bad_factor();
    let sample = |t: f64| -> Result<Complex64> {
        let u_t = evolution.operator(t);
        let with_oracle = [oracle_op.clone(), u_t.clone()];
        let uo_re = hadamard_test(state, &with_oracle, MeasurementPart::Real, SampleMode::Exact)?;
        let uo_im = hadamard_test(state, &with_oracle, MeasurementPart::Imag, SampleMode::Exact)?;
        let alone = [u_t];
        let u_re = hadamard_test(state, &alone, MeasurementPart::Real, SampleMode::Exact)?;
        let u_im = hadamard_test(state, &alone, MeasurementPart::Imag, SampleMode::Exact)?;
        let uo = Complex64::new(uo_re.estimate, uo_im.estimate);
        let u = Complex64::new(u_re.estimate, u_im.estimate);
        Ok((uo - phases.bad_factor() * u) / weight)
    };
    let values = times.iter().map(|&t| sample(t)).collect::<Result<Vec<_>>>()?;
    let norm = sample(0.0)?.re;
    Ok(GeneratingFunctionSeries {
        times: times.to_vec(),
        values,
        norm,
    })
}

/// How the derivative of `F_G` at zero is extracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMethod {
    /// Central difference at `+- dt`; truncation error is second order,
    /// `|error| ~ <E^3> dt^2 / 6` over the sector spectrum.
    FiniteDifference,
    /// Two evaluations at `t = +- pi / (2 s)` with `s` the Gershgorin
    /// spectral bound. Exact when the sector spectrum sits at `+- s` (for
    /// an eigenstate of energy `E` it returns `s sin(pi E / (2 s))`), an
    /// approximation otherwise; its advantage is the O(1) shift, which
    /// avoids amplifying measurement noise the way a small-`dt` difference
    /// quotient does.
    ParameterShift,
}

/// Projected energy `i F_G'(0) / F_G(0)` through the oracle route.
pub fn projected_energy_generating_function(
    state: &StateVector,
    model: &PairingModel,
    projector: &LcuDecomposition,
    evolver: &PhaseEvolution,
    phases: OraclePhases,
    dt: f64,
    method: DerivativeMethod,
) -> Result<f64> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::NonPositiveTimeStep);
    }
    let evolution = TimeEvolution::new(model)?;
    // shift and prefactor: central difference uses 1/(2 dt); the shift rule
    // evaluates at +- pi/(2 s) and rescales by s/2
    let (shift, scale) = match method {
        DerivativeMethod::FiniteDifference => (dt, 1.0 / (2.0 * dt)),
        DerivativeMethod::ParameterShift => {
            let bound = PairingHamiltonian::new(*model).gershgorin_bound();
            (std::f64::consts::FRAC_PI_2 / bound, bound / 2.0)
        }
    };
    let series = generating_function(
        state,
        &evolution,
        projector,
        evolver,
        phases,
        &[shift, -shift],
    )?;
    if series.norm.abs() < DEFAULT_SECTOR_FLOOR {
        return Err(Error::EmptySector {
            magnitude: series.norm.abs(),
            floor: DEFAULT_SECTOR_FLOOR,
        });
    }
    let derivative = (series.values[0] - series.values[1]) * scale;
    let energy = Complex64::i() * derivative / series.norm;
    Ok(energy.re)
}
