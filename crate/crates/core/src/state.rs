//! Dense statevector register.
//!
//! A register of `n` qubits holds `2^n` complex amplitudes. Basis state
//! `|k>` assigns qubit `j` the value of bit `j` of `k`, i.e. qubit 0 is the
//! least significant bit. All gate kernels mutate the amplitude buffer in
//! place through bitmask strides; no gate matrix is ever materialised for
//! more than a pair of amplitudes.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};

/// Largest register accepted by the convenience constructors.
pub const MAX_QUBITS: usize = 24;

/// Dense complex statevector over a qubit register.
#[derive(Clone, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    ///
    /// Panics if `n_qubits` exceeds [`MAX_QUBITS`]; use
    /// [`StateVector::zero_with_limit`] to raise the cap explicitly.
    pub fn zero(n_qubits: usize) -> Self {
        Self::zero_with_limit(n_qubits, MAX_QUBITS)
    }

    /// `|0...0>` with a caller-chosen register cap.
    pub fn zero_with_limit(n_qubits: usize, limit: usize) -> Self {
        assert!(
            n_qubits <= limit,
            "register of {n_qubits} qubits exceeds the limit of {limit}"
        );
        let mut amplitudes = vec![Complex64::ZERO; 1 << n_qubits];
        amplitudes[0] = Complex64::ONE;
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    /// Computational basis state `|k>`.
    pub fn basis(n_qubits: usize, k: usize) -> Self {
        assert!(k < (1usize << n_qubits), "basis index out of range");
        let mut state = Self::zero(n_qubits);
        state.amplitudes[0] = Complex64::ZERO;
        state.amplitudes[k] = Complex64::ONE;
        state
    }

    /// Equal superposition of the whole computational basis.
    pub fn equiprobable(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector {
            n_qubits,
            amplitudes: vec![amp; dim],
        }
    }

    /// Wrap an amplitude buffer; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        assert_eq!(
            1usize << n_qubits,
            amplitudes.len(),
            "amplitude buffer length must be a power of two"
        );
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes[k]
    }

    /// Squared 2-norm of the amplitude buffer.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescale to unit norm. Panics on the zero vector.
    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        let inv = 1.0 / norm;
        for a in &mut self.amplitudes {
            *a *= inv;
        }
    }

    /// `<self|other>` with the physics convention (left argument conjugated).
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Apply a diagonal operator `c_k -> exp(i * phase(k)) * c_k`.
    ///
    /// The phase is supplied as a per-index callable so diagonal symmetry
    /// evolutions stay matrix-free.
    pub fn apply_diagonal(&mut self, phase_of_index: impl Fn(usize) -> f64) {
        for (k, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, phase_of_index(k));
        }
    }

    /// Multiply every amplitude by `exp(i * phase)`.
    pub fn global_phase(&mut self, phase: f64) {
        let factor = Complex64::from_polar(1.0, phase);
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    /// Apply an arbitrary 2x2 matrix `[[u00, u01], [u10, u11]]` to one qubit.
    pub(crate) fn apply_single_qubit(
        &mut self,
        qubit: usize,
        u00: Complex64,
        u01: Complex64,
        u10: Complex64,
        u11: Complex64,
    ) {
        let step = 1usize << qubit;
        for block in (0..self.amplitudes.len()).step_by(2 * step) {
            for offset in 0..step {
                let i = block + offset;
                let j = i | step;
                let a = self.amplitudes[i];
                let b = self.amplitudes[j];
                self.amplitudes[i] = u00 * a + u01 * b;
                self.amplitudes[j] = u10 * a + u11 * b;
            }
        }
    }

    /// Exact marginal probability of reading `1` on `qubit`.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(k, _)| k & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Draw `(count0, count1)` for repeated Z-measurements of one qubit.
    ///
    /// The marginal is computed exactly and the counts are drawn from a
    /// binomial with the seeded generator, so no per-shot collapse is
    /// simulated and the result is reproducible bit for bit.
    pub fn sample_qubit(&self, qubit: usize, n_shots: u64, seed: u64) -> Result<(u64, u64)> {
        if n_shots == 0 {
            return Err(Error::ZeroShots);
        }
        let p1 = self.probability_one(qubit)?.clamp(0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count1 = Binomial::new(n_shots, p1)
            .expect("probability clamped to [0, 1]")
            .sample(&mut rng);
        Ok((n_shots - count1, count1))
    }

    /// Same register with `extra` fresh `|0>` qubits appended as the most
    /// significant bits.
    pub fn with_appended_zeros(&self, extra: usize) -> StateVector {
        let mut amplitudes = vec![Complex64::ZERO; self.dim() << extra];
        amplitudes[..self.dim()].copy_from_slice(&self.amplitudes);
        StateVector {
            n_qubits: self.n_qubits + extra,
            amplitudes,
        }
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }
}

/// `<a|b>` as a free function, mirroring the method.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.inner_product(b)
}
