//! Elementary and controlled gates.
//!
//! The gate set covers what the circuits in this crate need: Hadamard,
//! Paulis, `Rx`/`Rz` rotations, the phase gate `diag(1, e^{i phi})`, CNOT
//! and single-qubit gates under an arbitrary number of controls with
//! per-control polarity (filled circle = trigger on `|1>`, open circle =
//! trigger on `|0>`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Single-qubit gate kinds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BaseGate {
    H,
    X,
    Y,
    Z,
    /// Rotation `exp(-i theta X / 2)`.
    Rx(f64),
    /// Rotation `exp(-i theta Z / 2)`.
    Rz(f64),
    /// `diag(1, e^{i phi})`.
    Phase(f64),
}

impl BaseGate {
    /// The 2x2 matrix as `[[u00, u01], [u10, u11]]`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let zero = Complex64::ZERO;
        let one = Complex64::ONE;
        match *self {
            BaseGate::H => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            BaseGate::X => [[zero, one], [one, zero]],
            BaseGate::Y => [
                [zero, Complex64::new(0.0, -1.0)],
                [Complex64::new(0.0, 1.0), zero],
            ],
            BaseGate::Z => [[one, zero], [zero, -one]],
            BaseGate::Rx(theta) => {
                let c = Complex64::new((theta / 2.0).cos(), 0.0);
                let s = Complex64::new(0.0, -(theta / 2.0).sin());
                [[c, s], [s, c]]
            }
            BaseGate::Rz(theta) => [
                [Complex64::from_polar(1.0, -theta / 2.0), zero],
                [zero, Complex64::from_polar(1.0, theta / 2.0)],
            ],
            BaseGate::Phase(phi) => [[one, zero], [zero, Complex64::from_polar(1.0, phi)]],
        }
    }
}

/// Gate kind plus addressing.
#[derive(Clone, Debug)]
pub enum GateKind {
    /// A single-qubit gate on `qubits[0]`.
    Base(BaseGate),
    /// CNOT with `qubits = [control, target]`.
    Cnot,
    /// `base` on `qubits[last]`, controlled by `qubits[..last]`.
    ///
    /// `polarity[i]` is `true` for a filled (trigger on `|1>`) control of
    /// `qubits[i]` and `false` for an open (trigger on `|0>`) control.
    Controlled { base: BaseGate, polarity: Vec<bool> },
}

/// A gate bound to register qubits.
#[derive(Clone, Debug)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn h(q: usize) -> Self {
        Self::base(BaseGate::H, q)
    }
    pub fn x(q: usize) -> Self {
        Self::base(BaseGate::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::base(BaseGate::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::base(BaseGate::Z, q)
    }
    pub fn rx(theta: f64, q: usize) -> Self {
        Self::base(BaseGate::Rx(theta), q)
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Self::base(BaseGate::Rz(theta), q)
    }
    pub fn phase(phi: f64, q: usize) -> Self {
        Self::base(BaseGate::Phase(phi), q)
    }

    pub fn base(base: BaseGate, q: usize) -> Self {
        GateOp {
            kind: GateKind::Base(base),
            qubits: vec![q],
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp {
            kind: GateKind::Cnot,
            qubits: vec![control, target],
        }
    }

    /// `base` on `target`, fired when every control matches its polarity.
    pub fn controlled(base: BaseGate, controls: &[(usize, bool)], target: usize) -> Self {
        let mut qubits: Vec<usize> = controls.iter().map(|(q, _)| *q).collect();
        let polarity = controls.iter().map(|(_, p)| *p).collect();
        qubits.push(target);
        GateOp {
            kind: GateKind::Controlled { base, polarity },
            qubits,
        }
    }

    /// Number of qubits the gate touches.
    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    fn validate(&self, state: &StateVector) -> Result<()> {
        for (i, &q) in self.qubits.iter().enumerate() {
            state.check_qubit(q)?;
            if self.qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit { qubit: q });
            }
        }
        if let GateKind::Controlled { polarity, .. } = &self.kind {
            assert_eq!(
                polarity.len() + 1,
                self.qubits.len(),
                "polarity list must cover every control qubit"
            );
        }
        Ok(())
    }

    /// Realised matrix on the gate's local space.
    ///
    /// Local basis index `m` assigns bit `j` to `qubits[j]`, consistent with
    /// the register convention (least significant bit first).
    pub fn local_matrix(&self) -> Vec<Vec<Complex64>> {
        let arity = self.arity();
        let local = GateOp {
            kind: self.kind.clone(),
            qubits: (0..arity).collect(),
        };
        let dim = 1usize << arity;
        let mut columns = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut basis = StateVector::basis(arity, k);
            apply_gate(&mut basis, &local).expect("local gate indices are valid");
            columns.push(basis.amplitudes().to_vec());
        }
        // transpose columns into row-major form
        (0..dim)
            .map(|r| (0..dim).map(|c| columns[c][r]).collect())
            .collect()
    }
}

/// Apply `gate` to `state` in place.
pub fn apply_gate(state: &mut StateVector, gate: &GateOp) -> Result<()> {
    gate.validate(state)?;
    match &gate.kind {
        GateKind::Base(base) => {
            let m = base.matrix();
            state.apply_single_qubit(gate.qubits[0], m[0][0], m[0][1], m[1][0], m[1][1]);
        }
        GateKind::Cnot => {
            let cmask = 1usize << gate.qubits[0];
            let tmask = 1usize << gate.qubits[1];
            let amps = state.amplitudes_mut();
            for i in 0..amps.len() {
                if i & cmask != 0 && i & tmask == 0 {
                    amps.swap(i, i | tmask);
                }
            }
        }
        GateKind::Controlled { base, polarity } => {
            let m = base.matrix();
            let target = *gate.qubits.last().expect("controlled gate has a target");
            let tmask = 1usize << target;
            // precompute the control condition as (index & mask) == want
            let mut mask = 0usize;
            let mut want = 0usize;
            for (&q, &p) in gate.qubits.iter().zip(polarity) {
                mask |= 1 << q;
                if p {
                    want |= 1 << q;
                }
            }
            let amps = state.amplitudes_mut();
            for i in 0..amps.len() {
                if i & mask == want && i & tmask == 0 {
                    let j = i | tmask;
                    let a = amps[i];
                    let b = amps[j];
                    amps[i] = m[0][0] * a + m[0][1] * b;
                    amps[j] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn max_unitarity_defect(gate: &GateOp) -> f64 {
        let u = gate.local_matrix();
        let dim = u.len();
        let mut defect: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::ZERO;
                for row in &u {
                    acc += row[r].conj() * row[c];
                }
                let expected = if r == c { Complex64::ONE } else { Complex64::ZERO };
                defect = defect.max((acc - expected).norm());
            }
        }
        defect
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1);
        apply_gate(&mut s, &GateOp::h(0)).unwrap();
        assert!((s.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitude(1).re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn x_flips_qubit_zero() {
        let mut s = StateVector::zero(2);
        apply_gate(&mut s, &GateOp::x(0)).unwrap();
        assert_eq!(s.amplitude(0b01), Complex64::ONE);
    }

    #[test]
    fn cnot_builds_bell_state() {
        let mut s = StateVector::zero(2);
        apply_gate(&mut s, &GateOp::h(0)).unwrap();
        apply_gate(&mut s, &GateOp::cnot(0, 1)).unwrap();
        assert!((s.amplitude(0b00).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitude(0b11).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(s.amplitude(0b01).norm() < 1e-15);
        assert!(s.amplitude(0b10).norm() < 1e-15);
    }

    #[test]
    fn open_controls_fire_on_zero() {
        // X on qubit 1 controlled by qubit 0 being |0>
        let gate = GateOp::controlled(BaseGate::X, &[(0, false)], 1);
        let mut s = StateVector::zero(2);
        apply_gate(&mut s, &gate).unwrap();
        assert_eq!(s.amplitude(0b10), Complex64::ONE);

        let mut s = StateVector::basis(2, 0b01);
        apply_gate(&mut s, &gate).unwrap();
        assert_eq!(s.amplitude(0b01), Complex64::ONE);
    }

    #[test]
    fn all_gates_are_unitary() {
        let theta = 0.731;
        let gates = vec![
            GateOp::h(0),
            GateOp::x(0),
            GateOp::y(0),
            GateOp::z(0),
            GateOp::rx(theta, 0),
            GateOp::rz(theta, 0),
            GateOp::phase(theta, 0),
            GateOp::cnot(0, 1),
            GateOp::controlled(BaseGate::Rx(theta), &[(0, true), (1, false)], 2),
        ];
        for gate in &gates {
            assert!(
                max_unitarity_defect(gate) < 1e-14,
                "gate {gate:?} failed the unitarity check"
            );
        }
    }

    #[test]
    fn duplicate_and_out_of_range_indices_are_rejected() {
        let mut s = StateVector::zero(2);
        assert!(matches!(
            apply_gate(&mut s, &GateOp::cnot(1, 1)),
            Err(Error::DuplicateQubit { .. })
        ));
        assert!(matches!(
            apply_gate(&mut s, &GateOp::h(5)),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn phase_gate_matches_rz_up_to_global_phase() {
        let theta = 1.234;
        let mut a = StateVector::equiprobable(1);
        let mut b = a.clone();
        apply_gate(&mut a, &GateOp::phase(theta, 0)).unwrap();
        apply_gate(&mut b, &GateOp::rz(theta, 0)).unwrap();
        b.global_phase(theta / 2.0);
        for k in 0..2 {
            assert!((a.amplitude(k) - b.amplitude(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn norm_preserved_under_random_gate_sequences() {
        // 1000 random sequences across register sizes up to 10 qubits
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..1000 {
            let n = 2 + (trial % 9); // 2..=10
            let mut s = StateVector::equiprobable(n);
            for _ in 0..12 {
                let q = rng.random_range(0..n);
                let gate = match rng.random_range(0..8) {
                    0 => GateOp::h(q),
                    1 => GateOp::x(q),
                    2 => GateOp::y(q),
                    3 => GateOp::z(q),
                    4 => GateOp::rx(rng.random_range(-PI..PI), q),
                    5 => GateOp::rz(rng.random_range(-PI..PI), q),
                    6 => GateOp::phase(rng.random_range(-PI..PI), q),
                    _ => {
                        let t = (q + 1 + rng.random_range(0..n - 1)) % n;
                        GateOp::cnot(q, t)
                    }
                };
                apply_gate(&mut s, &gate).unwrap();
            }
            assert!((s.norm_sqr().sqrt() - 1.0).abs() < 1e-10);
        }
    }
}
