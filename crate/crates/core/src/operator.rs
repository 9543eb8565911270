//! Opaque operator handles.
//!
//! Expectation-value routines only need to apply an operator to a state and
//! to know whether it is unitary (controlled insertion into a Hadamard test
//! requires unitarity). A handle therefore wraps an `apply` closure plus a
//! unitarity flag, so the same interface covers phase evolutions, gate
//! circuits, Hamiltonian actions and `exp(-i t H)`.

use std::sync::Arc;

use crate::state::StateVector;

type ApplyFn = dyn Fn(&mut StateVector) + Send + Sync;

/// An operator as "something that can be applied to a state".
#[derive(Clone)]
pub struct OperatorHandle {
    apply: Arc<ApplyFn>,
    unitary: bool,
}

impl OperatorHandle {
    /// Wrap a unitary action.
    pub fn unitary(apply: impl Fn(&mut StateVector) + Send + Sync + 'static) -> Self {
        OperatorHandle {
            apply: Arc::new(apply),
            unitary: true,
        }
    }

    /// Wrap a general (possibly non-unitary) action, e.g. a Hamiltonian.
    pub fn non_unitary(apply: impl Fn(&mut StateVector) + Send + Sync + 'static) -> Self {
        OperatorHandle {
            apply: Arc::new(apply),
            unitary: false,
        }
    }

    pub fn identity() -> Self {
        Self::unitary(|_| {})
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Apply in place.
    pub fn apply_to(&self, state: &mut StateVector) {
        (self.apply)(state);
    }

    /// Apply to a copy.
    pub fn applied(&self, state: &StateVector) -> StateVector {
        let mut out = state.clone();
        self.apply_to(&mut out);
        out
    }
}

impl std::fmt::Debug for OperatorHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorHandle")
            .field("unitary", &self.unitary)
            .finish()
    }
}

/// `<state| op |state>`.
pub fn expectation(state: &StateVector, op: &OperatorHandle) -> num_complex::Complex64 {
    state
        .inner_product(&op.applied(state))
        .expect("operator preserves register size")
}
