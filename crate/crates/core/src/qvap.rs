//! Variation-after-projection driven by the oracle route.
//!
//! A symmetry-breaking product ansatz
//! `|Psi(theta)> = prod_i (cos theta_i |0> + sin theta_i |1>)` mixes pair
//! numbers; the objective is the pair-number-projected energy
//! `<Psi| H P_A |Psi> / <Psi| P_A |Psi>`, evaluated through the oracle
//! ratio without ever constructing the projected state, and minimised with
//! a seeded-restart Nelder-Mead.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lcu::{run_lcu, LcuCircuitPlan, Unprepare};
use crate::optim::{nelder_mead, NelderMeadConfig};
use crate::pairing::{PairingHamiltonian, PairingModel};
use crate::projection::{
    build_oracle, build_projector, hadamard_test, mask_number_sector,
    projected_expectation_lcu, projected_expectation_oracle_ratio, MeasurementPart, OraclePhases,
    SampleMode, DEFAULT_SECTOR_FLOOR,
};
use crate::state::StateVector;
use crate::symmetry::{PhaseEvolution, SymmetryLabel, SymmetryLadder};

/// Product ansatz angles, one per level.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub thetas: Vec<f64>,
}

impl Ansatz {
    pub fn new(thetas: Vec<f64>) -> Self {
        Ansatz { thetas }
    }

    /// `|Psi(theta)>`, normalised by construction.
    pub fn build(&self) -> StateVector {
        let n = self.thetas.len();
        let dim = 1usize << n;
        let mut amplitudes = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut amp = 1.0;
            for (i, theta) in self.thetas.iter().enumerate() {
                amp *= if (k >> i) & 1 == 1 {
                    theta.sin()
                } else {
                    theta.cos()
                };
            }
            amplitudes.push(Complex64::new(amp, 0.0));
        }
        StateVector::from_amplitudes(amplitudes)
    }

    /// `<N> = sum_i sin^2 theta_i`.
    pub fn mean_pair_number(&self) -> f64 {
        self.thetas.iter().map(|t| t.sin().powi(2)).sum()
    }
}

/// Uniform-occupation initial angles `theta_i = asin(sqrt(A/n))`, which
/// guarantee a nonzero target-sector weight.
pub fn uniform_initial_thetas(n_levels: usize, pairs: usize) -> Vec<f64> {
    let occupation = (pairs as f64 / n_levels as f64).sqrt().asin();
    vec![occupation; n_levels]
}

/// Exact expectation values or Hadamard-test shot sampling.
#[derive(Clone, Copy, Debug)]
pub enum EnergyMode {
    Exact,
    Shots { n_shots: u64, seed: u64 },
}

/// Which exact evaluation route backs the objective; all four agree to
/// numerical precision, so this mostly feeds equivalence tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionRoute {
    /// `(<H O> - e^{i mu} <H>) / (<O> - e^{i mu})`.
    OracleRatio,
    /// Term-by-term `sum_k alpha_k <H exp(i phi_k N)>` recombination.
    LcuTerms,
    /// Post-selected LCU circuit, then `<H>` on the collapsed state.
    LcuCircuit,
    /// Classical masking of non-sector amplitudes.
    ClassicalMask,
}

fn number_projection_setup(n_levels: usize, pairs: usize) -> Result<(crate::projection::LcuDecomposition, PhaseEvolution)> {
    let ladder = SymmetryLadder::number(n_levels);
    let projector = build_projector(&ladder, pairs)?;
    Ok((projector, PhaseEvolution::exact(SymmetryLabel::Number)))
}

/// Projected-energy objective through the oracle route.
///
/// Exact mode evaluates the ratio from analytic expectations; shot mode
/// runs one real-part Hadamard test per Pauli term of `H` (with the
/// controlled oracle inserted) plus one for `<O>`, with the default
/// `(0, pi/2)` phases. Every shot contributes to the estimate.
pub fn qvap_objective(
    thetas: &[f64],
    model: &PairingModel,
    pairs: usize,
    mode: &EnergyMode,
) -> Result<f64> {
    let state = Ansatz::new(thetas.to_vec()).build();
    let hamiltonian = PairingHamiltonian::new(*model);
    let (projector, evolver) = number_projection_setup(model.n_levels, pairs)?;
    let phases = OraclePhases::hermitian_default();
    match *mode {
        EnergyMode::Exact => {
            let oracle = build_oracle(&projector, phases);
            let value = projected_expectation_oracle_ratio(
                &state,
                &hamiltonian.operator(),
                &oracle,
                &evolver,
            )?;
            Ok(value.re)
        }
        EnergyMode::Shots { n_shots, seed } => {
            let (energy, _) =
                shot_objective(&state, &hamiltonian, &projector, &evolver, n_shots, seed)?;
            Ok(energy)
        }
    }
}

/// Shot-sampled objective; returns the energy and the number of shots
/// consumed (all of them: the oracle route discards nothing).
fn shot_objective(
    state: &StateVector,
    hamiltonian: &PairingHamiltonian,
    projector: &crate::projection::LcuDecomposition,
    evolver: &PhaseEvolution,
    n_shots: u64,
    seed: u64,
) -> Result<(f64, u64)> {
    let phases = OraclePhases::hermitian_default();
    let oracle = build_oracle(projector, phases);
    let oracle_op = oracle.operator(evolver);
    let mut consumed = 0u64;
    let mut seq = seed;
    let mut next_seed = || {
        seq = seq.wrapping_add(0x9e37_79b9_7f4a_7c15);
        seq
    };

    // Re<O>: with (0, pi/2) phases this is the sector weight <P>
    let norm_test = hadamard_test(
        state,
        std::slice::from_ref(&oracle_op),
        MeasurementPart::Real,
        SampleMode::Shots {
            n_shots,
            seed: next_seed(),
        },
    )?;
    let (c0, c1) = norm_test.counts.expect("shot mode returns counts");
    debug_assert_eq!(c0 + c1, n_shots);
    consumed += n_shots;
    let weight = norm_test.estimate;
    if weight.abs() < DEFAULT_SECTOR_FLOOR {
        return Err(Error::EmptySector {
            magnitude: weight.abs(),
            floor: DEFAULT_SECTOR_FLOOR,
        });
    }

    // Re<H O> term by term over the Pauli expansion; real coefficients let
    // each term be read from a single real-part test
    let mut numerator = 0.0;
    for term in hamiltonian.pauli_terms() {
        if term.coefficient == 0.0 {
            continue;
        }
        let estimate = match term.kind {
            crate::pairing::PauliKind::Identity => weight,
            _ => {
                let ops = [oracle_op.clone(), term.operator()];
                let outcome = hadamard_test(
                    state,
                    &ops,
                    MeasurementPart::Real,
                    SampleMode::Shots {
                        n_shots,
                        seed: next_seed(),
                    },
                )?;
                let (c0, c1) = outcome.counts.expect("shot mode returns counts");
                debug_assert_eq!(c0 + c1, n_shots);
                consumed += n_shots;
                outcome.estimate
            }
        };
        numerator += term.coefficient * estimate;
    }
    Ok((numerator / weight, consumed))
}

/// Exact-mode objective through a chosen evaluation route.
pub fn qvap_objective_via_route(
    thetas: &[f64],
    model: &PairingModel,
    pairs: usize,
    route: ProjectionRoute,
) -> Result<f64> {
    let state = Ansatz::new(thetas.to_vec()).build();
    let hamiltonian = PairingHamiltonian::new(*model);
    let (projector, evolver) = number_projection_setup(model.n_levels, pairs)?;
    match route {
        ProjectionRoute::OracleRatio => {
            let oracle = build_oracle(&projector, OraclePhases::hermitian_default());
            Ok(projected_expectation_oracle_ratio(
                &state,
                &hamiltonian.operator(),
                &oracle,
                &evolver,
            )?
            .re)
        }
        ProjectionRoute::LcuTerms => Ok(projected_expectation_lcu(
            &state,
            &hamiltonian.operator(),
            &projector,
            &evolver,
        )?
        .value()
        .re),
        ProjectionRoute::LcuCircuit => {
            let plan = LcuCircuitPlan::for_projector(&projector, &evolver, Unprepare::EDagger)?;
            let outcome = run_lcu(&state, &plan)?;
            let image = hamiltonian.apply(&outcome.state);
            Ok(outcome.state.inner_product(&image)?.re)
        }
        ProjectionRoute::ClassicalMask => {
            let (masked, weight) = mask_number_sector(&state, pairs as u32);
            if weight < DEFAULT_SECTOR_FLOOR {
                return Err(Error::EmptySector {
                    magnitude: weight,
                    floor: DEFAULT_SECTOR_FLOOR,
                });
            }
            let image = hamiltonian.apply(&masked);
            Ok(masked.inner_product(&image)?.re / weight)
        }
    }
}

/// Optimiser configuration: simplex hyperparameters plus seeded restarts.
#[derive(Clone, Debug)]
pub struct QvapConfig {
    pub optimizer: NelderMeadConfig,
    /// Fresh simplexes started from the best point with seeded jitter.
    pub restarts: u32,
    pub seed: u64,
    pub mode: EnergyMode,
}

impl Default for QvapConfig {
    fn default() -> Self {
        QvapConfig {
            optimizer: NelderMeadConfig::default(),
            restarts: 2,
            seed: 0,
            mode: EnergyMode::Exact,
        }
    }
}

/// Optimisation outcome.
#[derive(Clone, Debug)]
pub struct QvapResult {
    pub thetas: Vec<f64>,
    pub energy: f64,
    /// Best objective value after each optimiser iteration (non-increasing).
    pub trajectory: Vec<f64>,
    /// Target-sector weight `<P>` at each trajectory point.
    pub sector_weights: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
    /// Total shots consumed in shot mode (0 in exact mode); the oracle
    /// estimator discards none of them.
    pub shots_consumed: u64,
}

/// Minimise the projected energy over the ansatz angles.
pub fn minimize(
    model: &PairingModel,
    pairs: usize,
    initial_thetas: &[f64],
    config: &QvapConfig,
) -> Result<QvapResult> {
    if pairs > model.n_levels {
        return Err(Error::EmptySector {
            magnitude: 0.0,
            floor: DEFAULT_SECTOR_FLOOR,
        });
    }
    // fail fast if the starting point is outside the sector support
    qvap_objective(initial_thetas, model, pairs, &config.mode)?;

    // one Hadamard test per non-identity Pauli term plus one for <O>; each
    // consumes its full shot budget (nothing is post-selected away)
    let tests_per_evaluation = PairingHamiltonian::new(*model)
        .pauli_terms()
        .iter()
        .filter(|t| {
            t.coefficient != 0.0 && !matches!(t.kind, crate::pairing::PauliKind::Identity)
        })
        .count() as u64
        + 1;
    let mut shots_consumed = 0u64;
    let mut shot_round = 0u64;
    let mut objective = |thetas: &[f64]| -> f64 {
        let mode = match config.mode {
            EnergyMode::Exact => EnergyMode::Exact,
            EnergyMode::Shots { n_shots, seed } => {
                // decorrelate evaluations while staying reproducible
                shot_round += 1;
                shots_consumed += tests_per_evaluation * n_shots;
                EnergyMode::Shots {
                    n_shots,
                    seed: seed.wrapping_add(shot_round),
                }
            }
        };
        qvap_objective(thetas, model, pairs, &mode).unwrap_or(f64::INFINITY)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best = nelder_mead(&mut objective, initial_thetas, &config.optimizer);
    let mut trace = best.best_trace.clone();
    let mut evaluations = best.evaluations;
    let mut converged = best.converged;
    for restart in 0..config.restarts {
        let mut start = best.x.clone();
        for theta in &mut start {
            *theta += rng.random_range(-0.05..0.05);
        }
        let narrower = NelderMeadConfig {
            initial_step: config.optimizer.initial_step * 0.5f64.powi(restart as i32 + 1),
            ..config.optimizer
        };
        let run = nelder_mead(&mut objective, &start, &narrower);
        evaluations += run.evaluations;
        converged = converged || run.converged;
        if run.fx < best.fx {
            best = run;
            trace.extend(best.best_trace.iter().cloned());
        }
    }

    // per-iteration sector-weight monitor along the accepted best trace
    let (projector, evolver) = number_projection_setup(model.n_levels, pairs)?;
    let mut trajectory = Vec::with_capacity(trace.len());
    let mut sector_weights = Vec::with_capacity(trace.len());
    let mut running_best = f64::INFINITY;
    for (thetas, value) in &trace {
        running_best = running_best.min(*value);
        trajectory.push(running_best);
        let state = Ansatz::new(thetas.clone()).build();
        let mut weight = Complex64::ZERO;
        for &(coefficient, phi_k) in projector.terms() {
            let mut evolved = state.clone();
            evolver.apply(&mut evolved, phi_k)?;
            weight += coefficient * state.inner_product(&evolved)?;
        }
        sector_weights.push(weight.re);
    }

    Ok(QvapResult {
        thetas: best.x,
        energy: best.fx,
        trajectory,
        sector_weights,
        evaluations,
        converged,
        shots_consumed,
    })
}
