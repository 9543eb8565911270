//! The four experiment drivers.
//!
//! Each driver returns a [`Table`] (plus, for the phase scan, a sidecar
//! table of marked points); rendering and file handling live in
//! [`crate::output`].

use symres_core::dense;
use symres_core::pairing::{exact_sector_ground, PairingModel};
use symres_core::Complex64;
use symres_core::projection::{
    build_oracle, build_projector, hadamard_test, oracle_phase_scan, LcuDecomposition,
    MeasurementPart, OraclePhases, SampleMode,
};
use symres_core::qvap::{minimize, uniform_initial_thetas, EnergyMode, QvapConfig};
use symres_core::state::StateVector;
use symres_core::symmetry::{PhaseEvolution, SymmetryLabel, SymmetryLadder};
use symres_core::{apply_gate, GateOp};

use crate::config::{ExperimentKind, QvapMode, ResolvedConfig, SymmetryChoice};
use crate::error::CliError;

/// A single table cell; numeric values keep their type so the writers can
/// format them losslessly.
#[derive(Clone, Debug)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Str(String),
    Bool(bool),
}

#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub table: Table,
    /// Extra table of marked points (phase scan only).
    pub sidecar: Option<Table>,
}

pub fn run(config: &ResolvedConfig) -> Result<ExperimentOutput, CliError> {
    match config.experiment {
        ExperimentKind::ShotsConvergence => shots_convergence(config),
        ExperimentKind::PhaseScan => phase_scan(config),
        ExperimentKind::SectorDecomposition => sector_decomposition(config),
        ExperimentKind::Qvap => qvap(config),
    }
}

fn evolver_for(config: &ResolvedConfig, label: SymmetryLabel) -> Result<PhaseEvolution, CliError> {
    Ok(match (label, config.trotter_steps) {
        (SymmetryLabel::Spin, steps) if steps > 0 => PhaseEvolution::trotter(steps)?,
        (label, _) => PhaseEvolution::exact(label),
    })
}

/// `<P>` through the LCU term route.
fn sector_weight_lcu(
    state: &StateVector,
    projector: &LcuDecomposition,
    evolver: &PhaseEvolution,
) -> Result<f64, CliError> {
    let mut weight = Complex64::ZERO;
    for &(coefficient, phi_k) in projector.terms() {
        let mut evolved = state.clone();
        evolver.apply(&mut evolved, phi_k)?;
        weight += coefficient * state.inner_product(&evolved)?;
    }
    Ok(weight.re)
}

/// Sector weight read off a sampled Hadamard test for a growing
/// measurement budget, against the exact value and the `1/sqrt(N_e)`
/// error bar.
fn shots_convergence(config: &ResolvedConfig) -> Result<ExperimentOutput, CliError> {
    let seed = config.seed.expect("validated");
    let state = StateVector::equiprobable(config.n_qubits);
    let ladder = SymmetryLadder::number(config.n_qubits);
    let projector = build_projector(&ladder, config.target)?;
    let evolver = PhaseEvolution::exact(SymmetryLabel::Number);
    let phases = OraclePhases::new(config.phi, config.mu)?;
    let oracle = build_oracle(&projector, phases);
    let ops = [oracle.operator(&evolver)];

    let exact = sector_weight_lcu(&state, &projector, &evolver)?;
    let mut rows = Vec::new();
    for (index, &n_shots) in config.shot_schedule.iter().enumerate() {
        let outcome = hadamard_test(
            &state,
            &ops,
            MeasurementPart::Real,
            SampleMode::Shots {
                n_shots,
                seed: seed.wrapping_add(index as u64),
            },
        )?;
        rows.push(vec![
            Cell::UInt(n_shots),
            Cell::Float(outcome.estimate),
            Cell::Float(exact),
            Cell::Float(1.0 / (n_shots as f64).sqrt()),
        ]);
    }
    Ok(ExperimentOutput {
        table: Table {
            columns: vec!["N_e", "estimate", "exact", "errbar"],
            rows,
        },
        sidecar: None,
    })
}

/// `Re<O(phi, mu)>` over a phase grid, with the three marked points
/// (sector weight, complement weight, Grover-style marking) in a sidecar.
fn phase_scan(config: &ResolvedConfig) -> Result<ExperimentOutput, CliError> {
    let state = StateVector::equiprobable(config.n_qubits);
    let ladder = SymmetryLadder::number(config.n_qubits);
    let projector = build_projector(&ladder, config.target)?;
    let evolver = PhaseEvolution::exact(SymmetryLabel::Number);
    let points = config.grid_points;
    let grid: Vec<f64> = (0..points)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / (points as f64 - 1.0))
        .collect();
    let scan = oracle_phase_scan(&state, &projector, &evolver, &grid, &grid)?;

    let mut rows = Vec::new();
    for (i, &phi) in grid.iter().enumerate() {
        for (j, &mu) in grid.iter().enumerate() {
            let degenerate =
                (Complex64::from_polar(1.0, phi) - Complex64::from_polar(1.0, mu)).norm() < 1e-12;
            rows.push(vec![
                Cell::Float(phi),
                Cell::Float(mu),
                Cell::Float(scan.values[i][j]),
                Cell::Bool(degenerate),
            ]);
        }
    }

    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let marked = vec![
        ("good-weight", 0.0, half_pi),
        ("bad-weight", half_pi, 0.0),
        ("grover", pi, 0.0),
    ];
    let sidecar_rows = marked
        .into_iter()
        .map(|(label, phi, mu)| {
            vec![
                Cell::Str(label.to_string()),
                Cell::Float(phi),
                Cell::Float(mu),
                Cell::Float(scan.reconstruct(phi, mu)),
            ]
        })
        .collect();

    Ok(ExperimentOutput {
        table: Table {
            columns: vec!["phi", "mu", "re_oracle", "degenerate"],
            rows,
        },
        sidecar: Some(Table {
            columns: vec!["label", "phi", "mu", "re_oracle"],
            rows: sidecar_rows,
        }),
    })
}

/// Sector weights from the LCU route against the independent
/// dense/enumeration reference.
fn sector_decomposition(config: &ResolvedConfig) -> Result<ExperimentOutput, CliError> {
    let n = config.n_qubits;
    let mut rows = Vec::new();
    match config.symmetry {
        SymmetryChoice::Number => {
            let state = StateVector::equiprobable(n);
            let ladder = SymmetryLadder::number(n);
            let evolver = evolver_for(config, SymmetryLabel::Number)?;
            let dim = (1usize << n) as f64;
            let mut exact_sum = 0.0;
            for sector in 0..=n {
                let projector = build_projector(&ladder, sector)?;
                let weight_lcu = sector_weight_lcu(&state, &projector, &evolver)?;
                let count = (0..(1usize << n))
                    .filter(|k| k.count_ones() as usize == sector)
                    .count();
                let weight_exact = count as f64 / dim;
                exact_sum += weight_exact;
                rows.push(vec![
                    Cell::UInt(sector as u64),
                    Cell::Float(weight_lcu),
                    Cell::Float(weight_exact),
                ]);
            }
            debug_assert!((exact_sum - 1.0).abs() < 1e-10);
        }
        SymmetryChoice::Spin => {
            // X on the first n/2 qubits, then H everywhere
            let mut state = StateVector::zero(n);
            for q in 0..n / 2 {
                apply_gate(&mut state, &GateOp::x(q))?;
            }
            for q in 0..n {
                apply_gate(&mut state, &GateOp::h(q))?;
            }
            let ladder = SymmetryLadder::spin(n);
            let evolver = evolver_for(config, SymmetryLabel::Spin)?;
            let exact = dense::eigenprojection_weights(
                &dense::spin_squared_matrix(n),
                &state,
                &ladder.eigenvalues(),
                1e-6,
            );
            let exact_sum: f64 = exact.iter().sum();
            debug_assert!((exact_sum - 1.0).abs() < 1e-10);
            for (sector, weight_exact) in exact.iter().enumerate() {
                let projector = build_projector(&ladder, sector)?;
                let weight_lcu = sector_weight_lcu(&state, &projector, &evolver)?;
                // spin quantum number S from S(S+1) = eigenvalue
                let eigenvalue = ladder.eigenvalue(sector)?;
                let spin = 0.5 * ((1.0 + 4.0 * eigenvalue).sqrt() - 1.0);
                rows.push(vec![
                    Cell::Float(spin),
                    Cell::Float(weight_lcu),
                    Cell::Float(*weight_exact),
                ]);
            }
        }
        SymmetryChoice::Parity => unreachable!("rejected during validation"),
    }
    Ok(ExperimentOutput {
        table: Table {
            columns: vec!["sector", "weight_lcu", "weight_exact"],
            rows,
        },
        sidecar: None,
    })
}

/// Oracle-route Q-VAP energies against the dense fixed-sector ground
/// state across the coupling grid.
fn qvap(config: &ResolvedConfig) -> Result<ExperimentOutput, CliError> {
    let seed = config.seed.expect("validated");
    let mut rows = Vec::new();
    for (index, &g) in config.g_values.iter().enumerate() {
        let model = PairingModel::new(config.n_levels, config.delta_e, g)?;
        let exact = exact_sector_ground(&model, config.pairs)?;
        let run_seed = seed.wrapping_add(index as u64);
        let mode = match config.qvap_mode {
            QvapMode::Exact => EnergyMode::Exact,
            QvapMode::Shots => EnergyMode::Shots {
                n_shots: config.qvap_shots,
                seed: run_seed,
            },
        };
        let qvap_config = QvapConfig {
            optimizer: symres_core::optim::NelderMeadConfig {
                max_iters: config.qvap_max_iters,
                ..Default::default()
            },
            restarts: config.qvap_restarts,
            seed: run_seed,
            mode,
        };
        let result = minimize(
            &model,
            config.pairs,
            &uniform_initial_thetas(config.n_levels, config.pairs),
            &qvap_config,
        )?;
        rows.push(vec![
            Cell::Float(g),
            Cell::Float(result.energy),
            Cell::Float(exact),
            Cell::Float(result.energy - exact),
        ]);
    }
    Ok(ExperimentOutput {
        table: Table {
            columns: vec!["g", "E_qvap_oracle", "E_exact_sector", "gap"],
            rows,
        },
        sidecar: None,
    })
}
