//! Derivative-free simplex minimiser (Nelder-Mead).
//!
//! Standard coefficients: reflection 1, expansion 2, contraction 1/2,
//! shrink 1/2. The objective may return non-finite values (treated as
//! worse than anything finite), which lets callers map domain errors such
//! as an empty target sector to `+inf` instead of aborting.

/// Hyperparameters with documented defaults.
#[derive(Clone, Copy, Debug)]
pub struct NelderMeadConfig {
    /// Iteration cap per run.
    pub max_iters: usize,
    /// Converged when the simplex value spread falls below this.
    pub f_tol: f64,
    /// ... and the simplex diameter below this.
    pub x_tol: f64,
    /// Orthogonal offset used to build the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            max_iters: 4000,
            f_tol: 1e-12,
            x_tol: 1e-9,
            initial_step: 0.2,
        }
    }
}

/// Minimisation outcome with the per-iteration best trace.
#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Best point after each iteration (non-increasing in value).
    pub best_trace: Vec<(Vec<f64>, f64)>,
}

struct Vertex {
    x: Vec<f64>,
    fx: f64,
}

/// Minimise `f` starting from `x0`.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    config: &NelderMeadConfig,
) -> NelderMeadResult {
    let dim = x0.len();
    assert!(dim >= 1, "need at least one parameter");
    let mut evaluations = 0;
    let mut eval = |x: &[f64], count: &mut usize| -> f64 {
        *count += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
    let fx0 = eval(x0, &mut evaluations);
    simplex.push(Vertex {
        x: x0.to_vec(),
        fx: fx0,
    });
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += config.initial_step;
        let fx = eval(&x, &mut evaluations);
        simplex.push(Vertex { x, fx });
    }

    let mut best_trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..config.max_iters {
        iterations += 1;
        simplex.sort_by(|a, b| a.fx.total_cmp(&b.fx));
        best_trace.push((simplex[0].x.clone(), simplex[0].fx));

        let spread = simplex[dim].fx - simplex[0].fx;
        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.x.iter()
                    .zip(&simplex[0].x)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if spread.abs() < config.f_tol && diameter < config.x_tol {
            converged = true;
            break;
        }

        // centroid of all but the worst vertex
        let mut centroid = vec![0.0; dim];
        for vertex in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(&vertex.x) {
                *c += xi / dim as f64;
            }
        }
        let worst = simplex[dim].fx;
        let second_worst = simplex[dim - 1].fx;
        let best = simplex[0].fx;

        let point_at = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].x)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = point_at(1.0);
        let f_reflected = eval(&reflected, &mut evaluations);

        if f_reflected < best {
            let expanded = point_at(2.0);
            let f_expanded = eval(&expanded, &mut evaluations);
            if f_expanded < f_reflected {
                simplex[dim] = Vertex {
                    x: expanded,
                    fx: f_expanded,
                };
            } else {
                simplex[dim] = Vertex {
                    x: reflected,
                    fx: f_reflected,
                };
            }
        } else if f_reflected < second_worst {
            simplex[dim] = Vertex {
                x: reflected,
                fx: f_reflected,
            };
        } else {
            // contraction: outside toward the reflected point, inside toward
            // the worst vertex
            let (contracted, f_contracted) = if f_reflected < worst {
                let point = point_at(0.5);
                let value = eval(&point, &mut evaluations);
                (point, value)
            } else {
                let point = point_at(-0.5);
                let value = eval(&point, &mut evaluations);
                (point, value)
            };
            if f_contracted < worst.min(f_reflected) {
                simplex[dim] = Vertex {
                    x: contracted,
                    fx: f_contracted,
                };
            } else {
                // shrink toward the best vertex
                let best_x = simplex[0].x.clone();
                for vertex in &mut simplex[1..] {
                    for (xi, bi) in vertex.x.iter_mut().zip(&best_x) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    vertex.fx = eval(&vertex.x, &mut evaluations);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.fx.total_cmp(&b.fx));
    best_trace.push((simplex[0].x.clone(), simplex[0].fx));
    NelderMeadResult {
        x: simplex[0].x.clone(),
        fx: simplex[0].fx,
        evaluations,
        iterations,
        converged,
        best_trace,
    }
}
