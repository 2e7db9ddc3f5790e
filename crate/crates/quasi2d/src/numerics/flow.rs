//! Norm-constrained projected gradient flow.
//!
//! Minimizes an energy functional over states with unit norm in a weighted
//! inner product `⟨u, v⟩ = Σᵢ wᵢ uᵢ vᵢ` (the discrete version of ∫ u v).
//! Each iteration projects the gradient onto the tangent space of the
//! constraint sphere, optionally applies a symmetric positive-definite
//! preconditioner supplied by the functional, takes a backtracking step,
//! and renormalizes. Accepted steps strictly decrease the energy, so the
//! recorded energy sequence is monotone by construction.

/// An energy functional with its gradient, as seen by the flow.
///
/// `gradient` must return the functional gradient in the weighted inner
/// product: `out[i] = (1/wᵢ)·∂E/∂stateᵢ`, i.e. the discrete analogue of the
/// variational derivative δE/δφ. For the Gross-Pitaevskii-type energies in
/// this crate that is `2(−Δφ + Vφ + 2c φ³)`.
pub trait EnergyFunctional {
    fn energy(&self, state: &[f64]) -> f64;
    fn gradient(&self, state: &[f64], out: &mut [f64]);

    /// Optional preconditioner applied to a tangent direction in place.
    /// Must be symmetric positive definite in the weighted inner product;
    /// the default is the identity. A non-SPD implementation cannot break
    /// monotonicity (the flow falls back to the plain gradient when the
    /// preconditioned direction is not a descent direction) but wastes work.
    fn precondition(&self, _dir: &mut [f64]) {}
}

/// Flow controls. `tol` is the relative energy change per accepted step
/// below which the flow declares convergence (two consecutive small steps
/// are required, to avoid stopping on a single lucky backtrack).
#[derive(Debug, Clone)]
pub struct FlowOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            tol: 1e-10,
            max_iterations: 50_000,
            initial_step: 0.5,
            min_step: 1e-16,
            max_step: 1e3,
        }
    }
}

/// Outcome of a flow run. `converged == false` means the step size
/// underflowed or the iteration budget ran out; `state` is still the best
/// (lowest-energy) iterate seen.
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub state: Vec<f64>,
    pub energy: f64,
    /// Energies of the initial state and every accepted iterate, in order;
    /// non-increasing by construction.
    pub energies: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `functional` over `{φ : Σ wᵢ φᵢ² = 1}` starting from `initial`.
pub fn gradient_flow_minimize(
    functional: &impl EnergyFunctional,
    weights: &[f64],
    initial: &[f64],
    options: &FlowOptions,
) -> FlowResult {
    let n = initial.len();
    assert_eq!(weights.len(), n, "weights must match the state length");

    let mut phi = initial.to_vec();
    normalize(&mut phi, weights);
    let mut energy = functional.energy(&phi);
    let mut energies = vec![energy];

    let mut grad = vec![0.0; n];
    let mut step = options.initial_step;
    let mut consecutive_small = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;

    for iteration in 1..=options.max_iterations {
        iterations = iteration;
        functional.gradient(&phi, &mut grad);

        // Tangent projection: remove the component along φ (‖φ‖ = 1).
        let overlap = dot(&grad, &phi, weights);
        let mut p = grad.clone();
        for (pi, fi) in p.iter_mut().zip(&phi) {
            *pi -= overlap * fi;
        }
        let p_norm = dot(&p, &p, weights).sqrt();
        if p_norm <= options.tol * energy.abs().max(1.0) {
            converged = true; // already at a constrained stationary point
            break;
        }

        let mut dir = p.clone();
        functional.precondition(&mut dir);
        let along = dot(&dir, &phi, weights);
        for (di, fi) in dir.iter_mut().zip(&phi) {
            *di -= along * fi;
        }
        let mut slope = dot(&p, &dir, weights);
        if !(slope > 0.0) {
            // Preconditioner failed to produce a descent direction; fall
            // back to the plain projected gradient.
            dir.copy_from_slice(&p);
            slope = p_norm * p_norm;
        }

        // Backtracking line search with Armijo sufficient decrease.
        let mut accepted = false;
        while step >= options.min_step {
            let mut trial = Vec::with_capacity(n);
            trial.extend(phi.iter().zip(&dir).map(|(f, d)| f - step * d));
            normalize(&mut trial, weights);
            let trial_energy = functional.energy(&trial);
            // Strict decrease is required on top of the Armijo bound: once
            // 1e-4·step·slope rounds below the ulp of the energy, the bound
            // alone would accept a zero-decrease step and fake convergence.
            if trial_energy < energy && trial_energy <= energy - 1e-4 * step * slope {
                let change = (energy - trial_energy) / trial_energy.abs().max(1.0);
                phi = trial;
                energy = trial_energy;
                energies.push(energy);
                accepted = true;
                if change < options.tol {
                    consecutive_small += 1;
                } else {
                    consecutive_small = 0;
                }
                step = (step * 1.5).min(options.max_step);
                break;
            }
            step *= 0.5;
        }

        if !accepted {
            break; // step-size underflow: report best state, non-converged
        }
        if consecutive_small >= 2 {
            converged = true;
            break;
        }
    }

    FlowResult {
        state: phi,
        energy,
        energies,
        iterations,
        converged,
    }
}

fn dot(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(w)
        .map(|((x, y), wi)| wi * x * y)
        .sum()
}

fn normalize(v: &mut [f64], w: &[f64]) {
    let norm = dot(v, v, w).sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}
