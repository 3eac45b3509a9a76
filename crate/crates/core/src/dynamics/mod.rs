//! Hamiltonian dynamics on `(S^2, vol/4)` and its contact lift to S^3.
//!
//! A Hamiltonian `H` on S^2 lifts to `H o p` on S^3 through the Hopf map `p`.
//! Curves solving `i_v d theta_0 + d(H o p) = 0` are determined up to their Reeb
//! component, which a [`Gauge`] fixes; all gauges project to the same
//! Hamiltonian trajectory on S^2. Such curves are the stationary points of
//! `Phi[gamma] = int H(p(gamma)) dt - int_gamma theta_0`.

mod action;
mod hamiltonian;
mod integrate;

pub use action::{
    action_from_samples, action_functional, admissible_perturbation, great_circle_path, sampled_path,
    stationarity_test, ActionValue, UNIFORMITY_TOL,
};
pub use hamiltonian::{
    gradient_consistency, hamiltonian_field_s2, HamiltonianOnBase, HopfLift, LiftedHamiltonian, LinearZ,
    Polynomial,
};
pub use integrate::{
    el_flow, el_velocity, el_velocity_lifted, flow_s2, linear_z_solution, step_schedule, Gauge, Trajectory,
    FIBER_INVARIANCE_TOL, MAX_RENORMALIZATION_SHIFT,
};
