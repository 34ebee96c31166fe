//! Isotropic stable heat kernels, the exact Ornstein-Uhlenbeck drift kernel,
//! a spectral solver for the associated Fokker-Planck Cauchy problem, and a
//! Monte Carlo oracle that cross-validates all of it.

pub mod cli;
pub mod error;
pub mod grid;
pub mod initial;
pub mod kernel;
pub mod law;
pub mod mc;
pub mod ou;
pub mod profile;
pub mod quad;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{
    heat_kernel, heat_kernel_closed_form, heat_kernel_quadrature, kernel_derivative,
    self_similar_reduce, tail_mass_bound, tail_radius,
};
pub use law::{
    derivative_bound, sharp_bound, BoundBranch, BoundValue, KernelQuery, OuKernelQuery, StableLaw,
};
pub use initial::{InitialData, MixtureComponent};
pub use mc::{
    compare_densities, empirical_density, ks_statistic, ks_threshold_5pct, ou_step,
    sample_positive_stable, sample_standard_stable, sample_standard_stable_vec,
    simulate_ensemble, ComparisonReport, DensityEstimate, Ensemble, EnsembleMeta,
};
pub use grid::{Field, FieldMeta, Grid};
pub use solver::{
    heat_propagate, initial_continuity_check, ou_solve, ou_solve_direct, ou_solve_pointwise,
    ou_solve_unclamped, pde_residual, smoothness_probe, stationary_field, ContinuityReport,
    ResidualReport, SmoothnessReport, SolvePlan,
};
pub use ou::{
    effective_time, ou_kernel, ou_kernel_gradient, ou_kernel_gradient_via_dilation,
    ou_kernel_via_dilation, ou_kernel_via_effective_time, stationary_density, time_dilation,
    TimeChange,
};
