//! Rank-one spectral interpolation: thickened kernels, two-point weights, the
//! radial ODE and exponent budgets.

mod budget;
mod interpolation;
mod kernel;
mod ode;
mod spectral;

pub use budget::{
    epsilon_optimizer_rank1, error_exponents_exact, exponent_budget, exponent_budget_exact,
    EpsilonChoice, ExactExponentBudget, ExponentBudget, FunctionClass,
};
pub use interpolation::{
    alpha_beta, homogeneous_interpolation_residual, interpolation_weights, AlphaBeta,
    InterpolationPair, DEFAULT_NODE_B,
};
pub use kernel::ThickKernel;
pub use ode::{radial_operator_residual, variation_of_parameters, RadialOde};
pub use spectral::{SpectralKind, SpectralPoint};
