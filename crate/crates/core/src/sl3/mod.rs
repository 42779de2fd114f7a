//! Spectral parameter algebra for `SL(3)`.

mod green;
mod lambda;
mod orbit;
mod scheme;

pub use green::{
    epsilon_optimizer_sl3, green_kernel, green_kernel_exponent, green_radial_residual, Sl3Epsilon,
};
pub use lambda::{
    casimir_apply_monomial, casimir_monomial_ratio, casimir_operator, lambda_from_nu,
    lambda_from_sr, lambda_monomial_oracle, nu_from_sr, sr_from_nu, CasimirIndex, LambdaPair,
    NuPair, SRPair, CASIMIR_SIGN,
};
pub use orbit::{nu_orbit, nu_orbit_roots, OrbitRoot};
pub use scheme::{alpha_i, build_node_scheme, m_t, BasisFunction, NodeScheme6, DEFAULT_NODES};
