//! Numerical laboratory for spectral interpolation of thickened horospherical
//! averages.
//!
//! The crate is organised by subsystem:
//!
//! * [`rank_one`] – thickened kernels, two-point spectral interpolation, the
//!   radial ODE and the rank-one exponent budgets.
//! * [`modular`] – the concrete laboratory on `SL(2, Z) \ H`: reduction,
//!   horocycle averages, automorphized kernels and the fold/unfold identity.
//! * [`sl3`] – spectral parameter algebra for `SL(3)`: Casimir scalars on
//!   power functions, the six-point orbit, the node scheme and the Green kernel.
//! * [`sln`] – general-`n` exponent tables, `I`-functions and Casimir monomial
//!   calculus.
//! * [`harness`] – experiment configuration, orchestration, slope fitting and
//!   reporting used by the `horospectral` binary.

pub mod diffop;
pub mod error;
pub mod harness;
pub mod modular;
pub mod quadrature;
pub mod rank_one;
pub mod sl3;
pub mod sln;
pub(crate) mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
