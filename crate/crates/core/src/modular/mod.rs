//! The rank-one laboratory on `SL(2, Z) \ H`.

mod automorphy;
mod averages;
mod bump;
mod geometry;

pub use automorphy::{automorphized_kernel, contributing_cosets, Coset};
pub use averages::{
    folded_coset_contributions, horocycle_average, horocycle_average_at_height,
    hyperbolic_average, norms, thickened_average_folded, thickened_average_unfolded,
    CosetContribution, FunctionNorms, QuadratureSpec,
};
pub use bump::{BumpTestFunction, SupportBox};
pub use geometry::{moebius, reduce, UnimodularMatrix, UpperHalfPoint, REDUCTION_CAP};
