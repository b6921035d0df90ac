// `!(x > 0.0)` is deliberate: it rejects NaN too. Index loops mirror the
// component formulas, and quadrature tables keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod error;
pub mod diffops;
pub mod greens;
pub mod group;
pub mod quad;
pub mod quat;
pub mod report;
pub mod sample;
pub mod siegel;
pub mod szego;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use group::GroupElement;
pub use quad::QuadratureSpec;
pub use quat::{QuatMatrix, Quaternion};
pub use siegel::{BallPoint, SiegelPoint};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quaternions.md")]
    mod quaternions {}
    #[doc = include_str!("../../../book/src/group.md")]
    mod group {}
    #[doc = include_str!("../../../book/src/siegel.md")]
    mod siegel {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/szego.md")]
    mod szego {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
