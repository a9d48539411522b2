//! Semiclassical quantization of two-dimensional billiards from skeletons of
//! ray bundles.
//!
//! The pipeline runs boundary geometry, then bundles and their maps, then
//! the skeleton of an invariant family, then transport of the amplitude χ,
//! then quantization conditions and finally wave fields. The `oracle` module
//! holds independent reference computations and `validation` the acceptance
//! checks built on them.

pub mod bundles;
pub mod error;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod quadrature;
pub mod quantize;
pub mod skeleton;
pub mod transport;
pub mod validation;
pub mod wavefield;

pub use error::{Error, Result};
pub use geometry::{BoundaryCurve, CurveKind, Rational};
pub use quantize::{Family, QuantumNumbers, SpectrumEntry};
pub use transport::Signature;

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub mod geometry {}
    #[doc = include_str!("../../../book/src/bundles.md")]
    pub mod bundles {}
    #[doc = include_str!("../../../book/src/skeletons.md")]
    pub mod skeletons {}
    #[doc = include_str!("../../../book/src/transport.md")]
    pub mod transport {}
    #[doc = include_str!("../../../book/src/circle.md")]
    pub mod circle {}
    #[doc = include_str!("../../../book/src/rectangle.md")]
    pub mod rectangle {}
    #[doc = include_str!("../../../book/src/scars.md")]
    pub mod scars {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    pub mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
