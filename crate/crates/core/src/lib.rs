//! Two-photon scattering off a quasiperiodic Bose-Hubbard chain coupled to
//! two waveguides.

pub mod error;
pub mod model;
pub mod observables;
pub mod params;
pub mod quadrature;
pub mod scattering;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use params::{LatticeParams, GOLDEN_RATIO_CONJUGATE};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/scattering.md")]
    mod scattering {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
