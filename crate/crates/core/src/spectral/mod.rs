//! Eigendecompositions, resolvent elements, participation ratios and
//! localisation-length functionals.

mod biorthogonal;
mod hermitian;
mod participation;
mod resolvent;

pub use biorthogonal::{eig_biorthogonal, BiorthogonalSpectrum, MAX_CONDITION};
pub use hermitian::{eig_hermitian, HermitianSpectrum};
pub use participation::{participation_ratio, participation_ratio_of, pr_inverse_via_residues, ParticipationRatio};
pub use resolvent::{
    localisation_length_1p, localisation_length_2p, resolvent_element, FockState, ResolventQuery,
};
