//! Symplectic ray optics and its metaplectic double cover.
//!
//! * [`symplectic`]: `Sp(2r)` matrices, thin-lens/free-space systems, ray
//!   tracing and the canonical `S1·S2·S3` decomposition.
//! * [`metaplectic`]: lifts of `Sp(2)` matrices to unitary operators on
//!   sampled wavefunctions, with the global phase carried explicitly.
//! * [`wavefield`]: sampled wavefunctions, Fresnel propagation, Gaussian
//!   beams, Gouy-phase traces and tilted-reference fringes.
//! * [`weyl`]: the Heisenberg algebra extended by the idempotent `E`, its
//!   matrix units, Fock representation and boson form.
//! * [`pauli`]: the Euclidean 3-D Clifford algebra, used to show the
//!   orthogonal-spinor sign flip at `2π`.

pub mod metaplectic;
pub mod pauli;
pub mod symplectic;
pub mod wavefield;
pub mod weyl;
