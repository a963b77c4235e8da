//! Radial-mode machinery for slowly diffusing planar vortices.
//!
//! The crate models vorticity fields in self-similar coordinates
//! `ξ = x/√(νt)` as finite Fourier series in the polar angle with sampled
//! radial profiles, and provides the operator toolbox (Laplacian inverses,
//! the linearized Gaussian-vortex operator and its adjoint), the order-by-order
//! expansion of a co-rotating vortex pair, the pseudo-momenta algebra used to
//! project perturbations, and point-vortex reference trajectories.

pub mod asym;
pub mod grid;
pub mod linalg;
pub mod mode;
pub mod oper;
pub mod pseudo;
pub mod special;
