//! Fourier-space scaffolding: wavenumber tables, forward/inverse transforms,
//! and the 2/3-rule dealiasing mask.

pub const PLACEHOLDER: () = ();
