//! Diagnostics that compare the radial-mode expansion against the periodic-box
//! simulation: center extraction, self-similar resampling, phase measurement,
//! and the weighted perturbation energy.
