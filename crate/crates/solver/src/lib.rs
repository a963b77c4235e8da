//! Pseudo-spectral solver for the 2D vorticity equation on a periodic box.
//!
//! Deliberately independent of the radial-mode crate: the two sides meet only
//! through sampled vorticity fields, so each serves as a check on the other.

pub mod spectral;
