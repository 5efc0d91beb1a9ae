//! Neutral particle with a magnetic moment in an optical-vortex wave.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Airy and Bessel functions.
//! * [`fields`]: field configurations, dimensionless parameters, the three field forms.
//! * [`channels`]: the 2x2 matrix potential and its adiabatic decomposition.
//! * [`spectra`]: bound states, Airy-channel states, continuum states, spinors.
//! * [`tunneling`]: barrier (WKB) and spin-flip (golden rule) rates.
//! * [`classical`]: point-particle trajectories with a precessing moment.
//! * [`scenario`] and [`output`]: the JSON scenario schema and file writers.

pub mod channels;
pub mod classical;
pub mod error;
pub mod fields;
pub mod output;
pub mod pipeline;
pub mod quad;
pub mod scenario;
pub mod specfun;
pub mod spectra;
pub mod tridiag;
pub mod tunneling;

pub use error::{Error, Result};
