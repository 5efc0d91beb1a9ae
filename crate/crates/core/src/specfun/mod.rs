//! Special-function kernel: Bessel functions of the first kind, the Airy
//! functions Ai/Bi with their derivatives, and the negative zeros of Ai.
//!
//! Everything here is a pure function of its arguments.

mod airy;
mod bessel;

pub use airy::{airy_ai, airy_ai_zero, airy_eval, AiryQuad, AIRY_MAX_ARG, BI_OVERFLOW_ARG};
pub use bessel::{bessel_j, bessel_j_prime, BESSEL_MAX_ORDER};
