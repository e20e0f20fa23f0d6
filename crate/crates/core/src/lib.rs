//! Numerical toolkit for twisted Hilbert spaces generated by complex
//! interpolation of `ℓ₂`: the extremal selector and its Taylor differentials,
//! the Orlicz spaces `ℓ_f`, `ℓ_g` and their duals, the twisted sums `Z₂`, `Z₃`,
//! the six `3×3` exact diagrams, block-basis operators, the weighted couple
//! `(ℓ∞, ℓ₁(w))`, and a reproducible experiment runner.
//!
//! Runnable walk-throughs live in `examples/`:
//! `selector`, `orlicz`, `twisted_sums`, `diagrams`, `blocks`, `weighted`, `experiment`.

pub mod calderon;
pub mod diagrams;
pub mod experiments;
pub mod error;
pub mod orlicz;
pub mod rng;
pub mod seq;
pub mod twisted;
pub mod weighted;

pub use error::{Error, Result};
pub use seq::{SeqVector, WeightSeq};
