//! Random streams, Gaussian variates and the Gaussian tail function.

mod qfunc;
mod rng;

pub use qfunc::{erfc, q_function};
pub use rng::{derive_seed, seeded_stream, RngStream};
