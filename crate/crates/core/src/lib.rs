//! Baseband OFDM link simulation.
//!
//! The crate models a complete discrete-time OFDM transceiver: Gray-coded
//! QAM mapping, pilot allocation, IFFT modulation with a cyclic prefix, a
//! streaming multipath FIR channel with calibrated AWGN, FFT demodulation
//! and known-CSI equalization. The [`harness`] module drives the chain in a
//! reproducible Monte Carlo loop and compares the measured bit error rate
//! with closed-form references.

pub mod channel;
pub mod cli;
pub mod error;
pub mod harness;
pub mod modem;
pub mod numerics;
pub mod ofdm;
pub mod transform;

pub use error::{Error, Result};

/// One complex baseband sample.
pub type Sample = num_complex::Complex64;
