//! OFDM framing: subcarrier allocation, IFFT modulation with a cyclic
//! prefix, FFT demodulation and known-CSI equalization.

mod allocation;
mod config;

use std::f64::consts::TAU;

pub use allocation::{allocate_subcarriers, SubcarrierAllocator, SubcarrierMap};
pub use config::{default_pilot_count, OfdmConfig, PilotPattern, DEFAULT_BLOCK_PERIOD};

use crate::channel::ChannelModel;
use crate::transform;
use crate::{Error, Result, Sample};

/// Gains below this magnitude cannot be divided out.
pub const MIN_CHANNEL_GAIN: f64 = 1e-12;

/// One time-domain OFDM symbol, cyclic prefix first.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSymbol {
    pub samples: Vec<Sample>,
}

impl TimeSymbol {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn expect_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Places data symbols on `data_indices` (ascending) and pilot values on
/// `pilot_indices`.
pub fn build_frequency_symbol(data: &[Sample], map: &SubcarrierMap) -> Result<Vec<Sample>> {
    expect_len(map.data_indices.len(), data.len())?;
    let mut freq = vec![Sample::new(0.0, 0.0); map.n_subchannels()];
    for (&k, &v) in map.pilot_indices.iter().zip(&map.pilot_values) {
        freq[k] = v;
    }
    for (&k, &d) in map.data_indices.iter().zip(data) {
        freq[k] = d;
    }
    Ok(freq)
}

pub fn extract_data(freq: &[Sample], map: &SubcarrierMap) -> Vec<Sample> {
    map.data_indices.iter().map(|&k| freq[k]).collect()
}

/// IFFT of `freq` with its last `cp_len` samples copied to the front.
pub fn ofdm_modulate(freq: &[Sample], cfg: &OfdmConfig) -> Result<TimeSymbol> {
    let n = cfg.n_subchannels;
    expect_len(n, freq.len())?;
    let time = transform::ifft(freq)?;
    let mut samples = Vec::with_capacity(n + cfg.cp_len);
    samples.extend_from_slice(&time[n - cfg.cp_len..]);
    samples.extend_from_slice(&time);
    Ok(TimeSymbol { samples })
}

/// Drops the cyclic prefix and returns the FFT of the remaining `N` samples.
pub fn ofdm_demodulate(rx: &TimeSymbol, cfg: &OfdmConfig) -> Result<Vec<Sample>> {
    expect_len(cfg.symbol_len(), rx.len())?;
    transform::fft(&rx.samples[cfg.cp_len..])
}

/// Per-subcarrier gain `H(k) = sum_i H_i exp(-j 2 pi k d_i / n)`.
pub fn channel_frequency_response(ch: &ChannelModel, n: usize) -> Vec<Sample> {
    (0..n)
        .map(|k| {
            ch.taps()
                .iter()
                .map(|tap| {
                    // reduce mod n before scaling to keep the phase exact
                    let turns = ((k as u128 * tap.delay as u128) % n as u128) as f64 / n as f64;
                    tap.gain * Sample::from_polar(1.0, -TAU * turns)
                })
                .sum()
        })
        .collect()
}

/// Divides the `used` subcarriers by their channel gain; all other bins are
/// passed through untouched.
pub fn equalize(freq: &[Sample], h: &[Sample], used: &[usize]) -> Result<Vec<Sample>> {
    expect_len(freq.len(), h.len())?;
    let mut out = freq.to_vec();
    for &k in used {
        let gain = h[k];
        let magnitude = gain.norm();
        if magnitude < MIN_CHANNEL_GAIN {
            return Err(Error::SingularChannelGain {
                index: k,
                magnitude,
            });
        }
        out[k] = freq[k] / gain;
    }
    Ok(out)
}
