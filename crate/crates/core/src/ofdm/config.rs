use std::fmt;
use std::str::FromStr;

use crate::modem::ModOrder;
use crate::{Error, Result};

/// Pilot placement scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PilotPattern {
    /// Whole OFDM symbols of pilots, one every `block_period` symbols.
    Block,
    /// Fixed, evenly spaced pilot subcarriers in every symbol.
    Comb,
    /// Pilot subcarriers re-drawn for every symbol.
    Random,
}

impl FromStr for PilotPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "block" => Ok(PilotPattern::Block),
            "comb" => Ok(PilotPattern::Comb),
            "random" => Ok(PilotPattern::Random),
            other => Err(Error::config(format!("unknown pilot pattern `{other}`"))),
        }
    }
}

impl fmt::Display for PilotPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PilotPattern::Block => "block",
            PilotPattern::Comb => "comb",
            PilotPattern::Random => "random",
        })
    }
}

pub const DEFAULT_BLOCK_PERIOD: usize = 8;

/// Pilot count used when none is given: 32 of 256, 64 of 512, 512 of 4096,
/// and one in eight for any other size.
pub fn default_pilot_count(n_subchannels: usize) -> usize {
    match n_subchannels {
        256 => 32,
        512 => 64,
        4096 => 512,
        n => n / 8,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OfdmConfig {
    pub n_subchannels: usize,
    pub cp_len: usize,
    pub pilot_pattern: PilotPattern,
    pub pilot_count: usize,
    pub mod_order: ModOrder,
    /// Block pattern only: symbol `s` is all-pilot when `s % block_period == 0`.
    pub block_period: usize,
    /// Occupied bandwidth, used only for the timing figures.
    pub bandwidth_hz: Option<f64>,
}

impl OfdmConfig {
    /// Comb pilots at the default count and a cyclic prefix of `N/8`.
    pub fn new(n_subchannels: usize, mod_order: ModOrder) -> Self {
        Self {
            n_subchannels,
            cp_len: n_subchannels / 8,
            pilot_pattern: PilotPattern::Comb,
            pilot_count: default_pilot_count(n_subchannels),
            mod_order,
            block_period: DEFAULT_BLOCK_PERIOD,
            bandwidth_hz: None,
        }
    }

    pub fn with_pilots(mut self, pattern: PilotPattern, count: usize) -> Self {
        self.pilot_pattern = pattern;
        self.pilot_count = count;
        self
    }

    pub fn with_cp_len(mut self, cp_len: usize) -> Self {
        self.cp_len = cp_len;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_subchannels;
        if !n.is_power_of_two() {
            return Err(Error::NonPowerOfTwoLength(n));
        }
        if self.cp_len >= n {
            return Err(Error::config(format!(
                "cyclic prefix length {} must be below {n}",
                self.cp_len
            )));
        }
        if self.pilot_count >= n {
            return Err(Error::PilotCountExceedsN {
                pilot_count: self.pilot_count,
                n_subchannels: n,
            });
        }
        if self.pilot_pattern == PilotPattern::Block && self.block_period < 2 {
            return Err(Error::config("block pilot period must be at least 2"));
        }
        if let Some(w) = self.bandwidth_hz {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::config(format!("bandwidth {w} Hz must be positive")));
            }
        }
        Ok(())
    }

    /// Samples per transmitted symbol, prefix included.
    pub fn symbol_len(&self) -> usize {
        self.n_subchannels + self.cp_len
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.mod_order.bits_per_symbol()
    }

    /// Long-run fraction of subcarrier slots that carry data.
    pub fn data_fraction(&self) -> f64 {
        match self.pilot_pattern {
            PilotPattern::Block => (self.block_period - 1) as f64 / self.block_period as f64,
            PilotPattern::Comb | PilotPattern::Random => {
                (self.n_subchannels - self.pilot_count) as f64 / self.n_subchannels as f64
            }
        }
    }

    pub fn subcarrier_spacing_hz(&self) -> Option<f64> {
        self.bandwidth_hz.map(|w| w / self.n_subchannels as f64)
    }

    pub fn guard_duration_s(&self) -> Option<f64> {
        self.bandwidth_hz.map(|w| self.cp_len as f64 / w)
    }

    /// `M / W + T_g` with `M = N`.
    pub fn symbol_duration_s(&self) -> Option<f64> {
        self.bandwidth_hz
            .map(|w| self.n_subchannels as f64 / w + self.cp_len as f64 / w)
    }
}
