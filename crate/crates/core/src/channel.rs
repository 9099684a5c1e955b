//! Multipath FIR channel and calibrated additive white Gaussian noise.

use std::fs;
use std::path::Path;

use crate::numerics::RngStream;
use crate::{Error, Result, Sample};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tap {
    pub delay: usize,
    pub gain: Sample,
}

impl Tap {
    pub fn new(delay: usize, gain: Sample) -> Self {
        Self { delay, gain }
    }
}

/// Discrete multipath channel `y[n] = sum_i H_i x[n - d_i]`.
///
/// Taps are kept sorted by delay; delays are unique.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelModel {
    taps: Vec<Tap>,
}

impl ChannelModel {
    pub fn new(mut taps: Vec<Tap>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::config("channel needs at least one tap"));
        }
        taps.sort_by_key(|t| t.delay);
        if let Some(w) = taps.windows(2).find(|w| w[0].delay == w[1].delay) {
            return Err(Error::config(format!("duplicate tap delay {}", w[0].delay)));
        }
        if let Some(t) = taps
            .iter()
            .find(|t| !(t.gain.re.is_finite() && t.gain.im.is_finite()))
        {
            return Err(Error::config(format!(
                "tap at delay {} has a non-finite gain",
                t.delay
            )));
        }
        Ok(Self { taps })
    }

    /// Single unit tap at zero delay.
    pub fn identity() -> Self {
        Self {
            taps: vec![Tap::new(0, Sample::new(1.0, 0.0))],
        }
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn max_delay(&self) -> usize {
        self.taps.last().map_or(0, |t| t.delay)
    }

    /// True for a single tap of unit magnitude, which leaves the noise
    /// statistics of a pure AWGN link unchanged.
    pub fn is_flat_unit_gain(&self) -> bool {
        self.taps.len() == 1 && (self.taps[0].gain.norm() - 1.0).abs() < 1e-12
    }

    /// Parses a profile of `delay gain_real gain_imag` lines. Blank lines and
    /// anything after `#` are ignored.
    pub fn parse_profile(text: &str) -> Result<Self> {
        let mut taps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::ChannelProfile {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let delay = fields[0]
                .parse::<usize>()
                .map_err(|e| err(format!("bad delay `{}`: {e}", fields[0])))?;
            let parse_f = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| err(format!("bad gain `{s}`: {e}")))
            };
            let gain = Sample::new(parse_f(fields[1])?, parse_f(fields[2])?);
            taps.push(Tap::new(delay, gain));
        }
        if taps.is_empty() {
            return Err(Error::ChannelProfile {
                line: 0,
                message: "profile contains no taps".into(),
            });
        }
        Self::new(taps).map_err(|e| match e {
            Error::InvalidConfig(message) => Error::ChannelProfile { line: 0, message },
            other => other,
        })
    }

    pub fn load_profile(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_profile(&fs::read_to_string(path)?)
    }
}

/// Input history carried between consecutive [`apply_multipath`] calls.
#[derive(Clone, Debug)]
pub struct DelayLine {
    // last max_delay inputs, oldest first
    history: Vec<Sample>,
}

impl DelayLine {
    pub fn new(ch: &ChannelModel) -> Self {
        Self {
            history: vec![Sample::new(0.0, 0.0); ch.max_delay()],
        }
    }

    pub fn reset(&mut self) {
        self.history.fill(Sample::new(0.0, 0.0));
    }
}

/// Streaming FIR filter. Samples before the start of `x` come from `state`,
/// which is then advanced to end with the tail of `x`.
pub fn apply_multipath(x: &[Sample], ch: &ChannelModel, state: &mut DelayLine) -> Vec<Sample> {
    let hist = ch.max_delay();
    if state.history.len() != hist {
        state.history = vec![Sample::new(0.0, 0.0); hist];
    }
    let mut extended = Vec::with_capacity(hist + x.len());
    extended.extend_from_slice(&state.history);
    extended.extend_from_slice(x);

    let mut y = vec![Sample::new(0.0, 0.0); x.len()];
    for tap in ch.taps() {
        let start = hist - tap.delay;
        for (out, &v) in y.iter_mut().zip(&extended[start..start + x.len()]) {
            *out += tap.gain * v;
        }
    }
    let tail = extended.len() - hist;
    state.history.copy_from_slice(&extended[tail..]);
    y
}

pub fn signal_power(x: &[Sample]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64)
}

/// Per-complex-sample noise variance for the commanded SNR.
pub fn noise_variance(snr_db: f64, ref_power: f64) -> f64 {
    ref_power / 10f64.powf(snr_db / 10.0)
}

/// Returns `x` plus circular complex Gaussian noise of variance
/// `ref_power / 10^(snr_db/10)`, split evenly over both quadratures.
/// `snr_db = +inf` adds nothing.
pub fn add_awgn(
    x: &[Sample],
    snr_db: f64,
    ref_power: f64,
    rng: &mut RngStream,
) -> Result<Vec<Sample>> {
    let mut y = x.to_vec();
    add_awgn_in_place(&mut y, snr_db, ref_power, rng)?;
    Ok(y)
}

pub fn add_awgn_in_place(
    x: &mut [Sample],
    snr_db: f64,
    ref_power: f64,
    rng: &mut RngStream,
) -> Result<()> {
    if ref_power.is_nan() || ref_power <= 0.0 {
        return Err(Error::NonPositiveRefPower(ref_power));
    }
    if snr_db.is_nan() {
        return Err(Error::config("SNR must not be NaN"));
    }
    if snr_db == f64::INFINITY {
        return Ok(());
    }
    let sigma = (noise_variance(snr_db, ref_power) / 2.0).sqrt();
    for v in x.iter_mut() {
        let (re, im) = rng.gaussian_pair();
        *v += Sample::new(re * sigma, im * sigma);
    }
    Ok(())
}
