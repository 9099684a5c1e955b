//! Monte Carlo BER sweeps over an SNR grid.
//!
//! SNR is the mean transmitted time-domain power per sample divided by the
//! complex noise variance per sample. The matching Eb/N0 subtracts
//! `10 log10(bits_per_symbol * data_fraction)`, charging pilot energy to the
//! data bits.
//!
//! Iteration `i` of every SNR point draws its data bits and noise from
//! stream `i` of two seed-derived keys, and counts are merged by addition,
//! so results do not depend on how rayon schedules the iterations.

mod link;
mod report;

use rayon::prelude::*;

pub use link::{ErrorCount, Link};
pub use report::{write_csv, write_summary};

use crate::channel::{add_awgn_in_place, signal_power, ChannelModel};
use crate::modem::{Constellation, ModOrder};
use crate::numerics::{derive_seed, q_function, seeded_stream};
use crate::ofdm::OfdmConfig;
use crate::{Error, Result};

pub const DEFAULT_SNR_START_DB: f64 = 0.0;
pub const DEFAULT_SNR_STOP_DB: f64 = 27.0;
pub const DEFAULT_SNR_STEP_DB: f64 = 3.0;
pub const DEFAULT_ITERATIONS: usize = 100;
pub const DEFAULT_SYMBOLS_PER_ITERATION: usize = 10;
pub const DEFAULT_SEED: u64 = 1;

const DATA_DOMAIN: u64 = 0x4441_5441;
const NOISE_DOMAIN: u64 = 0x004e_4f49_5345;
const SINGLE_CARRIER_DOMAIN: u64 = 0x5343_4152;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub cfg: OfdmConfig,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub iterations: usize,
    pub symbols_per_iteration: usize,
    pub seed: u64,
    pub channel: ChannelModel,
}

impl SweepSpec {
    /// 0 to 27 dB in 3 dB steps, 100 iterations of 10 symbols, AWGN only.
    pub fn new(cfg: OfdmConfig) -> Self {
        Self {
            cfg,
            snr_start_db: DEFAULT_SNR_START_DB,
            snr_stop_db: DEFAULT_SNR_STOP_DB,
            snr_step_db: DEFAULT_SNR_STEP_DB,
            iterations: DEFAULT_ITERATIONS,
            symbols_per_iteration: DEFAULT_SYMBOLS_PER_ITERATION,
            seed: DEFAULT_SEED,
            channel: ChannelModel::identity(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        if !(self.snr_start_db.is_finite() && self.snr_stop_db.is_finite()) {
            return Err(Error::config("SNR grid bounds must be finite"));
        }
        if self.snr_start_db > self.snr_stop_db {
            return Err(Error::config(format!(
                "SNR start {} dB is above stop {} dB",
                self.snr_start_db, self.snr_stop_db
            )));
        }
        if !(self.snr_step_db.is_finite() && self.snr_step_db > 0.0) {
            return Err(Error::config(format!(
                "SNR step {} dB must be positive",
                self.snr_step_db
            )));
        }
        if self.iterations == 0 {
            return Err(Error::config("at least one iteration is required"));
        }
        if self.symbols_per_iteration == 0 {
            return Err(Error::config(
                "at least one symbol per iteration is required",
            ));
        }
        Ok(())
    }

    pub fn snr_grid(&self) -> Vec<f64> {
        let span = (self.snr_stop_db - self.snr_start_db) / self.snr_step_db;
        let count = (span + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.snr_start_db + i as f64 * self.snr_step_db)
            .collect()
    }

    /// `SNR - Eb/N0` in dB.
    pub fn eb_n0_offset_db(&self) -> f64 {
        eb_n0_offset_db(&self.cfg)
    }
}

pub fn eb_n0_offset_db(cfg: &OfdmConfig) -> f64 {
    10.0 * (cfg.bits_per_symbol() as f64 * cfg.data_fraction()).log10()
}

/// SNR needed to reach `eb_n0_db` for this configuration.
pub fn snr_for_eb_n0(cfg: &OfdmConfig, eb_n0_db: f64) -> f64 {
    eb_n0_db + eb_n0_offset_db(cfg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub eb_n0_db: f64,
    pub bit_errors: u64,
    pub bits_total: u64,
    pub analytic_ber: Option<f64>,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        if self.bits_total == 0 {
            0.0
        } else {
            self.bit_errors as f64 / self.bits_total as f64
        }
    }

    /// Binomial standard error of [`ber`](Self::ber).
    pub fn stderr_est(&self) -> f64 {
        binomial_stderr(self.bit_errors, self.bits_total)
    }
}

pub fn binomial_stderr(errors: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let p = errors as f64 / trials as f64;
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepMetadata {
    pub seed: u64,
    pub version: String,
    pub eb_n0_offset_db: f64,
    pub channel: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub points: Vec<BerPoint>,
    pub metadata: SweepMetadata,
}

pub fn version_string() -> String {
    format!("ofdm-ber v{}", env!("CARGO_PKG_VERSION"))
}

fn describe_channel(ch: &ChannelModel) -> String {
    if ch.taps().len() == 1 && ch.max_delay() == 0 && ch.is_flat_unit_gain() {
        return "awgn (single unit tap)".into();
    }
    let taps: Vec<String> = ch
        .taps()
        .iter()
        .map(|t| format!("{}:{}{:+}j", t.delay, t.gain.re, t.gain.im))
        .collect();
    format!("multipath [{}]", taps.join(", "))
}

fn run_iteration(spec: &SweepSpec, snr_db: f64, iteration: u64) -> Result<ErrorCount> {
    let mut link = Link::new(&spec.cfg, &spec.channel, spec.seed)?;
    let mut data_rng = seeded_stream(derive_seed(spec.seed, DATA_DOMAIN), iteration);
    let mut noise_rng = seeded_stream(derive_seed(spec.seed, NOISE_DOMAIN), iteration);
    let first_symbol = iteration * spec.symbols_per_iteration as u64;
    link.run_frame(
        first_symbol,
        spec.symbols_per_iteration,
        snr_db,
        &mut data_rng,
        &mut noise_rng,
    )
}

/// Runs `iterations` frames at one SNR. `snr_db = +inf` disables noise.
pub fn run_ber_point(spec: &SweepSpec, snr_db: f64) -> Result<BerPoint> {
    spec.validate()?;
    let total = (0..spec.iterations as u64)
        .into_par_iter()
        .map(|i| run_iteration(spec, snr_db, i))
        .try_reduce(ErrorCount::default, |a, b| Ok(a + b))?;
    let eb_n0_db = snr_db - spec.eb_n0_offset_db();
    let analytic_ber = if spec.channel.is_flat_unit_gain() {
        analytic_ber(spec.cfg.mod_order.order(), eb_n0_db)?
    } else {
        None
    };
    Ok(BerPoint {
        snr_db,
        eb_n0_db,
        bit_errors: total.bit_errors,
        bits_total: total.bits,
        analytic_ber,
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec
        .snr_grid()
        .into_iter()
        .map(|snr| run_ber_point(spec, snr))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        points,
        metadata: SweepMetadata {
            seed: spec.seed,
            version: version_string(),
            eb_n0_offset_db: spec.eb_n0_offset_db(),
            channel: describe_channel(&spec.channel),
        },
    })
}

/// Closed-form AWGN bit error rate for Gray-coded QPSK and 16-QAM.
///
/// 16-QAM uses the nearest-neighbour approximation `3/4 Q(sqrt(0.8 Eb/N0))`,
/// accurate to a few percent above about 6 dB. There is no closed form for
/// the rectangular 8-QAM, so that order returns `None`.
pub fn analytic_ber(order: u32, eb_n0_db: f64) -> Result<Option<f64>> {
    let gamma = 10f64.powf(eb_n0_db / 10.0);
    Ok(match ModOrder::try_from(order)? {
        ModOrder::Qpsk => Some(q_function((2.0 * gamma).sqrt())),
        ModOrder::Qam16 => Some(0.75 * q_function((0.8 * gamma).sqrt())),
        ModOrder::Qam8 => None,
    })
}

/// Bare constellation over AWGN, no OFDM framing. Noise variance follows
/// the same rule as the OFDM link: measured symbol power over
/// `10^(Es/N0 / 10)` with `Es/N0 = Eb/N0 + 10 log10(bits_per_symbol)`.
pub fn single_carrier_ber(
    order: ModOrder,
    eb_n0_db: f64,
    min_bits: u64,
    seed: u64,
) -> Result<ErrorCount> {
    const CHUNK_SYMBOLS: usize = 8192;
    let con = Constellation::new(order);
    let k = con.bits_per_symbol();
    let es_n0_db = eb_n0_db + 10.0 * (k as f64).log10();
    let chunk_bits = (CHUNK_SYMBOLS * k) as u64;
    let chunks = min_bits.div_ceil(chunk_bits);
    let key = derive_seed(seed, SINGLE_CARRIER_DOMAIN);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = seeded_stream(key, chunk);
            let mut bits = vec![0u8; CHUNK_SYMBOLS * k];
            rng.fill_bits(&mut bits);
            let mut symbols = con.map_bits(&bits)?;
            let power = signal_power(&symbols)?;
            add_awgn_in_place(&mut symbols, es_n0_db, power, &mut rng)?;
            let decided = con.demap_symbols(&symbols);
            Ok(ErrorCount {
                bit_errors: bits.iter().zip(&decided).filter(|(a, b)| a != b).count() as u64,
                bits: bits.len() as u64,
            })
        })
        .try_reduce(ErrorCount::default, |a, b| Ok(a + b))
}
