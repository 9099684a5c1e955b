//! Command-line front end.
//!
//! Every flag can also be given in a `key = value` config file passed with
//! `--config`; the key is the flag name without the leading dashes
//! (underscores are accepted in place of dashes). Flags win over the file.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;

use crate::channel::ChannelModel;
use crate::harness::{run_sweep, write_csv, write_summary, SweepSpec};
use crate::modem::{Constellation, ModOrder};
use crate::ofdm::{default_pilot_count, OfdmConfig, PilotPattern};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Default, Parser)]
#[command(
    name = "ofdm-ber",
    version,
    about = "Monte Carlo BER sweep of an OFDM link"
)]
pub struct Args {
    /// Config file of `key = value` lines
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of subchannels (power of two)
    #[arg(long)]
    pub subchannels: Option<usize>,
    /// Modulation order: 4, 8 or 16
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub snr_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub snr_stop: Option<f64>,
    #[arg(long)]
    pub snr_step: Option<f64>,
    /// Monte Carlo iterations per SNR point
    #[arg(long)]
    pub iterations: Option<usize>,
    /// OFDM symbols per iteration
    #[arg(long)]
    pub symbols_per_iter: Option<usize>,
    /// Cyclic prefix length in samples (default N/8)
    #[arg(long)]
    pub cp_len: Option<usize>,
    /// Pilot pattern: block, comb or random
    #[arg(long)]
    pub pilots: Option<String>,
    /// Pilots per symbol for comb/random (default 32/64/512 for N=256/512/4096)
    #[arg(long)]
    pub pilot_count: Option<usize>,
    /// Symbols per block-pilot period
    #[arg(long)]
    pub block_period: Option<usize>,
    /// Channel profile: `delay gain_real gain_imag` per line
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Occupied bandwidth in Hz, for the timing report
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// CSV output path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the constellation label table as CSV and exit
    #[arg(long)]
    pub emit_constellation: bool,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::config(format!("config key `{key}`: cannot parse `{value}`: {e}")))
}

fn set<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

impl Args {
    /// Fills every unset field from config-file text.
    pub fn merge_config_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("config line {}: expected `key = value`", i + 1))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "subchannels" => set(&mut self.subchannels, parse_value(&key, value)?),
                "order" => set(&mut self.order, parse_value(&key, value)?),
                "snr-start" => set(&mut self.snr_start, parse_value(&key, value)?),
                "snr-stop" => set(&mut self.snr_stop, parse_value(&key, value)?),
                "snr-step" => set(&mut self.snr_step, parse_value(&key, value)?),
                "iterations" => set(&mut self.iterations, parse_value(&key, value)?),
                "symbols-per-iter" => set(&mut self.symbols_per_iter, parse_value(&key, value)?),
                "cp-len" => set(&mut self.cp_len, parse_value(&key, value)?),
                "pilots" => set(&mut self.pilots, value.to_string()),
                "pilot-count" => set(&mut self.pilot_count, parse_value(&key, value)?),
                "block-period" => set(&mut self.block_period, parse_value(&key, value)?),
                "channel" => set(&mut self.channel, PathBuf::from(value)),
                "bandwidth" => set(&mut self.bandwidth, parse_value(&key, value)?),
                "seed" => set(&mut self.seed, parse_value(&key, value)?),
                "threads" => set(&mut self.threads, parse_value(&key, value)?),
                "out" => set(&mut self.out, PathBuf::from(value)),
                "emit-constellation" => {
                    let on: bool = parse_value(&key, value)?;
                    self.emit_constellation |= on;
                }
                other => return Err(Error::config(format!("unknown config key `{other}`"))),
            }
        }
        Ok(())
    }

    pub fn mod_order(&self) -> Result<ModOrder> {
        ModOrder::try_from(self.order.unwrap_or(4))
    }

    /// Builds the sweep from the merged settings; defaults fill the rest.
    pub fn to_spec(&self) -> Result<SweepSpec> {
        let n = self.subchannels.unwrap_or(256);
        let mut cfg = OfdmConfig::new(n, self.mod_order()?);
        if let Some(cp) = self.cp_len {
            cfg.cp_len = cp;
        }
        if let Some(p) = &self.pilots {
            cfg.pilot_pattern = p.parse::<PilotPattern>()?;
        }
        cfg.pilot_count = self.pilot_count.unwrap_or_else(|| default_pilot_count(n));
        if let Some(b) = self.block_period {
            cfg.block_period = b;
        }
        cfg.bandwidth_hz = self.bandwidth;

        let mut spec = SweepSpec::new(cfg);
        if let Some(v) = self.snr_start {
            spec.snr_start_db = v;
        }
        if let Some(v) = self.snr_stop {
            spec.snr_stop_db = v;
        }
        if let Some(v) = self.snr_step {
            spec.snr_step_db = v;
        }
        if let Some(v) = self.iterations {
            spec.iterations = v;
        }
        if let Some(v) = self.symbols_per_iter {
            spec.symbols_per_iteration = v;
        }
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if let Some(path) = &self.channel {
            spec.channel = ChannelModel::load_profile(path)?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INVALID_CONFIG,
    }
}

fn execute<W: Write>(mut args: Args, stdout: &mut W) -> Result<()> {
    if let Some(path) = args.config.clone() {
        args.merge_config_text(&fs::read_to_string(path)?)?;
    }
    if args.emit_constellation {
        Constellation::new(args.mod_order()?).write_table_csv(&mut *stdout)?;
        return Ok(());
    }
    let spec = args.to_spec()?;
    let result = match args.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?
            .install(|| run_sweep(&spec))?,
        None => run_sweep(&spec)?,
    };
    write_summary(&result, &mut *stdout)?;
    if let Some(path) = &args.out {
        let mut sink = BufWriter::new(File::create(path)?);
        write_csv(&result, &mut sink)?;
    }
    Ok(())
}

/// Parses `argv`, runs, and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID_CONFIG
            } else {
                EXIT_OK
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match execute(args, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_with_stdio() -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    run(std::env::args_os(), &mut out, &mut io::stderr())
}
