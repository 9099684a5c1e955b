use crate::channel::{add_awgn_in_place, apply_multipath, signal_power, ChannelModel, DelayLine};
use crate::modem::Constellation;
use crate::numerics::RngStream;
use crate::ofdm::{
    build_frequency_symbol, channel_frequency_response, equalize, extract_data, ofdm_demodulate,
    ofdm_modulate, OfdmConfig, SubcarrierAllocator, SubcarrierMap, TimeSymbol,
};
use crate::{Result, Sample};

/// Data-bit error tally. Addition is associative and commutative, so
/// partial counts can be reduced in any order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ErrorCount {
    pub bit_errors: u64,
    pub bits: u64,
}

impl std::ops::Add for ErrorCount {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            bit_errors: self.bit_errors + rhs.bit_errors,
            bits: self.bits + rhs.bits,
        }
    }
}

impl std::iter::Sum for ErrorCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

/// One transmitter, channel and receiver chain.
///
/// The channel delay line persists across the symbols of a frame and is
/// cleared at the start of every frame. Not meant to be shared between
/// threads; each Monte Carlo worker builds its own.
#[derive(Debug)]
pub struct Link {
    cfg: OfdmConfig,
    constellation: Constellation,
    allocator: SubcarrierAllocator,
    channel: ChannelModel,
    response: Vec<Sample>,
    state: DelayLine,
}

impl Link {
    pub fn new(cfg: &OfdmConfig, channel: &ChannelModel, pilot_seed: u64) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg: cfg.clone(),
            constellation: Constellation::new(cfg.mod_order),
            allocator: SubcarrierAllocator::new(cfg, pilot_seed)?,
            channel: channel.clone(),
            response: channel_frequency_response(channel, cfg.n_subchannels),
            state: DelayLine::new(channel),
        })
    }

    pub fn config(&self) -> &OfdmConfig {
        &self.cfg
    }

    /// Sends `n_symbols` consecutive symbols starting at global symbol index
    /// `first_symbol` and counts data-bit errors after hard decisions.
    ///
    /// Noise power is set from the measured power of the transmitted frame,
    /// prefix and pilots included.
    pub fn run_frame(
        &mut self,
        first_symbol: u64,
        n_symbols: usize,
        snr_db: f64,
        data_rng: &mut RngStream,
        noise_rng: &mut RngStream,
    ) -> Result<ErrorCount> {
        let sym_len = self.cfg.symbol_len();
        let k = self.constellation.bits_per_symbol();

        let mut maps: Vec<SubcarrierMap> = Vec::with_capacity(n_symbols);
        let mut tx_bits: Vec<Vec<u8>> = Vec::with_capacity(n_symbols);
        let mut frame = Vec::with_capacity(n_symbols * sym_len);
        let mut data = Vec::with_capacity(self.cfg.n_subchannels);
        for s in 0..n_symbols {
            let map = self.allocator.allocate(first_symbol + s as u64);
            let mut bits = vec![0u8; map.data_indices.len() * k];
            data_rng.fill_bits(&mut bits);
            data.clear();
            self.constellation.map_bits_into(&bits, &mut data)?;
            let freq = build_frequency_symbol(&data, &map)?;
            frame.extend(ofdm_modulate(&freq, &self.cfg)?.samples);
            maps.push(map);
            tx_bits.push(bits);
        }
        if frame.is_empty() {
            return Ok(ErrorCount::default());
        }

        let ref_power = signal_power(&frame)?;
        self.state.reset();
        let mut rx = apply_multipath(&frame, &self.channel, &mut self.state);
        add_awgn_in_place(&mut rx, snr_db, ref_power, noise_rng)?;

        let mut count = ErrorCount::default();
        let mut rx_bits = Vec::with_capacity(self.cfg.n_subchannels * k);
        for ((chunk, map), bits) in rx.chunks_exact(sym_len).zip(&maps).zip(&tx_bits) {
            let symbol = TimeSymbol {
                samples: chunk.to_vec(),
            };
            let freq = ofdm_demodulate(&symbol, &self.cfg)?;
            let eq = equalize(&freq, &self.response, &map.data_indices)?;
            rx_bits.clear();
            self.constellation
                .demap_into(&extract_data(&eq, map), &mut rx_bits);
            count.bit_errors += bits.iter().zip(&rx_bits).filter(|(a, b)| a != b).count() as u64;
            count.bits += bits.len() as u64;
        }
        Ok(count)
    }
}
