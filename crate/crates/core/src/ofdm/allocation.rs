use std::f64::consts::FRAC_1_SQRT_2;

use super::config::{OfdmConfig, PilotPattern};
use crate::numerics::{derive_seed, seeded_stream};
use crate::{Result, Sample};

const PILOT_VALUE_DOMAIN: u64 = 0x5049_4c4f_5456_414c;
const PILOT_PLACEMENT_DOMAIN: u64 = 0x5049_4c4f_5450_4f53;

/// Which subcarriers of one OFDM symbol carry pilots and which carry data.
#[derive(Clone, Debug, PartialEq)]
pub struct SubcarrierMap {
    pub pilot_indices: Vec<usize>,
    pub data_indices: Vec<usize>,
    /// Known value for each entry of `pilot_indices`.
    pub pilot_values: Vec<Sample>,
}

impl SubcarrierMap {
    pub fn n_subchannels(&self) -> usize {
        self.pilot_indices.len() + self.data_indices.len()
    }

    fn from_pilots(pilots: Vec<usize>, n: usize, table: &[Sample]) -> Self {
        let mut is_pilot = vec![false; n];
        for &p in &pilots {
            is_pilot[p] = true;
        }
        let data_indices = (0..n).filter(|&k| !is_pilot[k]).collect();
        let pilot_values = pilots.iter().map(|&k| table[k]).collect();
        Self {
            pilot_indices: pilots,
            data_indices,
            pilot_values,
        }
    }
}

/// Produces the subcarrier map of every symbol index for one configuration.
///
/// Pilot values are fixed per subcarrier: a unit-energy QPSK point drawn
/// once from a pilot-only stream of `seed`. Random placements come from a
/// second stream keyed by the symbol index, so any symbol's map can be
/// rebuilt without replaying earlier ones.
#[derive(Clone, Debug)]
pub struct SubcarrierAllocator {
    n: usize,
    pattern: PilotPattern,
    pilot_count: usize,
    block_period: usize,
    placement_seed: u64,
    values: Vec<Sample>,
    comb: Option<SubcarrierMap>,
}

impl SubcarrierAllocator {
    pub fn new(cfg: &OfdmConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n_subchannels;
        let mut rng = seeded_stream(derive_seed(seed, PILOT_VALUE_DOMAIN), 0);
        let values = (0..n)
            .map(|_| {
                let w = rng.next_u64();
                let re = if w & 1 == 0 {
                    FRAC_1_SQRT_2
                } else {
                    -FRAC_1_SQRT_2
                };
                let im = if w & 2 == 0 {
                    FRAC_1_SQRT_2
                } else {
                    -FRAC_1_SQRT_2
                };
                Sample::new(re, im)
            })
            .collect::<Vec<_>>();
        let comb = (cfg.pilot_pattern == PilotPattern::Comb)
            .then(|| SubcarrierMap::from_pilots(comb_indices(n, cfg.pilot_count), n, &values));
        Ok(Self {
            n,
            pattern: cfg.pilot_pattern,
            pilot_count: cfg.pilot_count,
            block_period: cfg.block_period,
            placement_seed: derive_seed(seed, PILOT_PLACEMENT_DOMAIN),
            values,
            comb,
        })
    }

    pub fn allocate(&self, symbol_index: u64) -> SubcarrierMap {
        match self.pattern {
            PilotPattern::Comb => self.comb.clone().expect("comb map built at construction"),
            PilotPattern::Block => {
                let pilots = if symbol_index.is_multiple_of(self.block_period as u64) {
                    (0..self.n).collect()
                } else {
                    Vec::new()
                };
                SubcarrierMap::from_pilots(pilots, self.n, &self.values)
            }
            PilotPattern::Random => {
                let mut rng = seeded_stream(self.placement_seed, symbol_index);
                // partial Fisher-Yates: the first pilot_count slots are a
                // uniform draw without replacement
                let mut pool: Vec<usize> = (0..self.n).collect();
                for i in 0..self.pilot_count {
                    let j = i + rng.below(self.n - i);
                    pool.swap(i, j);
                }
                pool.truncate(self.pilot_count);
                pool.sort_unstable();
                SubcarrierMap::from_pilots(pool, self.n, &self.values)
            }
        }
    }
}

/// `round(i * N / count)` for `i` in `0..count`.
fn comb_indices(n: usize, count: usize) -> Vec<usize> {
    (0..count)
        .map(|i| (2 * i * n + count) / (2 * count))
        .collect()
}

pub fn allocate_subcarriers(
    cfg: &OfdmConfig,
    symbol_index: u64,
    seed: u64,
) -> Result<SubcarrierMap> {
    Ok(SubcarrierAllocator::new(cfg, seed)?.allocate(symbol_index))
}
