//! Iterative radix-2 FFT.
//!
//! Forward transforms are unscaled, inverse transforms carry `1/N`:
//!
//! ```text
//! X[k] = sum_n x[n] e^{-j 2 pi k n / N}
//! x[n] = (1/N) sum_k X[k] e^{+j 2 pi k n / N}
//! ```

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, OnceLock, RwLock};

use crate::{Error, Result, Sample};

/// Precomputed bit-reversal table and twiddles for one transform length.
#[derive(Debug)]
pub struct FftPlan {
    len: usize,
    bit_reverse: Vec<usize>,
    // e^{-j 2 pi k / N} for k in 0..N/2
    twiddles: Vec<Sample>,
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::NonPowerOfTwoLength(len));
        }
        let bits = len.trailing_zeros();
        let bit_reverse = (0..len)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        // each twiddle evaluated directly, so no error accumulates along k
        let twiddles = (0..len / 2)
            .map(|k| {
                let (s, c) = (-TAU * k as f64 / len as f64).sin_cos();
                Sample::new(c, s)
            })
            .collect();
        Ok(Self {
            len,
            bit_reverse,
            twiddles,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward_in_place(&self, buf: &mut [Sample]) -> Result<()> {
        self.check_len(buf.len())?;
        self.butterflies(buf, false);
        Ok(())
    }

    pub fn inverse_in_place(&self, buf: &mut [Sample]) -> Result<()> {
        self.check_len(buf.len())?;
        self.butterflies(buf, true);
        let scale = 1.0 / self.len as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
        Ok(())
    }

    fn check_len(&self, actual: usize) -> Result<()> {
        if actual != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual,
            });
        }
        Ok(())
    }

    fn butterflies(&self, buf: &mut [Sample], inverse: bool) {
        let n = self.len;
        for (i, &j) in self.bit_reverse.iter().enumerate() {
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for block in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            half *= 2;
        }
    }
}

type PlanCache = RwLock<HashMap<usize, Arc<FftPlan>>>;

/// Shared plan for `len`, built on first use and reused afterwards.
pub fn plan(len: usize) -> Result<Arc<FftPlan>> {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().expect("fft plan cache poisoned").get(&len) {
        return Ok(Arc::clone(p));
    }
    let built = Arc::new(FftPlan::new(len)?);
    let mut guard = cache.write().expect("fft plan cache poisoned");
    Ok(Arc::clone(guard.entry(len).or_insert(built)))
}

pub fn fft(v: &[Sample]) -> Result<Vec<Sample>> {
    let p = plan(v.len())?;
    let mut out = v.to_vec();
    p.forward_in_place(&mut out)?;
    Ok(out)
}

pub fn ifft(v: &[Sample]) -> Result<Vec<Sample>> {
    let p = plan(v.len())?;
    let mut out = v.to_vec();
    p.inverse_in_place(&mut out)?;
    Ok(out)
}
