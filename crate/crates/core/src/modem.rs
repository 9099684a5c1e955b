//! Gray-coded rectangular QAM for orders 4, 8 and 16.
//!
//! Each axis uses a reflected Gray code over its amplitude levels, ordered
//! from the most positive level to the most negative. A symbol label is the
//! in-phase Gray word followed by the quadrature Gray word, and bits enter
//! the label most-significant first.
//!
//! | order | in-phase levels | quadrature levels | scale |
//! |-------|-----------------|-------------------|-------|
//! | 4     | ±1              | ±1                | 1/√2  |
//! | 8     | ±1, ±3          | ±1                | 1/√6  |
//! | 16    | ±1, ±3          | ±1, ±3            | 1/√10 |

use std::fmt;
use std::io::{self, Write};

use crate::{Error, Result, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModOrder {
    Qpsk,
    Qam8,
    Qam16,
}

impl ModOrder {
    pub const ALL: [ModOrder; 3] = [ModOrder::Qpsk, ModOrder::Qam8, ModOrder::Qam16];

    pub fn order(self) -> u32 {
        match self {
            ModOrder::Qpsk => 4,
            ModOrder::Qam8 => 8,
            ModOrder::Qam16 => 16,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.order().trailing_zeros() as usize
    }

    // bits carried by the in-phase and quadrature axes
    fn axis_bits(self) -> (usize, usize) {
        match self {
            ModOrder::Qpsk => (1, 1),
            ModOrder::Qam8 => (2, 1),
            ModOrder::Qam16 => (2, 2),
        }
    }
}

impl TryFrom<u32> for ModOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            4 => Ok(ModOrder::Qpsk),
            8 => Ok(ModOrder::Qam8),
            16 => Ok(ModOrder::Qam16),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }
}

impl fmt::Display for ModOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order())
    }
}

/// Unit average energy point set with its Gray labels.
///
/// `points[i]` carries label `labels[i]`; points are stored in grid order
/// (in-phase level major, quadrature level minor).
#[derive(Clone, Debug)]
pub struct Constellation {
    order: ModOrder,
    points: Vec<Sample>,
    labels: Vec<usize>,
    // point for each label value
    by_label: Vec<Sample>,
}

pub fn build_constellation(order: u32) -> Result<Constellation> {
    Ok(Constellation::new(ModOrder::try_from(order)?))
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

// Amplitude levels of one axis, most positive first: 1 bit -> [1, -1],
// 2 bits -> [3, 1, -1, -3].
fn axis_levels(bits: usize) -> Vec<f64> {
    let count = 1usize << bits;
    (0..count)
        .map(|i| (count - 1) as f64 - 2.0 * i as f64)
        .collect()
}

impl Constellation {
    pub fn new(order: ModOrder) -> Self {
        let (i_bits, q_bits) = order.axis_bits();
        let i_levels = axis_levels(i_bits);
        let q_levels = axis_levels(q_bits);
        let mean_energy =
            |levels: &[f64]| levels.iter().map(|a| a * a).sum::<f64>() / levels.len() as f64;
        let scale = 1.0 / (mean_energy(&i_levels) + mean_energy(&q_levels)).sqrt();

        let m = order.order() as usize;
        let mut points = Vec::with_capacity(m);
        let mut labels = Vec::with_capacity(m);
        let mut by_label = vec![Sample::new(0.0, 0.0); m];
        for (ii, &a) in i_levels.iter().enumerate() {
            for (qi, &b) in q_levels.iter().enumerate() {
                let label = (gray(ii) << q_bits) | gray(qi);
                let p = Sample::new(a * scale, b * scale);
                points.push(p);
                labels.push(label);
                by_label[label] = p;
            }
        }
        Self {
            order,
            points,
            labels,
            by_label,
        }
    }

    pub fn order(&self) -> ModOrder {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order.bits_per_symbol()
    }

    pub fn points(&self) -> &[Sample] {
        &self.points
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn point_for_label(&self, label: usize) -> Sample {
        self.by_label[label]
    }

    pub fn map_bits(&self, bits: &[u8]) -> Result<Vec<Sample>> {
        let mut out = Vec::with_capacity(bits.len() / self.bits_per_symbol().max(1));
        self.map_bits_into(bits, &mut out)?;
        Ok(out)
    }

    /// Appends mapped symbols to `out`.
    pub fn map_bits_into(&self, bits: &[u8], out: &mut Vec<Sample>) -> Result<()> {
        let k = self.bits_per_symbol();
        if !bits.len().is_multiple_of(k) {
            return Err(Error::LengthNotDivisible {
                len: bits.len(),
                bits_per_symbol: k,
            });
        }
        if let Some(position) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidBit {
                position,
                value: bits[position],
            });
        }
        out.extend(bits.chunks_exact(k).map(|group| {
            let label = group.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            self.by_label[label]
        }));
        Ok(())
    }

    /// Label of the closest point; equal distances resolve to the lowest label.
    #[inline]
    pub fn nearest_label(&self, symbol: Sample) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (label, p) in self.by_label.iter().enumerate() {
            let d = (symbol - p).norm_sqr();
            if d < best_dist {
                best_dist = d;
                best = label;
            }
        }
        best
    }

    pub fn demap_symbols(&self, symbols: &[Sample]) -> Vec<u8> {
        let mut out = Vec::with_capacity(symbols.len() * self.bits_per_symbol());
        self.demap_into(symbols, &mut out);
        out
    }

    /// Appends hard-decision bits to `out`.
    pub fn demap_into(&self, symbols: &[Sample], out: &mut Vec<u8>) {
        let k = self.bits_per_symbol();
        for &s in symbols {
            let label = self.nearest_label(s);
            out.extend((0..k).rev().map(|shift| ((label >> shift) & 1) as u8));
        }
    }

    /// Writes `label,bits,in_phase,quadrature` rows in label order.
    pub fn write_table_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let k = self.bits_per_symbol();
        writeln!(w, "label,bits,in_phase,quadrature")?;
        for (label, p) in self.by_label.iter().enumerate() {
            writeln!(w, "{label},{label:0k$b},{:.15},{:.15}", p.re, p.im)?;
        }
        Ok(())
    }
}
