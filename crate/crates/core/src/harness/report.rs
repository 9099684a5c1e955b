use std::io::{self, Write};

use super::SweepResult;

pub const CSV_HEADER: &str = "snr_db,eb_n0_db,ber,bit_errors,bits_total,analytic_ber";

/// One row per point; `analytic_ber` is left empty when there is no
/// closed form. Output depends only on `result`.
pub fn write_csv<W: Write>(result: &SweepResult, mut sink: W) -> io::Result<()> {
    writeln!(sink, "{CSV_HEADER}")?;
    for p in &result.points {
        let analytic = p
            .analytic_ber
            .map(|a| format!("{a:.6e}"))
            .unwrap_or_default();
        writeln!(
            sink,
            "{:.4},{:.4},{:.6e},{},{},{}",
            p.snr_db,
            p.eb_n0_db,
            p.ber(),
            p.bit_errors,
            p.bits_total,
            analytic
        )?;
    }
    sink.flush()
}

/// Human-readable table with the run metadata as a header.
pub fn write_summary<W: Write>(result: &SweepResult, mut w: W) -> io::Result<()> {
    let cfg = &result.spec.cfg;
    let meta = &result.metadata;
    writeln!(w, "{}", meta.version)?;
    writeln!(
        w,
        "N={} cp={} order={} pilots={}({}) iterations={} symbols/iter={} seed={}",
        cfg.n_subchannels,
        cfg.cp_len,
        cfg.mod_order,
        cfg.pilot_pattern,
        cfg.pilot_count,
        result.spec.iterations,
        result.spec.symbols_per_iteration,
        meta.seed
    )?;
    writeln!(w, "channel: {}", meta.channel)?;
    writeln!(w, "Eb/N0 = SNR - {:.4} dB", meta.eb_n0_offset_db)?;
    if let (Some(df), Some(ts)) = (cfg.subcarrier_spacing_hz(), cfg.symbol_duration_s()) {
        writeln!(
            w,
            "subcarrier spacing {df:.3} Hz, symbol duration {ts:.6e} s"
        )?;
    }
    writeln!(
        w,
        "{:>8} {:>9} {:>13} {:>11} {:>12} {:>13}",
        "SNR(dB)", "Eb/N0", "BER", "errors", "bits", "analytic"
    )?;
    for p in &result.points {
        let analytic = p
            .analytic_ber
            .map(|a| format!("{a:.4e}"))
            .unwrap_or_else(|| "-".into());
        writeln!(
            w,
            "{:>8.2} {:>9.3} {:>13.4e} {:>11} {:>12} {:>13}",
            p.snr_db,
            p.eb_n0_db,
            p.ber(),
            p.bit_errors,
            p.bits_total,
            analytic
        )?;
    }
    Ok(())
}
