//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ofdm_ber::channel::{add_awgn, signal_power, ChannelModel, Tap};
use ofdm_ber::harness::{
    analytic_ber, binomial_stderr, run_ber_point, run_sweep, single_carrier_ber, snr_for_eb_n0,
    write_csv, BerPoint, Link, SweepSpec,
};
use ofdm_ber::modem::ModOrder;
use ofdm_ber::numerics::{q_function, seeded_stream};
use ofdm_ber::ofdm::{default_pilot_count, OfdmConfig, PilotPattern};
use ofdm_ber::transform::{fft, ifft};
use ofdm_ber::Sample;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SIGMAS: f64 = 3.0;
const SNR_CAL_TOL_DB: f64 = 0.1;
const MIN_NOISELESS_BITS: u64 = 100_000;
const MIN_STAT_BITS: u64 = 1_000_000;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))?;
    Ok(format!("{took:.1?} (limit {limit:?})"))
}

fn ac1_noiseless() -> Outcome {
    let start = Instant::now();
    let mut min_bits = u64::MAX;
    let mut configs = 0;
    for n in [256, 512, 4096] {
        for order in ModOrder::ALL {
            for pattern in [
                PilotPattern::Block,
                PilotPattern::Comb,
                PilotPattern::Random,
            ] {
                let cfg = OfdmConfig::new(n, order).with_pilots(pattern, default_pilot_count(n));
                // smallest long-run payload is the block pattern's 7/8 of N
                let bits_per_symbol = (n * order.bits_per_symbol()) as u64 * 7 / 8;
                let symbols = 8u64;
                let iterations =
                    MIN_NOISELESS_BITS.div_ceil(bits_per_symbol * symbols) as usize + 1;
                let spec = SweepSpec {
                    iterations,
                    symbols_per_iteration: symbols as usize,
                    ..SweepSpec::new(cfg)
                };
                let p = run_ber_point(&spec, f64::INFINITY).map_err(|e| e.to_string())?;
                ensure(p.bit_errors == 0, || {
                    format!("N={n} order={order} {pattern}: {} errors", p.bit_errors)
                })?;
                ensure(p.bits_total >= MIN_NOISELESS_BITS, || {
                    format!("N={n} order={order} {pattern}: only {} bits", p.bits_total)
                })?;
                min_bits = min_bits.min(p.bits_total);
                configs += 1;
            }
        }
    }
    let t = within_budget(start, Duration::from_secs(30))?;
    Ok(format!(
        "{configs} configurations error-free, >= {min_bits} bits each, {t}"
    ))
}

fn direct_dft(x: &[Sample]) -> Vec<Sample> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(m, v)| v * Sample::from_polar(1.0, -TAU * ((k * m) % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

fn ac2_fft() -> Outcome {
    let mut worst_round_trip = 0.0f64;
    let mut worst_dft = 0.0f64;
    for bits in 1..=12 {
        let n = 1usize << bits;
        let mut rng = seeded_stream(2024, n as u64);
        let x: Vec<Sample> = (0..n)
            .map(|_| Sample::new(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0))
            .collect();
        let spectrum = fft(&x).map_err(|e| e.to_string())?;
        let back = ifft(&spectrum).map_err(|e| e.to_string())?;
        let err = x
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst_round_trip = worst_round_trip.max(err);
        if n <= 64 {
            let oracle = direct_dft(&x);
            let err = spectrum
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst_dft = worst_dft.max(err);
        }
    }
    ensure(worst_round_trip < 1e-12, || {
        format!("round trip error {worst_round_trip:e}")
    })?;
    ensure(worst_dft < 1e-10, || format!("DFT mismatch {worst_dft:e}"))?;
    Ok(format!(
        "round trip {worst_round_trip:.2e} (< 1e-12), vs DFT {worst_dft:.2e} (< 1e-10)"
    ))
}

fn two_ray(delay: usize) -> ChannelModel {
    ChannelModel::new(vec![
        Tap::new(0, Sample::new(1.0, 0.0)),
        Tap::new(delay, Sample::from_polar(0.5, FRAC_PI_4)),
    ])
    .expect("valid two-ray channel")
}

fn ac3_cyclic_prefix() -> Outcome {
    let start = Instant::now();
    let cp = 32;
    let symbols = 16;
    let frame = |order, ch: &ChannelModel| -> Result<(u64, u64), String> {
        let cfg = OfdmConfig::new(256, order).with_cp_len(cp);
        let mut link = Link::new(&cfg, ch, 11).map_err(|e| e.to_string())?;
        let c = link
            .run_frame(
                0,
                symbols,
                f64::INFINITY,
                &mut seeded_stream(12, 0),
                &mut seeded_stream(13, 0),
            )
            .map_err(|e| e.to_string())?;
        Ok((c.bit_errors, c.bits))
    };
    for order in ModOrder::ALL {
        let (errors, bits) = frame(order, &two_ray(3))?;
        ensure(errors == 0, || {
            format!("order {order}: {errors}/{bits} errors with delay 3")
        })?;
    }
    // leakage from the late echo only crosses 16-QAM decision boundaries
    let (errors, bits) = frame(ModOrder::Qam16, &two_ray(cp + 4))?;
    ensure(errors > 0, || {
        format!("no errors with delay {} over {bits} bits", cp + 4)
    })?;
    let t = within_budget(start, Duration::from_secs(5))?;
    Ok(format!(
        "delay 3: BER 0 over {symbols} symbols (all orders); delay {}: {errors}/{bits} errors (16-QAM); {t}",
        cp + 4
    ))
}

fn ac4_awgn_calibration() -> Outcome {
    let start = Instant::now();
    let n = 1_000_000;
    let zeros = vec![Sample::new(0.0, 0.0); n];
    let mut report = Vec::new();
    for snr_db in [0.0, 9.0, 18.0, 27.0] {
        let mut rng = seeded_stream(4, snr_db as u64);
        let noise = add_awgn(&zeros, snr_db, 1.0, &mut rng).map_err(|e| e.to_string())?;
        let measured = 10.0 * (1.0 / signal_power(&noise).map_err(|e| e.to_string())?).log10();
        ensure((measured - snr_db).abs() <= SNR_CAL_TOL_DB, || {
            format!("commanded {snr_db} dB, measured {measured:.4} dB")
        })?;
        report.push(format!("{snr_db}->{measured:.3}"));
    }
    let t = within_budget(start, Duration::from_secs(5))?;
    Ok(format!("{} dB (tol 0.1 dB); {t}", report.join(", ")))
}

fn bare_config(n: usize, order: ModOrder) -> OfdmConfig {
    OfdmConfig::new(n, order).with_pilots(PilotPattern::Comb, 0)
}

fn point_at_eb_n0(
    cfg: OfdmConfig,
    eb_n0_db: f64,
    min_bits: u64,
    seed: u64,
) -> Result<BerPoint, String> {
    let bits_per_symbol = (cfg.n_subchannels * cfg.bits_per_symbol()) as u64;
    let symbols = 10;
    let iterations = min_bits.div_ceil(bits_per_symbol * symbols as u64) as usize;
    let snr = snr_for_eb_n0(&cfg, eb_n0_db);
    let spec = SweepSpec {
        iterations,
        symbols_per_iteration: symbols,
        seed,
        ..SweepSpec::new(cfg)
    };
    let p = run_ber_point(&spec, snr).map_err(|e| e.to_string())?;
    ensure(p.bits_total >= min_bits, || {
        format!("only {} bits", p.bits_total)
    })?;
    Ok(p)
}

fn analytic_match(order: ModOrder, grid: &[f64], seed: u64) -> Outcome {
    let start = Instant::now();
    let mut report = Vec::new();
    for &eb_n0 in grid {
        let p = point_at_eb_n0(bare_config(256, order), eb_n0, MIN_STAT_BITS, seed)?;
        let expected = analytic_ber(order.order(), eb_n0)
            .map_err(|e| e.to_string())?
            .expect("closed form exists");
        let sigma = binomial_stderr(
            (expected * p.bits_total as f64).round() as u64,
            p.bits_total,
        );
        let dev = (p.ber() - expected).abs();
        ensure(dev <= SIGMAS * sigma, || {
            format!(
                "{eb_n0} dB: measured {:.4e}, expected {expected:.4e}, {:.1} sigma",
                p.ber(),
                dev / sigma
            )
        })?;
        report.push(format!(
            "{eb_n0}dB {:.3e}/{expected:.3e} ({:.1} sigma)",
            p.ber(),
            dev / sigma
        ));
    }
    let t = within_budget(start, Duration::from_secs(60))?;
    Ok(format!("{}; {t}", report.join(", ")))
}

fn ac5_qpsk_analytic() -> Outcome {
    let q = q_function(2f64.sqrt());
    ensure((q - 0.078_65).abs() < 5e-6, || format!("Q(sqrt 2) = {q}"))?;
    analytic_match(ModOrder::Qpsk, &[0.0, 2.0, 4.0, 6.0, 8.0], 5)
}

fn ac6_qam16_analytic() -> Outcome {
    analytic_match(ModOrder::Qam16, &[8.0, 10.0, 12.0], 6)
}

fn ac7_qam8_single_carrier() -> Outcome {
    let start = Instant::now();
    let mut report = Vec::new();
    for eb_n0 in [6.0, 9.0, 12.0] {
        let ofdm = point_at_eb_n0(bare_config(256, ModOrder::Qam8), eb_n0, MIN_STAT_BITS, 7)?;
        let sc = single_carrier_ber(ModOrder::Qam8, eb_n0, MIN_STAT_BITS, 70)
            .map_err(|e| e.to_string())?;
        let sc_ber = sc.bit_errors as f64 / sc.bits as f64;
        let sigma = ofdm
            .stderr_est()
            .hypot(binomial_stderr(sc.bit_errors, sc.bits));
        let dev = (ofdm.ber() - sc_ber).abs();
        ensure(dev <= SIGMAS * sigma, || {
            format!(
                "{eb_n0} dB: OFDM {:.4e} vs single-carrier {sc_ber:.4e}",
                ofdm.ber()
            )
        })?;
        report.push(format!("{eb_n0}dB {:.3e}/{sc_ber:.3e}", ofdm.ber()));
    }
    let t = within_budget(start, Duration::from_secs(60))?;
    Ok(format!("OFDM/single-carrier {}; {t}", report.join(", ")))
}

fn no_worse(a: &BerPoint, b: &BerPoint) -> bool {
    a.ber() <= b.ber() + SIGMAS * a.stderr_est().hypot(b.stderr_est())
}

fn ac8_order_dominance() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in [256, 512, 4096] {
        let sweeps = ModOrder::ALL
            .iter()
            .map(|&order| {
                run_sweep(&SweepSpec::new(OfdmConfig::new(n, order))).map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let (q4, q8, q16) = (&sweeps[0].points, &sweeps[1].points, &sweeps[2].points);
        for ((p4, p8), p16) in q4.iter().zip(q8).zip(q16) {
            ensure(no_worse(p4, p8) && no_worse(p8, p16), || {
                format!(
                    "N={n} SNR {} dB: BER {:.3e} / {:.3e} / {:.3e}",
                    p4.snr_db,
                    p4.ber(),
                    p8.ber(),
                    p16.ber()
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "BER(4) <= BER(8) <= BER(16) at {checked} (N, SNR) points, 0-27 dB, 100 iterations; {:.1?}",
        start.elapsed()
    ))
}

fn ac9_determinism() -> Outcome {
    let spec = SweepSpec {
        iterations: 20,
        symbols_per_iteration: 4,
        seed: 99,
        ..SweepSpec::new(
            OfdmConfig::new(512, ModOrder::Qam16).with_pilots(PilotPattern::Random, 64),
        )
    };
    let csv_with = |threads| -> Result<Vec<u8>, String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        let result = pool
            .install(|| run_sweep(&spec))
            .map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_csv(&result, &mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let a = csv_with(1)?;
    let b = csv_with(1)?;
    let c = csv_with(4)?;
    ensure(a == b, || "repeated single-thread runs differ".into())?;
    ensure(a == c, || "1-thread and 4-thread runs differ".into())?;
    Ok(format!(
        "{} CSV bytes identical across runs and thread counts",
        a.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 noiseless end-to-end exactness", ac1_noiseless),
        ("AC2 FFT correctness", ac2_fft),
        ("AC3 cyclic prefix / multipath", ac3_cyclic_prefix),
        ("AC4 AWGN calibration", ac4_awgn_calibration),
        ("AC5 QPSK analytic BER", ac5_qpsk_analytic),
        ("AC6 16-QAM analytic BER", ac6_qam16_analytic),
        (
            "AC7 8-QAM single-carrier equivalence",
            ac7_qam8_single_carrier,
        ),
        ("AC8 modulation order dominance", ac8_order_dominance),
        ("AC9 determinism", ac9_determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
