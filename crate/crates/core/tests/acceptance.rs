//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every criterion reports even when an earlier one fails; the process exits
//! non-zero if any criterion fails.
//!
//! Set `IMMOCZ_ACCEPTANCE_ONLY=<substring>` to run a subset.

mod common;

use std::time::{Duration, Instant};

use immocz::codebook::{build_codebook_set, zeros_to_coefficients, SystemParams, DEFAULT_RADIUS};
use immocz::detection::majority_vote;
use immocz::golden;
use immocz::roots::find_roots;
use immocz::simulator::{run_sweep, spectral_efficiency_gain, BerCurve, SimConfig};
use immocz::{decode, Complex64, Detector, EbN0Convention, Message, Scheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn golden_matrices() -> Outcome {
    let start = Instant::now();
    let report = golden::check(&golden::received_zeros()).unwrap();
    let elapsed = start.elapsed();
    let relevant = |c: &&golden::GoldenCheck| {
        c.name.starts_with("P_RFMD") || c.name.starts_with("P_DiZeT") || c.name.ends_with("pattern")
    };
    let failing: Vec<String> = report
        .checks
        .iter()
        .filter(relevant)
        .filter(|c| !c.pass)
        .map(|c| format!("{} expected {} got {} (|d|={:.2e})", c.name, c.expected, c.computed, c.delta))
        .collect();
    let fast = within(elapsed, Duration::from_secs(1));
    outcome(
        failing.is_empty() && fast,
        format!(
            "max|dP_RFMD|={:.2e} max|dP_DiZeT|={:.2e} tol=5e-4, patterns {}, {:.1} ms{}",
            report.max_delta("P_RFMD"),
            report.max_delta("P_DiZeT"),
            if report.checks.iter().filter(|c| c.name.ends_with("pattern")).all(|c| c.pass) {
                "exact"
            } else {
                "differ"
            },
            elapsed.as_secs_f64() * 1e3,
            if failing.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failing.join("; "))
            }
        ),
    )
}

fn example2_scalars() -> Outcome {
    let report = golden::check(&golden::received_zeros()).unwrap();
    let get = |name: &str| report.checks.iter().find(|c| c.name == name).unwrap().clone();
    let (out, inn) = (get("dizet p_out(1,1)"), get("dizet p_in(1,1)"));
    outcome(
        out.pass && inn.pass && out.tolerance == 1e-3 && inn.tolerance == 5e-4,
        format!(
            "p_out={} (|d|={:.1e}, tol 1e-3), p_in={} (|d|={:.1e}, tol 5e-4)",
            out.computed, out.delta, inn.computed, inn.delta
        ),
    )
}

fn example3_decode() -> Outcome {
    let set = golden::codebook_set();
    let reference = golden::reference_rfmd_matrices().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let vote = majority_vote(&reference.penalties, &mut rng);
    let result = immocz::detection::decide(&reference, &set, &mut rng).unwrap();
    let pass = vote.votes == golden::EXPECTED_VOTES
        && vote.chosen_index == golden::EXPECTED_INDEX
        && !vote.tie_occurred
        && result.message.to_string() == golden::MESSAGE;
    outcome(
        pass,
        format!("votes {:?}, index {}, message {}", vote.votes, vote.chosen_index, result.message),
    )
}

fn se_table() -> Outcome {
    let cases = [
        (10, 3, 8, "18.18"),
        (10, 3, 6, "44.44"),
        (10, 3, 4, "85.71"),
        (20, 6, 18, "8.33"),
        (20, 6, 16, "18.18"),
        (20, 6, 14, "30.00"),
    ];
    let mut pass = true;
    let mut got = Vec::new();
    for (n, l, k, expected) in cases {
        let p = SystemParams::new(n, k, l, DEFAULT_RADIUS).unwrap();
        let s = format!("{:.2}", spectral_efficiency_gain(&p) * 100.0);
        pass &= s == expected;
        got.push(format!("N={n} K={k}: {s}%"));
    }
    outcome(pass, got.join(", "))
}

fn zero_noise_exhaustive() -> Outcome {
    let set = build_codebook_set(SystemParams::new(5, 3, 3, DEFAULT_RADIUS).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let mut errors = 0;
    let mut decodes = 0;
    for value in 0..32 {
        let msg = Message::from_value(value, 5);
        for _ in 0..100 {
            let h = immocz::channel::sample_channel(&set.params, Default::default(), &mut rng);
            let y = immocz::channel::convolve(&immocz::encode(&msg, &set).unwrap(), &h);
            for d in [Detector::Rfmd, Detector::Dizet] {
                decodes += 1;
                match decode(&y, &set, d, &mut rng) {
                    Ok(r) if r.message == msg => {}
                    _ => errors += 1,
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        errors == 0 && within(elapsed, Duration::from_secs(10)),
        format!("{errors} errors in {decodes} decodes, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn root_finder_oracle() -> Outcome {
    let r = DEFAULT_RADIUS;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    let mut unmatched = 0;
    let mut over = 0;
    for _ in 0..1000 {
        let degree = rng.gen_range(1..=30);
        let zeros: Vec<Complex64> = (0..degree)
            .map(|_| Complex64::from_polar(rng.gen_range(1.0 / r..=r), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let coeffs = zeros_to_coefficients(&zeros);
        match find_roots(&coeffs.0)
            .ok()
            .and_then(|found| common::matched_max_error(&zeros, &found.roots))
        {
            Some(e) => {
                worst = worst.max(e);
                over += (e > 1e-8) as usize;
            }
            None => unmatched += 1,
        }
    }
    outcome(
        unmatched == 0 && worst <= 1e-8,
        format!("max matched error {worst:.2e} (tol 1e-8), {over} of 1000 sets above tolerance, {unmatched} unmatched"),
    )
}

fn scale_invariance() -> Outcome {
    let set = build_codebook_set(SystemParams::new(10, 6, 3, DEFAULT_RADIUS).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut mismatches = 0;
    for i in 0..1000u64 {
        let sigma2 = 10f64.powf(rng.gen_range(-3.0..0.5));
        let (_, y) = common::random_received(&set, sigma2, &mut rng);
        let ys = y.scaled(common::random_scale(&mut rng));
        for d in [Detector::Rfmd, Detector::Dizet] {
            let a = decode(&y, &set, d, &mut ChaCha8Rng::seed_from_u64(i));
            let b = decode(&ys, &set, d, &mut ChaCha8Rng::seed_from_u64(i));
            if a.ok() != b.ok() {
                mismatches += 1;
            }
        }
    }
    outcome(mismatches == 0, format!("{mismatches} differing results over 1000 signals x 2 detectors"))
}

fn determinism() -> Outcome {
    let p = SystemParams::new(10, 6, 3, DEFAULT_RADIUS).unwrap();
    let mut csvs = Vec::new();
    for workers in [1, 4, 16] {
        let mut csv = String::new();
        for (scheme, detector) in [(Scheme::ImMocz, Detector::Rfmd), (Scheme::Mocz, Detector::Dizet)] {
            let cfg = SimConfig::new(p, scheme, detector, vec![0.0, 10.0, 20.0, 30.0])
                .with_trials(3000)
                .with_seed(0x5eed)
                .with_workers(workers);
            csv.push_str(&run_sweep(&cfg).unwrap().to_csv());
        }
        csvs.push(csv);
    }
    let identical = csvs.windows(2).all(|w| w[0] == w[1]);
    outcome(identical, format!("workers 1/4/16, {} CSV bytes each, identical: {identical}", csvs[0].len()))
}

fn sweep(
    p: SystemParams,
    scheme: Scheme,
    detector: Detector,
    grid: &[f64],
    seed: u64,
    convention: EbN0Convention,
) -> BerCurve {
    let mut cfg = SimConfig::new(p, scheme, detector, grid.to_vec()).with_seed(seed);
    cfg.ebn0_convention = convention;
    run_sweep(&cfg).unwrap()
}

fn ber_gain() -> Outcome {
    // Prerequisite: the reference decoder checks must hold before spending
    // minutes on Monte Carlo. The DiZeT matrix rounding is reported by the
    // golden criterion itself.
    let report = golden::check(&golden::received_zeros()).unwrap();
    let gate = report
        .checks
        .iter()
        .filter(|c| !c.name.starts_with("P_DiZeT"))
        .all(|c| c.pass);
    if !gate {
        return outcome(false, "reference vectors gate failed; sweep not run");
    }

    // Slice of the -5:3:43 grid around BER 1e-4, preset trial schedule
    // (>= 110k trials per point from 37 dB).
    let grid = [31.0, 34.0, 37.0, 40.0, 43.0];
    let p = SystemParams::new(10, 6, 3, DEFAULT_RADIUS).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut info = Vec::new();
    for (detector, target) in [(Detector::Rfmd, 1.9), (Detector::Dizet, 2.6)] {
        let im = sweep(p, Scheme::ImMocz, detector, &grid, 1, EbN0Convention::Paper);
        let mocz = sweep(p, Scheme::Mocz, detector, &grid, 1, EbN0Convention::Paper);
        let mocz_at = mocz.ebn0_at_ber(1e-4);
        match (im.ebn0_at_ber(1e-4), mocz_at) {
            (Some(a), Some(b)) => {
                let gain = b - a;
                let ok = (gain - target).abs() <= 0.7 && im.is_valid() && mocz.is_valid();
                pass &= ok;
                parts.push(format!(
                    "{detector}: IM-MOCZ {a:.2} dB, MOCZ {b:.2} dB, gain {gain:.2} dB (target {target} +/- 0.7)"
                ));
            }
            (a, b) => {
                pass = false;
                parts.push(format!("{detector}: BER 1e-4 not bracketed (IM-MOCZ {a:?}, MOCZ {b:?})"));
            }
        }
        // Not scored: the same comparison with N0 referred to all N bits.
        let alt = sweep(p, Scheme::ImMocz, detector, &grid, 1, EbN0Convention::PerInformationBit);
        if let (Some(a), Some(b)) = (alt.ebn0_at_ber(1e-4), mocz_at) {
            info.push(format!("{detector} {:.2} dB", b - a));
        }
    }

    let mid = [10.0, 13.0, 16.0, 19.0, 22.0, 25.0];
    let p4 = SystemParams::new(10, 4, 3, DEFAULT_RADIUS).unwrap();
    for detector in [Detector::Rfmd, Detector::Dizet] {
        let cfg = |scheme| SimConfig::new(p4, scheme, detector, mid.to_vec()).with_trials(20_000).with_seed(2);
        let im = run_sweep(&cfg(Scheme::ImMocz)).unwrap();
        let mocz = run_sweep(&cfg(Scheme::Mocz)).unwrap();
        let worse: Vec<f64> = im
            .points
            .iter()
            .zip(&mocz.points)
            .filter(|(a, b)| a.ber() > b.ber())
            .map(|(a, _)| a.ebn0_db)
            .collect();
        pass &= !worse.is_empty();
        parts.push(format!("K=4 {detector}: IM-MOCZ worse at {worse:?} dB"));
    }
    if !info.is_empty() {
        parts.push(format!("info, per-information-bit Eb/N0: gain {}", info.join(", ")));
    }
    outcome(pass, parts.join("; "))
}

fn statistical_sanity() -> Outcome {
    let p = SystemParams::new(10, 6, 3, DEFAULT_RADIUS).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    let grid: Vec<f64> = (0..17).map(|i| -5.0 + 3.0 * i as f64).collect();
    for scheme in [Scheme::ImMocz, Scheme::Mocz] {
        for detector in [Detector::Rfmd, Detector::Dizet] {
            let low = SimConfig::new(p, scheme, detector, vec![-30.0]).with_trials(20_000).with_seed(3);
            let pt = run_sweep(&low).unwrap().points.remove(0);
            let z = (pt.ber() - 0.5).abs() / pt.ci95();
            let near_half = z <= 3.0;

            let curve = run_sweep(&SimConfig::new(p, scheme, detector, grid.clone()).with_trials(5000).with_seed(4)).unwrap();
            let rises: Vec<f64> = curve
                .points
                .windows(2)
                .filter(|w| w[1].ber() - w[0].ber() > w[0].ci95() + w[1].ci95())
                .map(|w| w[1].ebn0_db)
                .collect();
            pass &= near_half && rises.is_empty();
            parts.push(format!(
                "{} {detector}: BER(-30 dB)={:.4} ({z:.2} half-widths), rises {rises:?}",
                scheme.as_str(),
                pt.ber()
            ));
        }
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("golden matrix reproduction", golden_matrices),
        ("example 2 scalars", example2_scalars),
        ("example 3 decode", example3_decode),
        ("spectral-efficiency table", se_table),
        ("zero-noise exhaustive decode", zero_noise_exhaustive),
        ("root-finder oracle", root_finder_oracle),
        ("decision scale invariance", scale_invariance),
        ("determinism under parallelism", determinism),
        ("BER gain reproduction", ber_gain),
        ("statistical sanity", statistical_sanity),
    ];
    let filter = std::env::var("IMMOCZ_ACCEPTANCE_ONLY").ok();
    let mut failed = 0;
    for (name, run) in criteria {
        if filter.as_deref().is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        println!(
            "{} {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
