//! Monte Carlo BER engine.
//!
//! Every trial draws its message, channel, noise and tie-break coins from a
//! private ChaCha stream keyed by `(master_seed, point_index, trial_index)`,
//! so a sweep produces the same counts for any worker count or scheduling.

use std::fmt::Write as _;
use std::ops::{Add, AddAssign};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{
    add_awgn, convolve, noise_variance, sample_channel, ChannelNormalization, EbN0Convention,
    NoiseSpec, Scheme,
};
use crate::codebook::{build_codebook_set, encode, bits_to_index, CodebookSet, Message, SystemParams};
use crate::detection::{decode, Detector};
use crate::error::{Error, Result};
use crate::fmt::format_significant;

/// Fraction of failed root finds above which a sweep point is flagged invalid.
pub const MAX_ROOT_FAILURE_RATE: f64 = 1e-4;

/// Per-trial random stream.
pub type TrialRng = ChaCha8Rng;

const STREAM_TAG: &[u8; 8] = b"immocz01";

/// Stream for one trial. The seed is the concatenation of the three inputs
/// and a fixed tag, so distinct triples always key distinct streams.
pub fn derive_rng_stream(master_seed: u64, point_index: u64, trial_index: u64) -> TrialRng {
    TrialRng::from_seed(stream_seed(master_seed, point_index, trial_index))
}

/// Seed material behind [`derive_rng_stream`].
pub fn stream_seed(master_seed: u64, point_index: u64, trial_index: u64) -> [u8; 32] {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&point_index.to_le_bytes());
    seed[16..24].copy_from_slice(&trial_index.to_le_bytes());
    seed[24..].copy_from_slice(STREAM_TAG);
    seed
}

/// Trials per point used by the built-in presets: 2·10⁴ below 13 dB,
/// 4·10⁴ below 25 dB, 6·10⁴ below 37 dB and 1.1·10⁵ above.
pub fn paper_trial_count(ebn0_db: f64) -> u64 {
    if ebn0_db < 13.0 {
        20_000
    } else if ebn0_db < 25.0 {
        40_000
    } else if ebn0_db < 37.0 {
        60_000
    } else {
        110_000
    }
}

/// Bits per channel use: `N/(N+L_ch)` for MOCZ, `N/(K+L_ch)` for IM-MOCZ.
pub fn spectral_efficiency(params: &SystemParams, scheme: Scheme) -> f64 {
    let samples = match scheme {
        Scheme::Mocz => params.n(),
        Scheme::ImMocz => params.k(),
    } + params.l_ch();
    params.n() as f64 / samples as f64
}

/// Relative spectral-efficiency gain of IM-MOCZ over MOCZ.
pub fn spectral_efficiency_gain(params: &SystemParams) -> f64 {
    spectral_efficiency(params, Scheme::ImMocz) / spectral_efficiency(params, Scheme::Mocz) - 1.0
}

/// One sweep: a scheme/detector pair evaluated over a list of Eb/N0 points.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// For [`Scheme::Mocz`] the value of `K` is ignored and forced to `N`.
    pub params: SystemParams,
    pub scheme: Scheme,
    pub detector: Detector,
    pub ebn0_points: Vec<f64>,
    /// One count per point.
    pub trials_per_point: Vec<u64>,
    pub master_seed: u64,
    pub workers: usize,
    pub channel_normalization: ChannelNormalization,
    pub ebn0_convention: EbN0Convention,
}

impl SimConfig {
    /// Defaults: preset trial schedule, seed 1, all available cores.
    pub fn new(params: SystemParams, scheme: Scheme, detector: Detector, ebn0_points: Vec<f64>) -> Self {
        let trials_per_point = ebn0_points.iter().map(|&p| paper_trial_count(p)).collect();
        Self {
            params,
            scheme,
            detector,
            ebn0_points,
            trials_per_point,
            master_seed: 1,
            workers: rayon::current_num_threads(),
            channel_normalization: ChannelNormalization::default(),
            ebn0_convention: EbN0Convention::default(),
        }
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials_per_point = vec![trials; self.ebn0_points.len()];
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Link parameters actually simulated.
    pub fn effective_params(&self) -> SystemParams {
        match self.scheme {
            Scheme::Mocz => self.params.conventional(),
            Scheme::ImMocz => self.params,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ebn0_points.is_empty() {
            return Err(Error::Config("ebn0_points must not be empty".into()));
        }
        if let Some(p) = self.ebn0_points.iter().find(|p| !p.is_finite()) {
            return Err(Error::Config(format!("Eb/N0 point {p} is not finite")));
        }
        if self.trials_per_point.len() != self.ebn0_points.len() {
            return Err(Error::Config(format!(
                "{} trial counts given for {} Eb/N0 points",
                self.trials_per_point.len(),
                self.ebn0_points.len()
            )));
        }
        if let Some(i) = self.trials_per_point.iter().position(|&t| t == 0) {
            return Err(Error::Config(format!(
                "trials_per_point must be >= 1 (point {} at {} dB has 0)",
                i + 1,
                self.ebn0_points[i]
            )));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// Error counts of one trial, or summed over many.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    pub bit_errors_total: u64,
    pub bit_errors_implicit: u64,
    pub bit_errors_explicit: u64,
    pub codebook_error: u64,
    pub tie_events: u64,
    pub empty_sector_events: u64,
}

impl Add for TrialOutcome {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            bit_errors_total: self.bit_errors_total + o.bit_errors_total,
            bit_errors_implicit: self.bit_errors_implicit + o.bit_errors_implicit,
            bit_errors_explicit: self.bit_errors_explicit + o.bit_errors_explicit,
            codebook_error: self.codebook_error + o.codebook_error,
            tie_events: self.tie_events + o.tie_events,
            empty_sector_events: self.empty_sector_events + o.empty_sector_events,
        }
    }
}

impl AddAssign for TrialOutcome {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

fn random_message<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Message {
    Message::new((0..n).map(|_| rng.gen::<bool>() as u8).collect()).expect("bits are binary")
}

/// One pass through the link: random message, channel and noise from the
/// trial's stream, then encode, transmit, decode and count bit errors.
pub fn run_trial_with_noise(
    cfg: &SimConfig,
    set: &CodebookSet,
    noise: &NoiseSpec,
    point_index: usize,
    trial_index: u64,
) -> Result<TrialOutcome> {
    let params = &set.params;
    let mut rng = derive_rng_stream(cfg.master_seed, point_index as u64, trial_index);
    let msg = random_message(params.n(), &mut rng);
    let h = sample_channel(params, cfg.channel_normalization, &mut rng);
    let x = encode(&msg, set)?;
    let y = add_awgn(&convolve(&x, &h), noise, &mut rng);
    let result = decode(&y, set, cfg.detector, &mut rng)?;

    let split = params.implicit_bits();
    let errors = |range: std::ops::Range<usize>| {
        msg.bits()[range.clone()]
            .iter()
            .zip(&result.message.bits()[range])
            .filter(|(a, b)| a != b)
            .count() as u64
    };
    let implicit = errors(0..split);
    let explicit = errors(split..params.n());
    let true_index = bits_to_index(&msg.bits()[..split], split)?;
    Ok(TrialOutcome {
        bit_errors_total: implicit + explicit,
        bit_errors_implicit: implicit,
        bit_errors_explicit: explicit,
        codebook_error: (result.chosen_index != true_index) as u64,
        tie_events: result.tie_occurred as u64 + result.diagnostics.dizet_ties as u64,
        empty_sector_events: result.diagnostics.empty_sectors as u64,
    })
}

/// [`run_trial_with_noise`] at the configured noise level of `point_index`.
pub fn run_trial(cfg: &SimConfig, set: &CodebookSet, point_index: usize, trial_index: u64) -> Result<TrialOutcome> {
    let noise = point_noise(cfg, point_index)?;
    run_trial_with_noise(cfg, set, &noise, point_index, trial_index)
}

fn point_noise(cfg: &SimConfig, point_index: usize) -> Result<NoiseSpec> {
    let ebn0 = *cfg.ebn0_points.get(point_index).ok_or_else(|| {
        Error::Config(format!("point index {point_index} out of range"))
    })?;
    Ok(noise_variance(
        &cfg.effective_params(),
        cfg.scheme,
        cfg.ebn0_convention,
        ebn0,
    ))
}

/// Aggregated results at one Eb/N0 point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStats {
    pub ebn0_db: f64,
    /// Completed trials (excludes root-finding failures).
    pub trials: u64,
    pub root_failures: u64,
    pub n: usize,
    pub k: usize,
    pub totals: TrialOutcome,
}

impl PointStats {
    pub fn bits(&self) -> u64 {
        self.trials * self.n as u64
    }

    fn rate(count: u64, denom: u64) -> f64 {
        if denom == 0 {
            0.0
        } else {
            count as f64 / denom as f64
        }
    }

    pub fn ber(&self) -> f64 {
        Self::rate(self.totals.bit_errors_total, self.bits())
    }

    pub fn implicit_ber(&self) -> f64 {
        Self::rate(self.totals.bit_errors_implicit, self.trials * (self.n - self.k) as u64)
    }

    pub fn explicit_ber(&self) -> f64 {
        Self::rate(self.totals.bit_errors_explicit, self.trials * self.k as u64)
    }

    pub fn codebook_error_rate(&self) -> f64 {
        Self::rate(self.totals.codebook_error, self.trials)
    }

    /// 95% normal-approximation half-width on the BER.
    pub fn ci95(&self) -> f64 {
        let bits = self.bits();
        if bits == 0 {
            return 0.0;
        }
        let p = self.ber();
        1.96 * (p * (1.0 - p) / bits as f64).sqrt()
    }

    pub fn is_valid(&self) -> bool {
        let attempted = self.trials + self.root_failures;
        attempted > 0 && (self.root_failures as f64) <= MAX_ROOT_FAILURE_RATE * attempted as f64
    }
}

/// BER versus Eb/N0 for one scheme/detector pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub scheme: Scheme,
    pub detector: Detector,
    pub params: SystemParams,
    pub points: Vec<PointStats>,
}

pub const CSV_HEADER: &str = "scheme,detector,N,K,L_ch,R,ebn0_db,trials,bits,bit_errors,ber,implicit_ber,explicit_ber,codebook_error_rate,ci95,ties,empty_sectors,root_failures";

impl BerCurve {
    pub fn is_valid(&self) -> bool {
        self.points.iter().all(PointStats::is_valid)
    }

    /// CSV rows without the header.
    pub fn csv_rows(&self) -> String {
        let g = |x: f64| format_significant(x, 6);
        let mut out = String::new();
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                self.scheme.as_str(),
                self.detector.as_str(),
                self.params.n(),
                self.params.k(),
                self.params.l_ch(),
                g(self.params.radius()),
                g(p.ebn0_db),
                p.trials,
                p.bits(),
                p.totals.bit_errors_total,
                g(p.ber()),
                g(p.implicit_ber()),
                g(p.explicit_ber()),
                g(p.codebook_error_rate()),
                g(p.ci95()),
                p.totals.tie_events,
                p.totals.empty_sector_events,
                p.root_failures,
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows())
    }

    /// Eb/N0 where the curve first falls to `target`, interpolating
    /// `log10(BER)` linearly between the bracketing grid points.
    pub fn ebn0_at_ber(&self, target: f64) -> Option<f64> {
        self.points.windows(2).find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let (ba, bb) = (a.ber(), b.ber());
            if ba >= target && bb <= target && ba > 0.0 {
                if bb <= 0.0 || ba == bb {
                    return Some(if ba == target { a.ebn0_db } else { b.ebn0_db });
                }
                let t = (ba.log10() - target.log10()) / (ba.log10() - bb.log10());
                Some(a.ebn0_db + t * (b.ebn0_db - a.ebn0_db))
            } else {
                None
            }
        })
    }
}

#[derive(Default, Clone, Copy)]
struct Accumulator {
    trials: u64,
    root_failures: u64,
    totals: TrialOutcome,
}

impl Accumulator {
    fn merge(self, o: Self) -> Self {
        Self {
            trials: self.trials + o.trials,
            root_failures: self.root_failures + o.root_failures,
            totals: self.totals + o.totals,
        }
    }
}

pub fn run_sweep(cfg: &SimConfig) -> Result<BerCurve> {
    run_sweep_observed(cfg, |_| {})
}

/// Runs the sweep, calling `observer` after each point completes.
pub fn run_sweep_observed<F: FnMut(&PointStats)>(cfg: &SimConfig, mut observer: F) -> Result<BerCurve> {
    cfg.validate()?;
    let params = cfg.effective_params();
    let set = build_codebook_set(params);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let mut points = Vec::with_capacity(cfg.ebn0_points.len());
    for (point_index, (&ebn0_db, &trials)) in cfg.ebn0_points.iter().zip(&cfg.trials_per_point).enumerate() {
        let noise = point_noise(cfg, point_index)?;
        let acc = pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|t| match run_trial_with_noise(cfg, &set, &noise, point_index, t) {
                    Ok(totals) => Ok(Accumulator {
                        trials: 1,
                        root_failures: 0,
                        totals,
                    }),
                    Err(Error::DegeneratePolynomial(_) | Error::RootFinding(_)) => Ok(Accumulator {
                        root_failures: 1,
                        ..Accumulator::default()
                    }),
                    Err(e) => Err(e),
                })
                .try_reduce(Accumulator::default, |a, b| Ok(a.merge(b)))
        })?;
        let stats = PointStats {
            ebn0_db,
            trials: acc.trials,
            root_failures: acc.root_failures,
            n: params.n(),
            k: params.k(),
            totals: acc.totals,
        };
        observer(&stats);
        points.push(stats);
    }
    Ok(BerCurve {
        scheme: cfg.scheme,
        detector: cfg.detector,
        params,
        points,
    })
}
