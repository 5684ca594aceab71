//! Flat `key = value` sweep configuration files and the built-in presets.
//!
//! ```text
//! # N=10, K=6 against conventional MOCZ
//! N = 10
//! K = 6
//! L_ch = 3
//! R = 1.1974
//! scheme = IM-MOCZ, MOCZ
//! detector = RFMD, DiZeT
//! ebn0_points = -5:3:43
//! trials_per_point = paper
//! master_seed = 1
//! ```
//!
//! `scheme` and `detector` take comma-separated lists; one sweep is run per
//! combination. `ebn0_points` is a list or a `start:step:stop` range.
//! `trials_per_point` is `paper`, one count for every point, or one count per
//! point.

use crate::channel::{ChannelNormalization, EbN0Convention, Scheme};
use crate::codebook::{SystemParams, DEFAULT_RADIUS};
use crate::detection::Detector;
use crate::error::{Error, Result};
use crate::simulator::{paper_trial_count, SimConfig};

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 6] = ["fig3-K8", "fig3-K6", "fig3-K4", "fig4-K18", "fig4-K16", "fig4-K14"];

const GRID: &str = "-5:3:43";

/// Config text of a built-in preset.
pub fn preset(name: &str) -> Option<String> {
    let (n, l_ch, k) = match name {
        "fig3-K8" => (10, 3, 8),
        "fig3-K6" => (10, 3, 6),
        "fig3-K4" => (10, 3, 4),
        "fig4-K18" => (20, 6, 18),
        "fig4-K16" => (20, 6, 16),
        "fig4-K14" => (20, 6, 14),
        _ => return None,
    };
    Some(format!(
        "N = {n}\nK = {k}\nL_ch = {l_ch}\nR = {DEFAULT_RADIUS}\nscheme = IM-MOCZ, MOCZ\n\
         detector = RFMD, DiZeT\nebn0_points = {GRID}\ntrials_per_point = paper\nmaster_seed = 1\n"
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrialSpec {
    Paper,
    Uniform(u64),
    PerPoint(Vec<u64>),
}

/// Parsed configuration file: one or more sweeps sharing link parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub params: SystemParams,
    pub schemes: Vec<Scheme>,
    pub detectors: Vec<Detector>,
    pub ebn0_points: Vec<f64>,
    pub trials: TrialSpec,
    pub master_seed: u64,
    pub workers: Option<usize>,
    pub channel_normalization: ChannelNormalization,
    pub ebn0_convention: EbN0Convention,
}

impl SweepPlan {
    /// One [`SimConfig`] per scheme/detector combination, schemes outermost.
    pub fn configs(&self) -> Result<Vec<SimConfig>> {
        let trials = match &self.trials {
            TrialSpec::Paper => self.ebn0_points.iter().map(|&p| paper_trial_count(p)).collect(),
            TrialSpec::Uniform(t) => vec![*t; self.ebn0_points.len()],
            TrialSpec::PerPoint(v) => v.clone(),
        };
        let mut out = Vec::new();
        for &scheme in &self.schemes {
            for &detector in &self.detectors {
                let mut cfg = SimConfig::new(self.params, scheme, detector, self.ebn0_points.clone());
                cfg.trials_per_point = trials.clone();
                cfg.master_seed = self.master_seed;
                if let Some(w) = self.workers {
                    cfg.workers = w;
                }
                cfg.channel_normalization = self.channel_normalization;
                cfg.ebn0_convention = self.ebn0_convention;
                cfg.validate()?;
                out.push(cfg);
            }
        }
        Ok(out)
    }
}

fn bad(key: &str, value: &str, what: &str) -> Error {
    Error::Config(format!("{key} = {value}: {what}"))
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| bad(key, value, "not a valid number"))
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

pub fn parse_scheme(s: &str) -> Result<Scheme> {
    match s.to_ascii_lowercase().as_str() {
        "im-mocz" | "immocz" | "im" => Ok(Scheme::ImMocz),
        "mocz" => Ok(Scheme::Mocz),
        _ => Err(Error::Config(format!("unknown scheme '{s}'"))),
    }
}

pub fn parse_detector(s: &str) -> Result<Detector> {
    match s.to_ascii_lowercase().as_str() {
        "rfmd" => Ok(Detector::Rfmd),
        "dizet" => Ok(Detector::Dizet),
        _ => Err(Error::Config(format!("unknown detector '{s}'"))),
    }
}

fn parse_points(key: &str, value: &str) -> Result<Vec<f64>> {
    if value.contains(':') {
        let parts: Vec<f64> = value
            .split(':')
            .map(|p| parse_num(key, p))
            .collect::<Result<_>>()?;
        let [start, step, stop] = parts[..] else {
            return Err(bad(key, value, "range must be start:step:stop"));
        };
        if !(step > 0.0) || stop < start {
            return Err(bad(key, value, "range needs step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    list(value).map(|p| parse_num(key, p)).collect()
}

/// Parses a configuration file.
pub fn parse_config(text: &str) -> Result<SweepPlan> {
    let mut n = None;
    let mut k = None;
    let mut l_ch = None;
    let mut radius = DEFAULT_RADIUS;
    let mut schemes = vec![Scheme::ImMocz];
    let mut detectors = vec![Detector::Rfmd, Detector::Dizet];
    let mut points = None;
    let mut trials = TrialSpec::Paper;
    let mut master_seed = 1;
    let mut workers = None;
    let mut channel_normalization = ChannelNormalization::default();
    let mut ebn0_convention = EbN0Convention::default();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "N" => n = Some(parse_num::<usize>(key, value)?),
            "K" => k = Some(parse_num::<usize>(key, value)?),
            "L_ch" => l_ch = Some(parse_num::<usize>(key, value)?),
            "R" => radius = parse_num(key, value)?,
            "scheme" => schemes = list(value).map(parse_scheme).collect::<Result<_>>()?,
            "detector" => detectors = list(value).map(parse_detector).collect::<Result<_>>()?,
            "ebn0_points" => points = Some(parse_points(key, value)?),
            "trials_per_point" => {
                trials = if value.eq_ignore_ascii_case("paper") {
                    TrialSpec::Paper
                } else {
                    let v: Vec<u64> = list(value).map(|t| parse_num(key, t)).collect::<Result<_>>()?;
                    match v.len() {
                        0 => return Err(bad(key, value, "empty")),
                        1 => TrialSpec::Uniform(v[0]),
                        _ => TrialSpec::PerPoint(v),
                    }
                }
            }
            "master_seed" => master_seed = parse_num(key, value)?,
            "workers" => workers = Some(parse_num(key, value)?),
            "channel_normalization" => {
                channel_normalization = match value.to_ascii_lowercase().as_str() {
                    "expectation" => ChannelNormalization::Expectation,
                    "per-realization" | "per_realization" => ChannelNormalization::PerRealization,
                    _ => return Err(bad(key, value, "expected expectation or per-realization")),
                }
            }
            "ebn0_convention" => {
                ebn0_convention = match value.to_ascii_lowercase().as_str() {
                    "paper" => EbN0Convention::Paper,
                    "per-information-bit" | "per_information_bit" => EbN0Convention::PerInformationBit,
                    _ => return Err(bad(key, value, "expected paper or per-information-bit")),
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }

    let n = n.ok_or_else(|| Error::Config("missing key N".into()))?;
    let l_ch = l_ch.ok_or_else(|| Error::Config("missing key L_ch".into()))?;
    let k = match k {
        Some(k) => k,
        None if schemes.iter().all(|s| *s == Scheme::Mocz) => n,
        None => return Err(Error::Config("missing key K".into())),
    };
    if schemes.is_empty() || detectors.is_empty() {
        return Err(Error::Config("scheme and detector lists must not be empty".into()));
    }
    let ebn0_points = points.ok_or_else(|| Error::Config("missing key ebn0_points".into()))?;
    if ebn0_points.is_empty() {
        return Err(Error::Config("ebn0_points must not be empty".into()));
    }
    if let TrialSpec::PerPoint(v) = &trials {
        if v.len() != ebn0_points.len() {
            return Err(Error::Config(format!(
                "trials_per_point has {} entries for {} Eb/N0 points",
                v.len(),
                ebn0_points.len()
            )));
        }
    }
    Ok(SweepPlan {
        params: SystemParams::new(n, k, l_ch, radius)?,
        schemes,
        detectors,
        ebn0_points,
        trials,
        master_seed,
        workers,
        channel_normalization,
        ebn0_convention,
    })
}
