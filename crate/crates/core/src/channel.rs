//! Multipath channel and additive noise: `y = x * h + w`.
//!
//! Taps and noise samples are circularly-symmetric complex Gaussians drawn
//! with `rand_distr::StandardNormal` (ziggurat) for the real and imaginary
//! parts, so a given RNG state always yields the same realization.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::codebook::{CoefficientVector, SystemParams};
use crate::poly;
use crate::Complex64;

/// Conventional MOCZ (`K = N`) or index-modulated MOCZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Mocz,
    ImMocz,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Mocz => "MOCZ",
            Scheme::ImMocz => "IM-MOCZ",
        }
    }
}

/// How channel energy is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelNormalization {
    /// `E‖h‖² = 1`; each realization has random energy.
    #[default]
    Expectation,
    /// Every realization rescaled to `‖h‖² = 1`.
    PerRealization,
}

/// Which bit count divides the transmit energy when converting Eb/N0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EbN0Convention {
    /// `N` for MOCZ, `K` for IM-MOCZ.
    #[default]
    Paper,
    /// `N` for both schemes.
    PerInformationBit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub taps: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }
}

/// Received samples, `K + L_ch` of them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedSignal {
    pub samples: Vec<Complex64>,
}

impl ReceivedSignal {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * factor).collect(),
        }
    }
}

/// Operating point and the per-sample complex noise variance it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub ebn0_db: f64,
    pub sigma2: f64,
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self {
            ebn0_db: f64::INFINITY,
            sigma2: 0.0,
        }
    }
}

/// Circularly-symmetric complex Gaussian with `E|z|² = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sd, im * sd)
}

/// `L_ch` i.i.d. taps of variance `1/L_ch` (flat power delay profile).
pub fn sample_channel<R: Rng + ?Sized>(
    params: &SystemParams,
    normalization: ChannelNormalization,
    rng: &mut R,
) -> ChannelRealization {
    let l = params.l_ch();
    let mut taps: Vec<Complex64> = (0..l).map(|_| complex_gaussian(rng, 1.0 / l as f64)).collect();
    if normalization == ChannelNormalization::PerRealization {
        let energy: f64 = taps.iter().map(|t| t.norm_sqr()).sum();
        if energy > 0.0 {
            let scale = energy.sqrt().recip();
            taps.iter_mut().for_each(|t| *t *= scale);
        }
    }
    ChannelRealization { taps }
}

/// Noiseless channel output: the full linear convolution `x * h`.
pub fn convolve(x: &CoefficientVector, h: &ChannelRealization) -> ReceivedSignal {
    ReceivedSignal {
        samples: poly::multiply(x.as_slice(), &h.taps),
    }
}

/// `N_0 = (N + L_ch) / (D · 10^(Eb/N0 / 10))`.
pub fn noise_variance(
    params: &SystemParams,
    scheme: Scheme,
    convention: EbN0Convention,
    ebn0_db: f64,
) -> NoiseSpec {
    let bits = match (scheme, convention) {
        (Scheme::ImMocz, EbN0Convention::Paper) => params.k(),
        _ => params.n(),
    } as f64;
    let sigma2 = params.transmit_energy() / (bits * 10f64.powf(ebn0_db / 10.0));
    NoiseSpec { ebn0_db, sigma2 }
}

pub fn add_awgn<R: Rng + ?Sized>(y: &ReceivedSignal, spec: &NoiseSpec, rng: &mut R) -> ReceivedSignal {
    if spec.sigma2 == 0.0 {
        return y.clone();
    }
    ReceivedSignal {
        samples: y
            .samples
            .iter()
            .map(|s| s + complex_gaussian(rng, spec.sigma2))
            .collect(),
    }
}
