#![allow(dead_code)]

use immocz::channel::{add_awgn, convolve, sample_channel, NoiseSpec};
use immocz::codebook::{encode, CodebookSet, Message};
use immocz::{ChannelNormalization, Complex64, ReceivedSignal};
use rand::Rng;

pub fn random_message<R: Rng>(n: usize, rng: &mut R) -> Message {
    Message::new((0..n).map(|_| rng.gen_range(0..=1u8)).collect()).unwrap()
}

/// Message, channel and noise drawn from `rng`, passed through the link.
pub fn random_received<R: Rng>(set: &CodebookSet, sigma2: f64, rng: &mut R) -> (Message, ReceivedSignal) {
    let msg = random_message(set.params.n(), rng);
    let h = sample_channel(&set.params, ChannelNormalization::Expectation, rng);
    let x = encode(&msg, set).unwrap();
    let noise = NoiseSpec { ebn0_db: f64::NAN, sigma2 };
    (msg, add_awgn(&convolve(&x, &h), &noise, rng))
}

/// Nonzero complex scalar with log-uniform magnitude over twelve decades.
pub fn random_scale<R: Rng>(rng: &mut R) -> Complex64 {
    let mag = 10f64.powf(rng.gen_range(-6.0..6.0));
    Complex64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Pairs every expected root with its nearest computed root and returns the
/// largest distance, or `None` if the nearest-neighbour map is not a bijection.
pub fn matched_max_error(expected: &[Complex64], computed: &[Complex64]) -> Option<f64> {
    if expected.len() != computed.len() {
        return None;
    }
    let mut used = vec![false; computed.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (j, d) = computed
            .iter()
            .enumerate()
            .map(|(j, c)| (j, (c - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if used[j] {
            return None;
        }
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
