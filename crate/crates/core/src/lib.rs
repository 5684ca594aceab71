//! Index-modulated modulation on conjugate-reciprocal zeros (IM-MOCZ).
//!
//! The first `N-K` bits of a message pick one of `2^(N-K)` phase-rotated
//! MOCZ codebooks; the remaining `K` bits choose, sector by sector, the outer
//! or inner member of that codebook's conjugate-reciprocal zero pairs. The
//! transmit signal is the coefficient vector of the polynomial with those
//! zeros, so `K + 1` samples carry `N` bits.
//!
//! - [`codebook`]: codebooks, bit mapping, encoder.
//! - [`channel`]: multipath convolution, AWGN and Eb/N0 bookkeeping.
//! - [`roots`]: polynomial root finding for the receiver.
//! - [`detection`]: RFMD and DiZeT detectors with majority-vote decoding.
//! - [`simulator`]: reproducible parallel Monte Carlo BER sweeps.
//! - [`cli`]: the `immocz` command-line front end.

pub mod channel;
pub mod cli;
pub mod codebook;
pub mod config;
pub mod detection;
pub mod error;
pub mod fmt;
pub mod golden;
pub mod poly;
pub mod roots;
pub mod simulator;

pub use num_complex::Complex64;

pub use channel::{ChannelNormalization, EbN0Convention, ReceivedSignal, Scheme};
pub use codebook::{build_codebook_set, encode, CodebookSet, Message, SystemParams};
pub use detection::{decode, DetectionResult, Detector};
pub use error::{Error, Result};
