//! Codebook construction and the bit/zero/coefficient mappings.
//!
//! A conventional MOCZ codebook places `K` conjugate-reciprocal zero pairs at
//! the angles `2π(k-1)/K`, outer members on the circle of radius `R` and inner
//! members on the circle of radius `1/R`. Index modulation adds `N-K` implicit
//! bits by rotating that base codebook: codebook `i` is the base codebook
//! rotated by `θ_i = 2π(i-1)/(K·2^(N-K))`, so the `2^(N-K)` rotations fill the
//! gap between two adjacent base zeros uniformly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::Complex64;

/// Radius of the outer codebook zeros used throughout the reference scenarios.
pub const DEFAULT_RADIUS: f64 = 1.1974;

/// Largest supported number of implicit bits `N-K`.
pub const MAX_IMPLICIT_BITS: usize = 24;

/// Link dimensions shared by the transmitter and receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    n: usize,
    k: usize,
    l_ch: usize,
    radius: f64,
}

impl SystemParams {
    /// `n` message bits, `k` of them mapped onto zeros, `l_ch` channel taps and
    /// outer-zero radius `radius`.
    pub fn new(n: usize, k: usize, l_ch: usize, radius: f64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= K <= N, got N={n}, K={k}"
            )));
        }
        if l_ch == 0 {
            return Err(Error::InvalidParams("L_ch must be at least 1".into()));
        }
        if !(radius.is_finite() && radius > 1.0) {
            return Err(Error::InvalidParams(format!(
                "outer radius must be finite and > 1, got {radius}"
            )));
        }
        if n - k > MAX_IMPLICIT_BITS {
            return Err(Error::InvalidParams(format!(
                "N-K = {} exceeds the supported maximum of {MAX_IMPLICIT_BITS} implicit bits",
                n - k
            )));
        }
        Ok(Self { n, k, l_ch, radius })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l_ch(&self) -> usize {
        self.l_ch
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Number of bits conveyed by the codebook index, `N-K`.
    pub fn implicit_bits(&self) -> usize {
        self.n - self.k
    }

    /// Number of candidate codebooks, `2^(N-K)`.
    pub fn num_codebooks(&self) -> usize {
        1 << self.implicit_bits()
    }

    /// Zeros of the received polynomial, `M = K + L_ch - 1`.
    pub fn num_received_zeros(&self) -> usize {
        self.k + self.l_ch - 1
    }

    /// Received samples per packet, `K + L_ch`.
    pub fn received_len(&self) -> usize {
        self.k + self.l_ch
    }

    /// Total transmit energy, `N + L_ch`.
    pub fn transmit_energy(&self) -> f64 {
        (self.n + self.l_ch) as f64
    }

    /// The same link with index modulation switched off (`K = N`).
    pub fn conventional(&self) -> Self {
        Self { k: self.n, ..*self }
    }
}

/// Which member of a conjugate-reciprocal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroRole {
    /// `|z| = R`, carries a logical 1.
    Outer,
    /// `|z| = 1/R`, carries a logical 0.
    Inner,
}

impl ZeroRole {
    pub fn from_bit(bit: u8) -> Self {
        if bit == 1 {
            ZeroRole::Outer
        } else {
            ZeroRole::Inner
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            ZeroRole::Outer => 1,
            ZeroRole::Inner => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ZeroRole::Outer => "outer",
            ZeroRole::Inner => "inner",
        }
    }
}

impl fmt::Display for ZeroRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A zero `a` and its conjugate reciprocal `1/conj(a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPair {
    pub outer: Complex64,
    pub inner: Complex64,
}

impl ZeroPair {
    /// Builds the pair from its outer member.
    pub fn from_outer(outer: Complex64) -> Self {
        let inner = outer / outer.norm_sqr();
        Self { outer, inner }
    }

    pub fn member(&self, role: ZeroRole) -> Complex64 {
        match role {
            ZeroRole::Outer => self.outer,
            ZeroRole::Inner => self.inner,
        }
    }
}

/// One phase-rotated codebook.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    /// 1-based codebook index `i`.
    pub index: usize,
    /// Phase offset `θ_i` in radians.
    pub theta: f64,
    /// Zero pairs ordered by sector, sector `k` centred on `2π(k-1)/K + θ_i`.
    pub pairs: Vec<ZeroPair>,
}

impl Codebook {
    pub fn num_sectors(&self) -> usize {
        self.pairs.len()
    }

    /// Angle of the centre of the 0-based `sector`, in `[0, 2π)`.
    pub fn sector_center(&self, sector: usize) -> f64 {
        (2.0 * PI * sector as f64 / self.pairs.len() as f64 + self.theta).rem_euclid(2.0 * PI)
    }
}

/// All `2^(N-K)` codebooks of an IM-MOCZ link.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookSet {
    pub params: SystemParams,
    pub books: Vec<Codebook>,
}

impl CodebookSet {
    /// Codebook with 1-based index `index`.
    pub fn book(&self, index: usize) -> Result<&Codebook> {
        if index == 0 || index > self.books.len() {
            return Err(Error::IndexOutOfRange {
                index,
                max: self.books.len(),
            });
        }
        Ok(&self.books[index - 1])
    }

    pub fn len(&self) -> usize {
        self.books.len()
    }

    pub fn is_empty(&self) -> bool {
        self.books.is_empty()
    }

    /// Angular spacing between neighbouring codebooks, `θ_2`.
    pub fn rotation_step(&self) -> f64 {
        2.0 * PI / (self.params.k * self.books.len()) as f64
    }
}

/// Phase offset of 1-based codebook `index`.
pub fn codebook_phase(params: &SystemParams, index: usize) -> f64 {
    2.0 * PI * (index - 1) as f64 / (params.k * params.num_codebooks()) as f64
}

/// Builds the base codebook and its `2^(N-K) - 1` rotations.
pub fn build_codebook_set(params: SystemParams) -> CodebookSet {
    let k = params.k;
    let books = (1..=params.num_codebooks())
        .map(|index| {
            let theta = codebook_phase(&params, index);
            let pairs = (0..k)
                .map(|sector| {
                    let angle = 2.0 * PI * sector as f64 / k as f64 + theta;
                    ZeroPair::from_outer(Complex64::from_polar(params.radius, angle))
                })
                .collect();
            Codebook {
                index,
                theta,
                pairs,
            }
        })
        .collect();
    CodebookSet { params, books }
}

/// An `N`-bit message, `b_1` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message {
    bits: Vec<u8>,
}

impl Message {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        validate_bits(&bits)?;
        Ok(Self { bits })
    }

    /// Message of `n` bits holding `value` with `b_1` as the most significant bit.
    pub fn from_value(value: u64, n: usize) -> Self {
        let bits = (0..n)
            .map(|pos| ((value >> (n - 1 - pos)) & 1) as u8)
            .collect();
        Self { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Splits into the implicit (codebook index) and explicit (zero) streams.
    pub fn split(&self, params: &SystemParams) -> Result<(&[u8], &[u8])> {
        if self.bits.len() != params.n {
            return Err(Error::BitLength {
                expected: params.n,
                got: self.bits.len(),
            });
        }
        Ok(self.bits.split_at(params.implicit_bits()))
    }
}

impl FromStr for Message {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .trim_end_matches("_2")
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParams(format!(
                    "'{other}' is not a binary digit"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

fn validate_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().position(|&b| b > 1) {
        Some(position) => Err(Error::InvalidBit {
            position,
            value: bits[position],
        }),
        None => Ok(()),
    }
}

/// `width`-bit binary representation of `index - 1`, most significant bit first.
pub fn index_to_bits(index: usize, width: usize) -> Result<Vec<u8>> {
    let max = 1usize
        .checked_shl(width as u32)
        .filter(|_| width < usize::BITS as usize)
        .ok_or_else(|| Error::InvalidParams(format!("index width {width} too large")))?;
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { index, max });
    }
    let value = index - 1;
    Ok((0..width)
        .map(|pos| ((value >> (width - 1 - pos)) & 1) as u8)
        .collect())
}

/// Inverse of [`index_to_bits`]: the 1-based codebook selected by `bits`.
pub fn bits_to_index(bits: &[u8], width: usize) -> Result<usize> {
    if bits.len() != width {
        return Err(Error::BitLength {
            expected: width,
            got: bits.len(),
        });
    }
    if width >= usize::BITS as usize {
        return Err(Error::InvalidParams(format!("index width {width} too large")));
    }
    validate_bits(bits)?;
    Ok(bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize) + 1)
}

/// Maps each explicit bit onto the matching member of its sector's pair.
pub fn select_zeros(explicit_bits: &[u8], book: &Codebook) -> Result<Vec<Complex64>> {
    if explicit_bits.len() != book.pairs.len() {
        return Err(Error::BitLength {
            expected: book.pairs.len(),
            got: explicit_bits.len(),
        });
    }
    validate_bits(explicit_bits)?;
    Ok(explicit_bits
        .iter()
        .zip(&book.pairs)
        .map(|(&bit, pair)| pair.member(ZeroRole::from_bit(bit)))
        .collect())
}

/// Detected pair members back to explicit bits (outer = 1, inner = 0).
pub fn demap_zeros_to_bits(row: &[ZeroRole]) -> Vec<u8> {
    row.iter().map(|role| role.bit()).collect()
}

/// Transmit polynomial coefficients, ascending powers of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(pub Vec<Complex64>);

impl CoefficientVector {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
}

/// Expands `∏ (z - zero)` into monic ascending-power coefficients.
///
/// Each factor is applied as a Toeplitz (convolution) update of the running
/// coefficient vector.
pub fn zeros_to_coefficients(zeros: &[Complex64]) -> CoefficientVector {
    let mut coeffs = Vec::with_capacity(zeros.len() + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    for &zero in zeros {
        coeffs.push(Complex64::new(0.0, 0.0));
        for j in (1..coeffs.len()).rev() {
            coeffs[j] = coeffs[j - 1] - zero * coeffs[j];
        }
        coeffs[0] = -zero * coeffs[0];
    }
    CoefficientVector(coeffs)
}

/// Scales `x` by a positive real so that its energy equals `N + L_ch`.
pub fn normalize_energy(x: &CoefficientVector, params: &SystemParams) -> Result<CoefficientVector> {
    let energy = x.energy();
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::DegenerateInput(
            "cannot normalize a zero or non-finite coefficient vector".into(),
        ));
    }
    let target = params.transmit_energy();
    if ((energy - target) / target).abs() <= 1e-15 {
        return Ok(x.clone());
    }
    let scale = (target / energy).sqrt();
    Ok(CoefficientVector(x.0.iter().map(|c| c * scale).collect()))
}

/// Full transmitter: codebook selection, zero mapping, expansion and
/// energy normalization.
pub fn encode(msg: &Message, set: &CodebookSet) -> Result<CoefficientVector> {
    let params = &set.params;
    let (implicit, explicit) = msg.split(params)?;
    let index = bits_to_index(implicit, params.implicit_bits())?;
    let zeros = select_zeros(explicit, set.book(index)?)?;
    normalize_energy(&zeros_to_coefficients(&zeros), params)
}
