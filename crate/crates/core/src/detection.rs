//! Receiver: per-codebook RFMD / DiZeT detection and majority-vote codebook
//! selection.
//!
//! The received polynomial is factored once. Every candidate codebook is then
//! scored sector by sector, producing the `2^(N-K) × K` penalty matrix `P`
//! and the matrix `Â` of detected pair members. Each sector votes for the
//! codebook with the smallest penalty in that sector; the codebook with the
//! most votes gives the implicit bits and its row of `Â` gives the explicit
//! bits.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;

use crate::channel::ReceivedSignal;
use crate::codebook::{
    demap_zeros_to_bits, index_to_bits, Codebook, CodebookSet, Message, ZeroPair, ZeroRole,
};
use crate::error::{Error, Result};
use crate::poly;
use crate::roots::{find_roots_with, RootMethod, RootSet};
use crate::Complex64;

/// Per-codebook detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    /// Root-finding minimum distance.
    Rfmd,
    /// Direct zero testing.
    Dizet,
}

impl Detector {
    pub fn as_str(self) -> &'static str {
        match self {
            Detector::Rfmd => "RFMD",
            Detector::Dizet => "DiZeT",
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How DiZeT obtains `|Y(z)|` at the codebook zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DizetRoute {
    /// Product of distances to the shared root set.
    #[default]
    RootProduct,
    /// Horner evaluation of the received polynomial divided by `|y_M|`.
    Evaluation,
}

/// Receiver configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderOptions {
    pub detector: Detector,
    pub root_method: RootMethod,
    pub dizet_route: DizetRoute,
}

impl DecoderOptions {
    pub fn new(detector: Detector) -> Self {
        Self {
            detector,
            root_method: RootMethod::default(),
            dizet_route: DizetRoute::default(),
        }
    }
}

/// One detected pair member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroEstimate {
    pub role: ZeroRole,
    pub value: Complex64,
}

/// `Â`: detected pair member per codebook (row) and sector (column).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroEstimateMatrix {
    sectors: usize,
    entries: Vec<ZeroEstimate>,
}

impl ZeroEstimateMatrix {
    pub fn num_codebooks(&self) -> usize {
        self.entries.len() / self.sectors.max(1)
    }

    pub fn num_sectors(&self) -> usize {
        self.sectors
    }

    /// Row for the 0-based codebook position `row`.
    pub fn row(&self, row: usize) -> &[ZeroEstimate] {
        &self.entries[row * self.sectors..(row + 1) * self.sectors]
    }

    pub fn get(&self, row: usize, sector: usize) -> ZeroEstimate {
        self.entries[row * self.sectors + sector]
    }

    pub fn roles(&self, row: usize) -> Vec<ZeroRole> {
        self.row(row).iter().map(|e| e.role).collect()
    }
}

/// `P`: nonnegative penalty per codebook (row) and sector (column).
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyMatrix {
    sectors: usize,
    values: Vec<f64>,
}

impl PenaltyMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let sectors = rows.first().map_or(0, Vec::len);
        if sectors == 0 || rows.iter().any(|r| r.len() != sectors) {
            return Err(Error::InvalidParams(
                "penalty matrix rows must be nonempty and of equal length".into(),
            ));
        }
        if rows.iter().flatten().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidParams(
                "penalties must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            sectors,
            values: rows.concat(),
        })
    }

    pub fn num_codebooks(&self) -> usize {
        self.values.len() / self.sectors.max(1)
    }

    pub fn num_sectors(&self) -> usize {
        self.sectors
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.sectors..(row + 1) * self.sectors]
    }

    pub fn get(&self, row: usize, sector: usize) -> f64 {
        self.values[row * self.sectors + sector]
    }
}

/// Event counters gathered while building the matrices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DetectorDiagnostics {
    /// Per-codebook detector runs; always `2^(N-K)` for a full decode.
    pub detector_invocations: usize,
    /// RFMD sectors that held no received zero and fell back to all zeros.
    pub empty_sectors: usize,
    /// DiZeT sectors with `p_in == p_out` exactly.
    pub dizet_ties: usize,
}

/// Output of one per-codebook detector run.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorRow {
    pub estimates: Vec<ZeroEstimate>,
    pub penalties: Vec<f64>,
    pub empty_sectors: usize,
    pub ties: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionMatrices {
    pub estimates: ZeroEstimateMatrix,
    pub penalties: PenaltyMatrix,
    pub diagnostics: DetectorDiagnostics,
}

/// 0-based sector of `book` whose centre angle is nearest to `arg z`.
///
/// Sectors are bins of width `2π/K` centred on the codebook angles. A point
/// exactly on a boundary goes to the lower-index sector.
pub fn sector_of(z: Complex64, book: &Codebook) -> Result<usize> {
    if z.norm() == 0.0 || !z.is_finite() {
        return Err(Error::UndefinedAngle);
    }
    Ok(sector_of_angle(z.arg(), book.theta, book.num_sectors()))
}

fn sector_of_angle(angle: f64, theta: f64, sectors: usize) -> usize {
    let width = 2.0 * PI / sectors as f64;
    // Offset so that sector k covers (k·width, (k+1)·width].
    let rel = (angle - theta + width / 2.0).rem_euclid(2.0 * PI);
    if rel == 0.0 || rel >= 2.0 * PI {
        return 0;
    }
    let bin = (rel / width).ceil() as usize;
    match bin {
        0 => 0,
        b if b > sectors => 0,
        b if b == sectors => sectors - 1,
        b => b - 1,
    }
}

/// RFMD on a precomputed root set.
pub fn rfmd_detect_roots(roots: &RootSet, book: &Codebook) -> DetectorRow {
    let sectors = book.num_sectors();
    let mut members: Vec<Vec<Complex64>> = vec![Vec::new(); sectors];
    for &z in &roots.roots {
        if let Ok(k) = sector_of(z, book) {
            members[k].push(z);
        }
    }
    let mut empty_sectors = 0;
    let (estimates, penalties) = book
        .pairs
        .iter()
        .zip(&members)
        .map(|(pair, in_sector)| {
            let candidates = if in_sector.is_empty() {
                empty_sectors += 1;
                &roots.roots
            } else {
                in_sector
            };
            nearest_member(pair, candidates)
        })
        .unzip();
    DetectorRow {
        estimates,
        penalties,
        empty_sectors,
        ties: 0,
    }
}

/// Smallest distance from any candidate root to either pair member. Equal
/// distances resolve to the outer member.
fn nearest_member(pair: &ZeroPair, candidates: &[Complex64]) -> (ZeroEstimate, f64) {
    let mut best = (
        ZeroEstimate {
            role: ZeroRole::Outer,
            value: pair.outer,
        },
        f64::INFINITY,
    );
    for &z in candidates {
        for role in [ZeroRole::Outer, ZeroRole::Inner] {
            let value = pair.member(role);
            let d = (z - value).norm();
            if d < best.1 {
                best = (ZeroEstimate { role, value }, d);
            }
        }
    }
    best
}

pub fn rfmd_detect(y: &ReceivedSignal, book: &Codebook) -> Result<DetectorRow> {
    let roots = find_roots_with(y.as_slice(), RootMethod::default())?;
    Ok(rfmd_detect_roots(&roots, book))
}

/// `(p_out, p_in)` from the root set:
/// `p_out = ∏|a - ã_m|`, `p_in = R^M ∏|1/conj(a) - ã_m|`.
pub fn dizet_penalties(roots: &RootSet, pair: &ZeroPair, radius: f64) -> (f64, f64) {
    let m = roots.len() as i32;
    let p_out: f64 = roots.roots.iter().map(|r| (pair.outer - r).norm()).product();
    let p_in: f64 = roots.roots.iter().map(|r| (pair.inner - r).norm()).product();
    (p_out, radius.powi(m) * p_in)
}

/// `(p_out, p_in)` by evaluating the received polynomial directly:
/// `|Y(a)| / |y_M|` and `R^M |Y(1/conj(a))| / |y_M|`.
pub fn dizet_penalties_by_evaluation(coeffs: &[Complex64], pair: &ZeroPair, radius: f64) -> (f64, f64) {
    let m = coeffs.len().saturating_sub(1) as i32;
    let lead = coeffs.last().map_or(1.0, |c| c.norm());
    let p_out = poly::eval(coeffs, pair.outer).norm() / lead;
    let p_in = radius.powi(m) * poly::eval(coeffs, pair.inner).norm() / lead;
    (p_out, p_in)
}

fn dizet_row<R, F>(book: &Codebook, mut penalties_of: F, rng: &mut R) -> DetectorRow
where
    R: Rng + ?Sized,
    F: FnMut(&ZeroPair) -> (f64, f64),
{
    let mut ties = 0;
    let (estimates, penalties) = book
        .pairs
        .iter()
        .map(|pair| {
            let (p_out, p_in) = penalties_of(pair);
            let role = if p_out < p_in {
                ZeroRole::Outer
            } else if p_in < p_out {
                ZeroRole::Inner
            } else {
                // One coin flip picks the (penalty, zero) pair jointly; the
                // penalties are equal so only the zero differs.
                ties += 1;
                if rng.gen_bool(0.5) {
                    ZeroRole::Inner
                } else {
                    ZeroRole::Outer
                }
            };
            let estimate = ZeroEstimate {
                role,
                value: pair.member(role),
            };
            (estimate, p_out.min(p_in))
        })
        .unzip();
    DetectorRow {
        estimates,
        penalties,
        empty_sectors: 0,
        ties,
    }
}

/// DiZeT on a precomputed root set.
pub fn dizet_detect_roots<R: Rng + ?Sized>(
    roots: &RootSet,
    book: &Codebook,
    radius: f64,
    rng: &mut R,
) -> DetectorRow {
    dizet_row(book, |pair| dizet_penalties(roots, pair, radius), rng)
}

pub fn dizet_detect<R: Rng + ?Sized>(
    y: &ReceivedSignal,
    book: &Codebook,
    radius: f64,
    rng: &mut R,
) -> Result<DetectorRow> {
    let roots = find_roots_with(y.as_slice(), RootMethod::default())?;
    Ok(dizet_detect_roots(&roots, book, radius, rng))
}

fn assemble<I: IntoIterator<Item = DetectorRow>>(rows: I, sectors: usize) -> DetectionMatrices {
    let mut estimates = Vec::new();
    let mut penalties = Vec::new();
    let mut diagnostics = DetectorDiagnostics::default();
    for row in rows {
        diagnostics.detector_invocations += 1;
        diagnostics.empty_sectors += row.empty_sectors;
        diagnostics.dizet_ties += row.ties;
        estimates.extend(row.estimates);
        penalties.extend(row.penalties);
    }
    DetectionMatrices {
        estimates: ZeroEstimateMatrix {
            sectors,
            entries: estimates,
        },
        penalties: PenaltyMatrix {
            sectors,
            values: penalties,
        },
        diagnostics,
    }
}

/// Runs `detector` for every codebook against one shared root set.
pub fn build_matrices_from_roots<R: Rng + ?Sized>(
    roots: &RootSet,
    set: &CodebookSet,
    detector: Detector,
    rng: &mut R,
) -> DetectionMatrices {
    let radius = set.params.radius();
    let rows: Vec<DetectorRow> = set
        .books
        .iter()
        .map(|book| match detector {
            Detector::Rfmd => rfmd_detect_roots(roots, book),
            Detector::Dizet => dizet_detect_roots(roots, book, radius, rng),
        })
        .collect();
    assemble(rows, set.params.k())
}

pub fn build_matrices<R: Rng + ?Sized>(
    y: &ReceivedSignal,
    set: &CodebookSet,
    detector: Detector,
    rng: &mut R,
) -> Result<DetectionMatrices> {
    build_matrices_with(y, set, &DecoderOptions::new(detector), rng)
}

pub fn build_matrices_with<R: Rng + ?Sized>(
    y: &ReceivedSignal,
    set: &CodebookSet,
    options: &DecoderOptions,
    rng: &mut R,
) -> Result<DetectionMatrices> {
    if y.len() != set.params.received_len() {
        return Err(Error::InvalidParams(format!(
            "received signal has {} samples, expected K + L_ch = {}",
            y.len(),
            set.params.received_len()
        )));
    }
    match (options.detector, options.dizet_route) {
        (Detector::Dizet, DizetRoute::Evaluation) => {
            // Still validates the polynomial the same way as the root route.
            find_roots_with(y.as_slice(), options.root_method)?;
            let radius = set.params.radius();
            let rows: Vec<DetectorRow> = set
                .books
                .iter()
                .map(|book| {
                    dizet_row(
                        book,
                        |pair| dizet_penalties_by_evaluation(y.as_slice(), pair, radius),
                        rng,
                    )
                })
                .collect();
            Ok(assemble(rows, set.params.k()))
        }
        _ => {
            let roots = find_roots_with(y.as_slice(), options.root_method)?;
            Ok(build_matrices_from_roots(&roots, set, options.detector, rng))
        }
    }
}

/// Outcome of the vote over codebooks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vote {
    /// Winning 1-based codebook index `î`.
    pub chosen_index: usize,
    /// `w_i`, votes per codebook in index order.
    pub votes: Vec<usize>,
    /// `î_k`, 1-based winning codebook of each sector.
    pub per_sector_winners: Vec<usize>,
    /// More than one codebook shared the maximum vote count.
    pub tie_occurred: bool,
}

/// Each sector votes for its minimum-penalty codebook (lowest index on equal
/// penalties); the most-voted codebook wins, ties drawn uniformly from `rng`.
pub fn majority_vote<R: Rng + ?Sized>(p: &PenaltyMatrix, rng: &mut R) -> Vote {
    let books = p.num_codebooks();
    let mut votes = vec![0usize; books];
    let per_sector_winners: Vec<usize> = (0..p.num_sectors())
        .map(|k| {
            let mut best = 0;
            for i in 1..books {
                if p.get(i, k) < p.get(best, k) {
                    best = i;
                }
            }
            votes[best] += 1;
            best + 1
        })
        .collect();
    let max = votes.iter().copied().max().unwrap_or(0);
    let leaders: Vec<usize> = (0..books).filter(|&i| votes[i] == max).collect();
    let tie_occurred = leaders.len() > 1;
    let chosen = if tie_occurred {
        leaders[rng.gen_range(0..leaders.len())]
    } else {
        leaders[0]
    };
    Vote {
        chosen_index: chosen + 1,
        votes,
        per_sector_winners,
        tie_occurred,
    }
}

/// Recovered message plus the intermediate decisions.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub chosen_index: usize,
    pub votes: Vec<usize>,
    pub tie_occurred: bool,
    pub message: Message,
    pub per_sector_winners: Vec<usize>,
    /// Row `î` of `Â`.
    pub detected_roles: Vec<ZeroRole>,
    pub diagnostics: DetectorDiagnostics,
}

/// Vote on `P` and read the message from `Â`.
pub fn decide<R: Rng + ?Sized>(
    matrices: &DetectionMatrices,
    set: &CodebookSet,
    rng: &mut R,
) -> Result<DetectionResult> {
    let vote = majority_vote(&matrices.penalties, rng);
    let mut bits = index_to_bits(vote.chosen_index, set.params.implicit_bits())?;
    let detected_roles = matrices.estimates.roles(vote.chosen_index - 1);
    bits.extend(demap_zeros_to_bits(&detected_roles));
    Ok(DetectionResult {
        chosen_index: vote.chosen_index,
        votes: vote.votes,
        tie_occurred: vote.tie_occurred,
        message: Message::new(bits)?,
        per_sector_winners: vote.per_sector_winners,
        detected_roles,
        diagnostics: matrices.diagnostics,
    })
}

pub fn decode<R: Rng + ?Sized>(
    y: &ReceivedSignal,
    set: &CodebookSet,
    detector: Detector,
    rng: &mut R,
) -> Result<DetectionResult> {
    decode_with(y, set, &DecoderOptions::new(detector), rng)
}

pub fn decode_with<R: Rng + ?Sized>(
    y: &ReceivedSignal,
    set: &CodebookSet,
    options: &DecoderOptions,
    rng: &mut R,
) -> Result<DetectionResult> {
    let matrices = build_matrices_with(y, set, options, rng)?;
    decide(&matrices, set, rng)
}

/// Builds an `Â` from explicit roles, e.g. a tabulated reference pattern.
pub fn estimates_from_roles(set: &CodebookSet, roles: &[Vec<ZeroRole>]) -> Result<ZeroEstimateMatrix> {
    if roles.len() != set.len() || roles.iter().any(|r| r.len() != set.params.k()) {
        return Err(Error::InvalidParams(format!(
            "role pattern must be {} x {}",
            set.len(),
            set.params.k()
        )));
    }
    let entries = roles
        .iter()
        .zip(&set.books)
        .flat_map(|(row, book)| {
            row.iter().zip(&book.pairs).map(|(&role, pair)| ZeroEstimate {
                role,
                value: pair.member(role),
            })
        })
        .collect();
    Ok(ZeroEstimateMatrix {
        sectors: set.params.k(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{build_codebook_set, SystemParams, DEFAULT_RADIUS};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn set() -> CodebookSet {
        build_codebook_set(SystemParams::new(5, 3, 3, DEFAULT_RADIUS).unwrap())
    }

    #[test]
    fn sector_examples() {
        let set = set();
        let a1 = c(0.9336, 0.1417);
        let a2 = c(0.5958, 1.3146);
        assert_eq!(sector_of(a1, &set.books[1]).unwrap(), 0);
        assert_eq!(sector_of(a2, &set.books[1]).unwrap(), 0);
        assert_eq!(sector_of(a2, &set.books[0]).unwrap(), 1);
        assert_eq!(sector_of(c(0.0, 0.0), &set.books[0]), Err(Error::UndefinedAngle));
    }

    #[test]
    fn sector_boundaries_go_to_lower_index() {
        let k = 4;
        let width = 2.0 * PI / k as f64;
        for s in 0..k {
            let center = s as f64 * width;
            assert_eq!(sector_of_angle(center, 0.0, k), s);
            if s + 1 < k {
                // Boundary between s and s + 1 belongs to s.
                assert_eq!(sector_of_angle(center + width / 2.0, 0.0, k), s, "sector {s}");
            }
        }
        // The wrap-around boundary sits between the last and first sector.
        assert_eq!(sector_of_angle(-width / 2.0, 0.0, k), 0);
        assert_eq!(sector_of_angle(-width / 2.0 + 1e-9, 0.0, k), 0);
        assert_eq!(sector_of_angle(-width / 2.0 - 1e-9, 0.0, k), k - 1);
        assert_eq!(sector_of_angle(0.3, 0.0, 1), 0);
    }

    #[test]
    fn majority_vote_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = PenaltyMatrix::from_rows(&[
            vec![0.1726, 0.4036, 0.7323],
            vec![0.3469, 0.4135, 0.3640],
            vec![0.2777, 0.0441, 0.1324],
            vec![0.5797, 0.4330, 0.4713],
        ])
        .unwrap();
        let vote = majority_vote(&p, &mut rng);
        assert_eq!(vote.per_sector_winners, vec![1, 3, 3]);
        assert_eq!(vote.votes, vec![1, 0, 2, 0]);
        assert_eq!(vote.chosen_index, 3);
        assert!(!vote.tie_occurred);

        let dominant = PenaltyMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 0.1], vec![3.0, 3.0]]).unwrap();
        let vote = majority_vote(&dominant, &mut rng);
        assert_eq!(vote.votes, vec![0, 2, 0]);
        assert_eq!(vote.chosen_index, 2);
    }

    #[test]
    fn column_ties_pick_lowest_index() {
        let p = PenaltyMatrix::from_rows(&[vec![1.0], vec![0.5], vec![0.5]]).unwrap();
        let vote = majority_vote(&p, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(vote.per_sector_winners, vec![2]);
    }

    #[test]
    fn vote_ties_are_uniform() {
        let p = PenaltyMatrix::from_rows(&[vec![0.1, 0.9], vec![0.9, 0.1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let trials = 10_000;
        let mut first = 0;
        for _ in 0..trials {
            let vote = majority_vote(&p, &mut rng);
            assert!(vote.tie_occurred);
            assert_eq!(vote.votes, vec![1, 1]);
            if vote.chosen_index == 1 {
                first += 1;
            }
        }
        let freq = first as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "{freq}");
    }

    #[test]
    fn penalty_matrix_validation() {
        assert!(PenaltyMatrix::from_rows(&[]).is_err());
        assert!(PenaltyMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(PenaltyMatrix::from_rows(&[vec![f64::NAN]]).is_err());
        assert!(PenaltyMatrix::from_rows(&[vec![-1.0]]).is_err());
    }

    #[test]
    fn dizet_zero_when_outer_is_a_root() {
        let set = set();
        let pair = set.books[0].pairs[0];
        let roots = RootSet::from_roots(vec![pair.outer, c(0.2, 0.3)], 1.0);
        let (p_out, p_in) = dizet_penalties(&roots, &pair, DEFAULT_RADIUS);
        assert_eq!(p_out, 0.0);
        assert!(p_in > 0.0);
    }

    #[test]
    fn dizet_exact_tie_flips_coin() {
        // A root on the unit circle at the pair angle: |a - r| = R |1/a* - r|.
        let set = build_codebook_set(SystemParams::new(1, 1, 1, 2.0).unwrap());
        let roots = RootSet::from_roots(vec![c(1.0, 0.0)], 1.0);
        let mut outer = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let row = dizet_detect_roots(&roots, &set.books[0], 2.0, &mut rng);
            assert_eq!(row.ties, 1);
            assert_eq!(row.penalties[0], 1.0);
            if row.estimates[0].role == ZeroRole::Outer {
                outer += 1;
            }
        }
        assert!((outer as f64 / 2000.0 - 0.5).abs() < 0.05);
    }

    #[test]
    fn rfmd_empty_sector_falls_back() {
        let set = set();
        let roots = RootSet::from_roots(vec![c(1.1, 0.05)], 1.0);
        let row = rfmd_detect_roots(&roots, &set.books[0]);
        assert_eq!(row.empty_sectors, 2);
        assert!(row.penalties.iter().all(|p| p.is_finite()));
        let expected = (c(1.1, 0.05) - set.books[0].pairs[1].inner).norm()
            .min((c(1.1, 0.05) - set.books[0].pairs[1].outer).norm());
        assert!((row.penalties[1] - expected).abs() < 1e-15);
    }

    #[test]
    fn rejects_wrong_signal_length() {
        let set = set();
        let y = ReceivedSignal { samples: vec![c(1.0, 0.0); 4] };
        assert!(build_matrices(&y, &set, Detector::Rfmd, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
