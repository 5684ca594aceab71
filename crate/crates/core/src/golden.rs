//! Reference scenario with tabulated detector outputs.
//!
//! `N = 5`, `K = 3`, `L_ch = 3`, `R = 1.1974`, message `10100`. The five
//! received zeros are given to four decimals, and so are the tabulated
//! penalties; every comparison therefore uses [`TOLERANCE`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codebook::{build_codebook_set, CodebookSet, Message, SystemParams, ZeroRole};
use crate::detection::{
    build_matrices_from_roots, decide, dizet_penalties, estimates_from_roles, majority_vote,
    DetectionMatrices, Detector, DetectorDiagnostics, PenaltyMatrix,
};
use crate::error::Result;
use crate::roots::RootSet;
use crate::Complex64;

/// Entrywise tolerance for four-decimal reference values.
pub const TOLERANCE: f64 = 5e-4;
/// Tolerance for the one reference value printed with three decimals.
pub const TOLERANCE_3DP: f64 = 1e-3;

pub const N: usize = 5;
pub const K: usize = 3;
pub const L_CH: usize = 3;
pub const RADIUS: f64 = 1.1974;
pub const MESSAGE: &str = "10100";

/// Received zeros `ã_1 … ã_5`.
pub const RECEIVED_ZEROS: [(f64, f64); 5] = [
    (0.9336, 0.1417),
    (0.5958, 1.3146),
    (-0.2978, 0.3378),
    (-0.7922, 0.0098),
    (0.3106, -0.6452),
];

pub const RFMD_PENALTIES: [[f64; 3]; 4] = [
    [0.1726, 0.4036, 0.7323],
    [0.3469, 0.4135, 0.3640],
    [0.2777, 0.0441, 0.1324],
    [0.5797, 0.4330, 0.4713],
];

pub const DIZET_PENALTIES: [[f64; 3]; 4] = [
    [0.9080, 2.1420, 5.7866],
    [1.4178, 1.7503, 3.7863],
    [0.8905, 0.3120, 1.2152],
    [2.0768, 3.7242, 2.4081],
];

const O: ZeroRole = ZeroRole::Outer;
const I: ZeroRole = ZeroRole::Inner;

pub const RFMD_ROLES: [[ZeroRole; 3]; 4] = [[I, I, I], [I, I, I], [O, I, I], [I, I, I]];
pub const DIZET_ROLES: [[ZeroRole; 3]; 4] = [[I, I, I], [I, I, I], [O, I, I], [O, I, I]];

/// Distances from `ã_1`, `ã_2` to the outer and inner zero of codebook 2,
/// sector 1: `(|ã_1-a|, |ã_2-a|, |ã_1-1/a*|, |ã_2-1/a*|)`.
pub const SECTOR_DISTANCES: [f64; 4] = [0.4685, 0.8409, 0.3469, 0.9061];

/// `(p_out, p_in)` for codebook 1, sector 1 under DiZeT.
pub const DIZET_SCALARS: (f64, f64) = (1.448, 0.9080);

pub const EXPECTED_VOTES: [usize; 4] = [1, 0, 2, 0];
pub const EXPECTED_WINNERS: [usize; 3] = [1, 3, 3];
pub const EXPECTED_INDEX: usize = 3;

pub fn received_zeros() -> Vec<Complex64> {
    RECEIVED_ZEROS
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect()
}

pub fn params() -> SystemParams {
    SystemParams::new(N, K, L_CH, RADIUS).expect("reference parameters are valid")
}

pub fn codebook_set() -> CodebookSet {
    build_codebook_set(params())
}

fn rows<const C: usize>(m: &[[f64; C]]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn role_rows<const C: usize>(m: &[[ZeroRole; C]]) -> Vec<Vec<ZeroRole>> {
    m.iter().map(|r| r.to_vec()).collect()
}

/// The tabulated RFMD matrices, as a decoder would have produced them.
pub fn reference_rfmd_matrices() -> Result<DetectionMatrices> {
    let set = codebook_set();
    Ok(DetectionMatrices {
        estimates: estimates_from_roles(&set, &role_rows(&RFMD_ROLES))?,
        penalties: PenaltyMatrix::from_rows(&rows(&RFMD_PENALTIES))?,
        diagnostics: DetectorDiagnostics::default(),
    })
}

/// One compared quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCheck {
    pub name: String,
    pub expected: String,
    pub computed: String,
    /// Absolute difference for numeric checks, 0 or 1 for exact ones.
    pub delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl GoldenCheck {
    fn numeric(name: String, expected: f64, computed: f64, tolerance: f64) -> Self {
        let delta = (expected - computed).abs();
        Self {
            name,
            expected: format!("{expected:.4}"),
            computed: format!("{computed:.6}"),
            delta,
            tolerance,
            pass: delta <= tolerance,
        }
    }

    fn exact<T: std::fmt::Debug + PartialEq>(name: String, expected: T, computed: T) -> Self {
        let pass = expected == computed;
        Self {
            name,
            expected: format!("{expected:?}"),
            computed: format!("{computed:?}"),
            delta: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenReport {
    pub checks: Vec<GoldenCheck>,
    pub rfmd: DetectionMatrices,
    pub dizet: DetectionMatrices,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GoldenCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Largest delta among checks whose name starts with `prefix`.
    pub fn max_delta(&self, prefix: &str) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .map(|c| c.delta)
            .fold(0.0, f64::max)
    }
}

/// Recomputes every tabulated quantity from `zeros` (normally
/// [`received_zeros`]) and compares it with the reference values.
pub fn check(zeros: &[Complex64]) -> Result<GoldenReport> {
    let set = codebook_set();
    let roots = RootSet::from_roots(zeros.to_vec(), 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checks = Vec::new();

    let pair = set.books[1].pairs[0];
    let a1 = zeros[0];
    let a2 = zeros[1];
    let distances = [
        (a1 - pair.outer).norm(),
        (a2 - pair.outer).norm(),
        (a1 - pair.inner).norm(),
        (a2 - pair.inner).norm(),
    ];
    for (j, (&e, c)) in SECTOR_DISTANCES.iter().zip(distances).enumerate() {
        checks.push(GoldenCheck::numeric(
            format!("distance[{j}]"),
            e,
            c,
            TOLERANCE,
        ));
    }

    let (p_out, p_in) = dizet_penalties(&roots, &set.books[0].pairs[0], RADIUS);
    checks.push(GoldenCheck::numeric(
        "dizet p_out(1,1)".into(),
        DIZET_SCALARS.0,
        p_out,
        TOLERANCE_3DP,
    ));
    checks.push(GoldenCheck::numeric(
        "dizet p_in(1,1)".into(),
        DIZET_SCALARS.1,
        p_in,
        TOLERANCE,
    ));

    let rfmd = build_matrices_from_roots(&roots, &set, Detector::Rfmd, &mut rng);
    let dizet = build_matrices_from_roots(&roots, &set, Detector::Dizet, &mut rng);
    for (label, computed, expected, roles) in [
        ("P_RFMD", &rfmd, &RFMD_PENALTIES, &RFMD_ROLES),
        ("P_DiZeT", &dizet, &DIZET_PENALTIES, &DIZET_ROLES),
    ] {
        for (i, row) in expected.iter().enumerate() {
            for (k, &e) in row.iter().enumerate() {
                checks.push(GoldenCheck::numeric(
                    format!("{label}({},{})", i + 1, k + 1),
                    e,
                    computed.penalties.get(i, k),
                    TOLERANCE,
                ));
            }
        }
        let role_label = label.replacen("P_", "A_", 1);
        checks.push(GoldenCheck::exact(
            format!("{role_label} pattern"),
            role_rows(roles),
            (0..set.len()).map(|i| computed.estimates.roles(i)).collect(),
        ));
    }

    // Vote and decode on the tabulated matrix.
    let reference = reference_rfmd_matrices()?;
    let vote = majority_vote(&reference.penalties, &mut rng);
    checks.push(GoldenCheck::exact(
        "reference vote winners".into(),
        EXPECTED_WINNERS.to_vec(),
        vote.per_sector_winners.clone(),
    ));
    checks.push(GoldenCheck::exact(
        "reference votes".into(),
        EXPECTED_VOTES.to_vec(),
        vote.votes.clone(),
    ));
    let decoded = decide(&reference, &set, &mut rng)?;
    checks.push(GoldenCheck::exact(
        "reference decode".into(),
        MESSAGE.to_string(),
        decoded.message.to_string(),
    ));

    // Vote and decode on the recomputed matrices.
    for (label, matrices) in [("RFMD", &rfmd), ("DiZeT", &dizet)] {
        let result = decide(matrices, &set, &mut rng)?;
        checks.push(GoldenCheck::exact(
            format!("{label} chosen index"),
            EXPECTED_INDEX,
            result.chosen_index,
        ));
        checks.push(GoldenCheck::exact(
            format!("{label} decode"),
            MESSAGE.parse::<Message>()?.to_string(),
            result.message.to_string(),
        ));
    }

    Ok(GoldenReport {
        checks,
        rfmd,
        dizet,
    })
}
