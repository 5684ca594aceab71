//! Expands random zero sets into coefficients and recovers them with both
//! root finders.

use immocz::codebook::{zeros_to_coefficients, DEFAULT_RADIUS};
use immocz::roots::{find_roots_with, RootMethod};
use immocz::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> immocz::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let r = DEFAULT_RADIUS;
    for degree in [4, 12, 30] {
        let zeros: Vec<Complex64> = (0..degree)
            .map(|_| Complex64::from_polar(rng.gen_range(1.0 / r..=r), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let coeffs = zeros_to_coefficients(&zeros);
        for method in [RootMethod::Companion, RootMethod::Aberth] {
            let found = find_roots_with(&coeffs.0, method)?;
            let worst = zeros
                .iter()
                .map(|z| found.roots.iter().map(|f| (f - z).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            println!(
                "degree {degree:>2} {method:?}: max error {worst:.1e}, max relative residual {:.1e}",
                found.max_relative_residual(&coeffs.0)
            );
        }
    }
    Ok(())
}
