//! Short BER sweep of IM-MOCZ against MOCZ, printed as CSV.
//!
//! cargo run --release --example ber_sweep -- 5000

use immocz::codebook::{SystemParams, DEFAULT_RADIUS};
use immocz::simulator::{run_sweep, SimConfig, CSV_HEADER};
use immocz::{Detector, Scheme};

fn main() -> immocz::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5000);
    let params = SystemParams::new(10, 6, 3, DEFAULT_RADIUS)?;
    let grid: Vec<f64> = (0..=5).map(|i| 5.0 * i as f64).collect();

    println!("{CSV_HEADER}");
    for scheme in [Scheme::ImMocz, Scheme::Mocz] {
        for detector in [Detector::Rfmd, Detector::Dizet] {
            let cfg = SimConfig::new(params, scheme, detector, grid.clone())
                .with_trials(trials)
                .with_seed(42);
            print!("{}", run_sweep(&cfg)?.csv_rows());
        }
    }
    Ok(())
}
