//! Penalty and zero-estimate matrices for one noisy received signal, and
//! the majority vote that turns them into a codebook decision.

use immocz::channel::{add_awgn, convolve, sample_channel, NoiseSpec};
use immocz::codebook::{build_codebook_set, encode, SystemParams, DEFAULT_RADIUS};
use immocz::detection::{build_matrices, decide};
use immocz::{ChannelNormalization, Detector, Message};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> immocz::Result<()> {
    let params = SystemParams::new(5, 3, 3, DEFAULT_RADIUS)?;
    let set = build_codebook_set(params);
    let msg: Message = "10100".parse()?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = sample_channel(&params, ChannelNormalization::Expectation, &mut rng);
    let noise = NoiseSpec { ebn0_db: f64::NAN, sigma2: 0.01 };
    let y = add_awgn(&convolve(&encode(&msg, &set)?, &h), &noise, &mut rng);

    for detector in [Detector::Rfmd, Detector::Dizet] {
        let m = build_matrices(&y, &set, detector, &mut rng)?;
        println!("{detector}");
        for i in 0..set.len() {
            let roles: Vec<&str> = m.estimates.roles(i).iter().map(|r| r.as_str()).collect();
            println!("  book {}: P = {:.4?}  A = {roles:?}", i + 1, m.penalties.row(i));
        }
        let r = decide(&m, &set, &mut rng)?;
        println!(
            "  per-sector winners {:?}, votes {:?} -> book {}, message {} (sent {msg})",
            r.per_sector_winners, r.votes, r.chosen_index, r.message
        );
    }
    Ok(())
}
