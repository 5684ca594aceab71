//! One message through encoder, multipath channel, noise and both detectors.
//!
//! cargo run --example link -- 1011001110 30

use immocz::channel::{add_awgn, convolve, noise_variance, sample_channel};
use immocz::codebook::{build_codebook_set, encode, SystemParams, DEFAULT_RADIUS};
use immocz::{decode, ChannelNormalization, Detector, EbN0Convention, Message, Scheme};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> immocz::Result<()> {
    let mut args = std::env::args().skip(1);
    let msg: Message = args.next().as_deref().unwrap_or("1011001110").parse()?;
    let ebn0_db: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(30.0);

    let params = SystemParams::new(msg.len(), 6.min(msg.len()), 3, DEFAULT_RADIUS)?;
    let set = build_codebook_set(params);
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let x = encode(&msg, &set)?;
    println!("message {msg}: {} transmit samples, energy {:.3}", x.len(), x.energy());

    let h = sample_channel(&params, ChannelNormalization::Expectation, &mut rng);
    let noise = noise_variance(&params, Scheme::ImMocz, EbN0Convention::Paper, ebn0_db);
    let y = add_awgn(&convolve(&x, &h), &noise, &mut rng);
    println!(
        "channel energy {:.3}, Eb/N0 {ebn0_db} dB -> N0 {:.3e}, {} received samples",
        h.energy(),
        noise.sigma2,
        y.len()
    );

    for detector in [Detector::Rfmd, Detector::Dizet] {
        let r = decode(&y, &set, detector, &mut rng)?;
        let errors = msg.bits().iter().zip(r.message.bits()).filter(|(a, b)| a != b).count();
        println!(
            "{detector:>5}: codebook {} (votes {:?}), decoded {} with {errors} bit errors",
            r.chosen_index, r.votes, r.message
        );
    }
    Ok(())
}
