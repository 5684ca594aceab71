//! Spectral efficiency of IM-MOCZ and MOCZ for a range of K.

use immocz::codebook::{SystemParams, DEFAULT_RADIUS};
use immocz::simulator::spectral_efficiency;
use immocz::Scheme;

fn main() -> immocz::Result<()> {
    for (n, l_ch) in [(10, 3), (20, 6)] {
        println!("N={n}, L_ch={l_ch}");
        println!("  K  MOCZ    IM-MOCZ  gain");
        for k in (n / 2..=n).rev() {
            let p = SystemParams::new(n, k, l_ch, DEFAULT_RADIUS)?;
            let mocz = spectral_efficiency(&p, Scheme::Mocz);
            let im = spectral_efficiency(&p, Scheme::ImMocz);
            println!("{k:>3}  {mocz:.4}  {im:.4}   {:>6.2}%", (im / mocz - 1.0) * 100.0);
        }
    }
    Ok(())
}
