//! Prints the codebook zeros for a small configuration and the spacing
//! between neighbouring rotations.
//!
//! cargo run --example codebook_geometry -- 5 3

use immocz::codebook::{build_codebook_set, SystemParams, DEFAULT_RADIUS};

fn main() -> immocz::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|a| a.parse::<usize>().ok());
    let n = args.next().unwrap_or(5);
    let k = args.next().unwrap_or(3);
    let params = SystemParams::new(n, k, 1, DEFAULT_RADIUS)?;
    let set = build_codebook_set(params);

    println!(
        "N={n} K={k}: {} codebooks, {} implicit bits, rotation step {:.4} rad",
        set.len(),
        params.implicit_bits(),
        set.rotation_step()
    );
    for book in &set.books {
        print!("book {:>2} (theta {:.4}):", book.index, book.theta);
        for pair in &book.pairs {
            print!(
                "  {:+.4}{:+.4}i / {:+.4}{:+.4}i",
                pair.outer.re, pair.outer.im, pair.inner.re, pair.inner.im
            );
        }
        println!();
    }
    let step = set.rotation_step();
    println!(
        "closest outer zeros of adjacent books: {:.6}",
        2.0 * params.radius() * (step / 2.0).sin()
    );
    Ok(())
}
