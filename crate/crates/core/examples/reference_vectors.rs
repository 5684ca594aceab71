//! Recomputes the N=5, K=3 reference scenario from its five received zeros
//! and compares every penalty with the tabulated value.

use immocz::golden;

fn main() -> immocz::Result<()> {
    let report = golden::check(&golden::received_zeros())?;
    for c in &report.checks {
        println!(
            "{} {:<24} expected {:<12} computed {:<12}",
            if c.pass { "ok  " } else { "MISS" },
            c.name,
            c.expected,
            c.computed
        );
    }
    println!("RFMD penalty matrix:");
    for i in 0..report.rfmd.penalties.num_codebooks() {
        println!("  {:.4?}", report.rfmd.penalties.row(i));
    }
    println!("DiZeT penalty matrix:");
    for i in 0..report.dizet.penalties.num_codebooks() {
        println!("  {:.4?}", report.dizet.penalties.row(i));
    }
    println!(
        "largest deviation: RFMD {:.1e}, DiZeT {:.1e}",
        report.max_delta("P_RFMD"),
        report.max_delta("P_DiZeT")
    );
    Ok(())
}
