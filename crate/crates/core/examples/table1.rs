//! Pairwise error probabilities of the fifteen QPSK error-event classes.
//!
//! cargo run --release --example table1 -- [snr_db]

use pdnoma::bounds::{table1, table1_abep};
use pdnoma::channel::NoiseModel;

fn main() -> pdnoma::Result<()> {
    let snr_db: f64 = std::env::args()
        .nth(1)
        .map_or(Ok(20.0), |s| s.parse())
        .unwrap_or(20.0);
    let n0 = NoiseModel::from_ebn0_db(snr_db)?.n0();
    let rows = table1(n0)?;

    println!("1/N0 = {snr_db} dB");
    println!(
        "{:<4} {:>9} {:>9} {:>3}  {:>9} {:>9}  {:>10} {:>10}",
        "", "u", "v", "N", "d2(.5)", "d2(.9)", "P(.5)", "P(.9)"
    );
    for r in &rows {
        println!(
            "{:<4} {:>9} {:>9} {:>3}  {:>9.3} {:>9.3}  {:>10.3e} {:>10.3e}",
            format!("E{}", r.event),
            format!("{}", r.u),
            format!("{}", r.v),
            r.n_bits,
            r.d2[0],
            r.d2[1],
            r.pep[0],
            r.pep[1]
        );
    }
    let [b05, b09] = table1_abep(&rows);
    println!("ABEP bound: alpha=0.5 {b05:.4e}, alpha=0.9 {b09:.4e}");
    Ok(())
}
