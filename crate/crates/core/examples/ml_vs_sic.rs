//! Joint ML against two-stage SIC on identical channel and noise draws.
//!
//! cargo run --release --example ml_vs_sic

use pdnoma::detect::DetectorKind;
use pdnoma::sim::{run_ber_point, SimConfig};

fn main() -> pdnoma::Result<()> {
    let ml = SimConfig {
        min_bit_errors: 300,
        max_codewords: 5_000_000,
        seed: 3,
        ..SimConfig::default()
    };
    let sic = SimConfig {
        detector: DetectorKind::Sic,
        ..ml.clone()
    };
    println!("{:>5} {:>5}  {:>10} {:>10}", "alpha", "dB", "ML", "SIC");
    for alpha in [0.5, 0.7, 0.9, 0.99] {
        for snr in [10.0, 20.0, 30.0] {
            let a = run_ber_point(&ml, alpha, snr)?;
            let b = run_ber_point(&sic, alpha, snr)?;
            println!("{alpha:>5} {snr:>5}  {:>10.3e} {:>10.3e}", a.ber, b.ber);
        }
    }
    Ok(())
}
