//! Monte Carlo BER of the joint ML receiver for a few power splits.
//!
//! cargo run --release --example ber_curves -- [qpsk|16qam]

use pdnoma::constellation::ConstellationKind;
use pdnoma::sim::{sweep_with_progress, SimConfig};

fn main() -> pdnoma::Result<()> {
    let kind: ConstellationKind = std::env::args()
        .nth(1)
        .as_deref()
        .unwrap_or("qpsk")
        .parse()?;
    let cfg = SimConfig {
        constellation: kind,
        alphas: vec![0.5, 0.9, 0.99],
        ebn0_db: vec![10.0, 15.0, 20.0, 25.0, 30.0],
        min_bit_errors: 200,
        max_codewords: 2_000_000,
        seed: 1,
        ..SimConfig::default()
    };
    sweep_with_progress(&cfg, |p| {
        println!(
            "alpha {:<4} {:>4} dB  BER {:.3e} +/- {:.1e}  [{}]",
            p.alpha,
            p.ebn0_db,
            p.ber,
            p.ci95_halfwidth,
            p.status.name()
        );
    })?;
    Ok(())
}
