//! Eb/N0 penalty at BER 1e-3 of unbalanced power splits relative to alpha = 0.5.
//!
//! Walks each curve upward in 1 dB steps until it drops below the target.
//! cargo run --release --example snr_degradation -- [qpsk|16qam] [min_errors]

use pdnoma::constellation::ConstellationKind;
use pdnoma::sim::{run_ber_point, snr_degradation, BerCurve, SimConfig};

const TARGET: f64 = 1e-3;

fn curve(cfg: &SimConfig, alpha: f64, start: f64) -> pdnoma::Result<BerCurve> {
    let mut points = Vec::new();
    let mut snr = start;
    loop {
        let p = run_ber_point(cfg, alpha, snr)?;
        let done = p.ber > 0.0 && p.ber < TARGET;
        points.push(p);
        if done || snr >= 60.0 {
            break;
        }
        snr += 1.0;
    }
    Ok(BerCurve {
        config: cfg.clone(),
        alpha,
        points,
    })
}

fn main() -> pdnoma::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: ConstellationKind = args.next().as_deref().unwrap_or("qpsk").parse()?;
    let min_errors: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(500);
    let cfg = SimConfig {
        constellation: kind,
        min_bit_errors: min_errors,
        max_codewords: 20_000_000,
        seed: 20_230_901,
        ..SimConfig::default()
    };
    let start = if kind == ConstellationKind::Qpsk {
        12.0
    } else {
        16.0
    };
    let reference = curve(&cfg, 0.5, start)?;
    println!(
        "{kind}: reference crosses {TARGET:e} at {:.2} dB",
        reference.ebn0_at_ber(TARGET)?
    );
    for alpha in [0.9, 0.95, 0.98, 0.99] {
        let test = curve(&cfg, alpha, start)?;
        println!(
            "alpha {alpha:<4}  {:+.2} dB",
            snr_degradation(&reference, &test, TARGET)?
        );
    }
    Ok(())
}
