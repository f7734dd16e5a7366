//! Union bound versus power split for both constellations.
//!
//! cargo run --release --example bound_sweep

use pdnoma::bounds::{optimal_alpha, union_bound_sweep};
use pdnoma::channel::NoiseModel;
use pdnoma::constellation::{Constellation, ConstellationKind};

fn main() -> pdnoma::Result<()> {
    let grid: Vec<f64> = (50..100).map(|k| k as f64 / 100.0).collect();
    for kind in [ConstellationKind::Qpsk, ConstellationKind::Qam16] {
        let c = Constellation::new(kind);
        for snr in [10.0, 20.0, 30.0] {
            let n0 = NoiseModel::from_ebn0_db(snr)?.n0();
            let sweep = union_bound_sweep(&c, &grid, n0)?;
            let best = optimal_alpha(&c, n0, &grid)?;
            let at = |a: f64| {
                sweep
                    .iter()
                    .find(|b| b.alpha == a)
                    .map_or(f64::NAN, |b| b.bound)
            };
            println!(
                "{kind:>5} {snr:>4} dB  best alpha {best:.2}  bound(0.5)={:.3e} bound(0.9)={:.3e} bound(0.99)={:.3e}",
                at(0.5),
                at(0.9),
                at(0.99)
            );
        }
    }
    Ok(())
}
