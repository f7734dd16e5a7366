//! Symbols, Gray labels and energies of the supported constellations.
//!
//! cargo run --example constellation_dump

use pdnoma::constellation::{Constellation, ConstellationKind};

fn main() -> pdnoma::Result<()> {
    for kind in [ConstellationKind::Qpsk, ConstellationKind::Qam16] {
        let c = Constellation::new(kind);
        println!(
            "{kind}: {} points, mean energy {:.6}",
            c.size(),
            c.mean_energy()
        );
        for i in 0..c.size() {
            let s = c.point(i)?;
            println!(
                "  {:>2}  {:>+8.4} {:>+8.4}j  {}",
                i,
                s.re,
                s.im,
                c.label_string(i)
            );
        }
    }
    Ok(())
}
