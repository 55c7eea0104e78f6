//! Clean peak negativity of both protocols for s = 1/2, 1 and 3/2.
//!
//! P1 runs as specified; P2 first optimizes the boundary field on [0, 6].
//!
//! ```text
//! cargo run --release --example protocol_benchmark
//! ```

use spinlab::prelude::*;
use spinlab::sweeps::{clean_peak, optimize_boundary_field};

fn main() -> Result<()> {
    println!("{:<5} {:<4} {:>8} {:>9} {:>7}", "s", "prot", "peak", "time", "B");
    for spin in [Spin::HALF, Spin::ONE, Spin::THREE_HALVES] {
        let p1 = ChainSpec::new(Protocol::P1, 7, spin);
        let peak = clean_peak(&p1, 40.0, 0.01)?;
        println!("{:<5} {:<4} {:>8.4} {:>9.3} {:>7}", spin.to_string(), "P1", peak.value, peak.time, "-");

        let p2 = ChainSpec::new(Protocol::P2, 7, spin);
        let cfg = SweepConfig::new(p2, SweepAxis::BoundaryField, vec![0.0]).with_t_max(16.0);
        let best = optimize_boundary_field(&cfg, (0.0, 6.0), 1e-3)?;
        println!(
            "{:<5} {:<4} {:>8.4} {:>9.3} {:>7.3}",
            spin.to_string(),
            "P2",
            best.peak.value,
            best.peak.time,
            best.field
        );
    }
    Ok(())
}
