//! Negativity over time and boundary field for P2, then the optimal field.
//!
//! ```text
//! cargo run --release --example field_scan
//! ```

use spinlab::prelude::*;
use spinlab::sweeps::{optimize_boundary_field, scan_boundary_field};

fn main() -> Result<()> {
    let spec = ChainSpec::new(Protocol::P2, 7, Spin::HALF);
    let fields: Vec<f64> = (0..=12).map(|k| 0.5 * k as f64).collect();
    let cfg = SweepConfig::new(spec, SweepAxis::BoundaryField, fields)
        .with_t_max(30.0)
        .with_dt(0.05);
    let scan = scan_boundary_field(&cfg)?;
    let (rows, cols) = scan.shape();
    println!("scan: {rows} times x {cols} fields");
    for (j, b) in scan.fields.iter().enumerate() {
        let best = scan.values.iter().map(|row| row[j]).fold(0.0, f64::max);
        println!("  B = {b:>4.1}: max negativity {best:.4}");
    }
    let best = optimize_boundary_field(&cfg.with_t_max(16.0), (0.0, 6.0), 1e-3)?;
    println!(
        "optimum B* = {:.3}: peak {:.4} at t = {:.3}",
        best.field, best.peak.value, best.peak.time
    );
    Ok(())
}
