//! Peak negativity against the dephasing rate, with the bulk population.

use spinlab::prelude::*;
use spinlab::sweeps::run_dephasing_sweep;

fn main() -> Result<()> {
    let grid = vec![0.0, 0.002, 0.005, 0.01, 0.02];
    let p1 = ChainSpec::new(Protocol::P1, 7, Spin::HALF);
    let p2 = ChainSpec::new(Protocol::P2, 7, Spin::HALF).with_boundary_field(3.39);
    for spec in [p1, p2] {
        let cfg = SweepConfig::new(spec.clone(), SweepAxis::DephasingGamma, grid.clone())
            .with_t_max(30.0)
            .with_record_bulk(true);
        let res = run_dephasing_sweep(&cfg)?;
        for p in &res.points {
            println!(
                "{} γ = {:<6} peak {:.4} at t = {:.2}, max bulk population {:.4}",
                spec.protocol,
                p.axis_value,
                p.mean_peak,
                p.mean_peak_time,
                p.max_bulk.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
