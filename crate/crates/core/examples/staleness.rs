//! How fast shared CSI goes stale as control-plane latency grows.

use hetnet::fading::{staleness_report, FadingParams};

fn main() -> hetnet::Result<()> {
    let params = FadingParams::default();
    println!("rho = {}, T_c = {} ms", params.rho, params.coherence_time_ms);
    println!("{:>8} {:>8} {:>10} {:>10}", "L (ms)", "rho_L", "staleness", "err var");
    for l in [1.0, 2.0, 5.0, 10.0, 21.0, 50.0] {
        let r = staleness_report(l, &params)?;
        println!("{:>8} {:>8.4} {:>10.4} {:>10.4}", l, r.rho_l, r.staleness, r.error_variance);
    }

    // a pedestrian at 5 km/h versus a car at 30 km/h
    for v in [5.0, 30.0] {
        let p = params.for_velocity(v, 5.0);
        let r = staleness_report(10.0, &p)?;
        println!("{v} km/h: T_c {:.2} ms, 10 ms staleness {:.3}", p.coherence_time_ms, r.staleness);
    }
    Ok(())
}
