//! Serving-mode decisions and round-robin airtime for a handful of users.

use hetnet::geometry::NodeSpec;
use hetnet::scheduler::{assign_shares, cell_airtime, decide, DEFAULT_THRESHOLD_DB};

fn main() -> hetnet::Result<()> {
    // SNRs (dB) toward small cells 1..=4
    let users = [
        (5.0, vec![30.0, 10.0, 5.0, 0.0]),
        (5.0, vec![20.0, 18.0, 2.0, 0.0]),
        (1.0, vec![15.0, 14.0, 13.0, 12.5]),
        (30.0, vec![25.0, 3.0, 1.0, 0.0]),
    ];
    let mut decisions = Vec::new();
    for (i, (v, snrs)) in users.iter().enumerate() {
        let ue = NodeSpec::ue([0.0, 0.0], *v);
        decisions.push(decide(i, &ue, snrs, DEFAULT_THRESHOLD_DB)?);
    }
    assign_shares(&mut decisions);
    for d in &decisions {
        println!(
            "user {}: {:?} via {:?}, mutes {:?}, share {:.2}",
            d.user_id, d.mode, d.serving_cells, d.muted_cells, d.airtime_share
        );
    }
    for (cell, t) in cell_airtime(&decisions) {
        println!("cell {cell}: airtime {t:.2}");
    }
    Ok(())
}
