//! Coordination latency over an in-band control plane versus X2 over IP.

use hetnet::controlplane::{timeline, total_coordination_latency, ControlPlaneModel, Waiting};

fn main() {
    let models = [
        ControlPlaneModel::swiftc(Waiting::BestCase),
        ControlPlaneModel::swiftc(Waiting::Average),
        ControlPlaneModel::x2_ip(),
    ];
    for m in &models {
        println!("{:?}/{:?}: {} ms", m.variant, m.waiting, total_coordination_latency(m));
        for e in timeline(m).events {
            println!("  {:>6.1} ms  {:?}", e.timestamp_ms, e.label);
        }
    }
}
