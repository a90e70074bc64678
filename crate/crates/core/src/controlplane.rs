//! Control-plane latency: in-band full-duplex signalling over the macro
//! (TTI-quantized) versus X2 over an IP backhaul.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Swiftc,
    X2Ip,
}

/// How long a control message waits for its uplink/downlink opportunity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Waiting {
    BestCase,
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlPlaneModel {
    pub variant: Variant,
    pub tti_ms: f64,
    pub one_way_ip_ms: f64,
    /// Client feedback plus coordinator processing.
    pub processing_ms: f64,
    pub waiting: Waiting,
}

impl ControlPlaneModel {
    pub fn swiftc(waiting: Waiting) -> Self {
        Self {
            variant: Variant::Swiftc,
            tti_ms: 1.0,
            one_way_ip_ms: 10.0,
            processing_ms: 1.0,
            waiting,
        }
    }

    pub fn x2_ip() -> Self {
        Self {
            variant: Variant::X2Ip,
            ..Self::swiftc(Waiting::BestCase)
        }
    }

    pub fn with_processing(self, processing_ms: f64) -> Self {
        Self { processing_ms, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tti_ms > 0.0) {
            return Err(Error::arg("tti_ms", "must be positive"));
        }
        if !(self.one_way_ip_ms >= 0.0) {
            return Err(Error::arg("one_way_ip_ms", "must be non-negative"));
        }
        if !(self.processing_ms >= 0.0) {
            return Err(Error::arg("processing_ms", "must be non-negative"));
        }
        Ok(())
    }
}

pub fn one_way_latency(model: &ControlPlaneModel) -> f64 {
    match (model.variant, model.waiting) {
        (Variant::Swiftc, Waiting::BestCase) => model.tti_ms,
        (Variant::Swiftc, Waiting::Average) => 1.5 * model.tti_ms,
        (Variant::X2Ip, _) => model.one_way_ip_ms,
    }
}

/// Uplink plus downlink, excluding processing.
pub fn round_trip_latency(model: &ControlPlaneModel) -> f64 {
    2.0 * one_way_latency(model)
}

/// The latency `L` that ages shared CSI before joint transmission.
pub fn total_coordination_latency(model: &ControlPlaneModel) -> f64 {
    round_trip_latency(model) + model.processing_ms
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    ClientFeedback,
    UplinkControl,
    CoordinatorCompute,
    DownlinkControl,
    JointTransmission,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimelineEvent {
    /// Time at which the stage completes.
    pub timestamp_ms: f64,
    pub label: Stage,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoordinationTimeline {
    pub variant: Variant,
    pub waiting: Waiting,
    pub total_latency_ms: f64,
    pub events: Vec<TimelineEvent>,
}

/// Splits processing evenly between client feedback and coordinator
/// compute; the joint transmission itself closes the timeline.
pub fn timeline(model: &ControlPlaneModel) -> CoordinationTimeline {
    let one_way = one_way_latency(model);
    let half = model.processing_ms / 2.0;
    let stages = [
        (Stage::ClientFeedback, half),
        (Stage::UplinkControl, one_way),
        (Stage::CoordinatorCompute, model.processing_ms - half),
        (Stage::DownlinkControl, one_way),
        (Stage::JointTransmission, 0.0),
    ];
    let mut t = 0.0;
    let events = stages
        .iter()
        .map(|&(label, gap)| {
            t += gap;
            TimelineEvent { timestamp_ms: t, label }
        })
        .collect();
    CoordinationTimeline {
        variant: model.variant,
        waiting: model.waiting,
        total_latency_ms: total_coordination_latency(model),
        events,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swiftc_latencies() {
        let best = ControlPlaneModel::swiftc(Waiting::BestCase);
        let avg = ControlPlaneModel::swiftc(Waiting::Average);
        assert_eq!(one_way_latency(&best), 1.0);
        assert_eq!(one_way_latency(&avg), 1.5);
        assert_eq!(round_trip_latency(&best), 2.0);
        assert_eq!(round_trip_latency(&avg), 3.0);
        assert_eq!(total_coordination_latency(&best), 3.0);
        assert_eq!(total_coordination_latency(&best.with_processing(0.0)), 2.0);
    }

    #[test]
    fn x2_latencies() {
        let x2 = ControlPlaneModel::x2_ip();
        assert_eq!(one_way_latency(&x2), 10.0);
        assert_eq!(round_trip_latency(&x2), 20.0);
        assert_eq!(total_coordination_latency(&x2), 21.0);
    }

    #[test]
    fn timeline_layout() {
        let t = timeline(&ControlPlaneModel::swiftc(Waiting::BestCase));
        let stamps: Vec<f64> = t.events.iter().map(|e| e.timestamp_ms).collect();
        assert_eq!(stamps, vec![0.5, 1.5, 2.0, 3.0, 3.0]);
        assert_eq!(t.events.last().unwrap().timestamp_ms, t.total_latency_ms);
        let x = timeline(&ControlPlaneModel::x2_ip());
        let labels: Vec<Stage> = x.events.iter().map(|e| e.label).collect();
        assert_eq!(labels, t.events.iter().map(|e| e.label).collect::<Vec<_>>());
        assert_eq!(x.events.last().unwrap().timestamp_ms, 21.0);
    }

    #[test]
    fn validation() {
        let mut m = ControlPlaneModel::x2_ip();
        m.tti_ms = 0.0;
        assert!(m.validate().is_err());
        assert!(ControlPlaneModel::x2_ip().with_processing(-1.0).validate().is_err());
    }
}
