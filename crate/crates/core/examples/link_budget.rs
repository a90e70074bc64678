//! Noise floors, full-duplex penalty and self-interference cancellation
//! targets for an in-band small-cell radio.

use hetnet::geometry::{
    full_duplex_noise_floor, noise_floor, path_gain_db, rx_snr_db, LinkBudget, NodeKind, NodeSpec, PathLossConfig,
};
use hetnet::ComplexGain;

fn main() -> hetnet::Result<()> {
    for mhz in [5.0, 10.0, 20.0] {
        let bw = mhz * 1e6;
        let up = LinkBudget::new(18.0, bw, 5.0)?;
        let down = LinkBudget::new(30.0, bw, 9.0)?;
        println!(
            "{mhz:>4} MHz  eNB floor {:.1} dBm (FD {:.1})  UE floor {:.1} dBm  cancel up {:.1} / down {:.1} dB",
            noise_floor(bw, 5.0)?,
            full_duplex_noise_floor(bw, 5.0)?,
            noise_floor(bw, 9.0)?,
            up.required_cancellation_db,
            down.required_cancellation_db,
        );
    }

    let pl = PathLossConfig::default();
    let macro_cell = NodeSpec::new(NodeKind::MacroEnb, [0.0, 0.0]);
    let radio = NodeSpec::new(NodeKind::SmallcellUeRadio, [500.0, 0.0]);
    let phone = NodeSpec::ue([500.0, 0.0], 5.0);
    println!("\nmacro -> rooftop radio at 500 m: {:.1} dB", path_gain_db(&macro_cell, &radio, &pl)?);
    println!("macro -> phone at 500 m:         {:.1} dB", path_gain_db(&macro_cell, &phone, &pl)?);
    let snr = rx_snr_db(&macro_cell, &phone, 5e6, ComplexGain::new(1.0, 0.0), &pl)?;
    println!("phone SNR at 5 MHz: {snr:.1} dB");
    Ok(())
}
