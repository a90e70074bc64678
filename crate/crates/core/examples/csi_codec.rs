//! Quantizes a channel, increment-codes the levels and checks the round trip.

use hetnet::csicodec::{
    decode_increments, encode_increments, macro_overhead, rate_report, uncompressed_kbps_per_rb, Quantizer,
};
use hetnet::fading::{generate_process, FadingParams};

fn main() -> hetnet::Result<()> {
    let q = Quantizer::default();
    let ch = generate_process(FadingParams::default(), 200, 12 * 8, 3)?;

    let cqi: Vec<u16> = ch.subchannel(0).map(|h| q.quantize(h).cqi_level).collect();
    let enc = encode_increments(&cqi, q.q, false)?;
    assert_eq!(decode_increments(&enc)?, cqi);
    println!(
        "{} levels -> {} bits ({:.2} bits/level, raw {})",
        cqi.len(),
        enc.n_bits,
        enc.n_bits as f64 / cqi.len() as f64,
        q.q
    );

    let r = rate_report(&ch, 100, 3, 0.5, &q)?;
    println!("uncompressed {} kbps/RB", uncompressed_kbps_per_rb(q.q));
    println!("compressed   {:.2} kbps/RB", r.kbps_per_rb_compressed);
    println!("total        {:.2} Mbps over 100 RBs", r.total_mbps);
    println!("adjacent subchannels: P(same CQI) {:.3}", r.cqi_freq_stats.p_same());

    for rate in [1000.0, 6000.0] {
        println!("{rate} kbps of control -> {:.1} kbps of macro capacity", macro_overhead(rate, 1.0, 0.1834)?);
    }
    Ok(())
}
