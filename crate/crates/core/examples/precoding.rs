//! Regularized zero-forcing across three cells with fresh and stale CSI.

use hetnet::comp::{avoid_capacity, comp_capacity, ignore_capacity, precode, sum_spectral_efficiency};
use hetnet::comp::{ChannelMatrix, NoiseBudget};
use hetnet::fading::{evolve, FadingParams};
use hetnet::rng::{complex_normal, stream};

fn main() -> hetnet::Result<()> {
    let mut rng = stream(11, &[]);
    let params = FadingParams::default();
    // 30 dB direct links, 20 dB cross links
    let h = ChannelMatrix::from_fn(3, 3, |u, c| {
        let g: f64 = if u == c { 1000.0 } else { 100.0 };
        complex_normal(&mut rng, 1.0) * g.sqrt()
    });
    let budget = NoiseBudget::unit(3);
    let reg = budget.default_regularization();

    let p = precode(&h, &budget.cell_power, reg)?;
    for c in 0..3 {
        println!("cell {c} radiates {:.3} of its limit", p.row_power(c));
    }

    println!("IGNORE  {:.2} bps/Hz", sum_spectral_efficiency(&ignore_capacity(&h, &budget)?));
    println!("AVOID   {:.2} bps/Hz", sum_spectral_efficiency(&avoid_capacity(&h, &budget)?));
    for l in [0.0, 2.0, 5.0, 21.0] {
        let stale = ChannelMatrix::from_fn(3, 3, |u, c| {
            let g = h.get(u, c);
            let scale = g.norm().max(1e-12);
            evolve(g / scale, l, &params, &mut rng).unwrap() * scale
        });
        let se = sum_spectral_efficiency(&comp_capacity(&h, &stale, &budget, reg)?);
        println!("CoMP with {l:>4} ms old CSI: {se:.2} bps/Hz");
    }
    Ok(())
}
