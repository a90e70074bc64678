//! Generates correlated Rayleigh channel grids and measures their statistics.

use hetnet::fading::{correlation_at, generate_process, sample_correlation, FadingParams};
use hetnet::ComplexGain;

fn main() -> hetnet::Result<()> {
    let params = FadingParams::default();
    // many short independent grids beat one long one for the estimate
    let grids = (0..400)
        .map(|seed| generate_process(params, 250, 2, seed))
        .collect::<hetnet::Result<Vec<_>>>()?;

    let n: usize = grids.iter().map(|g| g.coefficients().len()).sum();
    let power: f64 = grids.iter().flat_map(|g| g.coefficients()).map(|h| h.norm_sqr()).sum::<f64>() / n as f64;
    println!("mean power {power:.4} over {n} samples (sigma_h^2 = {})", params.sigma_h_sq);

    for lag in [1usize, 5, 10, 20] {
        let (mut a, mut b): (Vec<ComplexGain>, Vec<ComplexGain>) = (Vec::new(), Vec::new());
        for g in &grids {
            for t in 0..g.n_subframes() - lag {
                a.push(g.get(t + lag, 0));
                b.push(g.get(t, 0));
            }
        }
        println!(
            "lag {lag:>2} ms: measured {:.4}, model {:.4}",
            sample_correlation(&a, &b),
            correlation_at(lag as f64, &params)?
        );
    }

    let a: Vec<_> = grids.iter().flat_map(|g| (0..g.n_subframes()).map(move |t| g.get(t, 1))).collect();
    let b: Vec<_> = grids.iter().flat_map(|g| (0..g.n_subframes()).map(move |t| g.get(t, 0))).collect();
    println!("adjacent subchannels: {:.5} (configured {})", sample_correlation(&a, &b), params.freq_corr);
    Ok(())
}
