//! Thermal absorption spectra at room temperature. The nuclear ladder is
//! almost uniformly populated, so every initial level contributes.
//!
//! cargo run --release --example thermal_spectrum

use spin_fc::model::ModelParams;
use spin_fc::spectroscopy::{blockade_metric, Spectrometer, ThermalWeights};

fn main() -> spin_fc::Result<()> {
    let base = ModelParams::nv_default();
    let w = ThermalWeights::new(base.temperature, base.n_spins)?;
    println!(
        "k_B T / ħω_nu = {:.3e}; adjacent spread {:.2e}, full spread {:.2e}",
        base.temperature,
        w.max_adjacent_spread(),
        w.total_spread()
    );

    let grid = Spectrometer::new(base.with_hyperfine(2.0))?.default_grid();
    let weak = Spectrometer::new(base.with_hyperfine(0.2))?.spectrum_thermal(&grid)?;
    let strong = Spectrometer::new(base.with_hyperfine(2.0))?.spectrum_thermal(&grid)?;
    for (a, spec) in [(0.2, &weak), (2.0, &strong)] {
        let (at, height) = spec.peak();
        println!("A = {a}: peak {height:.4} at Δ = {at:+.4}");
    }
    let m = blockade_metric(&strong, &weak)?;
    println!("thermal suppression (peak ratio) {:.4}", m.peak_ratio);
    Ok(())
}
