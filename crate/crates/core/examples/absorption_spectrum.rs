//! Zero-temperature absorption spectra for the naked spin, weak coupling and
//! strong coupling, with the blockade metric relative to weak coupling.
//!
//! cargo run --release --example absorption_spectrum

use spin_fc::model::ModelParams;
use spin_fc::spectroscopy::{blockade_metric, Spectrometer};

fn main() -> spin_fc::Result<()> {
    let base = ModelParams::nv_default();
    let grid = Spectrometer::new(base.with_hyperfine(2.0))?.default_grid();

    let mut spectra = Vec::new();
    for a in [0.0, 0.2, 2.0] {
        let s = Spectrometer::new(base.with_hyperfine(a))?;
        let spec = s.spectrum_zero_t(&grid)?;
        let (at, height) = spec.peak();
        println!(
            "A = {a:>3}: peak {height:.4} at Δ = {at:+.4}, {} peaks above 5%, ∫I = {:.4}",
            spec.local_maxima(0.05).len(),
            spec.integrated_intensity()
        );
        spectra.push(spec);
    }
    let m = blockade_metric(&spectra[2], &spectra[1])?;
    println!(
        "A = 2 vs A = 0.2: peak ratio {:.3}, integrated ratio {:.3}",
        m.peak_ratio, m.integrated_ratio
    );
    Ok(())
}
