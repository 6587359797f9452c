//! Weak resonant drive of the 0→0 line: the perturbative transition
//! probability against exact propagation of the driven Hamiltonian.
//!
//! cargo run --release --example drive_oracle

use spin_fc::dynamics::drive_propagation;
use spin_fc::model::ModelParams;
use spin_fc::spectroscopy::{linspace, Spectrometer};

fn main() -> spin_fc::Result<()> {
    let p = ModelParams::nv_default()
        .with_spins(4)
        .with_hyperfine(0.5)
        .with_rabi(0.05);
    let s = Spectrometer::new(p)?;
    let res = s.model.resonance_detuning(0, 0);
    let times = linspace(0.25, 2.0, 8);
    let r = drive_propagation(&p, res, &times, 0)?;
    println!("     t  exact P(1,0)  perturbative  rel. error");
    for (i, &t) in times.iter().enumerate() {
        let exact = r.population(i, 1, 0);
        let approx = s.transition_probability(0, 0, res, t);
        println!(
            "{t:>6.3} {exact:>13.6e} {approx:>13.6e} {:>11.2e}",
            (exact / approx - 1.0).abs()
        );
    }
    println!("max norm drift {:.2e}", r.max_norm_drift());
    Ok(())
}
