//! Collective precession after a sudden flip of the central spin. In the
//! rotated frame the trajectory is a circle of radius (N/2) sin θ traversed
//! at ω̃, and the favored level matches the projection it lands on.
//!
//! cargo run --release --example vertical_transition

use std::f64::consts::PI;

use spin_fc::dynamics::{precession_closed_form, vertical_transition_gap, PrecessionPropagator};
use spin_fc::franck_condon::favored_level_exact;
use spin_fc::model::{effective_environment, ModelParams};
use spin_fc::spectroscopy::linspace;

fn main() -> spin_fc::Result<()> {
    let p = ModelParams::nv_default();
    let period = 2.0 * PI / effective_environment(&p, 1)?.omega_tilde;
    let times = linspace(0.0, period, 9);

    let prop = PrecessionPropagator::new(&p)?;
    let exact = prop.trajectory(&times);
    let closed = precession_closed_form(&p, &times)?;
    println!("        t      J'x      J'y      J'z");
    for (i, t) in times.iter().enumerate() {
        println!(
            "{t:>9.4} {:>8.4} {:>8.4} {:>8.4}",
            exact.jx_rot[i], exact.jy_rot[i], exact.jz_rot[i]
        );
    }
    println!(
        "max |exact - closed form| = {:.2e}",
        exact.max_deviation(&closed)
    );
    println!(
        "period {:.10} measured, {period:.10} expected",
        prop.measured_period(2.0 * period, period / 64.0)
            .unwrap_or(f64::NAN)
    );

    for a in [0.2, 2.0, 5.0] {
        let q = p.with_hyperfine(a);
        println!(
            "A = {a}: favored level {}, gap to the vertical projection {:+.3}",
            favored_level_exact(&q).level,
            vertical_transition_gap(&q)
        );
    }
    Ok(())
}
