//! Franck-Condon table f_{m→n} at weak and strong hyperfine coupling.
//! Weak coupling keeps the weight near the diagonal; strong coupling
//! spreads it over many distant levels.
//!
//! cargo run --release --example fc_factors

use spin_fc::franck_condon::fc_table;
use spin_fc::model::ModelParams;

fn main() -> spin_fc::Result<()> {
    for a in [0.2, 2.0] {
        let p = ModelParams::nv_default().with_hyperfine(a);
        let table = fc_table(&p)?;
        println!(
            "A = {a} ω_nu, N = {}, θ = {:.4}, unitarity defect {:.1e}",
            p.n_spins,
            table.theta,
            table.unitarity_defect()
        );
        println!("   m  argmax_n |f|  |f|max   n-m");
        for m in (0..=p.n_spins).step_by(10) {
            let n = table.argmax_from(m);
            println!(
                "{m:>4} {n:>12} {:>7.4} {:>5}",
                table.factor(m, n).abs(),
                n as i64 - m as i64
            );
        }
    }
    Ok(())
}
