//! Most-favored final level from the ground state: the exact predictor, the
//! bosonic-limit predictor and a brute-force argmax over the table.
//!
//! cargo run --release --example favored_transition

use spin_fc::franck_condon::{favored_level_exact, favored_level_hp, fc_table, HpFcParams};
use spin_fc::model::ModelParams;

fn main() -> spin_fc::Result<()> {
    println!("     N      A  exact  bosonic  argmax");
    for n in [10, 50, 200] {
        for a in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0] {
            let p = ModelParams::nv_default().with_spins(n).with_hyperfine(a);
            let exact = favored_level_exact(&p);
            let hp = favored_level_hp(&HpFcParams::from_params(&p)?);
            let argmax = fc_table(&p)?.argmax_from(0);
            let mark = if exact.contains(argmax) {
                ""
            } else {
                "  mismatch"
            };
            println!(
                "{n:>6} {a:>6} {:>6} {:>8} {argmax:>7}{mark}",
                exact.level, hp.level
            );
        }
    }
    Ok(())
}
