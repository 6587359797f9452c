//! Approach to the bosonic limit: at fixed λ = N A²/4 the ground-column
//! weights |f_{0→n}|² tend to a Poisson distribution as N grows.
//!
//! cargo run --release --example hp_limit

use spin_fc::franck_condon::{ground_column_closed_form, hp_fc_factor, HpFcParams};

fn main() {
    let lambda = 0.5;
    let hp = HpFcParams::from_lambda(lambda);
    println!("λ = {lambda}");
    println!("      N  max_n≤5 | |f|² - Poisson |");
    for n in [10usize, 50, 200, 1000, 5000] {
        let a = (4.0 * lambda / n as f64).sqrt();
        let column = ground_column_closed_form(n, a.atan());
        let gap = (0..=5)
            .map(|k| (column[k].powi(2) - hp_fc_factor(&hp, 0, k).powi(2)).abs())
            .fold(0.0, f64::max);
        println!("{n:>7}  {gap:.3e}");
    }
}
