//! Wigner d-matrix of a collective spin, checked against the matrix
//! exponential and shown at a size where the explicit sum cancels badly.
//!
//! cargo run --release --example wigner_d

use std::f64::consts::PI;

use spin_fc::collective_spin::{
    rotation_oracle, wigner_d, wigner_d_with, DickeBasis, WignerMethod,
};

fn main() -> spin_fc::Result<()> {
    let n = 4;
    let theta = PI / 3.0;
    let d = wigner_d(n, theta)?;
    println!("d^{{N/2}}(π/3) for N = {n} ({:?}):", d.method);
    for l in 0..=n {
        let row: Vec<String> = (0..=n).map(|m| format!("{:>9.5}", d.get(l, m))).collect();
        println!("  {}", row.join(" "));
    }

    let oracle = rotation_oracle(&DickeBasis::new(n)?, theta)?;
    println!(
        "max |d - exp(-iθJy)| = {:.2e}",
        (&d.elements - &oracle).amax()
    );
    println!("orthogonality defect = {:.2e}", d.orthogonality_defect());

    // At N = 200 the explicit sum loses every digit; the automatic choice
    // switches to the spin-addition recursion.
    let n = 200;
    let theta = 2.0f64.atan();
    let sum = wigner_d_with(n, theta, WignerMethod::ExplicitSum)?;
    let auto = wigner_d(n, theta)?;
    println!(
        "N = {n}: explicit-sum defect {:.2e}, automatic ({:?}) defect {:.2e}",
        sum.orthogonality_defect(),
        auto.method,
        auto.orthogonality_defect()
    );
    Ok(())
}
