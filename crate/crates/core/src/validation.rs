//! Invariant suite behind the `validate` scenario.

use std::f64::consts::PI;

use serde::Serialize;

use crate::collective_spin::{build_basis, rotation_oracle, wigner_d, DickeBasis};
use crate::dynamics::{
    drive_propagation, precession_closed_form, vertical_transition_gap, PrecessionPropagator,
};
use crate::error::Result;
use crate::franck_condon::{
    favored_level_exact, fc_table, ground_column_closed_form, hp_fc_factor, HpFcParams,
};
use crate::model::{effective_environment, rotated_eigenstate, ModelParams};
use crate::spectroscopy::{linspace, Spectrometer, ThermalWeights};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        passed: value <= limit,
        detail: format!("{value:.3e} <= {limit:.0e}"),
    }
}

fn flag(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

/// Run every check. `params` supplies the preset-level values (drive,
/// window time, temperature); sizes and couplings are fixed per check.
pub fn run_suite(params: &ModelParams) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let with = |n: usize, a: f64| params.with_spins(n).with_hyperfine(a);

    // Collective operators.
    let (_, ops) = build_basis(20)?;
    let i = num_complex::Complex64::new(0.0, 1.0);
    let defect = (&ops.j_x * &ops.j_y - &ops.j_y * &ops.j_x - &ops.j_z * i).camax();
    out.push(check("commutator [Jx,Jy] = iJz (N=20)", defect, 1e-12));

    // d-matrix against the matrix exponential.
    let mut worst: f64 = 0.0;
    for n in (1..=10).chain([20, 30]) {
        let basis = DickeBasis::new(n)?;
        for k in 1..=8 {
            let theta = PI * k as f64 / 9.0;
            let d = wigner_d(n, theta)?;
            let r = rotation_oracle(&basis, theta)?;
            worst = worst.max((&d.elements - &r).amax());
        }
    }
    out.push(check("wigner_d = exp(-iθJy), N ≤ 30", worst, 1e-8));

    let a = wigner_d(40, 0.4)?;
    let b = wigner_d(40, 0.9)?;
    let ab = wigner_d(40, 1.3)?;
    out.push(check(
        "d(θ1)d(θ2) = d(θ1+θ2) (N=40)",
        (&a.elements * &b.elements - &ab.elements).amax(),
        1e-9,
    ));

    // Franck-Condon factors.
    let mut worst: f64 = 0.0;
    for n in [50, 100, 200] {
        for a in [0.2, 2.0] {
            worst = worst.max(fc_table(&with(n, a))?.unitarity_defect());
        }
    }
    out.push(check("Σ_n f² = 1 (N ≤ 200)", worst, 1e-10));

    let mut worst: f64 = 0.0;
    for a in [0.2, 2.0] {
        let p = with(50, a);
        let t = fc_table(&p)?;
        let cf = ground_column_closed_form(50, p.rotation_angle());
        for (n, v) in cf.iter().enumerate() {
            worst = worst.max((t.factor(0, n) - v).abs());
        }
    }
    out.push(check("closed-form ground column (N=50)", worst, 1e-10));

    let mut mismatches = Vec::new();
    for n in [10, 50, 100] {
        for a in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0] {
            let p = with(n, a);
            let fav = favored_level_exact(&p);
            let arg = fc_table(&p)?.argmax_from(0);
            if !fav.contains(arg) {
                mismatches.push(format!("N={n} A={a}: predicted {} argmax {arg}", fav.level));
            }
        }
    }
    out.push(flag(
        "favored level = argmax |f_{0→n}|",
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "18 cases agree".into()
        } else {
            mismatches.join("; ")
        },
    ));

    let mut gaps = Vec::new();
    for n in [50usize, 200, 1000] {
        let a = (2.0 / n as f64).sqrt();
        let cf = ground_column_closed_form(n, a.atan());
        let hp = HpFcParams::from_lambda(0.5);
        let gap = (0..=5)
            .map(|k| (cf[k].powi(2) - hp_fc_factor(&hp, 0, k).powi(2)).abs())
            .fold(0.0, f64::max);
        gaps.push(gap);
    }
    out.push(flag(
        "HP limit approached monotonically (λ = 0.5)",
        gaps.windows(2).all(|w| w[1] < w[0]),
        format!("{:.3e} > {:.3e} > {:.3e}", gaps[0], gaps[1], gaps[2]),
    ));

    // Model.
    let p = with(10, 1.0);
    let env = effective_environment(&p, 1)?;
    let h = env.hamiltonian();
    let mut worst: f64 = 0.0;
    for m in 0..=10 {
        let st = rotated_eigenstate(&p, 1, m)?;
        worst = worst.max((&h * &st.coefficients - &st.coefficients * env.energy(m)).norm());
    }
    out.push(check("H₀^(1)|θ₁,m⟩ = E|θ₁,m⟩ (N=10)", worst, 1e-9));

    // Spectroscopy.
    let weak = Spectrometer::new(with(50, 0.2))?;
    let naked = Spectrometer::new(with(50, 0.0))?;
    let grid = weak.default_grid();
    let i_weak = weak.spectrum_zero_t(&grid)?.integrated_intensity();
    let i_naked = naked.spectrum_zero_t(&grid)?.integrated_intensity();
    out.push(check(
        "sum rule ∫I(A=0.2) / ∫I(A=0) - 1",
        (i_weak / i_naked - 1.0).abs(),
        0.02,
    ));

    let w = ThermalWeights::new(params.temperature, 50)?;
    out.push(check(
        "Σ p_m = 1",
        (w.weights.iter().sum::<f64>() - 1.0).abs(),
        1e-12,
    ));

    // Dynamics.
    let p = with(4, 0.5).with_rabi(0.05);
    let s = Spectrometer::new(p)?;
    let res = s.model.resonance_detuning(0, 0);
    let times = linspace(0.25, 2.0, 8);
    let r = drive_propagation(&p, res, &times, 0)?;
    let worst = times
        .iter()
        .enumerate()
        .map(|(i, &t)| (r.population(i, 1, 0) / s.transition_probability(0, 0, res, t) - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(check("golden rule vs propagation (N=4)", worst, 0.05));
    out.push(check("norm conservation", r.max_norm_drift(), 1e-10));

    let p = with(10, 0.2);
    let times = linspace(0.0, 20.0, 201);
    let prop = PrecessionPropagator::new(&p)?;
    let numerical = prop.trajectory(&times);
    let closed = precession_closed_form(&p, &times)?;
    out.push(check(
        "precession closed form vs exact (N=10)",
        numerical.max_deviation(&closed),
        1e-8,
    ));
    let period = prop.measured_period(40.0, 0.05).unwrap_or(f64::NAN);
    let expected = 2.0 * PI / effective_environment(&p, 1)?.omega_tilde;
    out.push(check(
        "precession period = 2π/ω̃",
        (period - expected).abs(),
        1e-6,
    ));

    let worst = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0]
        .iter()
        .map(|&a| vertical_transition_gap(&with(50, a)).abs())
        .fold(0.0, f64::max);
    out.push(check("vertical transition gap (N=50)", worst, 1.0));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_defaults() {
        let checks = run_suite(&ModelParams::nv_default()).unwrap();
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(checks.len() >= 14);
    }
}
