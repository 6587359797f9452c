//! Exact propagation of the collective spin and of the driven central spin.
//!
//! After a sudden flip of the central spin to `s = 1`, the environment
//! prepared in `|θ₀,0⟩` precesses under `H₀^(1) = ω̃ J'_x + D`. The primed
//! frame is spanned by
//!
//! ```text
//! J'_x =  cos θ J_x + sin θ J_z
//! J'_y = -J_y
//! J'_z =  sin θ J_x - cos θ J_z
//! ```
//!
//! which is right-handed, puts the initial point at
//! `(-(N/2)cos θ, 0, -(N/2)sin θ)`, and gives `∂_t J'_y = -ω̃ J'_z`,
//! `∂_t J'_z = ω̃ J'_y`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::collective_spin::{wigner_d, CollectiveOperators, DickeBasis};
use crate::error::{Error, Result};
use crate::franck_condon::favored_level_exact;
use crate::model::{effective_environment, rwa_drive, ModelParams};

/// Largest environment for dense propagation.
pub const PROPAGATION_MAX_SPINS: usize = 100;
/// Environment size above which driven propagation logs a warning.
pub const DRIVE_RECOMMENDED_SPINS: usize = 30;
/// Allowed norm drift during driven propagation.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Rotated-frame expectation values `⟨J'_α(t)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryState {
    pub times: Vec<f64>,
    pub jx_rot: Vec<f64>,
    pub jy_rot: Vec<f64>,
    pub jz_rot: Vec<f64>,
}

impl TrajectoryState {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest pointwise difference over all three components.
    pub fn max_deviation(&self, other: &TrajectoryState) -> f64 {
        let pairs = [
            (&self.jx_rot, &other.jx_rot),
            (&self.jy_rot, &other.jy_rot),
            (&self.jz_rot, &other.jz_rot),
        ];
        pairs
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// `max |⟨J'_x(t)⟩ - ⟨J'_x(0)⟩|`.
    pub fn jx_drift(&self) -> f64 {
        let Some(&first) = self.jx_rot.first() else {
            return 0.0;
        };
        self.jx_rot
            .iter()
            .map(|x| (x - first).abs())
            .fold(0.0, f64::max)
    }

    /// `√(⟨J'_y⟩² + ⟨J'_z⟩²)` at every sample.
    pub fn radii(&self) -> Vec<f64> {
        self.jy_rot
            .iter()
            .zip(&self.jz_rot)
            .map(|(y, z)| y.hypot(*z))
            .collect()
    }
}

/// Closed-form precession after a vertical transition.
pub fn precession_closed_form(params: &ModelParams, times: &[f64]) -> Result<TrajectoryState> {
    let env = effective_environment(params, 1)?;
    let theta = params.rotation_angle();
    let half = params.n_spins as f64 / 2.0;
    let w = env.omega_tilde;
    Ok(TrajectoryState {
        times: times.to_vec(),
        jx_rot: vec![-half * theta.cos(); times.len()],
        jy_rot: times
            .iter()
            .map(|t| half * theta.sin() * (w * t).sin())
            .collect(),
        jz_rot: times
            .iter()
            .map(|t| -half * theta.sin() * (w * t).cos())
            .collect(),
    })
}

/// Rotated-frame operators for angle `θ`.
pub fn rotated_frame_operators(ops: &CollectiveOperators, theta: f64) -> [DMatrix<Complex64>; 3] {
    let (s, c) = theta.sin_cos();
    let jx = ops.j_x.scale(c) + ops.j_z.scale(s);
    let jy = -ops.j_y.clone();
    let jz = ops.j_x.scale(s) - ops.j_z.scale(c);
    [jx, jy, jz]
}

/// Exact evolution of `|θ₀,0⟩` under the matrix `H₀^(1)`.
///
/// The initial state is the ground state of `H₀^(0) = ω_nu J_x`, found by
/// diagonalization, and the evolution uses the eigendecomposition of
/// `H₀^(1)`, so nothing here relies on the rotated Dicke closed forms.
#[derive(Debug, Clone)]
pub struct PrecessionPropagator {
    energies: DVector<f64>,
    /// Initial state in the `H₀^(1)` eigenbasis.
    coefficients: DVector<f64>,
    /// `J'_α` in the `H₀^(1)` eigenbasis.
    observables: [DMatrix<Complex64>; 3],
}

impl PrecessionPropagator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        if params.n_spins > PROPAGATION_MAX_SPINS {
            return Err(Error::SpinCount {
                n: params.n_spins,
                max: PROPAGATION_MAX_SPINS,
            });
        }
        let mut p = *params;
        p.zfs = 0.0;
        let ground = effective_environment(&p, 0)?;
        let excited = effective_environment(&p, 1)?;
        let basis = DickeBasis::new(p.n_spins)?;
        let ops = CollectiveOperators::new(&basis);

        let g = SymmetricEigen::new(ground.hamiltonian());
        let lowest = g.eigenvalues.imin();
        let initial = g.eigenvectors.column(lowest).into_owned();

        let eig = SymmetricEigen::new(excited.hamiltonian());
        let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let coefficients = eig.eigenvectors.transpose() * initial;
        let observables =
            rotated_frame_operators(&ops, p.rotation_angle()).map(|o| v.adjoint() * o * &v);
        Ok(Self {
            energies: eig.eigenvalues,
            coefficients,
            observables,
        })
    }

    fn amplitudes(&self, t: f64) -> DVector<Complex64> {
        DVector::from_iterator(
            self.energies.len(),
            self.energies
                .iter()
                .zip(self.coefficients.iter())
                .map(|(e, c)| Complex64::from_polar(*c, -e * t)),
        )
    }

    /// `(⟨J'_x⟩, ⟨J'_y⟩, ⟨J'_z⟩)` at time `t`.
    pub fn expectations(&self, t: f64) -> [f64; 3] {
        let a = self.amplitudes(t);
        self.observables
            .each_ref()
            .map(|o| (a.adjoint() * o * &a)[(0, 0)].re)
    }

    pub fn trajectory(&self, times: &[f64]) -> TrajectoryState {
        let mut out = TrajectoryState {
            times: times.to_vec(),
            jx_rot: Vec::with_capacity(times.len()),
            jy_rot: Vec::with_capacity(times.len()),
            jz_rot: Vec::with_capacity(times.len()),
        };
        for &t in times {
            let [x, y, z] = self.expectations(t);
            out.jx_rot.push(x);
            out.jy_rot.push(y);
            out.jz_rot.push(z);
        }
        out
    }

    /// Times in `(0, t_max]` where `⟨J'_y⟩` changes sign, located by
    /// bracketing on a grid of step `dt` and bisecting.
    pub fn jy_zero_crossings(&self, t_max: f64, dt: f64) -> Vec<f64> {
        let jy = |t: f64| self.expectations(t)[1];
        let steps = (t_max / dt).ceil() as usize;
        let mut roots = Vec::new();
        let mut t0 = dt;
        let mut y0 = jy(t0);
        for i in 2..=steps {
            let t1 = (i as f64 * dt).min(t_max);
            let y1 = jy(t1);
            if y0 == 0.0 {
                roots.push(t0);
            } else if y0.signum() != y1.signum() && y1 != 0.0 {
                let (mut a, mut b, mut ya) = (t0, t1, y0);
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    let ym = jy(mid);
                    if ym.signum() == ya.signum() {
                        a = mid;
                        ya = ym;
                    } else {
                        b = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            t0 = t1;
            y0 = y1;
        }
        roots
    }

    /// Precession period from the spacing of `⟨J'_y⟩` zero crossings.
    pub fn measured_period(&self, t_max: f64, dt: f64) -> Option<f64> {
        let roots = self.jy_zero_crossings(t_max, dt);
        if roots.len() < 2 {
            return None;
        }
        let span = roots[roots.len() - 1] - roots[0];
        Some(2.0 * span / (roots.len() - 1) as f64)
    }
}

/// Numerically exact rotated-frame trajectory.
pub fn precession_numerical(params: &ModelParams, times: &[f64]) -> Result<TrajectoryState> {
    Ok(PrecessionPropagator::new(params)?.trajectory(times))
}

/// `(n_mf - N/2) + (N/2) cos θ`: offset between the most-favored level's
/// `J'_x` eigenvalue and the conserved `⟨J'_x⟩` of the precession.
pub fn vertical_transition_gap(params: &ModelParams) -> f64 {
    let n_mf = favored_level_exact(params).level as f64;
    let half = params.n_spins as f64 / 2.0;
    (n_mf - half) + half * params.rotation_angle().cos()
}

/// Driven evolution in the rotating frame.
#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub times: Vec<f64>,
    pub n_spins: usize,
    /// State vectors on `{|0⟩, |1⟩} ⊗ Dicke`, `s = 0` block first.
    pub amplitudes: Vec<DVector<Complex64>>,
    /// `populations[i][s * (N+1) + n] = |⟨θ_s,n; s|ψ(t_i)⟩|²`.
    pub populations: Vec<Vec<f64>>,
}

impl PropagationResult {
    pub fn population(&self, time_index: usize, s: usize, n: usize) -> f64 {
        self.populations[time_index][s * (self.n_spins + 1) + n]
    }

    /// Total population in `s = 1` at each time.
    pub fn excited_population(&self) -> Vec<f64> {
        let dim = self.n_spins + 1;
        self.populations
            .iter()
            .map(|p| p[dim..].iter().sum())
            .collect()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| (a.norm_squared() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Propagate `|θ₀,m;0⟩` under the rotating-frame Hamiltonian of the RWA
/// drive at detuning `Δ`.
pub fn drive_propagation(
    params: &ModelParams,
    detuning: f64,
    times: &[f64],
    initial_m: usize,
) -> Result<PropagationResult> {
    params.validate()?;
    let n = params.n_spins;
    if n > PROPAGATION_MAX_SPINS {
        return Err(Error::SpinCount {
            n,
            max: PROPAGATION_MAX_SPINS,
        });
    }
    if n > DRIVE_RECOMMENDED_SPINS {
        log::warn!("driven propagation with N = {n} > {DRIVE_RECOMMENDED_SPINS} is slow");
    }
    let basis = DickeBasis::new(n)?;
    basis.check_index(initial_m)?;
    let dim = n + 1;

    let ground = effective_environment(params, 0)?;
    let excited = effective_environment(params, 1)?;
    let d0 = wigner_d(n, ground.theta_s)?.elements;
    let d1 = wigner_d(n, excited.theta_s)?.elements;
    // Columns: eigenbasis |θ_s,n; s⟩ of the undriven problem.
    let mut frame = DMatrix::<f64>::zeros(2 * dim, 2 * dim);
    frame.view_mut((0, 0), (dim, dim)).copy_from(&d0);
    frame.view_mut((dim, dim), (dim, dim)).copy_from(&d1);

    let h = rwa_drive(params).rotating_frame_hamiltonian(params, detuning)?;
    let eig = SymmetricEigen::new(h);
    let psi0 = frame.column(initial_m).into_owned();
    let coefficients = eig.eigenvectors.transpose() * psi0;
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let frame_c = frame.map(|x| Complex64::new(x, 0.0));

    let mut amplitudes = Vec::with_capacity(times.len());
    let mut populations = Vec::with_capacity(times.len());
    for &t in times {
        let evolved = DVector::from_iterator(
            2 * dim,
            eig.eigenvalues
                .iter()
                .zip(coefficients.iter())
                .map(|(e, c)| Complex64::from_polar(*c, -e * t)),
        );
        let psi = &v * evolved;
        let drift = (psi.norm_squared() - 1.0).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift {
                drift,
                time: t,
                limit: NORM_DRIFT_LIMIT,
            });
        }
        let projected = frame_c.transpose() * &psi;
        populations.push(projected.iter().map(|z| z.norm_sqr()).collect());
        amplitudes.push(psi);
    }
    Ok(PropagationResult {
        times: times.to_vec(),
        n_spins: n,
        amplitudes,
        populations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectroscopy::{linspace, Spectrometer};
    use std::f64::consts::PI;

    fn params(n: usize, a: f64) -> ModelParams {
        ModelParams::nv_default().with_spins(n).with_hyperfine(a)
    }

    #[test]
    fn closed_form_initial_point() {
        let p = params(50, 0.2);
        let tr = precession_closed_form(&p, &[0.0]).unwrap();
        let th = p.rotation_angle();
        assert_eq!(tr.jx_rot[0], -25.0 * th.cos());
        assert_eq!(tr.jy_rot[0], 0.0);
        assert_eq!(tr.jz_rot[0], -25.0 * th.sin());
    }

    #[test]
    fn closed_form_half_period() {
        let p = params(20, 0.8);
        let w = effective_environment(&p, 1).unwrap().omega_tilde;
        let tr = precession_closed_form(&p, &[PI / w]).unwrap();
        let expect = 10.0 * p.rotation_angle().sin();
        assert!((tr.jz_rot[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn no_coupling_is_stationary() {
        let p = params(10, 0.0);
        let times = linspace(0.0, 10.0, 11);
        let tr = precession_closed_form(&p, &times).unwrap();
        assert!(tr.jx_rot.iter().all(|&x| x == -5.0));
        assert!(tr.jy_rot.iter().all(|&x| x.abs() < 1e-15));
        let num = precession_numerical(&p, &times).unwrap();
        assert!(num.max_deviation(&tr) < 1e-10);
    }

    #[test]
    fn numerical_matches_closed_form() {
        let p = params(10, 0.2);
        let times = linspace(0.0, 20.0, 201);
        let a = precession_closed_form(&p, &times).unwrap();
        let b = precession_numerical(&p, &times).unwrap();
        assert!(a.max_deviation(&b) < 1e-8);
        assert!(b.jx_drift() < 1e-9);
        let r0 = b.radii()[0];
        assert!(b.radii().iter().all(|r| (r - r0).abs() < 1e-9));
    }

    #[test]
    fn measured_period() {
        let p = params(10, 0.2);
        let w = effective_environment(&p, 1).unwrap().omega_tilde;
        let prop = PrecessionPropagator::new(&p).unwrap();
        let period = prop.measured_period(40.0, 0.05).unwrap();
        assert!((period - 2.0 * PI / w).abs() < 1e-6);
    }

    #[test]
    fn favored_state_jx_is_level_offset() {
        // ⟨θ₁,n|J'_x|θ₁,n⟩ = n - N/2 exactly.
        let p = params(12, 0.9);
        let (basis, ops) = crate::collective_spin::build_basis(12).unwrap();
        let [jx, _, _] = rotated_frame_operators(&ops, p.rotation_angle());
        let theta1 = effective_environment(&p, 1).unwrap().theta_s;
        for n in 0..=12 {
            let st = crate::collective_spin::rotate_dicke(&basis, theta1, n).unwrap();
            let v = st.coefficients.map(|x| Complex64::new(x, 0.0));
            let e = (v.adjoint() * &jx * &v)[(0, 0)].re;
            assert!((e - (n as f64 - 6.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn vertical_gap_bounded() {
        for a in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0] {
            assert!(vertical_transition_gap(&params(50, a)).abs() <= 1.0);
        }
    }

    #[test]
    fn zero_drive_leaves_ground_manifold() {
        let p = params(4, 0.5).with_rabi(0.0);
        let r = drive_propagation(&p, 0.3, &linspace(0.0, 5.0, 11), 0).unwrap();
        assert!(r.excited_population().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn drive_matches_golden_rule() {
        let p = params(4, 0.5).with_rabi(0.05);
        let s = Spectrometer::new(p).unwrap();
        let res = s.model.resonance_detuning(0, 0);
        let times = linspace(0.25, 2.0, 8);
        let r = drive_propagation(&p, res, &times, 0).unwrap();
        assert!(r.max_norm_drift() < 1e-10);
        for (i, &t) in times.iter().enumerate() {
            let exact = r.population(i, 1, 0);
            let pert = s.transition_probability(0, 0, res, t);
            assert!((exact / pert - 1.0).abs() < 0.05, "t={t}");
        }
    }

    #[test]
    fn propagation_cap() {
        assert!(PrecessionPropagator::new(&params(101, 0.2)).is_err());
        assert!(drive_propagation(&params(4, 0.2), 0.0, &[0.0], 5).is_err());
    }
}
