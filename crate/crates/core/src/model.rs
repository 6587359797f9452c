//! Central-spin model parameters and the environment Hamiltonians
//! `H₀^(s) = sA J_z + ω_nu J_x + s²D` conditioned on the central-spin
//! projection `s`.
//!
//! All frequencies are in units of the nuclear Zeeman splitting `ω_nu`
//! (the presets set `omega_nu = 1`). The zero-field splitting `D` only
//! fixes the origin of the detuning `Δ = ω - D`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::collective_spin::{
    check_spins, rotate_dicke, CollectiveOperators, DickeBasis, RotatedDickeState,
};
use crate::error::{Error, Result};

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Physical NV-center numbers, in MHz.
pub mod nv {
    pub const ZFS_MHZ: f64 = 2870.0;
    pub const OMEGA_EL_MHZ: f64 = 211.35;
    pub const OMEGA_NU_MHZ: f64 = 0.15;
    /// Drive strength `Ω = D/20`.
    pub const RABI_MHZ: f64 = ZFS_MHZ / 20.0;
    pub const ROOM_TEMPERATURE_K: f64 = 300.0;
    pub const DEFAULT_SPINS: usize = 50;
    pub const DEFAULT_HYPERFINE: f64 = 0.2;
}

/// `k_B T / (ħ ω_nu)` for a nuclear splitting given as a frequency in MHz.
pub fn temperature_ratio(kelvin: f64, omega_nu_mhz: f64) -> f64 {
    BOLTZMANN * kelvin / (HBAR * 2.0 * std::f64::consts::PI * omega_nu_mhz * 1e6)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_spins: usize,
    /// Longitudinal hyperfine coupling `A`.
    pub hyperfine: f64,
    pub omega_nu: f64,
    /// Central-spin Zeeman splitting. Dropped under the rotating-wave
    /// approximation; kept for bookkeeping.
    pub omega_el: f64,
    /// Zero-field splitting `D`.
    pub zfs: f64,
    /// Drive strength `Ω`.
    pub rabi: f64,
    /// `ω_nu t` used to regularize transition rates.
    pub window_time: f64,
    /// `k_B T / (ħ ω_nu)`; may be `f64::INFINITY`.
    pub temperature: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::nv_default()
    }
}

impl ModelParams {
    /// NV center at 12 G and room temperature with `N = 50`, `A = 0.2 ω_nu`.
    pub fn nv_default() -> Self {
        let unit = nv::OMEGA_NU_MHZ;
        Self {
            n_spins: nv::DEFAULT_SPINS,
            hyperfine: nv::DEFAULT_HYPERFINE,
            omega_nu: 1.0,
            omega_el: nv::OMEGA_EL_MHZ / unit,
            zfs: nv::ZFS_MHZ / unit,
            rabi: nv::RABI_MHZ / unit,
            window_time: 10.0,
            temperature: temperature_ratio(nv::ROOM_TEMPERATURE_K, unit),
        }
    }

    pub fn with_spins(mut self, n_spins: usize) -> Self {
        self.n_spins = n_spins;
        self
    }

    pub fn with_hyperfine(mut self, hyperfine: f64) -> Self {
        self.hyperfine = hyperfine;
        self
    }

    pub fn with_rabi(mut self, rabi: f64) -> Self {
        self.rabi = rabi;
        self
    }

    pub fn with_window_time(mut self, window_time: f64) -> Self {
        self.window_time = window_time;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_spins(self.n_spins)?;
        non_negative("hyperfine", self.hyperfine)?;
        positive("omega_nu", self.omega_nu)?;
        non_negative("omega_el", self.omega_el)?;
        non_negative("zfs", self.zfs)?;
        non_negative("rabi", self.rabi)?;
        positive("window_time", self.window_time)?;
        if self.temperature.is_nan() || self.temperature <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: format!("{} must be > 0", self.temperature),
            });
        }
        Ok(())
    }

    /// Rotation-angle difference `θ = θ₀ - θ₁ = arctan(A/ω_nu)`.
    pub fn rotation_angle(&self) -> f64 {
        self.hyperfine.atan2(self.omega_nu)
    }

    /// Window time in units of `1/ω_nu`.
    pub fn window(&self) -> f64 {
        self.window_time / self.omega_nu
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("{v} must be finite and > 0"),
        });
    }
    Ok(())
}

fn non_negative(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("{v} must be finite and >= 0"),
        });
    }
    Ok(())
}

/// Spectral data of `H₀^(s)`.
#[derive(Debug, Clone)]
pub struct EffectiveEnvironment {
    pub s: i32,
    /// Mixing angle: `sin θ_s = ω_nu/ω̃`, `cos θ_s = sA/ω̃`.
    pub theta_s: f64,
    /// Dressed frequency `ω̃_nu(s) = √(ω_nu² + (sA)²)`.
    pub omega_tilde: f64,
    /// `s²D`.
    pub energy_offset: f64,
    /// `E_{s,m} = s²D + (m - N/2) ω̃`.
    pub eigenvalues: Vec<f64>,
    n_spins: usize,
    hyperfine: f64,
    omega_nu: f64,
}

impl EffectiveEnvironment {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn energy(&self, m: usize) -> f64 {
        self.eigenvalues[m]
    }

    /// Matrix form of `H₀^(s)` over the Dicke basis.
    pub fn hamiltonian(&self) -> DMatrix<f64> {
        let basis = DickeBasis::new(self.n_spins).expect("validated at construction");
        let ops = CollectiveOperators::new(&basis);
        let dim = basis.dim();
        ops.j_z_real() * (self.s as f64 * self.hyperfine)
            + ops.j_x_real() * self.omega_nu
            + DMatrix::<f64>::identity(dim, dim) * self.energy_offset
    }
}

pub fn effective_environment(params: &ModelParams, s: i32) -> Result<EffectiveEnvironment> {
    if !(-1..=1).contains(&s) {
        return Err(Error::SpinProjection(s));
    }
    params.validate()?;
    let sa = s as f64 * params.hyperfine;
    let omega_tilde = params.omega_nu.hypot(sa);
    let energy_offset = (s * s) as f64 * params.zfs;
    let half = params.n_spins as f64 / 2.0;
    let eigenvalues = (0..=params.n_spins)
        .map(|m| energy_offset + (m as f64 - half) * omega_tilde)
        .collect();
    Ok(EffectiveEnvironment {
        s,
        theta_s: params.omega_nu.atan2(sa),
        omega_tilde,
        energy_offset,
        eigenvalues,
        n_spins: params.n_spins,
        hyperfine: params.hyperfine,
        omega_nu: params.omega_nu,
    })
}

/// Eigenstate `|θ_s, m⟩` of `H₀^(s)`.
pub fn rotated_eigenstate(params: &ModelParams, s: i32, m: usize) -> Result<RotatedDickeState> {
    let env = effective_environment(params, s)?;
    let basis = DickeBasis::new(params.n_spins)?;
    rotate_dicke(&basis, env.theta_s, m)
}

/// Two-level drive under the rotating-wave approximation, coupling
/// `|s=0⟩ ↔ |s=1⟩` with amplitude `Ω/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaDrive {
    pub amplitude: f64,
    /// `Ω ≤ D/10`.
    pub within_rwa: bool,
}

impl RwaDrive {
    /// Time-independent Hamiltonian in the frame rotating at `ω = D + Δ`,
    /// on `{|0⟩, |1⟩} ⊗ Dicke`: the `s = 0` block occupies indices
    /// `0..=N`, the `s = 1` block `N+1..=2N+1`.
    pub fn rotating_frame_hamiltonian(
        &self,
        params: &ModelParams,
        detuning: f64,
    ) -> Result<DMatrix<f64>> {
        let ground = effective_environment(params, 0)?;
        let mut excited_params = *params;
        excited_params.zfs = 0.0;
        let excited = effective_environment(&excited_params, 1)?;
        let dim = params.n_spins + 1;
        let mut h = DMatrix::<f64>::zeros(2 * dim, 2 * dim);
        h.view_mut((0, 0), (dim, dim))
            .copy_from(&ground.hamiltonian());
        let shifted = excited.hamiltonian() - DMatrix::<f64>::identity(dim, dim) * detuning;
        h.view_mut((dim, dim), (dim, dim)).copy_from(&shifted);
        for i in 0..dim {
            h[(dim + i, i)] = self.amplitude;
            h[(i, dim + i)] = self.amplitude;
        }
        Ok(h)
    }
}

pub fn rwa_drive(params: &ModelParams) -> RwaDrive {
    let within_rwa = params.rabi <= params.zfs / 10.0;
    if !within_rwa {
        log::warn!(
            "drive strength {} exceeds D/10 = {}; rotating-wave approximation is questionable",
            params.rabi,
            params.zfs / 10.0
        );
    }
    RwaDrive {
        amplitude: params.rabi / std::f64::consts::SQRT_2,
        within_rwa,
    }
}

/// Parameters together with the `s = 0` and `s = 1` environments.
#[derive(Debug, Clone)]
pub struct CentralSpinModel {
    pub params: ModelParams,
    pub ground: EffectiveEnvironment,
    pub excited: EffectiveEnvironment,
}

impl CentralSpinModel {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            ground: effective_environment(&params, 0)?,
            excited: effective_environment(&params, 1)?,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.params.n_spins
    }

    /// `ω_{1n,0m} = E_{1,n} - E_{0,m}`.
    pub fn transition_frequency(&self, m: usize, n: usize) -> f64 {
        self.excited.energy(n) - self.ground.energy(m)
    }

    /// Detuning `Δ = ω - D` at which channel `m → n` is resonant.
    pub fn resonance_detuning(&self, m: usize, n: usize) -> f64 {
        let half = self.n_spins() as f64 / 2.0;
        (n as f64 - half) * self.excited.omega_tilde - (m as f64 - half) * self.ground.omega_tilde
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(n: usize, a: f64) -> ModelParams {
        ModelParams::nv_default().with_spins(n).with_hyperfine(a)
    }

    #[test]
    fn nv_preset_numbers() {
        let p = ModelParams::nv_default();
        assert_eq!(p.omega_nu, 1.0);
        assert!((p.zfs - 2870.0 / 0.15).abs() < 1e-9);
        assert!((p.omega_el - 1409.0).abs() < 1e-9);
        assert!((p.rabi - p.zfs / 20.0).abs() < 1e-9);
        let beta = 1.0 / p.temperature;
        assert!((beta - 2.4e-8).abs() < 0.05e-8, "beta = {beta}");
        p.validate().unwrap();
    }

    #[test]
    fn zero_projection_environment() {
        let env = effective_environment(&params(10, 0.2), 0).unwrap();
        assert_eq!(env.theta_s, FRAC_PI_2);
        assert_eq!(env.omega_tilde, 1.0);
        assert_eq!(env.energy_offset, 0.0);
    }

    #[test]
    fn weak_coupling_angle() {
        let p = params(50, 0.2);
        let e0 = effective_environment(&p, 0).unwrap();
        let e1 = effective_environment(&p, 1).unwrap();
        assert!((e1.omega_tilde - 1.04f64.sqrt()).abs() < 1e-15);
        assert!((e1.omega_tilde - 1.019804).abs() < 1e-6);
        let theta = e0.theta_s - e1.theta_s;
        assert!((theta - 0.2f64.atan()).abs() < 1e-15);
        assert!((theta - 0.197396).abs() < 1e-6);
        assert!((p.rotation_angle() - theta).abs() < 1e-15);
    }

    #[test]
    fn strong_coupling_angle() {
        let p = params(50, 2.0);
        assert!((p.rotation_angle().cos() - 0.447214).abs() < 1e-6);
    }

    #[test]
    fn mirrored_projection_shares_spectrum() {
        let p = params(12, 0.7);
        let plus = effective_environment(&p, 1).unwrap();
        let minus = effective_environment(&p, -1).unwrap();
        assert_eq!(plus.omega_tilde, minus.omega_tilde);
        assert_eq!(plus.eigenvalues, minus.eigenvalues);
        assert!((plus.theta_s.cos() + minus.theta_s.cos()).abs() < 1e-15);
        assert!(effective_environment(&p, 2).is_err());
    }

    #[test]
    fn ladder_is_evenly_spaced() {
        let p = params(20, 1.3);
        for s in [-1, 0, 1] {
            let env = effective_environment(&p, s).unwrap();
            for w in env.eigenvalues.windows(2) {
                assert!((w[1] - w[0] - env.omega_tilde).abs() < 1e-9);
            }
            assert!(env.omega_tilde >= p.omega_nu);
        }
    }

    #[test]
    fn eigenstate_residuals() {
        let p = params(10, 1.0);
        for s in [-1, 0, 1] {
            let env = effective_environment(&p, s).unwrap();
            let h = env.hamiltonian();
            for m in 0..=10 {
                let st = rotated_eigenstate(&p, s, m).unwrap();
                let r = &h * &st.coefficients - &st.coefficients * env.energy(m);
                assert!(r.norm() < 1e-9, "s={s} m={m} residual {}", r.norm());
            }
        }
        assert!(rotated_eigenstate(&p, 1, 11).is_err());
    }

    #[test]
    fn ladder_extremes() {
        let p = params(8, 0.4);
        let e0 = effective_environment(&p, 0).unwrap();
        assert_eq!(e0.energy(0), -4.0);
        let e1 = effective_environment(&p, 1).unwrap();
        assert!((e1.energy(8) - (p.zfs + 4.0 * e1.omega_tilde)).abs() < 1e-9);
    }

    #[test]
    fn drive_amplitude() {
        let p = ModelParams::nv_default();
        let d = rwa_drive(&p);
        assert!((d.amplitude - p.zfs / (20.0 * 2f64.sqrt())).abs() < 1e-9);
        assert!(d.within_rwa);
        assert_eq!(rwa_drive(&p.with_rabi(0.0)).amplitude, 0.0);
        assert!(!rwa_drive(&p.with_rabi(p.zfs / 5.0)).within_rwa);
    }

    #[test]
    fn resonance_matches_energy_difference() {
        let model = CentralSpinModel::new(params(50, 0.2)).unwrap();
        let d00 = model.resonance_detuning(0, 0);
        assert!((d00 - 25.0 * (1.0 - 1.04f64.sqrt())).abs() < 1e-12);
        assert!((d00 + 0.495).abs() < 1e-3);
        assert!((model.resonance_detuning(0, 1) - 0.525).abs() < 1e-3);
        let direct = model.transition_frequency(3, 4) - model.params.zfs;
        assert!((model.resonance_detuning(3, 4) - direct).abs() < 1e-9);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let p = ModelParams::nv_default();
        assert!(p.with_hyperfine(-1.0).validate().is_err());
        assert!(p.with_window_time(0.0).validate().is_err());
        assert!(p.with_temperature(0.0).validate().is_err());
        assert!(p.with_temperature(f64::INFINITY).validate().is_ok());
        assert!(p.with_spins(0).validate().is_err());
        assert!(p.with_hyperfine(f64::NAN).validate().is_err());
    }

    #[test]
    fn angle_stays_in_first_quadrant() {
        for a in [1e-6, 0.1, 1.0, 10.0, 1e6] {
            let t = params(4, a).rotation_angle();
            assert!(t > 0.0 && t < PI / 2.0);
        }
    }
}
