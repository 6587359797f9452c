//! Finite-time transition probabilities, rates and absorption spectra of
//! the driven central spin.
//!
//! Channel `m → n` takes `|θ₀,m;0⟩` to `|θ₁,n;1⟩`. Its probability after a
//! time `t` is `(Ω²/2) F((ω_{1n,0m} - ω)/2, t) f²_{m→n}` with the window
//! `F(x, t) = sin²(xt)/x²`, and its rate is that probability divided by `t`
//! at the finite window time stored in the parameters.
//!
//! Spectra are stored in units of `Ω²/(2ω_nu)`, so every line has height
//! `ω_nu t · f²` at resonance regardless of the drive strength.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::franck_condon::{fc_table, FcTable};
use crate::model::{CentralSpinModel, ModelParams};

/// Channels with `f²` below this are skipped.
pub const CHANNEL_CUTOFF: f64 = 1e-12;
/// Initial levels with thermal weight below this are skipped.
pub const WEIGHT_CUTOFF: f64 = 1e-12;
/// Default number of detuning grid points.
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// `F(ω, t) = sin²(ωt)/ω²`, with `F(0, t) = t²`.
pub fn window(omega: f64, t: f64) -> f64 {
    if omega == 0.0 {
        return t * t;
    }
    let s = (omega * t).sin() / omega;
    s * s
}

/// Model, Franck-Condon table and drive bundled for spectrum evaluation.
#[derive(Debug, Clone)]
pub struct Spectrometer {
    pub model: CentralSpinModel,
    pub fc: FcTable,
}

impl Spectrometer {
    pub fn new(params: ModelParams) -> Result<Self> {
        let model = CentralSpinModel::new(params)?;
        let fc = fc_table(&params)?;
        Ok(Self { model, fc })
    }

    pub fn params(&self) -> &ModelParams {
        &self.model.params
    }

    pub fn n_spins(&self) -> usize {
        self.model.n_spins()
    }

    /// `P_{1,n;0,m}(t)` for a drive at detuning `Δ = ω - D`.
    pub fn transition_probability(&self, m: usize, n: usize, detuning: f64, t: f64) -> f64 {
        let rabi = self.params().rabi;
        let f = self.fc.factor(m, n);
        0.5 * rabi * rabi * window(self.half_mismatch(m, n, detuning), t) * f * f
    }

    /// `k_{m→n}(Δ) = P(t)/t` at the configured window time.
    pub fn rate(&self, m: usize, n: usize, detuning: f64) -> f64 {
        let rabi = self.params().rabi;
        0.5 * rabi * rabi * self.line_shape(m, n, detuning)
    }

    /// Rate in units of `Ω²/(2ω_nu)`.
    pub fn line_shape(&self, m: usize, n: usize, detuning: f64) -> f64 {
        let f = self.fc.factor(m, n);
        self.unit_line(self.model.resonance_detuning(m, n), detuning) * f * f
    }

    fn unit_line(&self, resonance: f64, detuning: f64) -> f64 {
        let t = self.params().window();
        window((resonance - detuning) / 2.0, t) / t * self.params().omega_nu
    }

    fn half_mismatch(&self, m: usize, n: usize, detuning: f64) -> f64 {
        (self.model.resonance_detuning(m, n) - detuning) / 2.0
    }

    /// Symmetric grid wide enough for every channel with `f² > 1e-6` at
    /// `A ≤ 2ω_nu`, `N = 50`.
    pub fn default_grid(&self) -> Vec<f64> {
        let p = self.params();
        let half = 1.2 * (p.n_spins as f64 / 2.0) * (self.model.excited.omega_tilde - p.omega_nu)
            + 5.0 * p.omega_nu;
        linspace(-half, half, DEFAULT_GRID_POINTS)
    }

    /// Absorption spectrum starting from `|θ₀,0;0⟩`.
    pub fn spectrum_zero_t(&self, detunings: &[f64]) -> Result<SpectrumGrid> {
        self.spectrum_from_levels(&[(0, 1.0)], detunings)
    }

    /// Absorption spectrum of the environment in thermal equilibrium at the
    /// configured temperature.
    pub fn spectrum_thermal(&self, detunings: &[f64]) -> Result<SpectrumGrid> {
        let weights = ThermalWeights::new(self.params().temperature, self.n_spins())?;
        let levels: Vec<(usize, f64)> = weights
            .weights
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, p)| p > WEIGHT_CUTOFF)
            .collect();
        self.spectrum_from_levels(&levels, detunings)
    }

    /// Spectrum of an incoherent mixture of initial levels `(m, p_m)`.
    pub fn spectrum_from_levels(
        &self,
        levels: &[(usize, f64)],
        detunings: &[f64],
    ) -> Result<SpectrumGrid> {
        check_grid(detunings)?;
        let n_spins = self.n_spins();
        for &(m, _) in levels {
            if m > n_spins {
                return Err(Error::IndexOutOfRange {
                    what: "initial level",
                    index: m,
                    max: n_spins,
                });
            }
        }
        let channels: Vec<Channel> = levels
            .iter()
            .flat_map(|&(m, weight)| {
                (0..=n_spins).filter_map(move |n| {
                    let f = self.fc.factor(m, n);
                    let fc_squared = f * f;
                    (fc_squared >= CHANNEL_CUTOFF).then(|| Channel {
                        m,
                        n,
                        weight,
                        fc_squared,
                        resonance: self.model.resonance_detuning(m, n),
                    })
                })
            })
            .collect();

        let (lo, hi) = (detunings[0], detunings[detunings.len() - 1]);
        let uncovered = channels
            .iter()
            .filter(|c| c.fc_squared > 1e-4 && !(lo..=hi).contains(&c.resonance))
            .count();
        if uncovered > 0 {
            log::warn!("{uncovered} channels with f² > 1e-4 resonate outside the detuning grid");
        }

        // Partial sums per initial level in parallel, reduced in level order
        // so the result does not depend on scheduling.
        let partials: Vec<Vec<f64>> = levels
            .par_iter()
            .map(|&(m, weight)| {
                let mut acc = vec![0.0; detunings.len()];
                for c in channels.iter().filter(|c| c.m == m) {
                    for (a, &d) in acc.iter_mut().zip(detunings) {
                        *a += self.unit_line(c.resonance, d) * c.fc_squared;
                    }
                }
                acc.iter_mut().for_each(|a| *a *= weight);
                acc
            })
            .collect();
        let mut intensity = vec![0.0; detunings.len()];
        for part in &partials {
            for (i, p) in intensity.iter_mut().zip(part) {
                *i += p;
            }
        }

        Ok(SpectrumGrid {
            detunings: detunings.to_vec(),
            channels,
            intensity,
            window_time: self.params().window_time,
            omega_nu: self.params().omega_nu,
            uncovered_channels: uncovered,
        })
    }
}

fn check_grid(detunings: &[f64]) -> Result<()> {
    if detunings.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if detunings.iter().any(|d| !d.is_finite()) || detunings.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "detunings",
            reason: "grid must be finite and strictly increasing".into(),
        });
    }
    Ok(())
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| lo + step * i as f64).collect()
        }
    }
}

/// One absorption channel `m → n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Channel {
    pub m: usize,
    pub n: usize,
    /// Occupation of the initial level.
    pub weight: f64,
    pub fc_squared: f64,
    /// Detuning of the line center.
    pub resonance: f64,
}

/// Absorption spectrum on a detuning grid, in units of `Ω²/(2ω_nu)`.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    pub detunings: Vec<f64>,
    pub channels: Vec<Channel>,
    pub intensity: Vec<f64>,
    pub window_time: f64,
    pub omega_nu: f64,
    /// Channels with `f² > 1e-4` centered outside the grid.
    pub uncovered_channels: usize,
}

impl SpectrumGrid {
    /// Unweighted `k_{m→n}(Δ)` of channel `index` over the grid.
    pub fn channel_rate(&self, index: usize) -> Vec<f64> {
        let c = &self.channels[index];
        let t = self.window_time / self.omega_nu;
        self.detunings
            .iter()
            .map(|&d| window((c.resonance - d) / 2.0, t) / t * self.omega_nu * c.fc_squared)
            .collect()
    }

    /// Fraction of the integrated intensity carried by channel `index`.
    pub fn channel_share(&self, index: usize) -> f64 {
        let c = &self.channels[index];
        c.weight * trapezoid(&self.detunings, &self.channel_rate(index))
            / self.integrated_intensity()
    }

    pub fn step(&self) -> f64 {
        if self.detunings.len() < 2 {
            return 0.0;
        }
        (self.detunings[self.detunings.len() - 1] - self.detunings[0])
            / (self.detunings.len() - 1) as f64
    }

    /// Grid point of maximum intensity, `(Δ, I)`.
    pub fn peak(&self) -> (f64, f64) {
        let mut best = 0;
        for i in 1..self.intensity.len() {
            if self.intensity[i] > self.intensity[best] {
                best = i;
            }
        }
        (self.detunings[best], self.intensity[best])
    }

    /// Trapezoidal integral of the intensity.
    pub fn integrated_intensity(&self) -> f64 {
        trapezoid(&self.detunings, &self.intensity)
    }

    /// Strict interior local maxima with intensity at least
    /// `min_relative` times the global peak, sorted by detuning.
    pub fn local_maxima(&self, min_relative: f64) -> Vec<(f64, f64)> {
        let (_, top) = self.peak();
        let y = &self.intensity;
        (1..y.len().saturating_sub(1))
            .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] >= min_relative * top)
            .map(|i| (self.detunings[i], y[i]))
            .collect()
    }
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Boltzmann occupation of the `s = 0` environment levels.
#[derive(Debug, Clone)]
pub struct ThermalWeights {
    /// `k_B T / (ħ ω_nu)`.
    pub temperature: f64,
    pub weights: Vec<f64>,
    pub partition: f64,
}

impl ThermalWeights {
    pub fn new(temperature: f64, n_spins: usize) -> Result<Self> {
        if temperature.is_nan() || temperature <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: format!("{temperature} must be > 0"),
            });
        }
        let boltzmann: Vec<f64> = (0..=n_spins)
            .map(|m| (-(m as f64) / temperature).exp())
            .collect();
        let partition: f64 = boltzmann.iter().sum();
        Ok(Self {
            temperature,
            weights: boltzmann.iter().map(|b| b / partition).collect(),
            partition,
        })
    }

    /// Largest relative step `1 - p_{m+1}/p_m` between adjacent levels.
    pub fn max_adjacent_spread(&self) -> f64 {
        self.weights
            .windows(2)
            .map(|w| 1.0 - w[1] / w[0])
            .fold(0.0, f64::max)
    }

    /// `(p_max - p_min)/p_max` over the whole ladder.
    pub fn total_spread(&self) -> f64 {
        let max = self.weights.iter().copied().fold(f64::MIN, f64::max);
        let min = self.weights.iter().copied().fold(f64::MAX, f64::min);
        (max - min) / max
    }
}

/// Ratio of spectrum `a` to spectrum `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockadeMetric {
    /// `max I_a / max I_b`.
    pub peak_ratio: f64,
    /// `∫ I_a / ∫ I_b`.
    pub integrated_ratio: f64,
}

pub fn blockade_metric(a: &SpectrumGrid, b: &SpectrumGrid) -> Result<BlockadeMetric> {
    if a.detunings != b.detunings {
        return Err(Error::GridMismatch);
    }
    Ok(BlockadeMetric {
        peak_ratio: a.peak().1 / b.peak().1,
        integrated_ratio: a.integrated_intensity() / b.integrated_intensity(),
    })
}

/// Single-call form of [`Spectrometer::transition_probability`].
pub fn transition_probability(
    params: &ModelParams,
    m: usize,
    n: usize,
    detuning: f64,
    t: f64,
) -> Result<f64> {
    let s = Spectrometer::new(*params)?;
    check_channel(&s, m, n)?;
    Ok(s.transition_probability(m, n, detuning, t))
}

/// Single-call form of [`Spectrometer::rate`].
pub fn rate(params: &ModelParams, m: usize, n: usize, detuning: f64) -> Result<f64> {
    let s = Spectrometer::new(*params)?;
    check_channel(&s, m, n)?;
    Ok(s.rate(m, n, detuning))
}

fn check_channel(s: &Spectrometer, m: usize, n: usize) -> Result<()> {
    let max = s.n_spins();
    for (what, index) in [("initial level", m), ("final level", n)] {
        if index > max {
            return Err(Error::IndexOutOfRange { what, index, max });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spectrometer(n: usize, a: f64) -> Spectrometer {
        Spectrometer::new(ModelParams::nv_default().with_spins(n).with_hyperfine(a)).unwrap()
    }

    #[test]
    fn window_values() {
        assert_eq!(window(0.0, 10.0), 100.0);
        let t = 10.0;
        let w = PI / (2.0 * t);
        assert!((window(w, t) - (2.0 * t / PI).powi(2)).abs() < 1e-10);
        assert_eq!(window(0.3, 4.0), window(-0.3, 4.0));
    }

    #[test]
    fn window_integral() {
        // ∫ sin²(ωt)/ω² dω = πt; tails beyond |ω| = L carry about 1/L.
        let t = 10.0;
        let xs = linspace(-200.0, 200.0, 400_001);
        let ys: Vec<f64> = xs.iter().map(|&x| window(x, t)).collect();
        let integral = trapezoid(&xs, &ys);
        assert!((integral / (PI * t) - 1.0).abs() < 0.01);
    }

    #[test]
    fn zero_drive_gives_zero_probability() {
        let p = ModelParams::nv_default().with_rabi(0.0);
        assert_eq!(transition_probability(&p, 0, 0, 0.3, 5.0).unwrap(), 0.0);
        assert_eq!(rate(&p, 0, 1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn resonant_probability_and_rate() {
        let s = spectrometer(10, 0.7);
        let rabi = s.params().rabi;
        for (m, n) in [(0, 0), (2, 3), (5, 1)] {
            let res = s.model.resonance_detuning(m, n);
            let f2 = s.fc.factor(m, n).powi(2);
            for t in [0.5, 3.0, 10.0] {
                let p = s.transition_probability(m, n, res, t);
                let expect = 0.5 * rabi * rabi * t * t * f2;
                assert!((p - expect).abs() <= 1e-12 * expect.max(1.0));
            }
            let k = s.rate(m, n, res);
            let expect = 0.5 * rabi * rabi * 10.0 * f2;
            assert!((k - expect).abs() <= 1e-12 * expect.max(1.0));
        }
        assert!(transition_probability(s.params(), 11, 0, 0.0, 1.0).is_err());
    }

    #[test]
    fn naked_spin_single_line() {
        let s = spectrometer(50, 0.0);
        let grid = linspace(-5.0, 5.0, 2001);
        let spec = s.spectrum_zero_t(&grid).unwrap();
        assert_eq!(spec.channels.len(), 1);
        let (at, height) = spec.peak();
        assert!(at.abs() <= spec.step());
        assert!((height - 10.0).abs() < 1e-9);
    }

    #[test]
    fn weak_coupling_channel_positions() {
        let s = spectrometer(50, 0.2);
        let grid = s.default_grid();
        let spec = s.spectrum_zero_t(&grid).unwrap();
        let step = spec.step();
        let (lo, hi) = (grid[0], grid[grid.len() - 1]);
        for (idx, c) in spec.channels.iter().enumerate() {
            if !(lo..=hi).contains(&c.resonance) {
                assert!(c.fc_squared < 1e-4);
                continue;
            }
            let k = spec.channel_rate(idx);
            let best = (0..k.len()).max_by(|&a, &b| k[a].total_cmp(&k[b])).unwrap();
            assert!(
                (grid[best] - c.resonance).abs() <= step,
                "channel {}->{}",
                c.m,
                c.n
            );
        }
        let c0 = spec.channels.iter().find(|c| c.n == 0).unwrap();
        assert!((c0.resonance + 0.495).abs() < 1e-3);
    }

    #[test]
    fn intensity_is_sum_of_channels() {
        let s = spectrometer(12, 0.9);
        let grid = linspace(-8.0, 8.0, 801);
        let spec = s
            .spectrum_from_levels(&[(0, 0.5), (3, 0.3), (7, 0.2)], &grid)
            .unwrap();
        let mut total = vec![0.0; grid.len()];
        for (i, c) in spec.channels.iter().enumerate() {
            for (t, k) in total.iter_mut().zip(spec.channel_rate(i)) {
                *t += c.weight * k;
            }
        }
        for (a, b) in total.iter().zip(&spec.intensity) {
            assert!((a - b).abs() < 1e-12);
            assert!(*b >= 0.0);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let s = spectrometer(4, 0.2);
        assert!(matches!(s.spectrum_zero_t(&[]), Err(Error::EmptyGrid)));
        assert!(s.spectrum_zero_t(&[0.0, -1.0]).is_err());
        assert!(s.spectrum_from_levels(&[(5, 1.0)], &[0.0]).is_err());
    }

    #[test]
    fn thermal_weights_normalized_and_monotone() {
        let w = ThermalWeights::new(3.0, 20).unwrap();
        assert!((w.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.weights.windows(2).all(|p| p[1] <= p[0]));
        let flat = ThermalWeights::new(f64::INFINITY, 20).unwrap();
        assert!(flat.weights.iter().all(|&p| (p - 1.0 / 21.0).abs() < 1e-15));
        assert!(ThermalWeights::new(0.0, 3).is_err());
        assert!(ThermalWeights::new(-1.0, 3).is_err());
    }

    #[test]
    fn cold_limit_matches_zero_temperature() {
        let p = ModelParams::nv_default().with_spins(20).with_hyperfine(0.5);
        let grid = linspace(-6.0, 6.0, 601);
        let cold = Spectrometer::new(p.with_temperature(1e-3)).unwrap();
        let a = cold.spectrum_thermal(&grid).unwrap();
        let b = cold.spectrum_zero_t(&grid).unwrap();
        for (x, y) in a.intensity.iter().zip(&b.intensity) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn blockade_metric_identity_and_mismatch() {
        let s = spectrometer(10, 0.2);
        let g = linspace(-4.0, 4.0, 401);
        let a = s.spectrum_zero_t(&g).unwrap();
        let m = blockade_metric(&a, &a).unwrap();
        assert_eq!(m.peak_ratio, 1.0);
        assert_eq!(m.integrated_ratio, 1.0);
        let b = s.spectrum_zero_t(&linspace(-4.0, 4.0, 402)).unwrap();
        assert!(matches!(blockade_metric(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn line_shape_is_symmetric_about_resonance() {
        let s = spectrometer(8, 1.1);
        let res = s.model.resonance_detuning(2, 4);
        for off in [0.05, 0.3, 1.7] {
            let a = s.line_shape(2, 4, res + off);
            let b = s.line_shape(2, 4, res - off);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }
}
