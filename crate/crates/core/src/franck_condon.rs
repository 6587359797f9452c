//! Spin Franck-Condon factors.
//!
//! The exact factors are overlaps of rotated Dicke states,
//! `f_{m→n} = ⟨θ₁,n|θ₀,m⟩ = d_{n,m}(θ)` with `θ = θ₀ - θ₁`. In the
//! low-excitation limit the environment maps to a displaced oscillator and
//! the factors become displaced-Fock overlaps.

use nalgebra::DMatrix;

use crate::collective_spin::{check_spins, wigner_d, WignerMethod};
use crate::error::Result;
use crate::model::ModelParams;
use crate::special::{laguerre, signed_ln_pow, LogFactorial};

/// Exact Franck-Condon table; entry `(n, m)` is `f_{m→n}`, with sign.
#[derive(Debug, Clone)]
pub struct FcTable {
    pub n_spins: usize,
    pub theta: f64,
    pub factors: DMatrix<f64>,
    pub method: WignerMethod,
}

impl FcTable {
    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    /// `f_{m→n}`.
    pub fn factor(&self, m: usize, n: usize) -> f64 {
        self.factors[(n, m)]
    }

    /// Final level with the largest `|f_{m→n}|`.
    pub fn argmax_from(&self, m: usize) -> usize {
        let col = self.factors.column(m);
        let mut best = 0;
        for n in 1..col.len() {
            if col[n].abs() > col[best].abs() {
                best = n;
            }
        }
        best
    }

    /// `max_m |Σ_n f_{m→n}² - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors
            .column_iter()
            .map(|c| (c.norm_squared() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn fc_table(params: &ModelParams) -> Result<FcTable> {
    params.validate()?;
    let theta = params.rotation_angle();
    let d = wigner_d(params.n_spins, theta)?;
    Ok(FcTable {
        n_spins: params.n_spins,
        theta,
        factors: d.elements,
        method: d.method,
    })
}

/// `f_{0→n} = √C(N,n) (cos θ/2)^{N-n} (-sin θ/2)^n` for all `n`.
///
/// Not limited by the table size cap, so it also serves large-`N` limits.
pub fn ground_column_closed_form(n_spins: usize, theta: f64) -> Vec<f64> {
    let lf = LogFactorial::new(n_spins);
    let c = (theta / 2.0).cos();
    let s = -(theta / 2.0).sin();
    (0..=n_spins)
        .map(|n| {
            let (sc, lc) = signed_ln_pow(c, n_spins - n);
            let (ss, ls) = signed_ln_pow(s, n);
            sc * ss * (0.5 * lf.ln_binomial(n_spins, n) + lc + ls).exp()
        })
        .collect()
}

/// Displaced-oscillator quantities of the low-excitation limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpFcParams {
    /// `|ξ| = √N A / (2 ω_nu)`.
    pub displacement_magnitude: f64,
    /// Poisson intensity `|ξ|²`.
    pub lambda: f64,
    /// `δx = √2 |ξ|`.
    pub delta_x: f64,
}

impl HpFcParams {
    pub fn from_params(params: &ModelParams) -> Result<Self> {
        check_spins(params.n_spins)?;
        let xi = (params.n_spins as f64).sqrt() * params.hyperfine / (2.0 * params.omega_nu);
        Ok(Self::from_displacement(xi.abs()))
    }

    pub fn from_displacement(xi: f64) -> Self {
        Self {
            displacement_magnitude: xi,
            lambda: xi * xi,
            delta_x: std::f64::consts::SQRT_2 * xi,
        }
    }

    pub fn from_lambda(lambda: f64) -> Self {
        Self::from_displacement(lambda.max(0.0).sqrt())
    }
}

/// Displaced-Fock overlap `⟨ξ₁,n|ξ₀,m⟩ = ⟨n|D(ξ)|m⟩` with real `ξ = |ξ|`.
///
/// For `n < m` the lower Laguerre index is `n` and the sign picks up
/// `(-1)^{m-n}`, so the Laguerre upper index never goes negative.
pub fn hp_fc_factor(hp: &HpFcParams, m: usize, n: usize) -> f64 {
    let xi = hp.displacement_magnitude;
    let lambda = hp.lambda;
    let (lo, hi, sign_base) = if n >= m { (m, n, xi) } else { (n, m, -xi) };
    let gap = hi - lo;
    let lf = LogFactorial::new(hi);
    let (sign, ln_pow) = signed_ln_pow(sign_base, gap);
    if ln_pow == f64::NEG_INFINITY {
        return 0.0;
    }
    let ln_prefactor = -0.5 * lambda + 0.5 * (lf.get(lo) - lf.get(hi)) + ln_pow;
    sign * ln_prefactor.exp() * laguerre(lo, gap as f64, lambda)
}

/// Most-favored final level, possibly tied with the level below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FavoredLevel {
    pub level: usize,
    /// `Some(level - 1)` when the two adjacent levels are equally favored.
    pub tie: Option<usize>,
}

impl FavoredLevel {
    fn from_boundary(x: f64, cap: usize) -> Self {
        let nearest = x.round();
        if nearest >= 1.0 && (x - nearest).abs() <= 1e-9 * x.max(1.0) {
            let level = (nearest as usize).min(cap);
            return Self {
                level,
                tie: Some(level - 1),
            };
        }
        Self {
            level: (x.floor().max(0.0) as usize).min(cap),
            tie: None,
        }
    }

    pub fn contains(&self, n: usize) -> bool {
        self.level == n || self.tie == Some(n)
    }
}

/// Favored level from `n_mf ≤ (N+1)(1 - cos θ)/2 ≤ n_mf + 1`, i.e. the
/// mode of the binomial law `|f_{0→n}|²`.
pub fn favored_level_exact(params: &ModelParams) -> FavoredLevel {
    let theta = params.rotation_angle();
    let x = (params.n_spins as f64 + 1.0) * (1.0 - theta.cos()) / 2.0;
    FavoredLevel::from_boundary(x, params.n_spins)
}

/// Favored level of the bosonic limit: the mode of `Poisson(λ)`, where
/// `λ = (δx)²/2`.
pub fn favored_level_hp(hp: &HpFcParams) -> FavoredLevel {
    FavoredLevel::from_boundary(hp.lambda, usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, a: f64) -> ModelParams {
        ModelParams::nv_default().with_spins(n).with_hyperfine(a)
    }

    #[test]
    fn vanishing_coupling_gives_identity() {
        let t = fc_table(&params(20, 1e-12)).unwrap();
        let id = DMatrix::<f64>::identity(21, 21);
        assert!((&t.factors - id).amax() < 1e-10);
        let t = fc_table(&params(20, 0.0)).unwrap();
        assert_eq!(t.factors, DMatrix::<f64>::identity(21, 21));
    }

    #[test]
    fn weak_coupling_ground_column() {
        let t = fc_table(&params(50, 0.2)).unwrap();
        let f0 = t.factor(0, 0).abs();
        let f1 = t.factor(0, 1).abs();
        assert!((f0 - 0.78354).abs() < 1e-5);
        let ratio = 50f64.sqrt() * (t.theta / 2.0).tan();
        assert!((f1 / f0 - ratio).abs() < 1e-12);
        assert!((ratio - 0.7002).abs() < 1e-4);
        assert_eq!(t.argmax_from(0), 0);
    }

    #[test]
    fn closed_form_matches_table() {
        for a in [0.2, 2.0] {
            let p = params(50, a);
            let t = fc_table(&p).unwrap();
            let cf = ground_column_closed_form(50, p.rotation_angle());
            for (n, v) in cf.iter().enumerate() {
                assert!((t.factor(0, n) - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn columns_are_normalized() {
        for a in [0.2, 2.0] {
            let t = fc_table(&params(100, a)).unwrap();
            assert!(t.unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn zero_displacement_is_kronecker() {
        let hp = HpFcParams::from_lambda(0.0);
        for m in 0..5 {
            for n in 0..5 {
                let v = hp_fc_factor(&hp, m, n);
                assert_eq!(v, if m == n { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn ground_row_is_poisson() {
        let hp = HpFcParams::from_lambda(1.7);
        let mut fact = 1.0;
        for n in 0..12 {
            if n > 0 {
                fact *= n as f64;
            }
            let poisson = (-1.7f64).exp() * 1.7f64.powi(n as i32) / fact;
            assert!((hp_fc_factor(&hp, 0, n).powi(2) - poisson).abs() < 1e-14);
        }
    }

    #[test]
    fn hp_ground_overlap_half_lambda() {
        let hp = HpFcParams::from_params(&params(50, 0.2)).unwrap();
        assert!((hp.lambda - 0.5).abs() < 1e-14);
        assert!((hp.delta_x - 1.0).abs() < 1e-14);
        let v = hp_fc_factor(&hp, 0, 0);
        assert!((v - (-0.25f64).exp()).abs() < 1e-15);
        assert!((v - 0.7788).abs() < 1e-4);
    }

    #[test]
    fn hp_overlaps_form_orthonormal_matrix() {
        // Truncated displacement operator: rows/columns well inside the
        // cutoff are orthonormal.
        let hp = HpFcParams::from_lambda(2.0);
        let dim = 60;
        let d = DMatrix::from_fn(dim, dim, |n, m| hp_fc_factor(&hp, m, n));
        let gram = d.transpose() * &d;
        for i in 0..10 {
            for j in 0..10 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - target).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hp_swap_symmetry() {
        let hp = HpFcParams::from_lambda(0.9);
        for m in 0..6 {
            for n in 0..6 {
                let a = hp_fc_factor(&hp, m, n);
                let b = hp_fc_factor(&hp, n, m);
                assert!((a.abs() - b.abs()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn favored_levels() {
        assert_eq!(favored_level_exact(&params(50, 0.2)).level, 0);
        assert_eq!(favored_level_exact(&params(50, 2.0)).level, 14);
        assert_eq!(favored_level_exact(&params(50, 1e-9)).level, 0);
        assert_eq!(favored_level_hp(&HpFcParams::from_lambda(0.5)).level, 0);
        assert_eq!(
            favored_level_hp(&HpFcParams::from_params(&params(50, 1.0)).unwrap()).level,
            12
        );
        assert_eq!(favored_level_hp(&HpFcParams::from_lambda(0.0)).level, 0);
    }

    #[test]
    fn integer_boundary_is_a_tie() {
        let f = favored_level_hp(&HpFcParams::from_lambda(3.0));
        assert_eq!(
            f,
            FavoredLevel {
                level: 3,
                tie: Some(2)
            }
        );
        assert!(f.contains(2) && f.contains(3) && !f.contains(4));
        // (N+1) sin²(θ/2) = 1 with N = 3: sin²(θ/2) = 1/4, θ = π/3.
        let a = (std::f64::consts::PI / 3.0).tan();
        let f = favored_level_exact(&params(3, a));
        assert_eq!(f.level, 1);
        assert_eq!(f.tie, Some(0));
        let t = fc_table(&params(3, a)).unwrap();
        assert!((t.factor(0, 0).abs() - t.factor(0, 1).abs()).abs() < 1e-12);
    }
}
