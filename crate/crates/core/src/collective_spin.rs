//! Symmetric (Dicke) subspace of `N` spin-1/2 environment spins.
//!
//! States are labelled by the excitation number `m = 0..=N`; `|m⟩` has
//! `J_z` eigenvalue `m - N/2`. Rotations follow `R_y(θ) = exp(-iθJ_y)`, so
//! `|θ, m⟩ = R_y(θ)|m⟩ = Σ_l d_{l,m}(θ) |l⟩`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{signed_ln_pow, LogFactorial};

/// Largest supported environment size.
pub const MAX_SPINS: usize = 400;

/// Largest environment accepted by [`rotation_oracle`].
pub const ORACLE_MAX_SPINS: usize = 30;

/// Largest term magnitude tolerated in the explicit d-matrix sum before
/// switching to the spin-addition recursion. Cancellation in the
/// alternating sum costs roughly `max_term * f64::EPSILON` absolute error.
pub const EXPLICIT_SUM_MAX_TERM: f64 = 1e3;

pub(crate) fn check_spins(n_spins: usize) -> Result<()> {
    if n_spins == 0 || n_spins > MAX_SPINS {
        return Err(Error::SpinCount {
            n: n_spins,
            max: MAX_SPINS,
        });
    }
    Ok(())
}

/// The `J = N/2` subspace, dimension `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeBasis {
    n_spins: usize,
}

impl DickeBasis {
    pub fn new(n_spins: usize) -> Result<Self> {
        check_spins(n_spins)?;
        Ok(Self { n_spins })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.n_spins + 1
    }

    /// Total angular momentum quantum number `J = N/2`.
    pub fn j(&self) -> f64 {
        self.n_spins as f64 / 2.0
    }

    /// `J_z` eigenvalue of `|m⟩`.
    pub fn jz_eigenvalue(&self, m: usize) -> f64 {
        m as f64 - self.j()
    }

    pub(crate) fn check_index(&self, m: usize) -> Result<()> {
        if m > self.n_spins {
            return Err(Error::IndexOutOfRange {
                what: "excitation",
                index: m,
                max: self.n_spins,
            });
        }
        Ok(())
    }

    /// Unit vector on `|m⟩`.
    pub fn state(&self, m: usize) -> Result<DVector<f64>> {
        self.check_index(m)?;
        let mut v = DVector::zeros(self.dim());
        v[m] = 1.0;
        Ok(v)
    }
}

/// Collective operators as dense matrices over a [`DickeBasis`].
#[derive(Debug, Clone)]
pub struct CollectiveOperators {
    pub j_plus: DMatrix<Complex64>,
    pub j_minus: DMatrix<Complex64>,
    pub j_x: DMatrix<Complex64>,
    pub j_y: DMatrix<Complex64>,
    pub j_z: DMatrix<Complex64>,
    pub j_squared_eigenvalue: f64,
}

impl CollectiveOperators {
    pub fn new(basis: &DickeBasis) -> Self {
        let n = basis.n_spins();
        let dim = basis.dim();
        let mut j_plus = DMatrix::<Complex64>::zeros(dim, dim);
        let mut j_minus = DMatrix::<Complex64>::zeros(dim, dim);
        let mut j_z = DMatrix::<Complex64>::zeros(dim, dim);
        for m in 0..dim {
            j_z[(m, m)] = Complex64::new(basis.jz_eigenvalue(m), 0.0);
            if m < n {
                // ⟨m+1|J_+|m⟩
                j_plus[(m + 1, m)] = Complex64::new((((n - m) * (m + 1)) as f64).sqrt(), 0.0);
            }
            if m > 0 {
                // ⟨m-1|J_-|m⟩
                j_minus[(m - 1, m)] = Complex64::new(((m * (n - m + 1)) as f64).sqrt(), 0.0);
            }
        }
        let j_x = (&j_plus + &j_minus).scale(0.5);
        let j_y = (&j_plus - &j_minus) * Complex64::new(0.0, -0.5);
        let j = basis.j();
        Self {
            j_plus,
            j_minus,
            j_x,
            j_y,
            j_z,
            j_squared_eigenvalue: j * (j + 1.0),
        }
    }

    /// `J_x` as a real symmetric matrix.
    pub fn j_x_real(&self) -> DMatrix<f64> {
        self.j_x.map(|c| c.re)
    }

    /// `J_z` as a real diagonal matrix.
    pub fn j_z_real(&self) -> DMatrix<f64> {
        self.j_z.map(|c| c.re)
    }

    /// `i J_y`, which is real and antisymmetric in this basis.
    pub fn i_j_y_real(&self) -> DMatrix<f64> {
        self.j_y.map(|c| -c.im)
    }
}

/// Build the Dicke basis and its collective operators.
pub fn build_basis(n_spins: usize) -> Result<(DickeBasis, CollectiveOperators)> {
    let basis = DickeBasis::new(n_spins)?;
    let ops = CollectiveOperators::new(&basis);
    Ok((basis, ops))
}

/// How a [`WignerDMatrix`] was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WignerMethod {
    /// Closed-form alternating sum over `k`, each term in log-space.
    ExplicitSum,
    /// Build `d^{N/2}` from `d^{(N-1)/2}` by coupling one more spin-1/2.
    SpinAddition,
}

/// Wigner small-d matrix `d^{N/2}(θ)`; entry `(l, m) = ⟨l|R_y(θ)|m⟩`.
#[derive(Debug, Clone)]
pub struct WignerDMatrix {
    pub angle: f64,
    pub n_spins: usize,
    pub elements: DMatrix<f64>,
    pub method: WignerMethod,
}

impl WignerDMatrix {
    pub fn get(&self, l: usize, m: usize) -> f64 {
        self.elements[(l, m)]
    }

    pub fn column(&self, m: usize) -> DVector<f64> {
        self.elements.column(m).into_owned()
    }

    /// `max |dᵀd - 1|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let dim = self.elements.nrows();
        let gram = self.elements.transpose() * &self.elements;
        (gram - DMatrix::<f64>::identity(dim, dim)).amax()
    }
}

/// Wigner small-d matrix for `N` spins at `angle`.
///
/// Uses the explicit sum when its largest term stays below
/// [`EXPLICIT_SUM_MAX_TERM`]; otherwise the alternating sum would lose
/// too many digits and the spin-addition recursion is used instead.
pub fn wigner_d(n_spins: usize, angle: f64) -> Result<WignerDMatrix> {
    check_spins(n_spins)?;
    check_angle(angle)?;
    if angle == 0.0 {
        let dim = n_spins + 1;
        return Ok(WignerDMatrix {
            angle,
            n_spins,
            elements: DMatrix::identity(dim, dim),
            method: WignerMethod::ExplicitSum,
        });
    }
    let (elements, max_term) = explicit_sum(n_spins, angle);
    if max_term <= EXPLICIT_SUM_MAX_TERM {
        return Ok(WignerDMatrix {
            angle,
            n_spins,
            elements,
            method: WignerMethod::ExplicitSum,
        });
    }
    Ok(WignerDMatrix {
        angle,
        n_spins,
        elements: spin_addition(n_spins, angle),
        method: WignerMethod::SpinAddition,
    })
}

/// Wigner small-d matrix forced through one evaluation route.
pub fn wigner_d_with(n_spins: usize, angle: f64, method: WignerMethod) -> Result<WignerDMatrix> {
    check_spins(n_spins)?;
    check_angle(angle)?;
    let elements = match method {
        WignerMethod::ExplicitSum => explicit_sum(n_spins, angle).0,
        WignerMethod::SpinAddition => spin_addition(n_spins, angle),
    };
    Ok(WignerDMatrix {
        angle,
        n_spins,
        elements,
        method,
    })
}

fn check_angle(angle: f64) -> Result<()> {
    if !angle.is_finite() {
        return Err(Error::InvalidParameter {
            name: "angle",
            reason: format!("{angle} is not finite"),
        });
    }
    Ok(())
}

/// Returns the matrix and the largest single-term magnitude seen.
fn explicit_sum(n: usize, angle: f64) -> (DMatrix<f64>, f64) {
    let lf = LogFactorial::new(n);
    let c = (angle / 2.0).cos();
    let s = -(angle / 2.0).sin();
    let dim = n + 1;
    let mut d = DMatrix::<f64>::zeros(dim, dim);
    let mut max_ln_term = f64::NEG_INFINITY;
    for m in 0..dim {
        for l in 0..dim {
            let ln_pre = 0.5 * (lf.get(m) + lf.get(n - m) + lf.get(l) + lf.get(n - l));
            let k_min = m.saturating_sub(l);
            let k_max = (n - l).min(m);
            let mut sum = 0.0;
            for k in k_min..=k_max {
                let (sc, lc) = signed_ln_pow(c, n + m - l - 2 * k);
                let (ss, ls) = signed_ln_pow(s, l + 2 * k - m);
                if lc == f64::NEG_INFINITY || ls == f64::NEG_INFINITY {
                    continue;
                }
                let ln_mag = ln_pre + lc + ls
                    - lf.get(n - l - k)
                    - lf.get(m - k)
                    - lf.get(k + l - m)
                    - lf.get(k);
                max_ln_term = max_ln_term.max(ln_mag);
                let sign = if k % 2 == 1 { -sc * ss } else { sc * ss };
                sum += sign * ln_mag.exp();
            }
            d[(l, m)] = sum;
        }
    }
    (d, max_ln_term.exp())
}

/// `d^{N/2}` by repeatedly adding a spin-1/2 to the symmetric subspace:
/// `|N;l⟩ = √((N-l)/N)|N-1;l⟩|↓⟩ + √(l/N)|N-1;l-1⟩|↑⟩`.
fn spin_addition(n: usize, angle: f64) -> DMatrix<f64> {
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    let mut d = DMatrix::<f64>::from_element(1, 1, 1.0);
    for size in 1..=n {
        let prev = d;
        let mut next = DMatrix::<f64>::zeros(size + 1, size + 1);
        let nf = size as f64;
        for m in 0..=size {
            for l in 0..=size {
                let mut acc = 0.0;
                if l < size && m < size {
                    acc += (((size - l) * (size - m)) as f64).sqrt() * c * prev[(l, m)];
                }
                if l < size && m > 0 {
                    acc += (((size - l) * m) as f64).sqrt() * s * prev[(l, m - 1)];
                }
                if l > 0 && m < size {
                    acc -= ((l * (size - m)) as f64).sqrt() * s * prev[(l - 1, m)];
                }
                if l > 0 && m > 0 {
                    acc += ((l * m) as f64).sqrt() * c * prev[(l - 1, m - 1)];
                }
                next[(l, m)] = acc / nf;
            }
        }
        d = next;
    }
    d
}

/// Rotated Dicke state `|θ, m⟩`, coefficients in the `|l⟩` basis.
#[derive(Debug, Clone)]
pub struct RotatedDickeState {
    pub angle: f64,
    pub m: usize,
    pub coefficients: DVector<f64>,
}

impl RotatedDickeState {
    pub fn norm(&self) -> f64 {
        self.coefficients.norm()
    }
}

pub fn rotate_dicke(basis: &DickeBasis, angle: f64, m: usize) -> Result<RotatedDickeState> {
    basis.check_index(m)?;
    let d = wigner_d(basis.n_spins(), angle)?;
    Ok(RotatedDickeState {
        angle,
        m,
        coefficients: d.column(m),
    })
}

/// `exp(-iθJ_y)` from the Hermitian eigendecomposition of `J_y`.
///
/// Independent of [`wigner_d`]; meant for cross-checks at small `N`.
pub fn rotation_oracle(basis: &DickeBasis, angle: f64) -> Result<DMatrix<f64>> {
    if basis.n_spins() > ORACLE_MAX_SPINS {
        return Err(Error::SpinCount {
            n: basis.n_spins(),
            max: ORACLE_MAX_SPINS,
        });
    }
    check_angle(angle)?;
    let ops = CollectiveOperators::new(basis);
    let eig = SymmetricEigen::new(ops.j_y.clone());
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|lambda| Complex64::from_polar(1.0, -angle * lambda)),
    );
    let v = &eig.eigenvectors;
    let rotation = v * phases * v.adjoint();
    let max_imag = rotation.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    if max_imag > 1e-10 {
        return Err(Error::NotReal(max_imag));
    }
    Ok(rotation.map(|z| z.re))
}
