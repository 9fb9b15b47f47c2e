//! Gaussian entanglement of squeezed light in the coupler.
//!
//! Covariance matrices use the quadrature ordering `(x1, p1, x2, p2)` with
//! `x = (a + a^dagger)/sqrt 2` and `p = (a - a^dagger)/(i sqrt 2)`, so the vacuum
//! is `diag(1/2, 1/2, 1/2, 1/2)`. Lossy scenarios damp every second moment
//! towards the vacuum as `exp(-2 gamma t)` with `gamma t = loss_ratio * tau`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::negativity::LogBase;
use crate::{Error, Result};

/// Tolerance for the discriminant and physicality checks.
pub const SPECTRUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let skew = (m - m.transpose()).amax();
        if skew > 1e-12 {
            return Err(Error::Structure(format!(
                "covariance matrix is not symmetric (deviation {skew:e})"
            )));
        }
        Ok(Self((m + m.transpose()) * 0.5))
    }

    pub fn vacuum() -> Self {
        Self(Matrix4::identity() * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Local blocks `alpha` (mode a), `beta` (mode b) and the correlation block `mu`.
    pub fn blocks(&self) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
        let m = &self.0;
        (
            m.fixed_view::<2, 2>(0, 0).into_owned(),
            m.fixed_view::<2, 2>(2, 2).into_owned(),
            m.fixed_view::<2, 2>(0, 2).into_owned(),
        )
    }

    /// Symplectic eigenvalues of the state itself.
    pub fn state_symplectic_eigenvalues(&self) -> Result<SymplecticPair> {
        williamson_pair(&self.0)
    }

    /// Partial transpose on mode `b`: `p2 -> -p2`.
    pub fn partial_transpose(&self) -> CovarianceMatrix {
        let flip = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
        CovarianceMatrix(flip * self.0 * flip)
    }

    /// `(det alpha + det beta - 2 det mu, det sigma)`, the two symplectic
    /// invariants of the partially transposed matrix.
    pub fn ppt_invariants(&self) -> (f64, f64) {
        let (alpha, beta, mu) = self.blocks();
        (
            alpha.determinant() + beta.determinant() - 2.0 * mu.determinant(),
            self.0.determinant(),
        )
    }

    /// Uncertainty principle: both state symplectic eigenvalues at least 1/2.
    pub fn is_physical(&self) -> bool {
        self.0.symmetric_eigenvalues().min() > 0.0
            && self
                .state_symplectic_eigenvalues()
                .map(|p| p.min() >= 0.5 - SPECTRUM_TOL)
                .unwrap_or(false)
    }
}

/// `nu_plus >= nu_minus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticPair {
    pub plus: f64,
    pub minus: f64,
}

impl SymplecticPair {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            plus: a.max(b),
            minus: a.min(b),
        }
    }

    pub fn min(&self) -> f64 {
        self.minus
    }
}

/// `nu^2 = (delta +- sqrt(delta^2 - 4 det)) / 2` from the symplectic invariants.
///
/// Exact in real arithmetic, but the square root of the discriminant costs
/// about half the significant digits when the two eigenvalues nearly coincide
/// (for instance at every separability point of the lossless scenarios).
pub fn symplectic_from_invariants(delta: f64, det: f64) -> Result<SymplecticPair> {
    let disc = delta * delta - 4.0 * det;
    if disc < -SPECTRUM_TOL {
        return Err(Error::Unphysical(format!(
            "negative discriminant {disc:e} in symplectic spectrum"
        )));
    }
    let root = disc.max(0.0).sqrt();
    let hi = 0.5 * (delta + root);
    let lo = 0.5 * (delta - root);
    if lo < -SPECTRUM_TOL {
        return Err(Error::Unphysical(format!(
            "negative squared symplectic eigenvalue {lo:e}"
        )));
    }
    Ok(SymplecticPair::new(hi.max(0.0).sqrt(), lo.max(0.0).sqrt()))
}

/// Symplectic spectrum of a positive-definite matrix: with `S = m^(1/2)` and
/// `K = S Omega S` (antisymmetric), the eigenvalues of `K^T K` are the squared
/// symplectic eigenvalues, each twice. Symmetric eigensolvers keep these
/// accurate to rounding even when the two values are degenerate.
fn williamson_pair(m: &Matrix4<f64>) -> Result<SymplecticPair> {
    let eig = m.symmetric_eigen();
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::Unphysical(format!(
            "matrix is not positive definite (eigenvalue {:e})",
            eig.eigenvalues.min()
        )));
    }
    let root = eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let omega = Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    );
    let k = root * omega * root;
    let mut squares: Vec<f64> = (k.transpose() * k)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    squares.sort_by(f64::total_cmp);
    Ok(SymplecticPair::new(
        squares[3].max(0.0).sqrt(),
        squares[0].max(0.0).sqrt(),
    ))
}

/// Symplectic eigenvalues of the partially transposed state.
///
/// The invariants `det alpha + det beta - 2 det mu` and `det sigma` are checked
/// for a non-negative discriminant (an unphysical input otherwise); the values
/// themselves come from the Williamson decomposition of the transposed matrix.
pub fn ppt_symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<SymplecticPair> {
    let (delta, det) = sigma.ppt_invariants();
    symplectic_from_invariants(delta, det)?;
    williamson_pair(&sigma.partial_transpose().0)
}

/// `E_N = max(0, -log(2 nu_min))` of the partially transposed state.
pub fn log_negativity_gaussian(sigma: &CovarianceMatrix, base: LogBase) -> Result<f64> {
    log_negativity_from_nu(ppt_symplectic_eigenvalues(sigma)?.min(), base)
}

pub fn log_negativity_from_nu(nu_min: f64, base: LogBase) -> Result<f64> {
    if !(nu_min > 0.0) {
        return Err(Error::Unphysical(format!(
            "smallest symplectic eigenvalue {nu_min:e} is not positive"
        )));
    }
    Ok((-base.log(2.0 * nu_min)).max(0.0))
}

/// Which of the two lossy separable-input formulas to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FormulaMode {
    /// `c' = 1/2 + E sinh^2 r + (E/2) sinh 2r cos 2tau`; reduces to the
    /// lossless result at zero loss.
    #[default]
    Consistent,
    /// `c' = (1 + E sinh^2 r + E sinh 2r cos 2tau) / 2`, kept for comparison.
    /// Not physical for `r` above about 0.55.
    PaperExact,
}

impl fmt::Display for FormulaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaMode::Consistent => "consistent",
            FormulaMode::PaperExact => "paper-exact",
        })
    }
}

impl FromStr for FormulaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "consistent" => Ok(FormulaMode::Consistent),
            "paper-exact" => Ok(FormulaMode::PaperExact),
            other => Err(Error::Domain(format!("unknown formula mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaussianScenario {
    SeparableLossless,
    EntangledLossless,
    SeparableLossy,
    EntangledLossy,
}

impl FromStr for GaussianScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "sep-lossless" => Ok(Self::SeparableLossless),
            "ent-lossless" => Ok(Self::EntangledLossless),
            "sep-lossy" => Ok(Self::SeparableLossy),
            "ent-lossy" => Ok(Self::EntangledLossy),
            other => Err(Error::Domain(format!(
                "unknown Gaussian scenario `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianScenarioParams {
    pub r: f64,
    pub tau: f64,
    pub loss_ratio: f64,
    pub formula_mode: FormulaMode,
}

impl GaussianScenarioParams {
    pub fn lossless(r: f64, tau: f64) -> Self {
        Self {
            r,
            tau,
            loss_ratio: 0.0,
            formula_mode: FormulaMode::Consistent,
        }
    }

    pub fn lossy(r: f64, tau: f64, loss_ratio: f64) -> Self {
        Self {
            r,
            tau,
            loss_ratio,
            formula_mode: FormulaMode::Consistent,
        }
    }
}

fn damping(tau: f64, loss_ratio: f64) -> Result<f64> {
    if !(loss_ratio >= 0.0) || !loss_ratio.is_finite() {
        return Err(Error::Domain(format!(
            "loss ratio {loss_ratio} must be finite and >= 0"
        )));
    }
    Ok((-2.0 * loss_ratio * tau).exp())
}

/// `[[c,0,0,e],[0,d,e,0],[0,e,c,0],[e,0,0,d]]`.
fn separable_layout(c: f64, d: f64, e: f64) -> CovarianceMatrix {
    CovarianceMatrix(Matrix4::new(
        c, 0.0, 0.0, e, //
        0.0, d, e, 0.0, //
        0.0, e, c, 0.0, //
        e, 0.0, 0.0, d,
    ))
}

/// `[[f,g,h,0],[g,f,0,-h],[h,0,f,g],[0,-h,g,f]]`.
fn entangled_layout(f: f64, g: f64, h: f64) -> CovarianceMatrix {
    CovarianceMatrix(Matrix4::new(
        f, g, h, 0.0, //
        g, f, 0.0, -h, //
        h, 0.0, f, g, //
        0.0, -h, g, f,
    ))
}

fn separable_entries(r: f64, tau: f64) -> (f64, f64, f64) {
    let (ch, sh) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let (s2, c2) = (2.0 * tau).sin_cos();
    (0.5 * (ch + sh * c2), 0.5 * (ch - sh * c2), -0.5 * sh * s2)
}

fn separable_lossy_entries(
    r: f64,
    tau: f64,
    loss_ratio: f64,
    mode: FormulaMode,
) -> Result<(f64, f64, f64)> {
    let damp = damping(tau, loss_ratio)?;
    let sinh2 = r.sinh().powi(2);
    let sh = (2.0 * r).sinh();
    let (s2, c2) = (2.0 * tau).sin_cos();
    let e = -0.5 * damp * sh * s2;
    Ok(match mode {
        FormulaMode::Consistent => {
            let base = 0.5 + damp * sinh2;
            (base + 0.5 * damp * sh * c2, base - 0.5 * damp * sh * c2, e)
        }
        FormulaMode::PaperExact => {
            let base = 1.0 + damp * sinh2;
            (
                0.5 * (base + damp * sh * c2),
                0.5 * (base - damp * sh * c2),
                e,
            )
        }
    })
}

fn entangled_lossy_entries(r: f64, tau: f64, loss_ratio: f64) -> Result<(f64, f64, f64)> {
    let damp = damping(tau, loss_ratio)?;
    let sh = (2.0 * r).sinh();
    let (s2, c2) = (2.0 * tau).sin_cos();
    Ok((
        0.5 + damp * r.sinh().powi(2),
        -0.5 * damp * sh * s2,
        0.5 * damp * sh * c2,
    ))
}

/// Product of single-mode squeezed vacua after coupling phase `tau`, no loss.
pub fn cov_separable_squeezed(r: f64, tau: f64) -> CovarianceMatrix {
    let (c, d, e) = separable_entries(r, tau);
    separable_layout(c, d, e)
}

/// Two-mode squeezed vacuum after coupling phase `tau`, no loss.
pub fn cov_entangled_squeezed(r: f64, tau: f64) -> CovarianceMatrix {
    let sh = (2.0 * r).sinh();
    let (s2, c2) = (2.0 * tau).sin_cos();
    entangled_layout(0.5 * (2.0 * r).cosh(), -0.5 * sh * s2, 0.5 * sh * c2)
}

pub fn cov_separable_squeezed_lossy(
    r: f64,
    tau: f64,
    loss_ratio: f64,
    mode: FormulaMode,
) -> Result<CovarianceMatrix> {
    let (c, d, e) = separable_lossy_entries(r, tau, loss_ratio, mode)?;
    Ok(separable_layout(c, d, e))
}

pub fn cov_entangled_squeezed_lossy(r: f64, tau: f64, loss_ratio: f64) -> Result<CovarianceMatrix> {
    let (f, g, h) = entangled_lossy_entries(r, tau, loss_ratio)?;
    Ok(entangled_layout(f, g, h))
}

/// Covariance matrix of a scenario; the lossless variants ignore `loss_ratio`.
pub fn scenario_covariance(
    scenario: GaussianScenario,
    p: &GaussianScenarioParams,
) -> Result<CovarianceMatrix> {
    match scenario {
        GaussianScenario::SeparableLossless => Ok(cov_separable_squeezed(p.r, p.tau)),
        GaussianScenario::EntangledLossless => Ok(cov_entangled_squeezed(p.r, p.tau)),
        GaussianScenario::SeparableLossy => {
            cov_separable_squeezed_lossy(p.r, p.tau, p.loss_ratio, p.formula_mode)
        }
        GaussianScenario::EntangledLossy => cov_entangled_squeezed_lossy(p.r, p.tau, p.loss_ratio),
    }
}

fn sqrt_checked(x: f64) -> Result<f64> {
    if x < -SPECTRUM_TOL {
        return Err(Error::Unphysical(format!(
            "closed form needs sqrt of {x:e}"
        )));
    }
    Ok(x.max(0.0).sqrt())
}

/// Per-scenario closed forms for the partially transposed symplectic pair:
///
/// * separable: `sqrt(c d) +- e` (lossless and lossy entries alike);
/// * entangled, lossless: `sqrt((f+g)(f-g)) +- h`;
/// * entangled, lossy: `sqrt(m+ m-) / 2 +- h'` with
///   `m+- = 1 - E [1 - (cosh 2r +- sinh 2r sin 2tau)]`, since `f' -+ g' = m+- / 2`.
pub fn closed_form_nu(
    scenario: GaussianScenario,
    p: &GaussianScenarioParams,
) -> Result<SymplecticPair> {
    let (root, shift) = match scenario {
        GaussianScenario::SeparableLossless => {
            let (c, d, e) = separable_entries(p.r, p.tau);
            (sqrt_checked(c * d)?, e)
        }
        GaussianScenario::SeparableLossy => {
            let (c, d, e) = separable_lossy_entries(p.r, p.tau, p.loss_ratio, p.formula_mode)?;
            (sqrt_checked(c * d)?, e)
        }
        GaussianScenario::EntangledLossless => {
            let sh = (2.0 * p.r).sinh();
            let (s2, c2) = (2.0 * p.tau).sin_cos();
            let (f, g, h) = (0.5 * (2.0 * p.r).cosh(), -0.5 * sh * s2, 0.5 * sh * c2);
            (sqrt_checked((f + g) * (f - g))?, h)
        }
        GaussianScenario::EntangledLossy => {
            let damp = damping(p.tau, p.loss_ratio)?;
            let (ch, sh) = ((2.0 * p.r).cosh(), (2.0 * p.r).sinh());
            let (s2, c2) = (2.0 * p.tau).sin_cos();
            let m_plus = 1.0 - damp * (1.0 - (ch + sh * s2));
            let m_minus = 1.0 - damp * (1.0 - (ch - sh * s2));
            (0.5 * sqrt_checked(m_plus * m_minus)?, 0.5 * damp * sh * c2)
        }
    };
    Ok(SymplecticPair::new(root + shift, root - shift))
}
