//! Logarithmic negativity of two-mode states in the Fock basis.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::analytic::{noon_coefficients, one_one_coefficients};
use crate::fock::{DensityOperator, ModeCutoff};
use crate::{linalg, Error, Result, C64};

/// Partial-transpose eigenvalues closer to zero than this are treated as zero.
pub const EIGEN_CLAMP: f64 = 1e-12;

/// Logarithm base for entanglement values. Fock-state results default to
/// bits, Gaussian results to nats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }

    /// Re-expresses a logarithm taken in `self` in base `to`.
    pub fn convert(self, value: f64, to: LogBase) -> f64 {
        match (self, to) {
            (LogBase::Two, LogBase::E) => value * std::f64::consts::LN_2,
            (LogBase::E, LogBase::Two) => value / std::f64::consts::LN_2,
            _ => value,
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(Error::Domain(format!(
                "log base must be `2` or `e`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    /// `E_N = log(1 + 2 N)`.
    pub log_negativity: f64,
    /// `N`: magnitude of the sum of negative partial-transpose eigenvalues.
    pub negativity: f64,
    pub base: LogBase,
}

/// Transpose on mode `b`:
/// `<n_a, n_b| rho^T |m_a, m_b> = <n_a, m_b| rho |m_a, n_b>`.
pub fn partial_transpose_matrix(m: &DMatrix<C64>, cutoff: ModeCutoff) -> Result<DMatrix<C64>> {
    let d = cutoff.dim();
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::Structure(format!(
            "matrix is {}x{}, two-mode basis with n_max = {} has dimension {d}",
            m.nrows(),
            m.ncols(),
            cutoff.n_max()
        )));
    }
    let levels = cutoff.levels();
    Ok(DMatrix::from_fn(d, d, |row, col| {
        let (n_a, n_b) = (row / levels, row % levels);
        let (m_a, m_b) = (col / levels, col % levels);
        m[(n_a * levels + m_b, m_a * levels + n_b)]
    }))
}

pub fn partial_transpose(rho: &DensityOperator) -> DMatrix<C64> {
    partial_transpose_matrix(rho.matrix(), rho.cutoff())
        .expect("density operator shape matches its cutoff")
}

pub fn log_negativity_density(rho: &DensityOperator, base: LogBase) -> Result<NegativityResult> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-6 {
        return Err(Error::Precondition(format!(
            "density matrix trace {tr} is not 1"
        )));
    }
    let pt = linalg::hermitian_part(&partial_transpose(rho));
    let negativity: f64 = linalg::hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&l| l < -EIGEN_CLAMP)
        .fold(0.0, |acc, l| acc - l);
    Ok(NegativityResult {
        log_negativity: base.log(1.0 + 2.0 * negativity),
        negativity,
        base,
    })
}

/// `E_N` (bits) of `sum_k c_k |k, N-k>`.
///
/// The states `|k, N-k>` already form a Schmidt basis, so the trace norm of the
/// partial transpose is `(sum_k |c_k|)^2`.
pub fn log_negativity_pure_bipartite(coeffs: &[C64]) -> Result<f64> {
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "coefficients have squared norm {norm}, expected 1"
        )));
    }
    let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
    Ok((l1 * l1).log2().max(0.0))
}

/// `E_N` (bits) of `|1,1>` after coupling phase `tau`:
/// `log2(1 + 2(|alpha beta| + |alpha delta| + |delta beta|))`.
///
/// The sum runs over magnitudes of the pairwise products; this is what the
/// partial-transpose spectrum gives and reaches `log2 3` at the maximum.
pub fn one_one_logneg_analytic(tau: f64) -> f64 {
    let c = one_one_coefficients(tau);
    let pairs = (c.alpha * c.beta).norm() + (c.alpha * c.delta).norm() + (c.delta * c.beta).norm();
    (1.0 + 2.0 * pairs).log2()
}

/// `E_N` (bits) of the evolved `N`-photon NOON state,
/// `log2(1 + sum_{k != m} |beta_k| |beta_m|)` evaluated as
/// `(sum |beta_k|)^2 - sum |beta_k|^2` over ordered pairs.
pub fn noon_logneg_analytic(photons: usize, tau: f64) -> Result<f64> {
    let coeffs = noon_coefficients(photons, tau)?;
    let mags: Vec<f64> = coeffs.beta().iter().map(|b| b.norm()).collect();
    let l1: f64 = mags.iter().sum();
    let l2: f64 = mags.iter().map(|m| m * m).sum();
    Ok((1.0 + (l1 * l1 - l2).max(0.0)).log2())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    use proptest::prelude::*;

    use super::*;
    use crate::analytic::two_zero_coefficients;
    use crate::fock::{Coupler, PureState};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cut(n: usize) -> ModeCutoff {
        ModeCutoff::new(n).unwrap()
    }

    #[test]
    fn product_state_is_invariant_and_ppt() {
        let k = cut(2);
        let rho = PureState::basis(1, 0, k).unwrap().density();
        assert_eq!(partial_transpose(&rho), *rho.matrix());
        let r = log_negativity_density(&rho, LogBase::Two).unwrap();
        assert_eq!(r.log_negativity, 0.0);
        assert_eq!(r.negativity, 0.0);
    }

    #[test]
    fn noon_two_partial_transpose_spectrum() {
        let k = cut(2);
        let h = c(FRAC_1_SQRT_2, 0.0);
        let rho = PureState::from_components(&[(2, 0, h), (0, 2, h)], k)
            .unwrap()
            .density();
        let pt = partial_transpose(&rho);
        // Brute force: full 9x9 dense decomposition, no block splitting.
        let dense = nalgebra::SymmetricEigen::new(pt.clone()).eigenvalues;
        let min = dense.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((min + 0.5).abs() < 1e-12);
        let back = partial_transpose_matrix(&pt, k).unwrap();
        assert_eq!(&back, rho.matrix());
        assert!(matches!(
            partial_transpose_matrix(&DMatrix::zeros(4, 5), k),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn reference_values() {
        let k = cut(2);
        let hom = one_one_coefficients(FRAC_PI_4)
            .to_state(k)
            .unwrap()
            .density();
        let r = log_negativity_density(&hom, LogBase::Two).unwrap();
        assert!((r.log_negativity - 1.0).abs() < 1e-12);
        let third = c(1.0 / 3f64.sqrt(), 0.0);
        let psi_m = PureState::from_components(
            &[
                (2, 0, c(0.0, -1.0) * third),
                (1, 1, third),
                (0, 2, c(0.0, -1.0) * third),
            ],
            k,
        )
        .unwrap();
        let r = log_negativity_density(&psi_m.density(), LogBase::Two).unwrap();
        assert!((r.log_negativity - 3f64.log2()).abs() < 1e-12);
        let r_e = log_negativity_density(&psi_m.density(), LogBase::E).unwrap();
        assert!(
            (LogBase::E.convert(r_e.log_negativity, LogBase::Two) - r.log_negativity).abs() < 1e-12
        );
    }

    #[test]
    fn rejects_bad_trace() {
        let k = cut(1);
        let rho = DensityOperator::new(DMatrix::identity(4, 4).map(|x: C64| x * 0.25), k).unwrap();
        assert!(log_negativity_density(&rho, LogBase::Two).is_ok());
        assert!(DensityOperator::new(DMatrix::identity(4, 4), k).is_err());
    }

    #[test]
    fn pure_bipartite_formula() {
        assert_eq!(log_negativity_pure_bipartite(&[c(0.0, 1.0)]).unwrap(), 0.0);
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert!((log_negativity_pure_bipartite(&[h, h]).unwrap() - 1.0).abs() < 1e-12);
        let t = c(1.0 / 3f64.sqrt(), 0.0);
        assert!((log_negativity_pure_bipartite(&[t, t, t]).unwrap() - 3f64.log2()).abs() < 1e-12);
        assert!(matches!(
            log_negativity_pure_bipartite(&[h]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn one_one_analytic_points() {
        assert!((one_one_logneg_analytic(FRAC_PI_4) - 1.0).abs() < 1e-12);
        assert!(one_one_logneg_analytic(FRAC_PI_2).abs() < 1e-12);
        assert!((one_one_logneg_analytic(0.152 * PI) - 3f64.log2()).abs() < 1e-3);
    }

    #[test]
    fn noon_analytic_points() {
        assert!((noon_logneg_analytic(2, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(noon_logneg_analytic(2, FRAC_PI_4).unwrap().abs() < 1e-12);
        let min4 = (0..401)
            .map(|i| noon_logneg_analytic(4, PI * i as f64 / 400.0).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(min4 > 0.0);
    }

    /// Every closed form against the brute-force partial-transpose spectrum.
    #[test]
    fn analytic_agrees_with_partial_transpose() {
        let k2 = cut(2);
        let k4 = cut(4);
        let c4 = Coupler::new(k4);
        let noon4 = noon_coefficients(4, 0.0).unwrap().to_state(k4).unwrap();
        for i in 0..400 {
            let tau = PI * i as f64 / 399.0;
            let rho = one_one_coefficients(tau).to_state(k2).unwrap().density();
            let brute = log_negativity_density(&rho, LogBase::Two)
                .unwrap()
                .log_negativity;
            assert!(
                (brute - one_one_logneg_analytic(tau)).abs() < 1e-9,
                "|1,1> at {tau}"
            );

            let rho = noon_coefficients(2, tau)
                .unwrap()
                .to_state(k2)
                .unwrap()
                .density();
            let brute = log_negativity_density(&rho, LogBase::Two)
                .unwrap()
                .log_negativity;
            assert!(
                (brute - noon_logneg_analytic(2, tau).unwrap()).abs() < 1e-9,
                "NOON2 at {tau}"
            );

            let rho = c4.evolve(&noon4, tau).unwrap().density();
            let brute = log_negativity_density(&rho, LogBase::Two)
                .unwrap()
                .log_negativity;
            assert!(
                (brute - noon_logneg_analytic(4, tau).unwrap()).abs() < 1e-9,
                "NOON4 at {tau}"
            );

            let tz = two_zero_coefficients(tau);
            let rho = tz.to_state(k2).unwrap().density();
            let brute = log_negativity_density(&rho, LogBase::Two)
                .unwrap()
                .log_negativity;
            assert!(
                (brute - log_negativity_pure_bipartite(&tz.by_mode_a_count()).unwrap()).abs()
                    < 1e-9
            );
        }
    }

    #[test]
    fn two_zero_extremum_and_zeros() {
        let k = cut(2);
        let en = |tau: f64| {
            log_negativity_density(
                &two_zero_coefficients(tau).to_state(k).unwrap().density(),
                LogBase::Two,
            )
            .unwrap()
            .log_negativity
        };
        let peak = (1.5 + std::f64::consts::SQRT_2).log2();
        assert!((en(FRAC_PI_4) - peak).abs() < 1e-10);
        for kk in 0..4 {
            assert!(en(kk as f64 * FRAC_PI_2) < 1e-10);
        }
        // 1-d scan of sqrt2*sc + s^2c^2 locates the maximum at pi/4.
        let best = (0..=10_000)
            .map(|i| FRAC_PI_2 * i as f64 / 10_000.0)
            .max_by(|a, b| {
                let f = |t: f64| {
                    std::f64::consts::SQRT_2 * t.sin() * t.cos() + (t.sin() * t.cos()).powi(2)
                };
                f(*a).total_cmp(&f(*b))
            })
            .unwrap();
        assert!((best - FRAC_PI_4).abs() < 1e-3);
    }

    #[test]
    fn periodicity_and_noon_shift() {
        for i in 0..200 {
            let tau = FRAC_PI_2 * i as f64 / 199.0;
            let a = one_one_logneg_analytic(tau);
            assert!((a - one_one_logneg_analytic(tau + FRAC_PI_2)).abs() < 1e-9);
            assert!(
                (noon_logneg_analytic(2, tau).unwrap() - one_one_logneg_analytic(tau + FRAC_PI_4))
                    .abs()
                    < 1e-9
            );
        }
    }

    proptest! {
        #[test]
        fn local_phase_rotations_leave_negativity_unchanged(
            raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 9),
            phi_a in 0.0..6.3f64,
            phi_b in 0.0..6.3f64,
        ) {
            prop_assume!(raw.iter().any(|&(x, y)| x.abs() + y.abs() > 1e-3));
            let k = cut(2);
            let v = nalgebra::DVector::from_iterator(9, raw.iter().map(|&(x, y)| c(x, y)));
            let rho = PureState::new(v, k).unwrap().normalized().density();
            let phases = nalgebra::DVector::from_iterator(
                9,
                k.labels_iter().map(|(a, b)| C64::from_polar(1.0, phi_a * a as f64 + phi_b * b as f64)),
            );
            let r = DMatrix::from_diagonal(&phases);
            let rotated = DensityOperator::new(&r * rho.matrix() * r.adjoint(), k).unwrap();
            let e0 = log_negativity_density(&rho, LogBase::Two).unwrap().log_negativity;
            let e1 = log_negativity_density(&rotated, LogBase::Two).unwrap().log_negativity;
            prop_assert!((e0 - e1).abs() < 1e-10);
        }
    }
}
