//! Closed-form evolutions through the lossless coupler, and the exact lossy
//! solution for the `|1,1>` input.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::fock::{Coupler, DensityOperator, ModeCutoff, PureState};
use crate::{Error, Result, C64};

/// Amplitudes of `|2,0>`, `|1,1>` and `|0,2>` for a two-photon state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeCoefficients {
    pub alpha: C64,
    pub beta: C64,
    pub delta: C64,
}

impl ThreeCoefficients {
    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr() + self.delta.norm_sqr()
    }

    /// Coefficients `c_k` of `|k, 2-k>` for `k = 0, 1, 2`.
    pub fn by_mode_a_count(&self) -> [C64; 3] {
        [self.delta, self.beta, self.alpha]
    }

    pub fn to_state(&self, cutoff: ModeCutoff) -> Result<PureState> {
        PureState::from_components(
            &[(2, 0, self.alpha), (1, 1, self.beta), (0, 2, self.delta)],
            cutoff,
        )
    }
}

/// `|1,1>` evolved to `tau`: `alpha = delta = -i sin(2 tau) / sqrt 2`, `beta = cos(2 tau)`.
pub fn one_one_coefficients(tau: f64) -> ThreeCoefficients {
    let (s, c) = (2.0 * tau).sin_cos();
    let side = C64::new(0.0, -s * FRAC_1_SQRT_2);
    ThreeCoefficients {
        alpha: side,
        beta: C64::new(c, 0.0),
        delta: side,
    }
}

/// `|2,0>` evolved to `tau`: `(cos^2, -i sqrt 2 cos sin, -sin^2)`.
pub fn two_zero_coefficients(tau: f64) -> ThreeCoefficients {
    let (s, c) = tau.sin_cos();
    ThreeCoefficients {
        alpha: C64::new(c * c, 0.0),
        beta: C64::new(0.0, -std::f64::consts::SQRT_2 * c * s),
        delta: C64::new(-s * s, 0.0),
    }
}

/// Amplitudes `beta_k` of `|k, N-k>` for an evolved NOON input.
#[derive(Debug, Clone, PartialEq)]
pub struct NoonCoefficients {
    photons: usize,
    beta: Vec<C64>,
}

impl NoonCoefficients {
    pub fn photons(&self) -> usize {
        self.photons
    }

    /// `beta_k` for `k = 0..=N`.
    pub fn beta(&self) -> &[C64] {
        &self.beta
    }

    pub fn norm_sqr(&self) -> f64 {
        self.beta.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn to_state(&self, cutoff: ModeCutoff) -> Result<PureState> {
        let n = self.photons;
        let comps: Vec<_> = self
            .beta
            .iter()
            .enumerate()
            .map(|(k, &b)| (k, n - k, b))
            .collect();
        PureState::from_components(&comps, cutoff)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Evolves `(|N,0> + |0,N>) / sqrt 2`.
///
/// Each branch expands binomially: the `|N,0>` branch contributes
/// `alpha_k = sqrt(C(N,k)) cos^k(tau) (-i sin tau)^(N-k)` to `|k, N-k>` and the
/// `|0,N>` branch contributes `alpha_(N-k)`. The two are summed and divided by
/// `sqrt 2`, which keeps the state normalised for every `N`.
pub fn noon_coefficients(photons: usize, tau: f64) -> Result<NoonCoefficients> {
    if photons < 1 {
        return Err(Error::Domain("NOON photon number must be >= 1".into()));
    }
    let (s, c) = tau.sin_cos();
    let minus_i_s = C64::new(0.0, -s);
    let alpha: Vec<C64> = (0..=photons)
        .map(|k| {
            binomial(photons, k).sqrt() * c.powi(k as i32) * minus_i_s.powi((photons - k) as i32)
        })
        .collect();
    let beta = (0..=photons)
        .map(|k| (alpha[k] + alpha[photons - k]) * FRAC_1_SQRT_2)
        .collect();
    Ok(NoonCoefficients { photons, beta })
}

/// Exact density matrix of the `|1,1>` input after coupling phase `tau` with
/// per-mode loss `gamma / J = loss_ratio`.
///
/// Symmetric loss commutes with the mode rotation, so in the frame co-rotating
/// with the coupler each photon survives independently with probability
/// `p = exp(-2 gamma t)`:
/// `rho_I = (1-p)^2 |0,0><0,0| + p(1-p) (|1,0><1,0| + |0,1><0,1|) + p^2 |1,1><1,1|`.
/// The lab-frame state is `U(tau) rho_I U(tau)^dagger`. Returned on the
/// `n_max = 2` basis.
pub fn lossy_one_one_density(tau: f64, loss_ratio: f64) -> Result<DensityOperator> {
    if !(loss_ratio >= 0.0) || !loss_ratio.is_finite() {
        return Err(Error::Domain(format!(
            "loss ratio {loss_ratio} must be finite and >= 0"
        )));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!(
            "time tau = {tau} must be finite and >= 0"
        )));
    }
    let cutoff = ModeCutoff::new(2)?;
    let p = (-2.0 * loss_ratio * tau).exp();
    let mut rho = DMatrix::<C64>::zeros(cutoff.dim(), cutoff.dim());
    for (n_a, n_b, w) in [
        (0, 0, (1.0 - p) * (1.0 - p)),
        (1, 0, p * (1.0 - p)),
        (0, 1, p * (1.0 - p)),
        (1, 1, p * p),
    ] {
        let i = cutoff.index(n_a, n_b)?;
        rho[(i, i)] = C64::new(w, 0.0);
    }
    let rotating = DensityOperator::new(rho, cutoff)?;
    Coupler::new(cutoff).conjugate(&rotating, tau)
}
