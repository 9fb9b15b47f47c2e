//! Brute-force integration of the master equation on the truncated Fock space.
//!
//! In units of `J` the generator is
//!
//! ```text
//! d rho / d tau = -i [a^dagger b + b^dagger a, rho]
//!                 + (gamma/J) sum_{c in {a, b}} (2 c rho c^dagger - c^dagger c rho - rho c^dagger c)
//! ```
//!
//! With this prefactor a single photon survives with probability
//! `exp(-2 gamma t)` and every quadrature second moment relaxes to the vacuum
//! as `exp(-2 gamma t)`, the rates used by the closed forms in
//! [`crate::analytic`] and [`crate::gaussian`].
//!
//! This module is the independent oracle for those closed forms; it only
//! shares the operator matrices of [`crate::fock`] with them.

use nalgebra::{DMatrix, DVector, Matrix4};

use crate::fock::{
    coupler_hamiltonian, mode_operator, DensityOperator, Mode, ModeCutoff, PureState, SparseOp,
};
use crate::gaussian::CovarianceMatrix;
use crate::{linalg, Error, Result, C64};

/// Population a truncated squeezed state may leave outside the basis.
pub const SQUEEZED_TAIL_TOL: f64 = 1e-10;

/// Fixed-step classical fourth-order Runge-Kutta settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Step in `tau`. Each segment between output times is split into equal
    /// steps no longer than this.
    pub step: f64,
    /// Largest trace distance allowed between the final states of the run at
    /// `step` and the run at `step / 2`; also bounds trace drift and negative
    /// eigenvalues (at ten times this value).
    pub trace_tolerance: f64,
}

impl IntegratorConfig {
    /// `step = min(1e-3, 1e-2 / (1 + gamma/J))`.
    pub fn for_loss_ratio(loss_ratio: f64) -> Self {
        Self {
            step: (1e-2 / (1.0 + loss_ratio.max(0.0))).min(1e-3),
            trace_tolerance: 1e-8,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self::for_loss_ratio(0.0)
    }
}

/// The generator as sparse pieces for repeated application.
///
/// Both the coupler and the loss map the span of states with at most `M`
/// photons in total into itself, so the generator can act on that span alone.
pub struct Liouvillian {
    cutoff: ModeCutoff,
    loss_ratio: f64,
    /// Full-basis indices of the states the generator acts on.
    basis: Vec<usize>,
    hamiltonian: SparseOp,
    jumps: [SparseOp; 2],
    total_number: Vec<f64>,
}

impl Liouvillian {
    pub fn new(cutoff: ModeCutoff, loss_ratio: f64) -> Result<Self> {
        Self::with_photon_budget(cutoff, loss_ratio, 2 * cutoff.n_max())
    }

    /// The generator restricted to states with at most `max_total` photons.
    pub fn with_photon_budget(
        cutoff: ModeCutoff,
        loss_ratio: f64,
        max_total: usize,
    ) -> Result<Self> {
        if !(loss_ratio >= 0.0) || !loss_ratio.is_finite() {
            return Err(Error::Domain(format!(
                "loss ratio {loss_ratio} must be finite and >= 0"
            )));
        }
        let basis: Vec<usize> = cutoff
            .labels_iter()
            .enumerate()
            .filter(|(_, (a, b))| a + b <= max_total)
            .map(|(i, _)| i)
            .collect();
        let total_number = basis.iter().map(|&i| {
            let (a, b) = cutoff.labels(i);
            (a + b) as f64
        });
        Ok(Self {
            cutoff,
            loss_ratio,
            hamiltonian: SparseOp::from_dense(&coupler_hamiltonian(cutoff)).restrict(&basis),
            jumps: [
                mode_operator(Mode::A, cutoff).to_sparse().restrict(&basis),
                mode_operator(Mode::B, cutoff).to_sparse().restrict(&basis),
            ],
            total_number: total_number.collect(),
            basis,
        })
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.cutoff
    }

    /// `d rho / d tau` for `rho` written on [`Self::basis`].
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let d = self.basis.len();
        let mut out = DMatrix::zeros(d, d);
        let i = C64::new(0.0, 1.0);
        self.hamiltonian.mul_left_into(rho, -i, &mut out);
        self.hamiltonian.mul_right_adjoint_into(rho, i, &mut out);
        let k = self.loss_ratio;
        if k == 0.0 {
            return out;
        }
        let mut half = DMatrix::zeros(d, d);
        for c in &self.jumps {
            half.fill(C64::new(0.0, 0.0));
            c.mul_right_adjoint_into(rho, C64::new(1.0, 0.0), &mut half);
            c.mul_left_into(&half, C64::new(2.0 * k, 0.0), &mut out);
        }
        let n = &self.total_number;
        for col in 0..d {
            for row in 0..d {
                out[(row, col)] -= rho[(row, col)] * (k * (n[row] + n[col]));
            }
        }
        out
    }

    fn rk4_step(&self, rho: &DMatrix<C64>, h: f64) -> DMatrix<C64> {
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &k1 * C64::new(0.5 * h, 0.0)));
        let k3 = self.apply(&(rho + &k2 * C64::new(0.5 * h, 0.0)));
        let k4 = self.apply(&(rho + &k3 * C64::new(h, 0.0)));
        let next = rho
            + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
                * C64::new(h / 6.0, 0.0);
        linalg::hermitian_part(&next)
    }

    /// States at each of `taus` (non-decreasing, starting from `tau = 0`).
    fn run(&self, rho0: &DMatrix<C64>, taus: &[f64], step: f64) -> Vec<DMatrix<C64>> {
        let mut rho = rho0.clone();
        let mut now = 0.0;
        let mut out = Vec::with_capacity(taus.len());
        for &t in taus {
            let span = t - now;
            if span > 0.0 {
                let n = (span / step - 1e-9).ceil().max(1.0) as usize;
                let h = span / n as f64;
                for _ in 0..n {
                    rho = self.rk4_step(&rho, h);
                }
            }
            now = t;
            out.push(rho.clone());
        }
        out
    }
}

/// `d rho / d tau` for loss ratio `gamma / J`.
pub fn liouvillian_rhs(rho: &DensityOperator, loss_ratio: f64) -> Result<DMatrix<C64>> {
    Ok(Liouvillian::new(rho.cutoff(), loss_ratio)?.apply(rho.matrix()))
}

/// Integrates from `tau = 0` and returns the state at each requested time.
///
/// The whole trajectory is run twice, at `config.step` and at half of it; the
/// finer run is returned if the two final states agree to within
/// `config.trace_tolerance` in trace distance.
pub fn integrate_trajectory(
    rho0: &DensityOperator,
    taus: &[f64],
    loss_ratio: f64,
    config: &IntegratorConfig,
) -> Result<Vec<DensityOperator>> {
    if !(config.step > 0.0) || !config.step.is_finite() {
        return Err(Error::Domain(format!(
            "integrator step {} must be positive",
            config.step
        )));
    }
    if taus.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) || taus.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain(
            "output times must be finite, non-negative and sorted".into(),
        ));
    }
    let k = rho0.cutoff();
    let m0 = rho0.matrix();
    let max_total = (0..k.dim())
        .filter(|&i| m0.row(i).iter().any(|z| *z != C64::new(0.0, 0.0)))
        .map(|i| {
            let (a, b) = k.labels(i);
            a + b
        })
        .max()
        .unwrap_or(0);
    let lv = Liouvillian::with_photon_budget(k, loss_ratio, max_total)?;
    let basis = lv.basis();
    let start = m0.select_rows(basis).select_columns(basis);
    let coarse = lv.run(&start, taus, config.step);
    let fine = lv.run(&start, taus, 0.5 * config.step);
    if let (Some(c), Some(f)) = (coarse.last(), fine.last()) {
        let gap = linalg::trace_distance(c, f);
        if !(gap < config.trace_tolerance) {
            return Err(Error::Accuracy(format!(
                "step halving moved the final state by {gap:e} (tolerance {:e}); reduce the step below {}",
                config.trace_tolerance, config.step
            )));
        }
        let drift = (f.trace().re - 1.0).abs();
        if drift > config.trace_tolerance {
            return Err(Error::Accuracy(format!("trace drifted by {drift:e}")));
        }
        let min_eig = linalg::hermitian_eigenvalues(f)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -10.0 * config.trace_tolerance {
            return Err(Error::Accuracy(format!(
                "final state has eigenvalue {min_eig:e}"
            )));
        }
    }
    let embed = |m: DMatrix<C64>| {
        let mut full = DMatrix::zeros(k.dim(), k.dim());
        for (c, &j) in basis.iter().enumerate() {
            for (r, &i) in basis.iter().enumerate() {
                full[(i, j)] = m[(r, c)];
            }
        }
        DensityOperator::from_raw(full, k)
    };
    Ok(fine.into_iter().map(embed).collect())
}

pub fn integrate_master_equation(
    rho0: &DensityOperator,
    tau_end: f64,
    loss_ratio: f64,
    config: &IntegratorConfig,
) -> Result<DensityOperator> {
    let mut states = integrate_trajectory(rho0, &[tau_end], loss_ratio, config)?;
    Ok(states.pop().expect("one output time requested"))
}

/// Fock amplitudes of `exp(r/2 (a^dagger^2 - a^2)) |0>` up to `n_max`:
/// `<2m|zeta> = (tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r)`, odd levels zero.
pub fn single_mode_squeezed_amplitudes(r: f64, n_max: usize) -> Vec<f64> {
    let t = r.tanh();
    let mut amps = vec![0.0; n_max + 1];
    let mut c = 1.0 / r.cosh().sqrt();
    for m in 0..=n_max / 2 {
        if m > 0 {
            c *= t * ((2 * m - 1) as f64 / (2 * m) as f64).sqrt();
        }
        amps[2 * m] = c;
    }
    amps
}

/// Population of a single-mode squeezed vacuum above level `n`.
fn single_mode_tail(r: f64, n: usize) -> f64 {
    let t2 = r.tanh().powi(2);
    let mut c2 = 1.0 / r.cosh();
    let mut tail = 0.0;
    let mut m = 0usize;
    loop {
        if m > 0 {
            c2 *= t2 * (2 * m - 1) as f64 / (2 * m) as f64;
        }
        if 2 * m > n {
            tail += c2;
            if c2 <= 1e-30 * tail || c2 == 0.0 || m > 1_000_000 {
                break;
            }
        }
        m += 1;
    }
    tail
}

// The coupler and the loss both keep the span of states with at most `n_max`
// photons in total, so the truncation error is the population outside it.

/// Population of `|zeta_a> (x) |zeta_b>` with more than `n_max` photons in total.
pub fn separable_squeezed_tail(r: f64, n_max: usize) -> f64 {
    let amps = single_mode_squeezed_amplitudes(r, n_max);
    let inner: f64 = (0..=n_max)
        .map(|a| amps[a] * amps[a] * single_mode_tail(r, n_max - a))
        .sum();
    inner + single_mode_tail(r, n_max)
}

/// Population of the two-mode squeezed vacuum with more than `n_max` photons in total.
pub fn two_mode_squeezed_tail(r: f64, n_max: usize) -> f64 {
    r.tanh().powi(2 * (n_max as i32 / 2 + 1))
}

fn smallest_cutoff(tail: impl Fn(usize) -> f64) -> usize {
    (1..)
        .find(|&n| tail(n) < SQUEEZED_TAIL_TOL)
        .expect("squeezed tails decay geometrically")
}

/// `max(ceil(8 + 20 sinh^2 r), smallest n_max meeting the tail tolerance)`.
pub fn default_squeezed_cutoff(r: f64, two_mode: bool) -> usize {
    let heuristic = (8.0 + 20.0 * r.sinh().powi(2)).ceil() as usize;
    let needed = if two_mode {
        smallest_cutoff(|n| two_mode_squeezed_tail(r, n))
    } else {
        smallest_cutoff(|n| separable_squeezed_tail(r, n))
    };
    heuristic.max(needed)
}

/// Separable input: the same single-mode squeezed vacuum in both modes,
/// restricted to at most `n_max` photons in total and renormalised.
pub fn single_mode_squeezed_fock(r: f64, cutoff: ModeCutoff) -> Result<PureState> {
    let n_max = cutoff.n_max();
    if separable_squeezed_tail(r, n_max) >= SQUEEZED_TAIL_TOL {
        return Err(Error::Truncation {
            r,
            requested: n_max,
            required: smallest_cutoff(|n| separable_squeezed_tail(r, n)),
        });
    }
    let amps = single_mode_squeezed_amplitudes(r, n_max);
    let v = DVector::from_iterator(
        cutoff.dim(),
        cutoff.labels_iter().map(|(a, b)| {
            if a + b <= n_max {
                C64::new(amps[a] * amps[b], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }),
    );
    Ok(PureState::new(v, cutoff)?.normalized())
}

/// `exp(r (a^dagger b^dagger - a b)) |0,0> = sum_n (tanh r)^n / cosh r |n,n>`,
/// restricted to `2n <= n_max` and renormalised.
pub fn two_mode_squeezed_fock(r: f64, cutoff: ModeCutoff) -> Result<PureState> {
    if two_mode_squeezed_tail(r, cutoff.n_max()) >= SQUEEZED_TAIL_TOL {
        return Err(Error::Truncation {
            r,
            requested: cutoff.n_max(),
            required: smallest_cutoff(|n| two_mode_squeezed_tail(r, n)),
        });
    }
    let t = r.tanh();
    let comps: Vec<_> = (0..=cutoff.n_max() / 2)
        .map(|n| (n, n, C64::new(t.powi(n as i32) / r.cosh(), 0.0)))
        .collect();
    Ok(PureState::from_components(&comps, cutoff)?.normalized())
}

/// Symmetrised quadrature second moments in `(x1, p1, x2, p2)` order.
///
/// Built from normally ordered moments (`<a^2>`, `<a^dagger a>`, `<a b>`,
/// `<a^dagger b>`, ...) so the truncation of `a a^dagger` at the top level does
/// not leak into the result. First moments must vanish (below `1e-8`).
pub fn covariance_from_density(rho: &DensityOperator) -> Result<CovarianceMatrix> {
    let k = rho.cutoff();
    let a = mode_operator(Mode::A, k).to_sparse();
    let b = mode_operator(Mode::B, k).to_sparse();
    let ev = |op: &SparseOp| rho.expectation(op);
    let (mean_a, mean_b) = (ev(&a), ev(&b));
    if mean_a.norm() > 1e-8 || mean_b.norm() > 1e-8 {
        return Err(Error::Precondition(format!(
            "covariance extraction assumes zero mean, got <a> = {mean_a}, <b> = {mean_b}"
        )));
    }
    let a_dag = a.adjoint();
    let b_dag = b.adjoint();
    let aa = ev(&a.compose(&a));
    let bb = ev(&b.compose(&b));
    let na = ev(&a_dag.compose(&a)).re;
    let nb = ev(&b_dag.compose(&b)).re;
    let ab = ev(&a.compose(&b));
    let adb = ev(&a_dag.compose(&b));

    let local = |sq: C64, n: f64| (sq.re + n + 0.5, -sq.re + n + 0.5, sq.im);
    let (xx1, pp1, xp1) = local(aa, na);
    let (xx2, pp2, xp2) = local(bb, nb);
    let x1x2 = ab.re + adb.re;
    let p1p2 = -ab.re + adb.re;
    let x1p2 = ab.im + adb.im;
    let p1x2 = ab.im - adb.im;
    CovarianceMatrix::new(Matrix4::new(
        xx1, xp1, x1x2, x1p2, //
        xp1, pp1, p1x2, p1p2, //
        x1x2, p1x2, xx2, xp2, //
        x1p2, p1p2, xp2, pp2,
    ))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, PI};

    use proptest::prelude::*;

    use super::*;
    use crate::analytic::{lossy_one_one_density, one_one_coefficients};
    use crate::gaussian::{
        cov_entangled_squeezed, cov_entangled_squeezed_lossy, cov_separable_squeezed,
    };

    fn cut(n: usize) -> ModeCutoff {
        ModeCutoff::new(n).unwrap()
    }

    fn random_density(k: ModeCutoff, raw: &[(f64, f64)]) -> DensityOperator {
        let d = k.dim();
        let g = DMatrix::from_iterator(d, d, raw.iter().map(|&(x, y)| C64::new(x, y)));
        let m = &g * g.adjoint();
        let tr = m.trace();
        DensityOperator::new(m.map(|z| z / tr), k).unwrap()
    }

    #[test]
    fn vacuum_is_stationary() {
        let rho = PureState::basis(0, 0, cut(2)).unwrap().density();
        let rhs = liouvillian_rhs(&rho, 0.7).unwrap();
        assert!(rhs.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn single_photon_population_decays_at_twice_the_ratio() {
        let k = cut(1);
        let rho = PureState::basis(1, 0, k).unwrap().density();
        let rhs = liouvillian_rhs(&rho, 0.3).unwrap();
        let i = k.index(1, 0).unwrap();
        // The coupler moves no population at first order from a diagonal state.
        assert!((rhs[(i, i)].re + 2.0 * 0.3).abs() < 1e-15);
        let vac = k.index(0, 0).unwrap();
        assert!((rhs[(vac, vac)].re - 2.0 * 0.3).abs() < 1e-15);
    }

    #[test]
    fn zero_time_returns_input() {
        let rho = PureState::basis(1, 1, cut(2)).unwrap().density();
        let out = integrate_master_equation(&rho, 0.0, 0.2, &IntegratorConfig::default()).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn lossless_integration_reaches_hong_ou_mandel_state() {
        let k = cut(2);
        let rho = PureState::basis(1, 1, k).unwrap().density();
        let out =
            integrate_master_equation(&rho, FRAC_PI_4, 0.0, &IntegratorConfig::default()).unwrap();
        let want = one_one_coefficients(FRAC_PI_4)
            .to_state(k)
            .unwrap()
            .density();
        assert!(out.trace_distance(&want).unwrap() < 1e-8);
    }

    #[test]
    fn integration_matches_lossy_closed_form() {
        let rho = PureState::basis(1, 1, cut(2)).unwrap().density();
        for ratio in [0.1, 0.3] {
            let cfg = IntegratorConfig::for_loss_ratio(ratio);
            let taus = [PI / 5.0, PI / 2.0];
            let states = integrate_trajectory(&rho, &taus, ratio, &cfg).unwrap();
            for (tau, s) in taus.iter().zip(&states) {
                let exact = lossy_one_one_density(*tau, ratio).unwrap();
                assert!(s.trace_distance(&exact).unwrap() < 1e-6);
            }
        }
    }

    #[test]
    fn photon_number_decay_and_purity() {
        let k = cut(3);
        let psi = PureState::from_components(
            &[(2, 1, C64::new(0.6, 0.0)), (0, 3, C64::new(0.0, 0.8))],
            k,
        )
        .unwrap();
        let rho0 = psi.density();
        let taus: Vec<f64> = (1..=5).map(|i| 0.3 * i as f64).collect();
        let ratio = 0.15;
        let states = integrate_trajectory(
            &rho0,
            &taus,
            ratio,
            &IntegratorConfig::for_loss_ratio(ratio),
        )
        .unwrap();
        for (t, s) in taus.iter().zip(&states) {
            let want = (-2.0 * ratio * t).exp() * rho0.mean_photon_number();
            assert!((s.mean_photon_number() - want).abs() < 1e-8);
            assert!((s.trace() - 1.0).abs() < 1e-10);
        }
        let lossless =
            integrate_trajectory(&rho0, &taus, 0.0, &IntegratorConfig::default()).unwrap();
        for s in &lossless {
            assert!((s.purity() - 1.0).abs() < 1e-10);
        }
    }

    /// Loss relaxes everything to the (pure) vacuum, so purity only falls while
    /// each photon's survival probability exp(-2 gamma t) is above 1/2.
    #[test]
    fn purity_falls_during_early_decay() {
        let k = cut(2);
        let ratio = 0.4;
        let rho0 = PureState::basis(1, 1, k).unwrap().density();
        let horizon = std::f64::consts::LN_2 / (2.0 * ratio);
        let taus: Vec<f64> = (0..=40).map(|i| horizon * i as f64 / 40.0).collect();
        let states = integrate_trajectory(
            &rho0,
            &taus,
            ratio,
            &IntegratorConfig::for_loss_ratio(ratio),
        )
        .unwrap();
        let purities: Vec<f64> = states.iter().map(DensityOperator::purity).collect();
        for w in purities.windows(2) {
            assert!(w[1] <= w[0] + 1e-10);
        }
        // Coupling is a unitary in the rotating frame; purity is the product
        // of two independent single-photon damping channels.
        let p: f64 = 0.5;
        let want = (1.0 - p) * (1.0 - p) * (1.0 - p) * (1.0 - p)
            + 2.0 * p * p * (1.0 - p) * (1.0 - p)
            + p.powi(4);
        assert!((purities[40] - want).abs() < 1e-9);
    }

    #[test]
    fn photon_budget_restriction_is_exact() {
        let k = cut(3);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = PureState::from_components(&[(1, 1, h), (2, 0, h)], k).unwrap();
        let taus = [0.3, 0.9];
        let ratio = 0.2;
        let full = Liouvillian::new(k, ratio)
            .unwrap()
            .run(psi.density().matrix(), &taus, 1e-3);
        let restricted = integrate_trajectory(
            &psi.density(),
            &taus,
            ratio,
            &IntegratorConfig::for_loss_ratio(ratio),
        )
        .unwrap();
        let small = Liouvillian::with_photon_budget(k, ratio, 2).unwrap();
        assert_eq!(small.basis().len(), 6);
        for (f, r) in full.iter().zip(&restricted) {
            assert!(linalg::max_abs_diff(f, r.matrix()) < 1e-9);
        }
    }

    #[test]
    fn too_coarse_step_fails_the_convergence_check() {
        let rho = PureState::basis(1, 1, cut(2)).unwrap().density();
        let cfg = IntegratorConfig {
            step: 0.5,
            trace_tolerance: 1e-10,
        };
        assert!(matches!(
            integrate_master_equation(&rho, 3.0, 0.1, &cfg),
            Err(Error::Accuracy(_))
        ));
    }

    #[test]
    fn squeezed_state_expansions() {
        let vac = two_mode_squeezed_fock(0.0, cut(3)).unwrap();
        assert_eq!(vac, PureState::basis(0, 0, cut(3)).unwrap());
        let vac = single_mode_squeezed_fock(0.0, cut(3)).unwrap();
        assert_eq!(vac, PureState::basis(0, 0, cut(3)).unwrap());

        let r = 0.3;
        let k = cut(25);
        let tmsv = two_mode_squeezed_fock(r, k).unwrap().density();
        let na = tmsv.expectation(
            &mode_operator(Mode::A, k)
                .to_sparse()
                .adjoint()
                .compose(&mode_operator(Mode::A, k).to_sparse()),
        );
        assert!((na.re - r.sinh().powi(2)).abs() < 1e-12);

        let sigma = covariance_from_density(&tmsv).unwrap();
        assert!((sigma.matrix() - cov_entangled_squeezed(r, 0.0).matrix()).amax() < 1e-9);
        let sep = single_mode_squeezed_fock(r, k).unwrap().density();
        let sigma = covariance_from_density(&sep).unwrap();
        assert!((sigma.matrix() - cov_separable_squeezed(r, 0.0).matrix()).amax() < 1e-9);
    }

    #[test]
    fn truncation_is_reported() {
        match two_mode_squeezed_fock(0.9, cut(10)) {
            Err(Error::Truncation { required, .. }) => {
                assert!(required > 10);
                assert!(two_mode_squeezed_fock(0.9, cut(required)).is_ok());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
        assert!(matches!(
            single_mode_squeezed_fock(0.9, cut(20)),
            Err(Error::Truncation { .. })
        ));
        assert!(default_squeezed_cutoff(0.3, false) >= 10);
        let n = default_squeezed_cutoff(0.3, true);
        assert!(two_mode_squeezed_tail(0.3, n) < SQUEEZED_TAIL_TOL);
    }

    #[test]
    fn covariance_rejects_displaced_states() {
        let k = cut(2);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = PureState::from_components(&[(0, 0, h), (1, 0, h)], k).unwrap();
        assert!(matches!(
            covariance_from_density(&psi.density()),
            Err(Error::Precondition(_))
        ));
        let vac = covariance_from_density(&PureState::basis(0, 0, k).unwrap().density()).unwrap();
        assert!((vac.matrix() - CovarianceMatrix::vacuum().matrix()).amax() < 1e-15);
    }

    #[test]
    fn lossy_two_mode_squeezed_covariance_matches_closed_form() {
        let (r, tau, ratio) = (0.3, 0.7, 0.1);
        let k = cut(18);
        let rho0 = two_mode_squeezed_fock(r, k).unwrap().density();
        let cfg = IntegratorConfig::for_loss_ratio(ratio).with_step(5e-3);
        let out = integrate_master_equation(&rho0, tau, ratio, &cfg).unwrap();
        let sigma = covariance_from_density(&out).unwrap();
        let want = cov_entangled_squeezed_lossy(r, tau, ratio).unwrap();
        assert!((sigma.matrix() - want.matrix()).amax() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn generator_is_traceless_and_hermitian(
            raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 81),
            ratio in 0.0..1.0f64,
        ) {
            let rho = random_density(cut(2), &raw);
            let rhs = liouvillian_rhs(&rho, ratio).unwrap();
            prop_assert!(rhs.trace().norm() < 1e-13);
            prop_assert!(linalg::max_abs_diff(&rhs, &rhs.adjoint()) < 1e-13);
        }
    }
}
