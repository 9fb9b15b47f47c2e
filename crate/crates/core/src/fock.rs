//! Truncated two-mode Fock space.
//!
//! Basis states `|n_a, n_b>` with `0 <= n_a, n_b <= n_max` are laid out
//! row-major: `index = n_a * (n_max + 1) + n_b`. Every module shares this layout.
//!
//! The coupler Hamiltonian is `a^dagger b + b^dagger a` in units of `hbar J`. The
//! free term `hbar omega (a^dagger a + b^dagger b)` commutes with it and only
//! contributes a phase per total-photon-number sector, which cancels in every
//! density-matrix and covariance quantity computed here, so it is dropped.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use crate::linalg;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Maximum photon number kept per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeCutoff(usize);

impl ModeCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("mode cutoff n_max must be >= 1".into()));
        }
        Ok(Self(n_max))
    }

    pub fn n_max(self) -> usize {
        self.0
    }

    /// Levels per mode, `n_max + 1`.
    pub fn levels(self) -> usize {
        self.0 + 1
    }

    /// Dimension of the two-mode space, `(n_max + 1)^2`.
    pub fn dim(self) -> usize {
        self.levels() * self.levels()
    }

    pub fn index(self, n_a: usize, n_b: usize) -> Result<usize> {
        basis_index(n_a, n_b, self)
    }

    /// Inverse of [`basis_index`].
    pub fn labels(self, index: usize) -> (usize, usize) {
        (index / self.levels(), index % self.levels())
    }

    /// All `(n_a, n_b)` labels in basis order.
    pub fn labels_iter(self) -> impl Iterator<Item = (usize, usize)> {
        (0..self.dim()).map(move |i| self.labels(i))
    }
}

/// Row-major position of `|n_a, n_b>`.
pub fn basis_index(n_a: usize, n_b: usize, cutoff: ModeCutoff) -> Result<usize> {
    let n_max = cutoff.n_max();
    if n_a > n_max || n_b > n_max {
        return Err(Error::Domain(format!(
            "photon numbers ({n_a}, {n_b}) exceed cutoff n_max = {n_max}"
        )));
    }
    Ok(n_a * cutoff.levels() + n_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

/// Sparse operator stored as `(row, col, value)` triplets.
///
/// Ladder operators have at most one entry per column, and the coupler has at
/// most two per row, so products with dense density matrices stay `O(d^2)`.
#[derive(Debug, Clone)]
pub struct SparseOp {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != ZERO {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Self {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|&(i, j, v)| (j, i, v.conj()))
            .collect();
        entries.sort_by_key(|&(i, j, _)| (j, i));
        Self {
            dim: self.dim,
            entries,
        }
    }

    /// Sparse product `self * rhs`.
    pub fn compose(&self, rhs: &SparseOp) -> SparseOp {
        let mut by_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); rhs.dim];
        for &(k, j, w) in &rhs.entries {
            by_row[k].push((j, w));
        }
        let mut acc = std::collections::BTreeMap::<(usize, usize), C64>::new();
        for &(i, k, v) in &self.entries {
            for &(j, w) in &by_row[k] {
                *acc.entry((j, i)).or_insert(ZERO) += v * w;
            }
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| *v != ZERO)
            .map(|((j, i), v)| (i, j, v))
            .collect();
        SparseOp {
            dim: self.dim,
            entries,
        }
    }

    /// The block of `self` on the basis states `keep`, reindexed by position in `keep`.
    pub fn restrict(&self, keep: &[usize]) -> SparseOp {
        let mut pos = vec![usize::MAX; self.dim];
        for (p, &i) in keep.iter().enumerate() {
            pos[i] = p;
        }
        let entries = self
            .entries
            .iter()
            .filter(|&&(i, j, _)| pos[i] != usize::MAX && pos[j] != usize::MAX)
            .map(|&(i, j, v)| (pos[i], pos[j], v))
            .collect();
        SparseOp {
            dim: keep.len(),
            entries,
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    /// `out += coeff * self * rho`, all matrices column-major `dim x dim`.
    pub fn mul_left_into(&self, rho: &DMatrix<C64>, coeff: C64, out: &mut DMatrix<C64>) {
        let d = self.dim;
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        for col in 0..d {
            let s = &src[col * d..(col + 1) * d];
            let t = &mut dst[col * d..(col + 1) * d];
            for &(i, k, v) in &self.entries {
                t[i] += coeff * v * s[k];
            }
        }
    }

    /// `out += coeff * rho * self^dagger`.
    pub fn mul_right_adjoint_into(&self, rho: &DMatrix<C64>, coeff: C64, out: &mut DMatrix<C64>) {
        let d = self.dim;
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        for &(j, k, v) in &self.entries {
            let w = coeff * v.conj();
            let s = &src[k * d..(k + 1) * d];
            for (t, x) in dst[j * d..(j + 1) * d].iter_mut().zip(s) {
                *t += w * x;
            }
        }
    }

    /// `Tr(rho * self)`.
    pub fn expectation(&self, rho: &DMatrix<C64>) -> C64 {
        self.entries.iter().map(|&(i, k, v)| v * rho[(k, i)]).sum()
    }

    pub fn apply(&self, psi: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        for &(i, k, v) in &self.entries {
            out[i] += v * psi[k];
        }
        out
    }
}

/// Annihilation operator of one mode, identity-extended to the other.
#[derive(Debug, Clone)]
pub struct ModeOperator {
    mode: Mode,
    cutoff: ModeCutoff,
    matrix: DMatrix<C64>,
}

impl ModeOperator {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.cutoff
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dagger(&self) -> DMatrix<C64> {
        self.matrix.adjoint()
    }

    pub fn to_sparse(&self) -> SparseOp {
        SparseOp::from_dense(&self.matrix)
    }

    pub fn apply(&self, state: &PureState) -> DVector<C64> {
        &self.matrix * state.amplitudes()
    }
}

/// `<n-1|c|n> = sqrt(n)` on the chosen mode.
pub fn mode_operator(mode: Mode, cutoff: ModeCutoff) -> ModeOperator {
    let d = cutoff.dim();
    let mut matrix = DMatrix::zeros(d, d);
    for (col, (n_a, n_b)) in cutoff.labels_iter().enumerate() {
        let lowered = match mode {
            Mode::A if n_a > 0 => Some((n_a - 1, n_b, n_a)),
            Mode::B if n_b > 0 => Some((n_a, n_b - 1, n_b)),
            _ => None,
        };
        if let Some((m_a, m_b, n)) = lowered {
            let row = m_a * cutoff.levels() + m_b;
            matrix[(row, col)] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    ModeOperator {
        mode,
        cutoff,
        matrix,
    }
}

/// Diagonal of `a^dagger a` (or `b^dagger b`) in basis order.
pub fn number_diagonal(mode: Mode, cutoff: ModeCutoff) -> Vec<f64> {
    cutoff
        .labels_iter()
        .map(|(n_a, n_b)| match mode {
            Mode::A => n_a as f64,
            Mode::B => n_b as f64,
        })
        .collect()
}

/// Total photon number operator `a^dagger a + b^dagger b`.
pub fn total_number_operator(cutoff: ModeCutoff) -> DMatrix<C64> {
    let diag: Vec<C64> = cutoff
        .labels_iter()
        .map(|(a, b)| C64::new((a + b) as f64, 0.0))
        .collect();
    DMatrix::from_diagonal(&DVector::from_vec(diag))
}

/// `a^dagger b + b^dagger a` in units of `hbar J`.
pub fn coupler_hamiltonian(cutoff: ModeCutoff) -> DMatrix<C64> {
    let a = mode_operator(Mode::A, cutoff);
    let b = mode_operator(Mode::B, cutoff);
    let hop = a.dagger() * b.matrix();
    &hop + hop.adjoint()
}

/// Normalised amplitude vector over the truncated two-mode basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    cutoff: ModeCutoff,
}

impl PureState {
    /// Wraps an amplitude vector; the length must equal the basis dimension.
    /// Normalisation is not enforced here; the operations check it.
    pub fn new(amplitudes: DVector<C64>, cutoff: ModeCutoff) -> Result<Self> {
        if amplitudes.len() != cutoff.dim() {
            return Err(Error::Structure(format!(
                "state has {} amplitudes, basis dimension is {}",
                amplitudes.len(),
                cutoff.dim()
            )));
        }
        Ok(Self { amplitudes, cutoff })
    }

    /// The number state `|n_a, n_b>`.
    pub fn basis(n_a: usize, n_b: usize, cutoff: ModeCutoff) -> Result<Self> {
        let mut amplitudes = DVector::zeros(cutoff.dim());
        amplitudes[basis_index(n_a, n_b, cutoff)?] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes, cutoff })
    }

    /// Superposition of number states given as `(n_a, n_b, amplitude)`.
    pub fn from_components(components: &[(usize, usize, C64)], cutoff: ModeCutoff) -> Result<Self> {
        let mut amplitudes = DVector::zeros(cutoff.dim());
        for &(n_a, n_b, c) in components {
            amplitudes[basis_index(n_a, n_b, cutoff)?] += c;
        }
        Ok(Self { amplitudes, cutoff })
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.cutoff
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Result<C64> {
        Ok(self.amplitudes[basis_index(n_a, n_b, self.cutoff)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        self.amplitudes.unscale_mut(n);
        self
    }

    /// Population of each total-photon-number sector, indexed by `n_a + n_b`.
    pub fn sector_populations(&self) -> Vec<f64> {
        let mut pops = vec![0.0; 2 * self.cutoff.n_max() + 1];
        for (i, (n_a, n_b)) in self.cutoff.labels_iter().enumerate() {
            pops[n_a + n_b] += self.amplitudes[i].norm_sqr();
        }
        pops
    }

    pub fn density(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator {
            matrix: linalg::hermitian_part(&m),
            cutoff: self.cutoff,
        }
    }

    fn check_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > 1e-6 {
            return Err(Error::Precondition(format!("state norm {n} is not 1")));
        }
        Ok(())
    }
}

/// Hermitian, unit-trace operator over the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
    cutoff: ModeCutoff,
}

impl DensityOperator {
    pub const HERMITICITY_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-10;

    /// Checks shape, Hermiticity and unit trace; stores the exact Hermitian part.
    pub fn new(matrix: DMatrix<C64>, cutoff: ModeCutoff) -> Result<Self> {
        if matrix.nrows() != cutoff.dim() || matrix.ncols() != cutoff.dim() {
            return Err(Error::Structure(format!(
                "density matrix is {}x{}, basis dimension is {}",
                matrix.nrows(),
                matrix.ncols(),
                cutoff.dim()
            )));
        }
        let skew = linalg::max_abs_diff(&matrix, &matrix.adjoint());
        if skew > Self::HERMITICITY_TOL {
            return Err(Error::Precondition(format!(
                "matrix is not Hermitian (deviation {skew:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > Self::TRACE_TOL {
            return Err(Error::Precondition(format!("trace {tr} is not 1")));
        }
        Ok(Self {
            matrix: linalg::hermitian_part(&matrix),
            cutoff,
        })
    }

    /// Skips validation; used by integrators that maintain the invariants themselves.
    pub(crate) fn from_raw(matrix: DMatrix<C64>, cutoff: ModeCutoff) -> Self {
        Self { matrix, cutoff }
    }

    pub fn from_pure(state: &PureState) -> Self {
        state.density()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.cutoff
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `Tr(rho O)`.
    pub fn expectation(&self, op: &SparseOp) -> C64 {
        op.expectation(&self.matrix)
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.cutoff
            .labels_iter()
            .enumerate()
            .map(|(i, (a, b))| (a + b) as f64 * self.matrix[(i, i)].re)
            .sum()
    }

    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.cutoff != other.cutoff {
            return Err(Error::Structure(
                "density operators use different cutoffs".into(),
            ));
        }
        Ok(linalg::trace_distance(&self.matrix, &other.matrix))
    }
}

struct SectorBlock {
    indices: Vec<usize>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

/// Exact propagator `exp(-i tau (a^dagger b + b^dagger a))`.
///
/// The Hamiltonian is block diagonal in the total photon number; each block
/// (dimension at most `n_max + 1`) is diagonalised once at construction and
/// reused for every `tau`.
pub struct Coupler {
    cutoff: ModeCutoff,
    blocks: Vec<SectorBlock>,
}

impl Coupler {
    pub fn new(cutoff: ModeCutoff) -> Self {
        let h = coupler_hamiltonian(cutoff);
        let n_max = cutoff.n_max();
        let blocks = (0..=2 * n_max)
            .map(|total| {
                let indices: Vec<usize> = cutoff
                    .labels_iter()
                    .enumerate()
                    .filter(|&(_, (a, b))| a + b == total)
                    .map(|(i, _)| i)
                    .collect();
                let k = indices.len();
                let sub = DMatrix::from_fn(k, k, |i, j| h[(indices[i], indices[j])].re);
                let eig = SymmetricEigen::new(sub);
                SectorBlock {
                    indices,
                    eigenvalues: eig.eigenvalues.iter().copied().collect(),
                    eigenvectors: eig.eigenvectors,
                }
            })
            .collect();
        Self { cutoff, blocks }
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.cutoff
    }

    fn block_unitary(block: &SectorBlock, tau: f64) -> DMatrix<C64> {
        let k = block.indices.len();
        let v = &block.eigenvectors;
        DMatrix::from_fn(k, k, |i, j| {
            (0..k)
                .map(|m| {
                    let phase = C64::from_polar(1.0, -tau * block.eigenvalues[m]);
                    phase * (v[(i, m)] * v[(j, m)])
                })
                .sum()
        })
    }

    /// Dense unitary over the full truncated basis.
    pub fn unitary(&self, tau: f64) -> DMatrix<C64> {
        let d = self.cutoff.dim();
        let mut u = DMatrix::zeros(d, d);
        for block in &self.blocks {
            let ub = Self::block_unitary(block, tau);
            for (i, &gi) in block.indices.iter().enumerate() {
                for (j, &gj) in block.indices.iter().enumerate() {
                    u[(gi, gj)] = ub[(i, j)];
                }
            }
        }
        u
    }

    pub fn evolve(&self, state: &PureState, tau: f64) -> Result<PureState> {
        if state.cutoff != self.cutoff {
            return Err(Error::Structure(
                "state cutoff differs from propagator cutoff".into(),
            ));
        }
        check_finite(tau)?;
        state.check_normalized()?;
        let mut out = DVector::zeros(self.cutoff.dim());
        for block in &self.blocks {
            let ub = Self::block_unitary(block, tau);
            for (i, &gi) in block.indices.iter().enumerate() {
                out[gi] = block
                    .indices
                    .iter()
                    .enumerate()
                    .map(|(j, &gj)| ub[(i, j)] * state.amplitudes[gj])
                    .sum();
            }
        }
        Ok(PureState {
            amplitudes: out,
            cutoff: self.cutoff,
        })
    }

    /// `U(tau) rho U(tau)^dagger`.
    pub fn conjugate(&self, rho: &DensityOperator, tau: f64) -> Result<DensityOperator> {
        if rho.cutoff != self.cutoff {
            return Err(Error::Structure(
                "density cutoff differs from propagator cutoff".into(),
            ));
        }
        check_finite(tau)?;
        let u = self.unitary(tau);
        let m = &u * &rho.matrix * u.adjoint();
        Ok(DensityOperator {
            matrix: linalg::hermitian_part(&m),
            cutoff: self.cutoff,
        })
    }
}

fn check_finite(tau: f64) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("time tau = {tau} is not finite")))
    }
}

/// Applies `exp(-i tau (a^dagger b + b^dagger a))` to a normalised state.
pub fn evolve_unitary(state: &PureState, tau: f64) -> Result<PureState> {
    Coupler::new(state.cutoff).evolve(state, tau)
}

/// Mode transform of the lossless coupler: `(a(t), b(t)) = M(tau) (a(0), b(0))`.
pub fn heisenberg_transform(tau: f64) -> Matrix2<C64> {
    let c = C64::new(tau.cos(), 0.0);
    let s = C64::new(0.0, -tau.sin());
    Matrix2::new(c, s, s, c)
}
