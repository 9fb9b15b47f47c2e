//! Small dense linear-algebra helpers shared by the Fock-space modules.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::C64;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The matrix is first split into the connected components of its sparsity
/// graph (exactly-zero couplings) and each block is diagonalised on its own.
/// Photon-number and parity conservation make the operators in this crate
/// strongly block diagonal, so this is usually much cheaper than one dense
/// decomposition. Only the lower triangle is trusted for each block.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    assert!(m.is_square(), "hermitian_eigenvalues needs a square matrix");
    let mut out = Vec::with_capacity(m.nrows());
    for block in coupled_blocks(m) {
        if block.len() == 1 {
            out.push(m[(block[0], block[0])].re);
            continue;
        }
        let sub = DMatrix::from_fn(block.len(), block.len(), |i, j| m[(block[i], block[j])]);
        out.extend(SymmetricEigen::new(sub).eigenvalues.iter().copied());
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Index sets of the connected components of the graph with an edge i-j
/// whenever `m[(i, j)]` or `m[(j, i)]` is nonzero.
pub fn coupled_blocks(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)] != C64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// `(m + m^dagger) / 2`.
pub fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).scale(0.5)
}

/// Trace norm of a Hermitian matrix (sum of absolute eigenvalues).
pub fn trace_norm_hermitian(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(&hermitian_part(m))
        .iter()
        .map(|l| l.abs())
        .sum()
}

/// Trace distance `||a - b||_1 / 2` between two Hermitian matrices.
pub fn trace_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    0.5 * trace_norm_hermitian(&(a - b))
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
