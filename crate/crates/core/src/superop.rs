//! Lindblad models and their matrix representation on vectorized operators.
//!
//! Vectorization stacks columns: `vec(A)[i + d·j] = A[i,j]`. With this
//! convention `vec(AXB) = (Bᵀ ⊗ A) vec(X)` and the Hilbert–Schmidt inner
//! product becomes the ordinary complex inner product, so the superoperator
//! adjoint is the conjugate transpose of its matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{dim_err, Error, Result};
use crate::linalg::{check_hermitian, dagger, hermitian_parts, ComplexMatrix, C64};

/// Default cap on the Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 32;

/// Environment variable that overrides [`DEFAULT_DIM_CAP`].
pub const DIM_CAP_ENV: &str = "LINDSCOPE_DIM_CAP";

/// Active dimension cap: `LINDSCOPE_DIM_CAP` if set to a positive integer,
/// otherwise [`DEFAULT_DIM_CAP`]. Raising it is at your own risk; every
/// analysis is dense and scales as `d⁶`.
pub fn dim_cap() -> usize {
    std::env::var(DIM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&cap| cap > 0)
        .unwrap_or(DEFAULT_DIM_CAP)
}

pub(crate) fn check_dim_cap(dim: usize) -> Result<()> {
    let cap = dim_cap();
    if dim > cap {
        return Err(Error::Model(format!(
            "Hilbert-space dimension {dim} exceeds the cap {cap} (set {DIM_CAP_ENV} to raise it)"
        )));
    }
    Ok(())
}

/// Hamiltonian plus jump operators. Rates are folded into the jumps, so a
/// channel with rate `γ` and operator `L` is stored as `√γ·L`.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    dim: usize,
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
    label: String,
}

impl LindbladModel {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        if !hamiltonian.is_square() {
            return Err(Error::Model(format!(
                "Hamiltonian must be square, got {}x{}",
                hamiltonian.rows(),
                hamiltonian.cols()
            )));
        }
        let dim = hamiltonian.rows();
        check_dim_cap(dim)?;
        for (k, jump) in jumps.iter().enumerate() {
            if jump.rows() != dim || jump.cols() != dim {
                return Err(Error::Model(format!("jump {k} is {}x{}, expected {dim}x{dim}", jump.rows(), jump.cols())));
            }
        }
        check_hermitian(&hamiltonian).map_err(|e| Error::Model(format!("Hamiltonian: {e}")))?;
        Ok(LindbladModel { dim, hamiltonian, jumps, label: label.into() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// A linear map on `d×d` operators stored as its `d²×d²` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = dim * dim;
        if dim == 0 || matrix.rows() != n || matrix.cols() != n {
            return Err(dim_err(format!(
                "superoperator on {dim}x{dim} operators needs a {n}x{n} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Superoperator { dim, matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Superoperator { dim, matrix: ComplexMatrix::zeros(dim * dim, dim * dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Superoperator { dim, matrix: ComplexMatrix::identity(dim * dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn scale(&self, c: f64) -> Self {
        Superoperator { dim: self.dim, matrix: self.matrix.scale_real(c) }
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Superoperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(dim_err(format!("cannot compose superoperators on d={} and d={}", self.dim, other.dim)));
        }
        Ok(Superoperator { dim: self.dim, matrix: &self.matrix * &other.matrix })
    }
}

/// Column-stacking vectorization.
pub fn vectorize(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(dim_err(format!("vectorize needs a square operator, got {}x{}", a.rows(), a.cols())));
    }
    // nalgebra storage is column-major already.
    Ok(a.as_inner().iter().copied().collect())
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &[C64], dim: usize) -> Result<ComplexMatrix> {
    if dim == 0 || v.len() != dim * dim {
        return Err(dim_err(format!("vector of length {} is not a vectorized {dim}x{dim} operator", v.len())));
    }
    ComplexMatrix::from_inner(DMatrix::from_column_slice(dim, dim, v))
}

/// Matrix of `ρ ↦ −i[H,ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})`:
///
/// `−i(I⊗H − Hᵀ⊗I) + Σ_k [conj(L_k)⊗L_k − ½ I⊗(L_k†L_k) − ½ (L_k†L_k)ᵀ⊗I]`.
pub fn liouvillian(model: &LindbladModel) -> Superoperator {
    let d = model.dim();
    let id = ComplexMatrix::identity(d);
    let h = model.hamiltonian();
    let coherent = &id.kron(h) - &h.transpose().kron(&id);
    let mut m = coherent.scale(C64::new(0.0, -1.0));
    for jump in model.jumps() {
        let ldl = &dagger(jump) * jump;
        let jump_term = jump.conj().kron(jump);
        let anti = &id.kron(&ldl) + &ldl.transpose().kron(&id);
        m = &m + &(&jump_term - &anti.scale_real(0.5));
    }
    Superoperator { dim: d, matrix: m }
}

/// Hilbert–Schmidt adjoint.
pub fn adjoint(s: &Superoperator) -> Superoperator {
    Superoperator { dim: s.dim, matrix: dagger(&s.matrix) }
}

/// Hermitian (dissipative) and anti-Hermitian (non-dissipative) parts.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub dissipative: Superoperator,
    pub nondissipative: Superoperator,
}

/// `L_d = (L + L†)/2`, `L_nd = (L − L†)/2`.
pub fn decompose(s: &Superoperator) -> Decomposition {
    let (herm, anti) = hermitian_parts(&s.matrix);
    Decomposition {
        dissipative: Superoperator { dim: s.dim, matrix: herm },
        nondissipative: Superoperator { dim: s.dim, matrix: anti },
    }
}

/// Applies `s` to the operator `rho`.
pub fn apply(s: &Superoperator, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.rows() != s.dim || rho.cols() != s.dim {
        return Err(dim_err(format!(
            "superoperator acts on {0}x{0} operators, got {1}x{2}",
            s.dim,
            rho.rows(),
            rho.cols()
        )));
    }
    let v = DVector::from_column_slice(rho.as_inner().as_slice());
    let out = s.matrix.as_inner() * v;
    Ok(ComplexMatrix::wrap(DMatrix::from_column_slice(s.dim, s.dim, out.as_slice())))
}
