//! Dense complex linear algebra used by every other module.
//!
//! [`ComplexMatrix`] is a thin newtype over `nalgebra::DMatrix<Complex64>`
//! that guarantees finite entries at construction. Everything here is a pure
//! function of its inputs.

mod expm;

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

use crate::error::{dim_err, Error, Result};

pub use expm::{matrix_exp, matrix_exp_hermitian, EXP_NORM_LIMIT};

/// Relative factor in the Hermiticity tolerance.
pub const HERMITIAN_RTOL: f64 = 1e-10;
/// Absolute floor of the Hermiticity tolerance.
pub const HERMITIAN_ATOL: f64 = 1e-14;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(dim_err(format!("matrix shape {rows}x{cols} has an empty side")));
        }
        if entries.len() != rows * cols {
            return Err(dim_err(format!("{} entries cannot fill a {rows}x{cols} matrix", entries.len())));
        }
        Self::from_inner(DMatrix::from_row_iterator(rows, cols, entries))
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(dim_err(format!("row {i} has {} entries, expected {cols}", r.len())));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    /// Real-valued convenience constructor, row-major.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_inner(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(dim_err("matrix has an empty side"));
        }
        if let Some(z) = m.iter().find(|z| !z.is_finite()) {
            return Err(Error::Numerical(format!("non-finite matrix entry {z}")));
        }
        Ok(ComplexMatrix(m))
    }

    /// Wraps without the finiteness check; for results of internal arithmetic.
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        ComplexMatrix(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        ComplexMatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    pub fn scale(&self, c: C64) -> Self {
        ComplexMatrix(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn transpose(&self) -> Self {
        ComplexMatrix(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.0.diagonal().iter().sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        self.0.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.0.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}x{}", self.rows(), self.cols())?;
        for r in self.0.row_iter() {
            write!(f, "\n  [")?;
            for (j, z) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:+.6e}{:+.6e}i", z.re, z.im)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, ij: (usize, usize)) -> &C64 {
        &self.0[ij]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

fn require_same_square(a: &ComplexMatrix, b: &ComplexMatrix, what: &str) -> Result<()> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(dim_err(format!(
            "{what} needs equal square operands, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

fn require_square(m: &ComplexMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(dim_err(format!("{what} needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

/// Conjugate transpose.
pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(m.0.adjoint())
}

/// Hilbert–Schmidt inner product `Tr[A† B]`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    require_same_square(a, b, "hs_inner")?;
    Ok(a.0.iter().zip(b.0.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.max_abs() == 0.0 {
        return 0.0;
    }
    m.0.singular_values().iter().copied().fold(0.0, f64::max)
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_same_square(a, b, "commutator")?;
    Ok(ComplexMatrix(&a.0 * &b.0 - &b.0 * &a.0))
}

/// Splits `m` into `((m + m†)/2, (m − m†)/2)`.
pub(crate) fn hermitian_parts(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let adj = m.0.adjoint();
    let half = C64::new(0.5, 0.0);
    (ComplexMatrix((&m.0 + &adj) * half), ComplexMatrix((&m.0 - &adj) * half))
}

/// Checks Hermiticity with `τ = max(1e-10·‖M‖, 1e-14)`.
///
/// The deviation is measured as the Frobenius norm of the anti-Hermitian part
/// (an upper bound on its spectral norm); `‖M‖` is taken from the Hermitian
/// part, which equals `‖M‖` up to the deviation itself.
pub fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    hermitian_eigen_checked(m).map(|_| ())
}

fn hermitian_eigen_checked(m: &ComplexMatrix) -> Result<nalgebra::SymmetricEigen<C64, nalgebra::Dyn>> {
    require_square(m, "Hermitian eigensolver")?;
    let (herm, anti) = hermitian_parts(m);
    let eig = herm.0.symmetric_eigen();
    let scale = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tolerance = (HERMITIAN_RTOL * scale).max(HERMITIAN_ATOL);
    let deviation = anti.frobenius_norm();
    if deviation > tolerance {
        return Err(Error::NotHermitian { deviation, tolerance });
    }
    Ok(eig)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let eig = hermitian_eigen_checked(m)?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Eigen-decomposition `M = U diag(λ) U†` of a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let eig = hermitian_eigen_checked(m)?;
    Ok((eig.eigenvalues.iter().copied().collect(), ComplexMatrix(eig.eigenvectors)))
}

/// Total order used for every reported spectrum: ascending real part, then
/// ascending imaginary part.
pub fn spectrum_order(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Full spectrum of a general square matrix via complex Schur decomposition.
pub fn eigenvalues_general(m: &ComplexMatrix) -> Result<Vec<C64>> {
    require_square(m, "eigenvalues_general")?;
    let n = m.rows();
    let schur = nalgebra::Schur::try_new(m.0.clone(), f64::EPSILON, 1000 * n.max(10))
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut vals: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    vals.sort_by(spectrum_order);
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap()
    }
    fn sy() -> ComplexMatrix {
        ComplexMatrix::from_row_major(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }
    fn sz() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1., 0., 0., -1.]).unwrap()
    }
    fn lowering() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0., 0., 1., 0.]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_shapes_and_values() {
        assert!(matches!(ComplexMatrix::from_real(2, 2, &[1., 2., 3.]), Err(Error::Dimension(_))));
        assert!(matches!(ComplexMatrix::from_real(0, 2, &[]), Err(Error::Dimension(_))));
        assert!(matches!(ComplexMatrix::from_real(1, 1, &[f64::NAN]), Err(Error::Numerical(_))));
        assert!(matches!(
            ComplexMatrix::from_rows(&[vec![c(1., 0.)], vec![c(1., 0.), c(2., 0.)]]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn row_major_layout() {
        let m = ComplexMatrix::from_real(2, 3, &[1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(m[(0, 2)], c(3., 0.));
        assert_eq!(m[(1, 0)], c(4., 0.));
        assert_eq!(m.to_row_major().iter().map(|z| z.re).collect::<Vec<_>>(), vec![1., 2., 3., 4., 5., 6.]);
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(dagger(&ComplexMatrix::identity(2)), ComplexMatrix::identity(2));
        assert_eq!(dagger(&sy()), sy());
        assert_eq!(dagger(&lowering()), ComplexMatrix::from_real(2, 2, &[0., 1., 0., 0.]).unwrap());
    }

    #[test]
    fn hs_inner_examples() {
        assert_eq!(hs_inner(&sx(), &sx()).unwrap(), c(2., 0.));
        assert_eq!(hs_inner(&sx(), &sz()).unwrap(), c(0., 0.));
        assert_eq!(hs_inner(&ComplexMatrix::identity(2), &lowering()).unwrap(), c(0., 0.));
        assert!(matches!(hs_inner(&sx(), &ComplexMatrix::identity(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(hs_norm(&ComplexMatrix::zeros(2, 2)), 0.0);
        assert!((hs_norm(&sz()) - 2f64.sqrt()).abs() < 1e-15);
        for d in 1..6 {
            assert!((hs_norm(&ComplexMatrix::identity(d)) - (d as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&ComplexMatrix::identity(4)) - 1.0).abs() < 1e-14);
        let dephasing =
            ComplexMatrix::from_real(4, 4, &[0., 0., 0., 0., 0., -2., 0., 0., 0., 0., -2., 0., 0., 0., 0., 0.])
                .unwrap();
        assert!((spectral_norm(&dephasing) - 2.0).abs() < 1e-14);
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn hermitian_eigenvalue_examples() {
        assert_eq!(hermitian_eigenvalues(&sz()).unwrap(), vec![-1., 1.]);
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix::identity(2)).unwrap(), vec![1., 1.]);
        let dephasing = ComplexMatrix::from_diagonal(&[c(0., 0.), c(-2., 0.), c(-2., 0.), c(0., 0.)]);
        let vals = hermitian_eigenvalues(&dephasing).unwrap();
        for (v, e) in vals.iter().zip([-2., -2., 0., 0.]) {
            assert!((v - e).abs() < 1e-14);
        }
        assert!(matches!(hermitian_eigenvalues(&lowering()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn hermitian_tolerance_is_relative_with_floor() {
        let big = sz().scale_real(1e6);
        let mut perturbed = big.clone().into_inner();
        perturbed[(0, 1)] += c(1e-6, 0.0);
        assert!(check_hermitian(&ComplexMatrix::wrap(perturbed)).is_ok());
        let mut tiny = ComplexMatrix::zeros(2, 2).into_inner();
        tiny[(0, 1)] = c(1e-13, 0.0);
        assert!(check_hermitian(&ComplexMatrix::wrap(tiny)).is_err());
    }

    #[test]
    fn general_eigenvalue_examples() {
        let d = ComplexMatrix::from_diagonal(&[c(3., 1.), c(-1., 0.)]);
        assert_eq!(eigenvalues_general(&d).unwrap(), vec![c(-1., 0.), c(3., 1.)]);
        let nil = lowering();
        for z in eigenvalues_general(&nil).unwrap() {
            assert!(z.norm() < 1e-15);
        }
        let rect = ComplexMatrix::from_real(1, 2, &[1., 2.]).unwrap();
        assert!(matches!(eigenvalues_general(&rect), Err(Error::Dimension(_))));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(&sx(), &sx()).unwrap(), ComplexMatrix::zeros(2, 2));
        let xy = commutator(&sx(), &sy()).unwrap();
        assert!((&xy - &sz().scale(c(0., 2.))).max_abs() < 1e-15);
        assert!(matches!(commutator(&sx(), &ComplexMatrix::identity(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn kron_layout() {
        let k = ComplexMatrix::identity(2).kron(&sz());
        assert_eq!(k, ComplexMatrix::from_diagonal(&[c(1., 0.), c(-1., 0.), c(1., 0.), c(-1., 0.)]));
    }
}
