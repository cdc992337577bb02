//! Seeded random operators and models for property sweeps.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{dagger, ComplexMatrix, C64};
use crate::superop::LindbladModel;

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let a = gaussian(rng, dim, dim);
    (&a + &dagger(&a)).scale_real(0.5)
}

pub fn traceless_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = hermitian(rng, dim);
    let shift = h.trace().re / dim as f64;
    &h - &ComplexMatrix::identity(dim).scale_real(shift)
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let qr = gaussian(rng, dim, dim).into_inner().qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    ComplexMatrix::from_inner(q).expect("finite")
}

/// Random Hermitian density-like operator normalised to unit HS norm.
pub fn hermitian_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = hermitian(rng, dim);
    let n = h.frobenius_norm();
    h.scale_real(1.0 / n)
}

/// Random Hermitian Hamiltonian and `jumps` Gaussian jump operators.
pub fn lindblad_model<R: Rng + ?Sized>(rng: &mut R, dim: usize, jumps: usize) -> Result<LindbladModel> {
    let h = hermitian(rng, dim);
    let ls = (0..jumps).map(|_| gaussian(rng, dim, dim)).collect();
    LindbladModel::new(h, ls, format!("random(d={dim}, jumps={jumps})"))
}

/// Model with `d ∈ {2,3,4}` and 0–3 jumps, the shape used by the sweeps.
pub fn sweep_model<R: Rng + ?Sized>(rng: &mut R) -> Result<LindbladModel> {
    let dim = rng.random_range(2..=4);
    let jumps = rng.random_range(0..=3);
    lindblad_model(rng, dim, jumps)
}
