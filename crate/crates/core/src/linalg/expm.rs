//! Matrix exponential.
//!
//! General matrices use scaling and squaring with diagonal Padé approximants
//! of degree 3, 5, 7, 9 or 13, chosen from the 1-norm (Higham, "The scaling
//! and squaring method for the matrix exponential revisited", 2005).
//! Hermitian matrices go through the eigendecomposition instead.

use nalgebra::DMatrix;

use super::{hermitian_eigen, spectral_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Largest spectral norm accepted by [`matrix_exp`].
pub const EXP_NORM_LIMIT: f64 = 50.0;

#[allow(clippy::excessive_precision)]
const THETA: [(usize, f64); 4] =
    [(3, 1.495585217958292e-2), (5, 2.539398330063230e-1), (7, 9.504178996162932e-1), (9, 2.097847961257068e0)];
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120., 60., 12., 1.];
const PADE_5: [f64; 6] = [30240., 15120., 3360., 420., 30., 1.];
const PADE_7: [f64; 8] = [17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.];
const PADE_9: [f64; 10] =
    [17643225600., 8821612800., 2075673600., 302702400., 30270240., 2162160., 110880., 3960., 90., 1.];
const PADE_13: [f64; 14] = [
    64764752532480000.,
    32382376266240000.,
    7771770303897600.,
    1187353796428800.,
    129060195264000.,
    10559470521600.,
    670442572800.,
    33522128640.,
    1323241920.,
    40840800.,
    960960.,
    16380.,
    182.,
    1.,
];

type M = DMatrix<C64>;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `exp(M)` for a general square matrix with `‖M‖₂ ≤ 50`.
pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("matrix_exp needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let bound = (m.norm_one() * m.norm_inf()).sqrt();
    if bound > EXP_NORM_LIMIT {
        let norm = spectral_norm(m);
        if norm > EXP_NORM_LIMIT {
            return Err(Error::Range(format!(
                "matrix_exp argument has spectral norm {norm:.6e} > {EXP_NORM_LIMIT}; subdivide the time step"
            )));
        }
    }
    let a = m.as_inner();
    let n = a.nrows();
    let norm1 = m.norm_one();
    let ident = M::identity(n, n);

    for (order, theta) in THETA {
        if norm1 <= theta {
            let (u, v) = pade_low(a, &ident, order);
            return solve(&u, &v).map(ComplexMatrix::wrap);
        }
    }

    let s = if norm1 > THETA_13 { (norm1 / THETA_13).log2().ceil() as i32 } else { 0 };
    let scaled = a * re(2f64.powi(-s));
    let (u, v) = pade_13(&scaled, &ident);
    let mut x = solve(&u, &v)?;
    for _ in 0..s {
        x = &x * &x;
    }
    let out = ComplexMatrix::wrap(x);
    if !out.is_finite() {
        return Err(Error::Range("matrix_exp overflowed".into()));
    }
    Ok(out)
}

fn pade_low(a: &M, ident: &M, order: usize) -> (M, M) {
    let b: &[f64] = match order {
        3 => &PADE_3,
        5 => &PADE_5,
        7 => &PADE_7,
        9 => &PADE_9,
        _ => unreachable!("unsupported Padé order {order}"),
    };
    let a2 = a * a;
    let mut power = ident.clone();
    let mut odd = ident * re(b[1]);
    let mut even = ident * re(b[0]);
    for k in 1..=order / 2 {
        power = &power * &a2;
        even += &power * re(b[2 * k]);
        odd += &power * re(b[2 * k + 1]);
    }
    (a * odd, even)
}

fn pade_13(a: &M, ident: &M) -> (M, M) {
    let b = &PADE_13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]);
    let u = a * (&a6 * inner_u + &a6 * re(b[7]) + &a4 * re(b[5]) + &a2 * re(b[3]) + ident * re(b[1]));
    let inner_v = &a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]);
    let v = &a6 * inner_v + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + ident * re(b[0]);
    (u, v)
}

/// Solves `(V − U) X = V + U`.
fn solve(u: &M, v: &M) -> Result<M> {
    let p = v + u;
    let q = v - u;
    q.lu().solve(&p).ok_or_else(|| Error::Numerical("singular Padé denominator".into()))
}

/// `exp(M)` for Hermitian `M` via `U diag(e^λ) U†`.
pub fn matrix_exp_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = hermitian_eigen(m)?;
    let v = vecs.as_inner();
    let mut scaled = v.clone();
    for (j, lambda) in vals.iter().enumerate() {
        let e = re(lambda.exp());
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= e);
    }
    let out = ComplexMatrix::wrap(scaled * v.adjoint());
    if !out.is_finite() {
        return Err(Error::Range("matrix_exp_hermitian overflowed".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, hermitian_parts};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        spectral_norm(&(a - b)) / spectral_norm(b).max(1e-300)
    }

    /// Plain Taylor series summed until terms vanish, with scaling and
    /// squaring so that the terms stay small.
    fn taylor_exp(m: &ComplexMatrix) -> ComplexMatrix {
        let s = (m.frobenius_norm().max(1.0).log2().ceil() as i32).max(0) + 2;
        let a = m.scale_real(2f64.powi(-s));
        let n = m.rows();
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..60 {
            term = (&term * &a).scale_real(1.0 / k as f64);
            sum = &sum + &term;
            if term.max_abs() < 1e-300 {
                break;
            }
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    fn lcg_matrix(n: usize, seed: u64, scale: f64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, n, |_, _| c(next() * scale, next() * scale))
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(matrix_exp(&ComplexMatrix::zeros(3, 3)).unwrap(), ComplexMatrix::identity(3));
    }

    #[test]
    fn exp_of_diagonal() {
        let d = ComplexMatrix::from_diagonal(&[c(1.5, 0.), c(-0.25, 2.0)]);
        let e = matrix_exp(&d).unwrap();
        assert!((e[(0, 0)] - c(1.5, 0.).exp()).norm() < 1e-14 * 1.5f64.exp());
        assert!((e[(1, 1)] - c(-0.25, 2.0).exp()).norm() < 1e-15);
        assert_eq!(e[(0, 1)], c(0., 0.));
    }

    #[test]
    fn rotation_identity_matches_taylor_oracle() {
        let sx = ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap();
        let arg = sx.scale(c(0., std::f64::consts::FRAC_PI_2));
        let oracle = taylor_exp(&arg);
        let expected = sx.scale(c(0., 1.));
        assert!(rel_err(&oracle, &expected) < 1e-14);
        assert!(rel_err(&matrix_exp(&arg).unwrap(), &expected) < 1e-14);
    }

    #[test]
    fn agrees_with_taylor_across_pade_orders() {
        for (i, scale) in [1e-3, 5e-3, 0.05, 0.2, 0.5, 1.0, 4.0, 8.0].iter().enumerate() {
            let m = lcg_matrix(6, i as u64, *scale);
            let err = rel_err(&matrix_exp(&m).unwrap(), &taylor_exp(&m));
            assert!(err < 1e-12, "scale {scale}: rel err {err:e}");
        }
    }

    #[test]
    fn accurate_at_the_range_limit() {
        // Anti-Hermitian generator: exp is unitary, norm exactly 1.
        let m = lcg_matrix(5, 99, 1.0);
        let (_, anti) = hermitian_parts(&m);
        let anti = anti.scale_real(45.0 / spectral_norm(&anti));
        let e = matrix_exp(&anti).unwrap();
        let defect = spectral_norm(&(&(&dagger(&e) * &e) - &ComplexMatrix::identity(5)));
        assert!(defect < 1e-10, "unitarity defect {defect:e}");
    }

    #[test]
    fn rejects_norm_above_limit() {
        let m = ComplexMatrix::identity(2).scale_real(60.0);
        assert!(matches!(matrix_exp(&m), Err(Error::Range(_))));
        let rect = ComplexMatrix::from_real(1, 2, &[0., 0.]).unwrap();
        assert!(matches!(matrix_exp(&rect), Err(Error::Dimension(_))));
    }

    #[test]
    fn group_property() {
        for seed in 0..100 {
            let m = lcg_matrix(8, seed, 1.0);
            let m = m.scale_real(2.0 / spectral_norm(&m) * ((seed % 10) as f64 + 1.0) / 10.0);
            let e = matrix_exp(&m).unwrap();
            let e2 = matrix_exp(&m.scale_real(2.0)).unwrap();
            assert!(spectral_norm(&(&(&e * &e) - &e2)) <= 1e-8);
        }
    }

    #[test]
    fn hermitian_path_agrees_with_pade() {
        for seed in 0..10 {
            let (h, _) = hermitian_parts(&lcg_matrix(6, seed + 500, 1.5));
            let err = rel_err(&matrix_exp_hermitian(&h).unwrap(), &matrix_exp(&h).unwrap());
            assert!(err < 1e-12, "rel err {err:e}");
        }
    }
}
