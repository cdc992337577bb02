//! Reference computations for the integration tests. None of these call the
//! library's SVD, eigen or exponential routines.
#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use lindscope::linalg::dagger;
use lindscope::{ComplexMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `L(ρ)` evaluated directly in operator space.
pub fn lindblad_action(h: &ComplexMatrix, jumps: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let minus_i = c(0.0, -1.0);
    let mut out = (&(h * rho) - &(rho * h)).scale(minus_i);
    for l in jumps {
        let ld = dagger(l);
        let ldl = &ld * l;
        let sandwich = &(l * rho) * &ld;
        let anti = &(&ldl * rho) + &(rho * &ldl);
        out = &out + &(&sandwich - &anti.scale_real(0.5));
    }
    out
}

/// Superoperator matrix built column by column from the action on matrix
/// units, with column-stacking index `i + j·d`.
pub fn liouvillian_by_action(h: &ComplexMatrix, jumps: &[ComplexMatrix]) -> ComplexMatrix {
    let d = h.rows();
    let mut cols = vec![vec![c(0.0, 0.0); d * d]; d * d];
    for j in 0..d {
        for i in 0..d {
            let unit = ComplexMatrix::from_fn(d, d, |a, b| if (a, b) == (i, j) { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let img = lindblad_action(h, jumps, &unit);
            for q in 0..d {
                for p in 0..d {
                    cols[i + j * d][p + q * d] = img[(p, q)];
                }
            }
        }
    }
    ComplexMatrix::from_fn(d * d, d * d, |r, k| cols[k][r])
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-32 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix through its real `2n × 2n` embedding
/// `[[Re, −Im], [Im, Re]]`, which carries every eigenvalue twice.
pub fn hermitian_eigenvalues_oracle(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut a = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    jacobi_eigenvalues(a).into_iter().step_by(2).collect()
}

/// Largest singular value as `sqrt(λ_max(M†M))`.
pub fn spectral_norm_oracle(m: &ComplexMatrix) -> f64 {
    let gram = &dagger(m) * m;
    hermitian_eigenvalues_oracle(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// `δ`: largest eigenvalue magnitude of the Hermitian part.
pub fn delta_oracle(s: &ComplexMatrix) -> f64 {
    let herm = (s + &dagger(s)).scale_real(0.5);
    hermitian_eigenvalues_oracle(&herm).iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// `η = ‖[S, S†]‖`; the commutator is Hermitian, so its norm is an
/// eigenvalue magnitude.
pub fn eta_oracle(s: &ComplexMatrix) -> f64 {
    let sd = dagger(s);
    let comm = &(s * &sd) - &(&sd * s);
    hermitian_eigenvalues_oracle(&comm).iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Integrates `ρ̇ = L(ρ)` with classical Runge–Kutta.
pub fn rk4(h: &ComplexMatrix, jumps: &[ComplexMatrix], rho: &ComplexMatrix, t: f64, steps: usize) -> ComplexMatrix {
    let dt = t / steps as f64;
    let f = |r: &ComplexMatrix| lindblad_action(h, jumps, r);
    let mut r = rho.clone();
    for _ in 0..steps {
        let k1 = f(&r);
        let k2 = f(&(&r + &k1.scale_real(dt / 2.0)));
        let k3 = f(&(&r + &k2.scale_real(dt / 2.0)));
        let k4 = f(&(&r + &k3.scale_real(dt)));
        let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
        r = &r + &incr.scale_real(dt / 6.0);
    }
    r
}

/// Normalised `n`-qubit Pauli string, site 0 leftmost; `0..4` = I, X, Y, Z.
pub fn pauli_string(codes: &[usize]) -> ComplexMatrix {
    let single = |k: usize| match k {
        0 => ComplexMatrix::from_real(2, 2, &[1., 0., 0., 1.]).unwrap(),
        1 => ComplexMatrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap(),
        2 => ComplexMatrix::from_row_major(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap(),
        _ => ComplexMatrix::from_real(2, 2, &[1., 0., 0., -1.]).unwrap(),
    };
    let mut out = single(codes[0]);
    for &k in &codes[1..] {
        out = out.kron(&single(k));
    }
    let n = out.rows() as f64;
    out.scale_real(1.0 / n.sqrt())
}

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

/// Shipped named model files, sorted by name.
pub fn shipped_models() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(models_dir())
        .expect("models directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}
