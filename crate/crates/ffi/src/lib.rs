//! C ABI over the `lindscope` library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`LsStatus`]; on failure the message is available from
//! [`ls_last_error`] on the same thread until the next failing call.
//! Matrices are passed as separate real and imaginary arrays in row-major
//! order.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use lindscope::dynamics::{self, AmplificationSeries, TimeGrid};
use lindscope::metrics::{self, Regime};
use lindscope::superop;
use lindscope::{cli, ComplexMatrix, Error, LindbladModel, RegimeThresholds, Superoperator, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidString = 2,
    Dimension = 3,
    NotHermitian = 4,
    Numerical = 5,
    Range = 6,
    Model = 7,
    Config = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsRegime {
    Hamiltonian = 0,
    NormalDissipative = 1,
    WeaklyNonnormal = 2,
    Crossover = 3,
    StronglyNonnormal = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsSeriesColumn {
    Time = 0,
    PropNorm = 1,
    APaper = 2,
    ASpectral = 3,
    GronwallEnv = 4,
    AppgEnv = 5,
}

/// `kappa` is NaN and `kappa_defined` false when the generator has no
/// dissipative part.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsMetrics {
    pub delta: f64,
    pub eta: f64,
    pub nd_norm: f64,
    pub kappa: f64,
    pub kappa_defined: bool,
    pub bound_margin: f64,
    pub generator_norm: f64,
    pub regime: LsRegime,
}

pub struct LsModel(LindbladModel);

pub struct LsSuperop(Superoperator);

pub struct LsSeries(AmplificationSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Dimension(_) => LsStatus::Dimension,
            Error::NotHermitian { .. } => LsStatus::NotHermitian,
            Error::Numerical(_) => LsStatus::Numerical,
            Error::Range(_) => LsStatus::Range,
            Error::Model(_) => LsStatus::Model,
            Error::Config(_) => LsStatus::Config,
            Error::Io(_) => LsStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LsStatus::NullPointer, format!("{what} is null"))
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            LsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(LsStatus::InvalidString, format!("{what} is not valid UTF-8: {e}")))
}

unsafe fn read_matrix(re: *const f64, im: *const f64, n: usize, what: &str) -> Result<ComplexMatrix, Failure> {
    if re.is_null() {
        return Err(null(what));
    }
    let re = slice::from_raw_parts(re, n * n);
    let im = if im.is_null() { None } else { Some(slice::from_raw_parts(im, n * n)) };
    let entries = (0..n * n).map(|k| C64::new(re[k], im.map_or(0.0, |v| v[k]))).collect();
    Ok(ComplexMatrix::from_row_major(n, n, entries)?)
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    let slot = out_ptr(out, "output handle")?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ls_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated regime name.
#[no_mangle]
pub extern "C" fn ls_regime_name(regime: LsRegime) -> *const c_char {
    let name: &'static CStr = match regime {
        LsRegime::Hamiltonian => c"Hamiltonian",
        LsRegime::NormalDissipative => c"NormalDissipative",
        LsRegime::WeaklyNonnormal => c"WeaklyNonnormal",
        LsRegime::Crossover => c"Crossover",
        LsRegime::StronglyNonnormal => c"StronglyNonnormal",
    };
    name.as_ptr()
}

/// Builds a model from a JSON document in either the named or the explicit
/// form accepted by the command-line tool.
#[no_mangle]
pub unsafe extern "C" fn ls_model_from_json(json: *const c_char, out: *mut *mut LsModel) -> LsStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        write_out(out, LsModel(cli::parse_model_str(text)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ls_model_from_file(path: *const c_char, out: *mut *mut LsModel) -> LsStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        write_out(out, LsModel(cli::parse_model_file(Path::new(path))?))
    })
}

/// `h_re`/`h_im` hold `dim*dim` entries; `jumps_re`/`jumps_im` hold
/// `n_jumps` consecutive `dim*dim` blocks. Any `*_im` may be null for a
/// real matrix, and `jumps_re` may be null when `n_jumps` is zero.
#[no_mangle]
pub unsafe extern "C" fn ls_model_from_matrices(
    dim: usize,
    h_re: *const f64,
    h_im: *const f64,
    n_jumps: usize,
    jumps_re: *const f64,
    jumps_im: *const f64,
    out: *mut *mut LsModel,
) -> LsStatus {
    guard(|| {
        if dim == 0 || dim > superop::dim_cap() {
            return Err(Failure(LsStatus::Dimension, format!("dim must be in 1..={}, got {dim}", superop::dim_cap())));
        }
        let h = read_matrix(h_re, h_im, dim, "h_re")?;
        let block = dim * dim;
        let mut jumps = Vec::with_capacity(n_jumps);
        for k in 0..n_jumps {
            let im = if jumps_im.is_null() { ptr::null() } else { jumps_im.add(k * block) };
            if jumps_re.is_null() {
                return Err(null("jumps_re"));
            }
            jumps.push(read_matrix(jumps_re.add(k * block), im, dim, "jumps_re")?);
        }
        write_out(out, LsModel(LindbladModel::new(h, jumps, "ffi")?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ls_model_dim(model: *const LsModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.dim())
}

#[no_mangle]
pub unsafe extern "C" fn ls_model_free(model: *mut LsModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ls_liouvillian(model: *const LsModel, out: *mut *mut LsSuperop) -> LsStatus {
    guard(|| {
        let model = deref(model, "model")?;
        write_out(out, LsSuperop(superop::liouvillian(&model.0)))
    })
}

/// `e^{tL}`.
#[no_mangle]
pub unsafe extern "C" fn ls_propagator(op: *const LsSuperop, t: f64, out: *mut *mut LsSuperop) -> LsStatus {
    guard(|| {
        let op = deref(op, "superoperator")?;
        write_out(out, LsSuperop(dynamics::propagator(&op.0, t)?))
    })
}

/// Hilbert-space dimension `d`; the matrix is `d² × d²`.
#[no_mangle]
pub unsafe extern "C" fn ls_superop_dim(op: *const LsSuperop) -> usize {
    op.as_ref().map_or(0, |s| s.0.dim())
}

#[no_mangle]
pub unsafe extern "C" fn ls_superop_norm(op: *const LsSuperop, out: *mut f64) -> LsStatus {
    guard(|| {
        let op = deref(op, "superoperator")?;
        *out_ptr(out, "out")? = lindscope::linalg::spectral_norm(op.0.matrix());
        Ok(())
    })
}

/// Copies the `d⁴` entries in row-major order, column-stacking convention.
/// Either output may be null.
#[no_mangle]
pub unsafe extern "C" fn ls_superop_entries(op: *const LsSuperop, re: *mut f64, im: *mut f64, len: usize) -> LsStatus {
    guard(|| {
        let op = deref(op, "superoperator")?;
        let entries = op.0.matrix().to_row_major();
        if len < entries.len() {
            return Err(Failure(LsStatus::BufferTooSmall, format!("need {} entries, got {len}", entries.len())));
        }
        for (k, z) in entries.iter().enumerate() {
            if !re.is_null() {
                *re.add(k) = z.re;
            }
            if !im.is_null() {
                *im.add(k) = z.im;
            }
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ls_superop_free(op: *mut LsSuperop) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ls_analyze(
    op: *const LsSuperop,
    kappa_lo: f64,
    kappa_hi: f64,
    out: *mut LsMetrics,
) -> LsStatus {
    guard(|| {
        let op = deref(op, "superoperator")?;
        let out = out_ptr(out, "out")?;
        let m = metrics::analyze(&op.0, &RegimeThresholds::new(kappa_lo, kappa_hi)?);
        *out = LsMetrics {
            delta: m.delta,
            eta: m.eta,
            nd_norm: m.nd_norm,
            kappa: m.kappa.unwrap_or(f64::NAN),
            kappa_defined: m.kappa.is_some(),
            bound_margin: m.bound_margin,
            generator_norm: m.generator_norm,
            regime: match m.regime {
                Regime::Hamiltonian => LsRegime::Hamiltonian,
                Regime::NormalDissipative => LsRegime::NormalDissipative,
                Regime::WeaklyNonnormal => LsRegime::WeaklyNonnormal,
                Regime::Crossover => LsRegime::Crossover,
                Regime::StronglyNonnormal => LsRegime::StronglyNonnormal,
            },
        };
        Ok(())
    })
}

/// Amplification series on `steps + 1` uniform points of
/// `[t_start, t_end]`. With `steps == 0` the default grid for the generator
/// is used and the interval is ignored.
#[no_mangle]
pub unsafe extern "C" fn ls_series(
    op: *const LsSuperop,
    t_start: f64,
    t_end: f64,
    steps: usize,
    out: *mut *mut LsSeries,
) -> LsStatus {
    guard(|| {
        let op = deref(op, "superoperator")?;
        let grid = if steps == 0 {
            TimeGrid::default_for(&metrics::analyze(&op.0, &RegimeThresholds::default()))
        } else {
            TimeGrid::new(t_start, t_end, steps)?
        };
        write_out(out, LsSeries(dynamics::amplification_series(&op.0, &grid)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ls_series_len(series: *const LsSeries) -> usize {
    series.as_ref().map_or(0, |s| s.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn ls_series_column(
    series: *const LsSeries,
    column: LsSeriesColumn,
    out: *mut f64,
    len: usize,
) -> LsStatus {
    guard(|| {
        let s = &deref(series, "series")?.0;
        let data = match column {
            LsSeriesColumn::Time => &s.times,
            LsSeriesColumn::PropNorm => &s.prop_norm,
            LsSeriesColumn::APaper => &s.a_paper,
            LsSeriesColumn::ASpectral => &s.a_spectral,
            LsSeriesColumn::GronwallEnv => &s.gronwall_env,
            LsSeriesColumn::AppgEnv => &s.appg_env,
        };
        if out.is_null() {
            return Err(null("out"));
        }
        if len < data.len() {
            return Err(Failure(LsStatus::BufferTooSmall, format!("need {} entries, got {len}", data.len())));
        }
        slice::from_raw_parts_mut(out, data.len()).copy_from_slice(data);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ls_series_free(series: *mut LsSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}
