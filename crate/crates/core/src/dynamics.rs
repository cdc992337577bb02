//! Propagator norms and the envelopes that bound them.
//!
//! `‖e^{tL}‖` is always computed exactly (dense exponential plus SVD); no
//! norm estimators are used. Grid points are independent and are evaluated
//! in parallel, with results collected in grid order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues_general, hs_norm, matrix_exp, matrix_exp_hermitian, spectral_norm, ComplexMatrix, EXP_NORM_LIMIT,
};
use crate::metrics::{analyze, Regime, RegimeThresholds, StructuralMetrics};
use crate::superop::{apply, decompose, Superoperator};

pub const DEFAULT_GRID_POINTS: usize = 201;
pub const MAX_GRID_STEPS: usize = 1_000_000;

/// Relative slack on the truncated interaction-picture bound check.
pub const APPG_SLACK: f64 = 1e-9;

/// Uniform grid `t_start + k·(t_end − t_start)/steps`, `k = 0..=steps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_start < 0.0 || t_end <= t_start {
            return Err(Error::Config(format!("time grid needs 0 <= t_start < t_end, got [{t_start}, {t_end}]")));
        }
        if steps == 0 || steps > MAX_GRID_STEPS {
            return Err(Error::Config(format!("time grid needs 1..={MAX_GRID_STEPS} steps, got {steps}")));
        }
        Ok(TimeGrid { t_start, t_end, steps })
    }

    /// 201 points on `[0, 5/δ]` for dissipative generators, else on
    /// `[0, 10/‖L‖]`, or `[0, 10]` for the zero generator.
    pub fn default_for(metrics: &StructuralMetrics) -> Self {
        let t_end = if metrics.delta > metrics.tau_zero() {
            5.0 / metrics.delta
        } else if metrics.generator_norm > 0.0 {
            10.0 / metrics.generator_norm
        } else {
            10.0
        };
        TimeGrid { t_start: 0.0, t_end, steps: DEFAULT_GRID_POINTS - 1 }
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..=self.steps).map(|k| if k == self.steps { self.t_end } else { self.t_start + k as f64 * h }).collect()
    }

    /// Same interval with twice as many steps.
    pub fn refined(&self) -> Self {
        TimeGrid { steps: self.steps * 2, ..*self }
    }
}

fn check_range(t: f64, generator_norm: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Range(format!("time must be finite and >= 0, got {t}")));
    }
    if t * generator_norm > EXP_NORM_LIMIT {
        return Err(Error::Range(format!(
            "t·‖L‖ = {:.6e} exceeds {EXP_NORM_LIMIT}; subdivide the interval",
            t * generator_norm
        )));
    }
    Ok(())
}

/// `e^{tL}`, for `t·‖L‖ ≤ 50`.
pub fn propagator(s: &Superoperator, t: f64) -> Result<Superoperator> {
    check_range(t, spectral_norm(s.matrix()))?;
    Superoperator::from_matrix(s.dim(), matrix_exp(&s.matrix().scale_real(t))?)
}

/// Largest real part of the spectrum.
pub fn spectral_abscissa(s: &Superoperator) -> Result<f64> {
    Ok(eigenvalues_general(s.matrix())?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// `‖e^{tL}‖` and the reference envelopes on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplificationSeries {
    pub times: Vec<f64>,
    pub prop_norm: Vec<f64>,
    /// `‖e^{tL}‖ e^{−tδ}`.
    pub a_paper: Vec<f64>,
    /// `‖e^{tL}‖ e^{−tα}`, `α` the spectral abscissa.
    pub a_spectral: Vec<f64>,
    /// `e^{tδ}`.
    pub gronwall_env: Vec<f64>,
    /// `e^{tδ} exp(t‖L_nd‖ + t²η/4)`.
    pub appg_env: Vec<f64>,
    pub appg_satisfied: Vec<bool>,
    pub delta: f64,
    pub alpha: f64,
    pub nd_norm: f64,
    pub eta: f64,
}

impl AmplificationSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_a_spectral(&self) -> f64 {
        self.a_spectral.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn appg_bound(delta: f64, nd_norm: f64, eta: f64, t: f64) -> f64 {
    (t * delta).exp() * (t * nd_norm + 0.25 * t * t * eta).exp()
}

pub fn amplification_series(s: &Superoperator, grid: &TimeGrid) -> Result<AmplificationSeries> {
    let m = analyze(s, &RegimeThresholds::default());
    check_range(grid.t_end(), m.generator_norm)?;
    let alpha = spectral_abscissa(s)?;
    let times = grid.times();
    let prop_norm = times
        .par_iter()
        .map(|&t| matrix_exp(&s.matrix().scale_real(t)).map(|e| spectral_norm(&e)))
        .collect::<Result<Vec<f64>>>()?;

    let a_paper = times.iter().zip(&prop_norm).map(|(t, p)| p * (-t * m.delta).exp()).collect();
    let a_spectral = times.iter().zip(&prop_norm).map(|(t, p)| p * (-t * alpha).exp()).collect();
    let gronwall_env = times.iter().map(|t| (t * m.delta).exp()).collect();
    let appg_env: Vec<f64> = times.iter().map(|&t| appg_bound(m.delta, m.nd_norm, m.eta, t)).collect();
    let appg_satisfied = prop_norm.iter().zip(&appg_env).map(|(p, b)| *p <= b * (1.0 + APPG_SLACK)).collect();
    Ok(AmplificationSeries {
        times,
        prop_norm,
        a_paper,
        a_spectral,
        gronwall_env,
        appg_env,
        appg_satisfied,
        delta: m.delta,
        alpha,
        nd_norm: m.nd_norm,
        eta: m.eta,
    })
}

/// Applies `e^{tL}` to `rho`, splitting `t` into pieces inside the
/// exponential's safe range.
fn evolve(s: &Superoperator, rho: &ComplexMatrix, t: f64, generator_norm: f64) -> Result<ComplexMatrix> {
    if t == 0.0 {
        return Ok(rho.clone());
    }
    evolve_step(s, t, generator_norm)?(rho)
}

/// Worst-case slack in `‖ρ(t)‖_HS ≤ e^{tδ}‖ρ(0)‖_HS` over a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GronwallReport {
    /// `min_t [e^{tδ}‖ρ(0)‖ − ‖ρ(t)‖]`.
    pub min_margin: f64,
    /// Same, divided by `e^{tδ}‖ρ(0)‖` before taking the minimum.
    pub min_relative_margin: f64,
}

pub fn gronwall_check(s: &Superoperator, rho0: &ComplexMatrix, grid: &TimeGrid) -> Result<GronwallReport> {
    let norm0 = hs_norm(rho0);
    if norm0 == 0.0 {
        return Err(Error::Config("gronwall_check needs a nonzero initial operator".into()));
    }
    let generator_norm = spectral_norm(s.matrix());
    let delta = spectral_norm(decompose(s).dissipative.matrix());
    let step = evolve_step(s, grid.spacing(), generator_norm)?;
    let mut rho = evolve(s, rho0, grid.t_start(), generator_norm)?;
    let mut report = GronwallReport { min_margin: f64::INFINITY, min_relative_margin: f64::INFINITY };
    for (k, t) in grid.times().into_iter().enumerate() {
        if k > 0 {
            rho = step(&rho)?;
        }
        let envelope = (t * delta).exp() * norm0;
        let margin = envelope - hs_norm(&rho);
        report.min_margin = report.min_margin.min(margin);
        report.min_relative_margin = report.min_relative_margin.min(margin / envelope);
    }
    Ok(report)
}

fn evolve_step<'a>(
    s: &'a Superoperator,
    h: f64,
    generator_norm: f64,
) -> Result<impl Fn(&ComplexMatrix) -> Result<ComplexMatrix> + 'a> {
    let pieces = ((h * generator_norm) / (0.5 * EXP_NORM_LIMIT)).ceil().max(1.0) as usize;
    let one = Superoperator::from_matrix(s.dim(), matrix_exp(&s.matrix().scale_real(h / pieces as f64))?)?;
    Ok(move |rho: &ComplexMatrix| {
        let mut out = rho.clone();
        for _ in 0..pieces {
            out = apply(&one, &out)?;
        }
        Ok(out)
    })
}

/// `‖e^{tL} − e^{tL_d} e^{tL_nd}‖`; vanishes for normal generators.
pub fn normal_factorization_residual(s: &Superoperator, t: f64) -> Result<f64> {
    check_range(t, spectral_norm(s.matrix()))?;
    let parts = decompose(s);
    let full = matrix_exp(&s.matrix().scale_real(t))?;
    let dissipative = matrix_exp_hermitian(&parts.dissipative.matrix().scale_real(t))?;
    let rotation = matrix_exp(&parts.nondissipative.matrix().scale_real(t))?;
    Ok(spectral_norm(&(&full - &(&dissipative * &rotation))))
}

/// `ε·‖e^{tL}‖`, the computable bound on the propagated state error.
pub fn error_amplification(s: &Superoperator, t: f64, eps: f64) -> Result<f64> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Config(format!("eps must be finite and >= 0, got {eps}")));
    }
    Ok(eps * spectral_norm(propagator(s, t)?.matrix()))
}

/// Truncated interaction-picture envelope at one time. Diagnostic only:
/// the envelope drops higher nested commutators, so `satisfied` may be false.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedBound {
    pub bound: f64,
    pub prop_norm: f64,
    pub satisfied: bool,
}

pub fn truncated_appg_bound(s: &Superoperator, t: f64) -> Result<TruncatedBound> {
    let prop_norm = spectral_norm(propagator(s, t)?.matrix());
    let m = analyze(s, &RegimeThresholds::default());
    let bound = appg_bound(m.delta, m.nd_norm, m.eta, t);
    Ok(TruncatedBound { bound, prop_norm, satisfied: prop_norm <= bound * (1.0 + APPG_SLACK) })
}

/// Heuristic simulation cost with unit big-O constants and natural logs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostEstimate {
    /// `t·rate + ln(1/ε*)`, rate = `δ`, or `‖L‖/2` when `δ ≈ 0`.
    pub base_cost: f64,
    /// `κ` when strongly nonnormal, `1` in the crossover, else `0`.
    pub kappa_overhead: f64,
}

pub fn cost_estimate(s: &Superoperator, t: f64, eps_star: f64, thresholds: &RegimeThresholds) -> Result<CostEstimate> {
    if !(eps_star > 0.0 && eps_star < 1.0) {
        return Err(Error::Config(format!("eps_star must lie in (0, 1), got {eps_star}")));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Config(format!("time must be finite and >= 0, got {t}")));
    }
    let m = analyze(s, thresholds);
    let rate = if m.delta > m.tau_zero() { m.delta } else { 0.5 * m.generator_norm };
    let kappa_overhead = match m.regime {
        Regime::StronglyNonnormal => m.kappa.unwrap_or(0.0),
        Regime::Crossover => 1.0,
        Regime::Hamiltonian | Regime::NormalDissipative | Regime::WeaklyNonnormal => 0.0,
    };
    Ok(CostEstimate { base_cost: t * rate + (1.0 / eps_star).ln(), kappa_overhead })
}
