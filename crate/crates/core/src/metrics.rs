//! Generator-level structural metrics and regime classification.
//!
//! * dissipative strength `δ = ‖L_d‖`
//! * nonnormality `η = ‖[L, L†]‖`
//! * `κ = η/δ²`, defined only for `δ > τ_zero`
//! * bound margin `2δ‖L_nd‖ − η`
//!
//! All norms are spectral norms of the superoperator matrix, i.e. operator
//! norms induced by the Hilbert–Schmidt inner product. Zero tests are
//! relative to `‖L‖`, so every classification is invariant under rescaling
//! the generator by a positive constant.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{commutator, dagger, eigenvalues_general, spectral_norm, spectrum_order, ComplexMatrix, C64};
use crate::superop::{decompose, liouvillian, LindbladModel, Superoperator};

/// `τ_zero = ZERO_RTOL·‖L‖`, `τ_eta = ZERO_RTOL·‖L‖²`.
pub const ZERO_RTOL: f64 = 1e-10;

/// Tolerance for `Σ L_j†L_j = Γ·I`.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeThresholds {
    pub kappa_lo: f64,
    pub kappa_hi: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds { kappa_lo: 0.1, kappa_hi: 10.0 }
    }
}

impl RegimeThresholds {
    pub fn new(kappa_lo: f64, kappa_hi: f64) -> Result<Self> {
        if !(kappa_lo.is_finite() && kappa_hi.is_finite() && kappa_lo > 0.0 && kappa_lo <= kappa_hi) {
            return Err(Error::Config(format!(
                "regime thresholds need 0 < kappa_lo <= kappa_hi, got {kappa_lo} and {kappa_hi}"
            )));
        }
        Ok(RegimeThresholds { kappa_lo, kappa_hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Hamiltonian,
    NormalDissipative,
    WeaklyNonnormal,
    Crossover,
    StronglyNonnormal,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Hamiltonian => "Hamiltonian",
            Regime::NormalDissipative => "NormalDissipative",
            Regime::WeaklyNonnormal => "WeaklyNonnormal",
            Regime::Crossover => "Crossover",
            Regime::StronglyNonnormal => "StronglyNonnormal",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Regime::Hamiltonian,
            Regime::NormalDissipative,
            Regime::WeaklyNonnormal,
            Regime::Crossover,
            Regime::StronglyNonnormal,
        ]
        .into_iter()
        .find(|r| r.name() == s)
        .ok_or_else(|| Error::Config(format!("unknown regime {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructuralMetrics {
    pub delta: f64,
    pub eta: f64,
    pub nd_norm: f64,
    /// `None` when `δ ≤ τ_zero`.
    pub kappa: Option<f64>,
    /// `2δ‖L_nd‖ − η`, signed.
    pub bound_margin: f64,
    pub regime: Regime,
    /// `‖L‖`, the scale of the zero tolerances.
    pub generator_norm: f64,
}

impl StructuralMetrics {
    pub fn tau_zero(&self) -> f64 {
        ZERO_RTOL * self.generator_norm
    }

    pub fn tau_eta(&self) -> f64 {
        ZERO_RTOL * self.generator_norm * self.generator_norm
    }

    pub fn is_normal(&self) -> bool {
        self.eta <= self.tau_eta()
    }
}

/// `δ(L) = ‖L_d‖`.
pub fn dissipative_strength(s: &Superoperator) -> f64 {
    spectral_norm(decompose(s).dissipative.matrix())
}

/// `η(L) = ‖[L, L†]‖`.
pub fn nonnormality(s: &Superoperator) -> f64 {
    let m = s.matrix();
    spectral_norm(&commutator(m, &dagger(m)).expect("square superoperator"))
}

/// `2‖[L_d, L_nd]‖`; algebraically identical to [`nonnormality`].
pub fn nonnormality_from_parts(s: &Superoperator) -> f64 {
    let parts = decompose(s);
    let c = commutator(parts.dissipative.matrix(), parts.nondissipative.matrix()).expect("square superoperator");
    2.0 * spectral_norm(&c)
}

fn kappa_from(delta: f64, eta: f64, tau_zero: f64) -> Option<f64> {
    (delta > tau_zero).then(|| eta / (delta * delta))
}

/// `κ = η/δ²`, or `None` when `δ ≤ τ_zero`.
pub fn kappa(s: &Superoperator) -> Option<f64> {
    let tau_zero = ZERO_RTOL * spectral_norm(s.matrix());
    kappa_from(dissipative_strength(s), nonnormality(s), tau_zero)
}

/// `2δ‖L_nd‖ − η`.
pub fn bound_check(s: &Superoperator) -> f64 {
    let nd = spectral_norm(decompose(s).nondissipative.matrix());
    2.0 * dissipative_strength(s) * nd - nonnormality(s)
}

/// Hamiltonian, then normal, then the κ bands.
pub fn classify(m: &StructuralMetrics, thresholds: &RegimeThresholds) -> Regime {
    if m.delta <= m.tau_zero() {
        return Regime::Hamiltonian;
    }
    if m.eta <= m.tau_eta() {
        return Regime::NormalDissipative;
    }
    let kappa = m.eta / (m.delta * m.delta);
    if kappa < thresholds.kappa_lo {
        Regime::WeaklyNonnormal
    } else if kappa > thresholds.kappa_hi {
        Regime::StronglyNonnormal
    } else {
        Regime::Crossover
    }
}

/// All metrics for one generator, sharing the decomposition.
pub fn analyze(s: &Superoperator, thresholds: &RegimeThresholds) -> StructuralMetrics {
    let parts = decompose(s);
    let generator_norm = spectral_norm(s.matrix());
    let delta = spectral_norm(parts.dissipative.matrix());
    let nd_norm = spectral_norm(parts.nondissipative.matrix());
    let eta = nonnormality(s);
    debug_assert!({
        let alt = nonnormality_from_parts(s);
        (alt - eta).abs() <= 1e-9 * eta.max(alt) + 1e-12 * generator_norm * generator_norm
    });
    let tau_zero = ZERO_RTOL * generator_norm;
    let mut m = StructuralMetrics {
        delta,
        eta,
        nd_norm,
        kappa: kappa_from(delta, eta, tau_zero),
        bound_margin: 2.0 * delta * nd_norm - eta,
        regime: Regime::Hamiltonian,
        generator_norm,
    };
    m.regime = classify(&m, thresholds);
    m
}

/// Result of testing `Σ_j L_j†L_j = Γ·I`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredReport {
    pub is_structured: bool,
    /// `Γ`, present when structured.
    pub gamma: Option<f64>,
    /// Spectrum of the jump map `J(ρ) = Σ L_j ρ L_j†`; empty when not structured.
    pub jump_spectrum: Vec<C64>,
    /// Whether the Liouvillian spectrum equals `{Λ_β − Γ}`. The identity
    /// needs `H = 0`, so a coherent part normally makes this `false`.
    pub shift_verified: Option<bool>,
    /// Largest distance in the best matching between the two spectra.
    pub max_shift_deviation: Option<f64>,
}

/// Checks the structured-dissipator condition and, when it holds, the
/// uniform spectral shift `λ_β = Λ_β − Γ`.
pub fn structured_dissipator_report(model: &LindbladModel) -> Result<StructuredReport> {
    let d = model.dim();
    let mut sum = ComplexMatrix::zeros(d, d);
    let mut jump_map = ComplexMatrix::zeros(d * d, d * d);
    for l in model.jumps() {
        sum = &sum + &(&dagger(l) * l);
        jump_map = &jump_map + &l.conj().kron(l);
    }
    let gamma = sum.trace().re / d as f64;
    let residual = (&sum - &ComplexMatrix::identity(d).scale_real(gamma)).frobenius_norm();
    if residual > STRUCTURE_TOL * gamma.max(1.0) {
        return Ok(StructuredReport {
            is_structured: false,
            gamma: None,
            jump_spectrum: Vec::new(),
            shift_verified: None,
            max_shift_deviation: None,
        });
    }
    let jump_spectrum = eigenvalues_general(&jump_map)?;
    let full = eigenvalues_general(liouvillian(model).matrix())?;
    let mut shifted: Vec<C64> = jump_spectrum.iter().map(|z| z - gamma).collect();
    shifted.sort_by(spectrum_order);
    let deviation = max_matching_distance(&full, &shifted);
    let scale = 1.0 + jump_spectrum.iter().map(|z| z.norm()).fold(gamma, f64::max);
    Ok(StructuredReport {
        is_structured: true,
        gamma: Some(gamma),
        jump_spectrum,
        shift_verified: Some(deviation <= 1e-8 * scale),
        max_shift_deviation: Some(deviation),
    })
}

/// Greedy nearest-neighbour matching between two equally long multisets;
/// returns the largest matched distance.
fn max_matching_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        match best {
            Some((i, dist)) => {
                used[i] = true;
                worst = worst.max(dist);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}
