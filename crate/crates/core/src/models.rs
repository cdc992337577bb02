//! Builders for the concrete systems analysed by the toolkit.
//!
//! Conventions: `σ_z|0⟩ = +|0⟩`, `σ_- = (σ_x − iσ_y)/2 = |1⟩⟨0|`, and in
//! tensor products site 0 is the leftmost factor. The Jaynes–Cummings space
//! is ordered atom ⊗ field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::superop::{check_dim_cap, LindbladModel};

pub mod random;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Pauli matrix along `axis`.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match axis {
        Axis::X => vec![z, one, one, z],
        Axis::Y => vec![z, -i, i, z],
        Axis::Z => vec![one, z, z, -one],
    };
    ComplexMatrix::from_row_major(2, 2, entries).expect("2x2 literal")
}

/// `σ_- = (σ_x − iσ_y)/2 = |1⟩⟨0|`, taking the `σ_z = +1` state `|0⟩` to `|1⟩`.
pub fn lowering() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0., 0., 1., 0.]).expect("2x2 literal")
}

/// `σ_+ = |0⟩⟨1|`.
pub fn raising() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0., 1., 0., 0.]).expect("2x2 literal")
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on `site` of `sites` (site 0 leftmost).
pub fn tensor_site(op: &ComplexMatrix, site: usize, sites: usize) -> Result<ComplexMatrix> {
    if !op.is_square() {
        return Err(Error::Model("tensor_site needs a square single-site operator".into()));
    }
    if site >= sites {
        return Err(Error::Model(format!("site {site} out of range for {sites} sites")));
    }
    let local = op.rows();
    let dim = u32::try_from(sites)
        .ok()
        .and_then(|k| local.checked_pow(k))
        .ok_or_else(|| Error::Model(format!("{sites} sites overflow the dimension")))?;
    check_dim_cap(dim)?;
    let id = ComplexMatrix::identity(local);
    let mut out = if site == 0 { op.clone() } else { id.clone() };
    for k in 1..sites {
        out = out.kron(if k == site { op } else { &id });
    }
    Ok(out)
}

/// Bosonic annihilation operator truncated to Fock levels `0..=n_max`.
pub fn annihilation(n_max: usize) -> ComplexMatrix {
    let n = n_max + 1;
    ComplexMatrix::from_fn(n, n, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
}

fn zero_h(dim: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(dim, dim)
}

fn jump(op: ComplexMatrix, rate: f64) -> ComplexMatrix {
    op.scale_real(rate.sqrt())
}

/// Single-qubit dephasing `√γ_z σ_z` with an optional commuting drive
/// `H = (ω/2)σ_z`.
pub fn dephasing(gamma_z: f64, omega: f64) -> Result<LindbladModel> {
    let h = pauli(Axis::Z).scale_real(omega / 2.0);
    LindbladModel::new(h, vec![jump(pauli(Axis::Z), gamma_z)], format!("dephasing(gamma_z={gamma_z}, omega={omega})"))
}

/// Dephasing plus transverse drive `H = (Ω/2)σ_x`.
pub fn driven_dephasing(gamma_z: f64, omega: f64) -> Result<LindbladModel> {
    let h = pauli(Axis::X).scale_real(omega / 2.0);
    LindbladModel::new(
        h,
        vec![jump(pauli(Axis::Z), gamma_z)],
        format!("driven_dephasing(gamma_z={gamma_z}, omega={omega})"),
    )
}

pub fn relaxation(gamma_minus: f64) -> Result<LindbladModel> {
    LindbladModel::new(zero_h(2), vec![jump(lowering(), gamma_minus)], format!("relaxation(gamma_minus={gamma_minus})"))
}

pub fn dephasing_relaxation(gamma_z: f64, gamma_minus: f64) -> Result<LindbladModel> {
    LindbladModel::new(
        zero_h(2),
        vec![jump(pauli(Axis::Z), gamma_z), jump(lowering(), gamma_minus)],
        format!("dephasing_relaxation(gamma_z={gamma_z}, gamma_minus={gamma_minus})"),
    )
}

pub fn pauli_channel(gamma_x: f64, gamma_y: f64, gamma_z: f64) -> Result<LindbladModel> {
    LindbladModel::new(
        zero_h(2),
        vec![jump(pauli(Axis::X), gamma_x), jump(pauli(Axis::Y), gamma_y), jump(pauli(Axis::Z), gamma_z)],
        format!("pauli_channel(gamma_x={gamma_x}, gamma_y={gamma_y}, gamma_z={gamma_z})"),
    )
}

/// Independent dephasing `√γ_k σ_z^(k)` on `gammas.len()` qubits.
pub fn multi_qubit_dephasing(gammas: &[f64]) -> Result<LindbladModel> {
    let sites = gammas.len();
    if sites == 0 {
        return Err(Error::Model("multi_qubit_dephasing needs at least one qubit".into()));
    }
    let jumps = gammas
        .iter()
        .enumerate()
        .map(|(k, &g)| tensor_site(&pauli(Axis::Z), k, sites).map(|op| jump(op, g)))
        .collect::<Result<Vec<_>>>()?;
    let dim = jumps[0].rows();
    LindbladModel::new(zero_h(dim), jumps, format!("multi_qubit_dephasing(gammas={gammas:?})"))
}

/// Closed qubit with `H = (ω_x σ_x + ω_y σ_y + ω_z σ_z)/2`.
pub fn qubit_hamiltonian(omega_x: f64, omega_y: f64, omega_z: f64) -> Result<LindbladModel> {
    let h = &(&pauli(Axis::X).scale_real(omega_x / 2.0) + &pauli(Axis::Y).scale_real(omega_y / 2.0))
        + &pauli(Axis::Z).scale_real(omega_z / 2.0);
    LindbladModel::new(h, vec![], format!("hamiltonian_only(omega_x={omega_x}, omega_y={omega_y}, omega_z={omega_z})"))
}

/// Arbitrary closed system.
pub fn hamiltonian_only(h: ComplexMatrix) -> Result<LindbladModel> {
    LindbladModel::new(h, vec![], "hamiltonian_only")
}

/// Rotating-wave Jaynes–Cummings Hamiltonian
/// `ω_c a†a + (ω_a/2)σ_z + g(a†σ_- + aσ_+)` with a hard Fock cutoff, no jumps.
pub fn jaynes_cummings(omega_a: f64, omega_c: f64, g: f64, n_max: usize) -> Result<LindbladModel> {
    if n_max < 1 {
        return Err(Error::Model("jaynes_cummings needs n_max >= 1".into()));
    }
    let dim = n_max
        .checked_add(1)
        .and_then(|n| n.checked_mul(2))
        .ok_or_else(|| Error::Model(format!("n_max = {n_max} overflows the dimension")))?;
    check_dim_cap(dim)?;
    let a = annihilation(n_max);
    let ad = crate::linalg::dagger(&a);
    let id_atom = ComplexMatrix::identity(2);
    let id_field = ComplexMatrix::identity(n_max + 1);
    let number = id_atom.kron(&(&ad * &a)).scale_real(omega_c);
    let atom = pauli(Axis::Z).kron(&id_field).scale_real(omega_a / 2.0);
    let coupling = &lowering().kron(&ad) + &raising().kron(&a);
    let h = &(&number + &atom) + &coupling.scale_real(g);
    LindbladModel::new(
        h,
        vec![],
        format!("jaynes_cummings(omega_a={omega_a}, omega_c={omega_c}, g={g}, n_max={n_max})"),
    )
}

/// Named model families that can be built from a parameter map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Dephasing,
    DrivenDephasing,
    Relaxation,
    DephasingRelaxation,
    PauliChannel,
    MultiQubitDephasing,
    HamiltonianOnly,
    JaynesCummings,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::Dephasing,
        ModelKind::DrivenDephasing,
        ModelKind::Relaxation,
        ModelKind::DephasingRelaxation,
        ModelKind::PauliChannel,
        ModelKind::MultiQubitDephasing,
        ModelKind::HamiltonianOnly,
        ModelKind::JaynesCummings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Dephasing => "dephasing",
            ModelKind::DrivenDephasing => "driven_dephasing",
            ModelKind::Relaxation => "relaxation",
            ModelKind::DephasingRelaxation => "dephasing_relaxation",
            ModelKind::PauliChannel => "pauli_channel",
            ModelKind::MultiQubitDephasing => "multi_qubit_dephasing",
            ModelKind::HamiltonianOnly => "hamiltonian_only",
            ModelKind::JaynesCummings => "jaynes_cummings",
        }
    }

    /// `(name, default)`; `None` marks a required parameter.
    fn params(self) -> &'static [(&'static str, Option<f64>)] {
        match self {
            ModelKind::Dephasing => &[("gamma_z", None), ("omega", Some(0.0))],
            ModelKind::DrivenDephasing => &[("gamma_z", None), ("omega", None)],
            ModelKind::Relaxation => &[("gamma_minus", None)],
            ModelKind::DephasingRelaxation => &[("gamma_z", None), ("gamma_minus", None)],
            ModelKind::PauliChannel => &[("gamma_x", None), ("gamma_y", None), ("gamma_z", None)],
            // gamma_1..gamma_K are handled separately.
            ModelKind::MultiQubitDephasing => &[],
            ModelKind::HamiltonianOnly => &[("omega_x", Some(0.0)), ("omega_y", Some(0.0)), ("omega_z", Some(0.0))],
            ModelKind::JaynesCummings => {
                &[("omega_a", Some(1.0)), ("omega_c", Some(1.0)), ("g", Some(0.1)), ("n_max", Some(3.0))]
            }
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown model type {s:?}")))
    }
}

/// A model family plus its real-valued parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub params: BTreeMap<String, f64>,
}

impl ModelSpec {
    pub fn new(kind: ModelKind) -> Self {
        ModelSpec { kind, params: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    fn get(&self, name: &str, default: Option<f64>) -> Result<f64> {
        match (self.params.get(name), default) {
            (Some(&v), _) => Ok(v),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::Config(format!("{} model is missing parameter {name:?}", self.kind))),
        }
    }

    /// Checks names, finiteness, rate signs and the integer cutoff.
    pub fn validate(&self) -> Result<()> {
        for (name, &value) in &self.params {
            let known = if self.kind == ModelKind::MultiQubitDephasing {
                site_index(name).is_some()
            } else {
                self.kind.params().iter().any(|(n, _)| n == name)
            };
            if !known {
                return Err(Error::Config(format!("{} model has no parameter {name:?}", self.kind)));
            }
            if !value.is_finite() {
                return Err(Error::Config(format!("parameter {name:?} is not finite")));
            }
            if name.starts_with("gamma") && value < 0.0 {
                return Err(Error::Config(format!("rate {name:?} must be >= 0, got {value}")));
            }
        }
        if self.kind == ModelKind::JaynesCummings {
            let n_max = self.get("n_max", Some(3.0))?;
            if n_max < 1.0 || n_max.fract() != 0.0 {
                return Err(Error::Config(format!("parameter \"n_max\" must be an integer >= 1, got {n_max}")));
            }
        }
        if self.kind == ModelKind::MultiQubitDephasing {
            self.site_rates()?;
        }
        Ok(())
    }

    fn site_rates(&self) -> Result<Vec<f64>> {
        let sites = self.params.len();
        if sites == 0 {
            return Err(Error::Config("multi_qubit_dephasing model is missing parameter \"gamma_1\"".into()));
        }
        (1..=sites)
            .map(|k| {
                let name = format!("gamma_{k}");
                self.params
                    .get(&name)
                    .copied()
                    .ok_or_else(|| Error::Config(format!("multi_qubit_dephasing model is missing parameter {name:?}")))
            })
            .collect()
    }
}

fn site_index(name: &str) -> Option<usize> {
    name.strip_prefix("gamma_")?.parse::<usize>().ok().filter(|&k| k >= 1)
}

/// Builds the model described by `spec`.
pub fn build(spec: &ModelSpec) -> Result<LindbladModel> {
    spec.validate()?;
    let p = |name: &str| {
        let default = spec.kind.params().iter().find(|(n, _)| *n == name).and_then(|(_, d)| *d);
        spec.get(name, default)
    };
    match spec.kind {
        ModelKind::Dephasing => dephasing(p("gamma_z")?, p("omega")?),
        ModelKind::DrivenDephasing => driven_dephasing(p("gamma_z")?, p("omega")?),
        ModelKind::Relaxation => relaxation(p("gamma_minus")?),
        ModelKind::DephasingRelaxation => dephasing_relaxation(p("gamma_z")?, p("gamma_minus")?),
        ModelKind::PauliChannel => pauli_channel(p("gamma_x")?, p("gamma_y")?, p("gamma_z")?),
        ModelKind::MultiQubitDephasing => multi_qubit_dephasing(&spec.site_rates()?),
        ModelKind::HamiltonianOnly => qubit_hamiltonian(p("omega_x")?, p("omega_y")?, p("omega_z")?),
        ModelKind::JaynesCummings => jaynes_cummings(p("omega_a")?, p("omega_c")?, p("g")?, p("n_max")? as usize),
    }
}
