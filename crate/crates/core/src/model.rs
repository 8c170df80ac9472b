//! The Debye multi-peak spectrum model and its analytic Jacobian.
//!
//! Each component contributes `Q0 · sech[(E/R)(1/T − 1/T0)]` where the
//! activation energy `E` is tied to the peak temperature by
//! `E = R·T0·ln(k_b·T0 / (h·f))`. `E` is never a free parameter.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Beyond this |u| `cosh(u)` overflows an f64; the sech term is taken as 0.
const SECH_CUTOFF: f64 = 710.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    r_gas: f64,
    k_b: f64,
    h_planck: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 exact/recommended values.
    pub const CODATA_2018: PhysicalConstants =
        PhysicalConstants { r_gas: 8.314_462_618_153_24, k_b: 1.380_649e-23, h_planck: 6.626_070_15e-34 };

    pub fn new(r_gas: f64, k_b: f64, h_planck: f64) -> Result<Self> {
        for (name, v) in [("R", r_gas), ("k_b", k_b), ("h", h_planck)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("constant {name} must be positive, got {v}")));
            }
        }
        Ok(Self { r_gas, k_b, h_planck })
    }

    /// Molar gas constant, J/(mol·K).
    pub fn r_gas(&self) -> f64 {
        self.r_gas
    }

    /// Boltzmann constant, J/K.
    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    /// Planck constant, J·s.
    pub fn h_planck(&self) -> f64 {
        self.h_planck
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// `ln(k_b·T0 / (h·f))`, checked to be positive.
fn log_ratio(t0: f64, f: f64, c: &PhysicalConstants) -> Result<f64> {
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(Error::Domain(format!("peak temperature must be positive, got {t0}")));
    }
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive, got {f}")));
    }
    let l = (c.k_b * t0 / (c.h_planck * f)).ln();
    if !(l > 0.0) {
        return Err(Error::Domain(format!("k_b·T0/(h·f) must exceed 1 (T0 = {t0} K, f = {f} Hz)")));
    }
    Ok(l)
}

/// Activation energy in J/mol for a peak at `t0` K measured at `f` Hz.
pub fn activation_energy(t0: f64, f: f64, c: &PhysicalConstants) -> Result<f64> {
    Ok(c.r_gas * t0 * log_ratio(t0, f, c)?)
}

/// One Debye peak. The activation energy is a cached function of `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DebyeComponent {
    q0: f64,
    t0: f64,
    energy: f64,
}

impl DebyeComponent {
    pub fn new(q0: f64, t0: f64, f: f64, c: &PhysicalConstants) -> Result<Self> {
        if !q0.is_finite() {
            return Err(Error::Domain(format!("amplitude must be finite, got {q0}")));
        }
        let energy = activation_energy(t0, f, c)?;
        Ok(Self { q0, t0, energy })
    }

    /// Peak amplitude.
    pub fn q0(&self) -> f64 {
        self.q0
    }

    /// Peak temperature, K.
    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Activation energy, J/mol.
    pub fn energy(&self) -> f64 {
        self.energy
    }
}

/// `sech(u)` with the overflow guard applied.
fn sech(u: f64) -> f64 {
    if u.abs() > SECH_CUTOFF {
        0.0
    } else {
        1.0 / u.cosh()
    }
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("temperature must be positive, got {t}")))
    }
}

/// Reduced argument `u = (E/R)(1/T − 1/T0)`.
fn reduced(t: f64, comp: &DebyeComponent, c: &PhysicalConstants) -> f64 {
    comp.energy / c.r_gas * (1.0 / t - 1.0 / comp.t0)
}

/// Intensity of a single component at temperature `t`.
pub fn debye_peak(t: f64, comp: &DebyeComponent, c: &PhysicalConstants) -> Result<f64> {
    check_temperature(t)?;
    Ok(comp.q0 * sech(reduced(t, comp, c)))
}

/// Sum of all components evaluated on `grid`.
pub fn spectrum_model(grid: &[f64], components: &[DebyeComponent], c: &PhysicalConstants) -> Result<Vec<f64>> {
    if components.is_empty() {
        return Err(Error::DimensionMismatch("at least one component is required".into()));
    }
    grid.iter()
        .map(|&t| {
            check_temperature(t)?;
            Ok(components.iter().map(|comp| comp.q0 * sech(reduced(t, comp, c))).sum())
        })
        .collect()
}

/// Flat parameter layout `[Q0_1..Q0_n, T0_1..T0_n]` used by the optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "parameter vector length must be a positive even number, got {}",
                values.len()
            )));
        }
        Ok(Self(values))
    }

    pub fn from_amplitudes_and_temperatures(q0: &[f64], t0: &[f64]) -> Result<Self> {
        if q0.len() != t0.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes but {} peak temperatures",
                q0.len(),
                t0.len()
            )));
        }
        Self::new(q0.iter().chain(t0).copied().collect())
    }

    pub fn from_components(components: &[DebyeComponent]) -> Result<Self> {
        let q0: Vec<f64> = components.iter().map(|c| c.q0).collect();
        let t0: Vec<f64> = components.iter().map(|c| c.t0).collect();
        Self::from_amplitudes_and_temperatures(&q0, &t0)
    }

    /// Rebuilds components, recomputing each activation energy.
    pub fn to_components(&self, f: f64, c: &PhysicalConstants) -> Result<Vec<DebyeComponent>> {
        self.amplitudes()
            .iter()
            .zip(self.peak_temperatures())
            .map(|(&q0, &t0)| DebyeComponent::new(q0, t0, f, c))
            .collect()
    }

    pub fn n_components(&self) -> usize {
        self.0.len() / 2
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.0[..self.n_components()]
    }

    pub fn peak_temperatures(&self) -> &[f64] {
        &self.0[self.n_components()..]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Jacobian of the spectrum model with respect to `[Q0_1..Q0_n, T0_1..T0_n]`.
///
/// The `T0` columns include the dependence of `E` on `T0`:
/// `du/dT0 = (1/T0²)(E/R) + (dE/dT0 / R)(1/T − 1/T0)` with
/// `dE/dT0 = R·(ln(k_b·T0/(h·f)) + 1)`.
pub fn model_jacobian(grid: &[f64], params: &ParameterVector, f: f64, c: &PhysicalConstants) -> Result<DMatrix<f64>> {
    let n = params.n_components();
    let q0 = params.amplitudes();
    let t0 = params.peak_temperatures();
    let logs = t0.iter().map(|&t| log_ratio(t, f, c)).collect::<Result<Vec<_>>>()?;

    let mut jac = DMatrix::zeros(grid.len(), 2 * n);
    for (i, &t) in grid.iter().enumerate() {
        check_temperature(t)?;
        for j in 0..n {
            // E/R = T0·L, so u = L·(T0/T − 1).
            let l = logs[j];
            let u = l * (t0[j] / t - 1.0);
            let (s, th) = if u.abs() > SECH_CUTOFF { (0.0, u.signum()) } else { (1.0 / u.cosh(), u.tanh()) };
            let du_dt0 = (l + 1.0) / t - 1.0 / t0[j];
            jac[(i, j)] = s;
            jac[(i, n + j)] = -q0[j] * s * th * du_dt0;
        }
    }
    Ok(jac)
}

/// Model bound to a measurement frequency and a set of physical constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DebyeModel {
    pub frequency: f64,
    pub constants: PhysicalConstants,
}

impl DebyeModel {
    pub fn new(frequency: f64) -> Result<Self> {
        Self::with_constants(frequency, PhysicalConstants::CODATA_2018)
    }

    pub fn with_constants(frequency: f64, constants: PhysicalConstants) -> Result<Self> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::Domain(format!("frequency must be positive, got {frequency}")));
        }
        Ok(Self { frequency, constants })
    }

    pub fn activation_energy(&self, t0: f64) -> Result<f64> {
        activation_energy(t0, self.frequency, &self.constants)
    }

    pub fn component(&self, q0: f64, t0: f64) -> Result<DebyeComponent> {
        DebyeComponent::new(q0, t0, self.frequency, &self.constants)
    }

    pub fn components(&self, params: &ParameterVector) -> Result<Vec<DebyeComponent>> {
        params.to_components(self.frequency, &self.constants)
    }

    pub fn evaluate(&self, grid: &[f64], params: &ParameterVector) -> Result<Vec<f64>> {
        spectrum_model(grid, &self.components(params)?, &self.constants)
    }

    pub fn jacobian(&self, grid: &[f64], params: &ParameterVector) -> Result<DMatrix<f64>> {
        model_jacobian(grid, params, self.frequency, &self.constants)
    }
}
