//! Levenberg–Marquardt refinement of component parameters.
//!
//! The damped normal equations `(JᵀJ + λ·D) δ = Jᵀr` are solved by SVD so
//! that a numerically singular system is detected and answered with more
//! damping instead of a garbage step. `D` is `diag(JᵀJ)` floored at a small
//! fraction of its largest entry, which keeps the system regular when a
//! vanishing amplitude zeroes out its peak-temperature column.
//!
//! Peak temperatures are carried internally in units of 100 K so both
//! parameter blocks have comparable magnitudes.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DebyeModel, ParameterVector};
use crate::spectrum::Spectrum;

const T0_SCALE: f64 = 1e-2;
const DIAG_FLOOR: f64 = 1e-9;
const RCOND_MIN: f64 = 1e-14;
const MAX_DAMPING: f64 = 1e32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmOptions {
    pub max_iterations: usize,
    pub initial_damping: f64,
    pub damping_increase: f64,
    pub damping_decrease: f64,
    pub gradient_tolerance: f64,
    pub step_tolerance: f64,
    pub sse_tolerance: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            initial_damping: 1e-3,
            damping_increase: 10.0,
            damping_decrease: 0.1,
            gradient_tolerance: 1e-10,
            step_tolerance: 1e-10,
            sse_tolerance: 1e-12,
        }
    }
}

impl LmOptions {
    pub fn validate(&self) -> Result<()> {
        let tols = [self.gradient_tolerance, self.step_tolerance, self.sse_tolerance];
        if tols.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::Config("tolerances must be non-negative".into()));
        }
        if !tols.iter().any(|t| *t > 0.0) {
            return Err(Error::Config("at least one tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.initial_damping > 0.0 && self.initial_damping.is_finite()) {
            return Err(Error::Config("initial_damping must be positive".into()));
        }
        if !(self.damping_increase > 1.0) {
            return Err(Error::Config("damping_increase must exceed 1".into()));
        }
        if !(self.damping_decrease > 0.0 && self.damping_decrease < 1.0) {
            return Err(Error::Config("damping_decrease must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    Gradient,
    Step,
    Sse,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: ParameterVector,
    /// Measured minus model, per grid point.
    pub residuals: Vec<f64>,
    pub sse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination_reason: TerminationReason,
}

impl FitResult {
    /// Builds a result for `params` without iterating (used for evaluation only).
    pub fn evaluate(spectrum: &Spectrum, params: ParameterVector, model: &DebyeModel) -> Result<Self> {
        let residuals = residuals(spectrum, &params, model)?;
        Ok(Self {
            sse: sum_of_squares(&residuals),
            params,
            residuals,
            iterations: 0,
            converged: false,
            termination_reason: TerminationReason::MaxIterations,
        })
    }
}

fn sum_of_squares(v: &[f64]) -> f64 {
    v.iter().map(|r| r * r).sum()
}

fn residuals(spectrum: &Spectrum, params: &ParameterVector, model: &DebyeModel) -> Result<Vec<f64>> {
    let q = model.evaluate(spectrum.temperatures(), params)?;
    Ok(spectrum.intensities().iter().zip(q).map(|(y, m)| y - m).collect())
}

/// `Σ (Qemp_i − Q(T_i))²`.
pub fn sum_squared_residuals(spectrum: &Spectrum, params: &ParameterVector, model: &DebyeModel) -> Result<f64> {
    Ok(sum_of_squares(&residuals(spectrum, params, model)?))
}

/// Internal parameter space: amplitudes as-is, peak temperatures scaled and clamped.
struct Scaled<'a> {
    spectrum: &'a Spectrum,
    model: &'a DebyeModel,
    n: usize,
    t_lo: f64,
    t_hi: f64,
}

impl Scaled<'_> {
    fn to_internal(&self, p: &ParameterVector) -> DVector<f64> {
        let mut z = DVector::from_column_slice(p.as_slice());
        for j in self.n..2 * self.n {
            z[j] = (z[j] * T0_SCALE).clamp(self.t_lo, self.t_hi);
        }
        z
    }

    fn to_params(&self, z: &DVector<f64>) -> ParameterVector {
        let mut v: Vec<f64> = z.iter().copied().collect();
        for t in &mut v[self.n..] {
            *t /= T0_SCALE;
        }
        ParameterVector::new(v).expect("even length")
    }

    fn clamp(&self, z: &mut DVector<f64>) {
        for j in self.n..2 * self.n {
            z[j] = z[j].clamp(self.t_lo, self.t_hi);
        }
    }

    fn residuals(&self, z: &DVector<f64>) -> Result<Vec<f64>> {
        residuals(self.spectrum, &self.to_params(z), self.model)
    }

    fn jacobian(&self, z: &DVector<f64>) -> Result<DMatrix<f64>> {
        let mut jac = self.model.jacobian(self.spectrum.temperatures(), &self.to_params(z))?;
        for j in self.n..2 * self.n {
            jac.column_mut(j).scale_mut(1.0 / T0_SCALE);
        }
        Ok(jac)
    }
}

/// Solves the damped system, or `None` if it is numerically singular.
fn damped_step(jtj: &DMatrix<f64>, jtr: &DVector<f64>, diag: &DVector<f64>, lambda: f64) -> Option<DVector<f64>> {
    let mut a = jtj.clone();
    for i in 0..a.nrows() {
        a[(i, i)] += lambda * diag[i];
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || !(smin / smax > RCOND_MIN) {
        return None;
    }
    let step = svd.solve(jtr, 0.0).ok()?;
    step.iter().all(|v| v.is_finite()).then_some(step)
}

/// Levenberg–Marquardt least-squares fit of `spectrum` starting from `initial`.
///
/// Peak temperatures are confined to `[min(T)/2, 2·max(T)]`; amplitudes are
/// unconstrained. The returned `sse` never exceeds that of the (clamped)
/// starting point.
pub fn fit(spectrum: &Spectrum, initial: &ParameterVector, opts: &LmOptions, model: &DebyeModel) -> Result<FitResult> {
    fit_inner(spectrum, initial, opts, model, |_| {})
}

/// Like [`fit`], also returning the sse at the start and after every accepted step.
pub fn fit_traced(
    spectrum: &Spectrum,
    initial: &ParameterVector,
    opts: &LmOptions,
    model: &DebyeModel,
) -> Result<(FitResult, Vec<f64>)> {
    let mut trace = Vec::new();
    let result = fit_inner(spectrum, initial, opts, model, |sse| trace.push(sse))?;
    Ok((result, trace))
}

fn fit_inner(
    spectrum: &Spectrum,
    initial: &ParameterVector,
    opts: &LmOptions,
    model: &DebyeModel,
    mut on_accept: impl FnMut(f64),
) -> Result<FitResult> {
    opts.validate()?;
    let n = initial.n_components();
    let needed = 2 * n + 1;
    if spectrum.len() < needed {
        return Err(Error::InsufficientData { needed, given: spectrum.len() });
    }
    let (t_min, t_max) = spectrum.temperature_range().expect("non-empty");
    let space = Scaled { spectrum, model, n, t_lo: 0.5 * t_min * T0_SCALE, t_hi: 2.0 * t_max * T0_SCALE };

    let mut z = space.to_internal(initial);
    let mut r = space.residuals(&z)?;
    let mut sse = sum_of_squares(&r);
    on_accept(sse);
    let mut lambda = opts.initial_damping;
    let mut iterations = 0;
    let mut reason = TerminationReason::MaxIterations;

    'outer: while iterations < opts.max_iterations {
        let jac = space.jacobian(&z)?;
        let rv = DVector::from_column_slice(&r);
        let jtr = jac.tr_mul(&rv);
        if jtr.amax() <= opts.gradient_tolerance {
            reason = TerminationReason::Gradient;
            break;
        }
        let jtj = jac.tr_mul(&jac);
        let dmax = jtj.diagonal().max();
        let diag = jtj.diagonal().map(|d| d.max(DIAG_FLOOR * dmax).max(f64::MIN_POSITIVE));
        iterations += 1;

        loop {
            let Some(step) = damped_step(&jtj, &jtr, &diag, lambda) else {
                lambda *= opts.damping_increase;
                if lambda > MAX_DAMPING {
                    reason = TerminationReason::Step;
                    break 'outer;
                }
                continue;
            };
            let mut trial = &z + &step;
            space.clamp(&mut trial);
            let actual_step = (&trial - &z).norm();
            let small_step = actual_step <= opts.step_tolerance * (z.norm() + opts.step_tolerance);

            let r_trial = space.residuals(&trial)?;
            let sse_trial = sum_of_squares(&r_trial);
            if sse_trial < sse {
                let decrease = sse - sse_trial;
                z = trial;
                r = r_trial;
                sse = sse_trial;
                on_accept(sse);
                lambda = (lambda * opts.damping_decrease).max(f64::MIN_POSITIVE);
                if small_step {
                    reason = TerminationReason::Step;
                    break 'outer;
                }
                if decrease <= opts.sse_tolerance * (sse + decrease) {
                    reason = TerminationReason::Sse;
                    break 'outer;
                }
                break;
            }
            if small_step {
                reason = TerminationReason::Step;
                break 'outer;
            }
            lambda *= opts.damping_increase;
            if lambda > MAX_DAMPING {
                reason = TerminationReason::Step;
                break 'outer;
            }
        }
    }

    let params = space.to_params(&z);
    let residuals = space.residuals(&z)?;
    Ok(FitResult {
        sse: sum_of_squares(&residuals),
        params,
        residuals,
        iterations,
        converged: reason != TerminationReason::MaxIterations,
        termination_reason: reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_peak(points: usize) -> (Spectrum, DebyeModel) {
        let model = DebyeModel::new(1.0).unwrap();
        let grid: Vec<f64> = (0..points).map(|i| 400.0 + 300.0 * i as f64 / (points - 1) as f64).collect();
        let truth = ParameterVector::new(vec![1.0, 550.0]).unwrap();
        let q = model.evaluate(&grid, &truth).unwrap();
        (Spectrum::new(grid, q, None).unwrap(), model)
    }

    #[test]
    fn recovers_single_peak() {
        let (s, model) = single_peak(200);
        let start = ParameterVector::new(vec![0.8, 500.0]).unwrap();
        let fit = fit(&s, &start, &LmOptions::default(), &model).unwrap();
        assert!(fit.converged);
        let p = fit.params.as_slice();
        assert!((p[0] - 1.0).abs() < 1e-8, "{p:?}");
        assert!((p[1] - 550.0).abs() / 550.0 < 1e-8, "{p:?}");
        assert!(fit.sse < 1e-16 * 200.0);
    }

    #[test]
    fn starting_at_optimum_stops_immediately() {
        let (s, model) = single_peak(100);
        let start = ParameterVector::new(vec![1.0, 550.0]).unwrap();
        let fit = fit(&s, &start, &LmOptions::default(), &model).unwrap();
        assert!(fit.iterations <= 2);
        assert!(matches!(fit.termination_reason, TerminationReason::Gradient | TerminationReason::Sse));
    }

    #[test]
    fn too_few_points() {
        let (s, model) = single_peak(4);
        let start = ParameterVector::new(vec![1.0, 1.0, 500.0, 600.0]).unwrap();
        assert!(matches!(
            fit(&s, &start, &LmOptions::default(), &model),
            Err(Error::InsufficientData { needed: 5, given: 4 })
        ));
    }

    #[test]
    fn invalid_options() {
        let mut o =
            LmOptions { gradient_tolerance: 0.0, step_tolerance: 0.0, sse_tolerance: 0.0, ..LmOptions::default() };
        assert!(o.validate().is_err());
        o = LmOptions { max_iterations: 0, ..LmOptions::default() };
        assert!(o.validate().is_err());
        o = LmOptions { damping_decrease: 1.5, ..LmOptions::default() };
        assert!(o.validate().is_err());
    }

    #[test]
    fn iteration_cap_is_not_convergence() {
        let (s, model) = single_peak(100);
        let start = ParameterVector::new(vec![0.3, 450.0]).unwrap();
        let opts = LmOptions { max_iterations: 1, ..LmOptions::default() };
        let fit = fit(&s, &start, &opts, &model).unwrap();
        assert_eq!(fit.termination_reason, TerminationReason::MaxIterations);
        assert!(!fit.converged);
    }

    #[test]
    fn zero_amplitude_start_is_handled() {
        // The T0 column vanishes when Q0 = 0; the damping floor keeps the system solvable.
        let (s, model) = single_peak(100);
        let start = ParameterVector::new(vec![1.0, 0.0, 540.0, 650.0]).unwrap();
        let fit = fit(&s, &start, &LmOptions::default(), &model).unwrap();
        assert!(fit.sse <= sum_squared_residuals(&s, &start, &model).unwrap());
        assert!(fit.sse.is_finite());
    }

    #[test]
    fn sse_reference_values() {
        let model = DebyeModel::new(1.0).unwrap();
        let grid = vec![500.0, 525.0, 550.0, 575.0, 600.0];
        let q = vec![0.1, 0.5, 1.0, 0.4, 0.2];
        let s = Spectrum::new(grid, q.clone(), None).unwrap();
        let zero = ParameterVector::new(vec![0.0, 550.0]).unwrap();
        let sum_sq: f64 = q.iter().map(|v| v * v).sum();
        assert_eq!(sum_squared_residuals(&s, &zero, &model).unwrap(), sum_sq);
        // hand summation with peak values from mpmath:
        // sech at 500, 525, 575, 600 K for T0 = 550 K, f = 1 Hz
        let p = ParameterVector::new(vec![1.0, 550.0]).unwrap();
        let peak =
            [0.098_639_470_514_278_78, 0.451_926_315_643_731_6, 1.0, 0.504_155_831_092_307_1, 0.162_136_724_061_070_38];
        let expected: f64 = q.iter().zip(peak).map(|(y, m)| (y - m).powi(2)).sum();
        assert!((expected - 0.014_594_994_983_424_371).abs() < 1e-16);
        let got = sum_squared_residuals(&s, &p, &model).unwrap();
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
    }
}
