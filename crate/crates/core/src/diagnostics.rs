//! Residual adequacy criteria.
//!
//! A fit is adequate when its residuals look like pure measurement noise:
//! normally distributed (Anderson–Darling), zero mean (one-sample t-test),
//! uncorrelated up to lag 5 (Durbin–Watson with bootstrap p-values), and with
//! a variance compatible with the known measurement-error variance (F-test
//! with a degrees-of-freedom correction for the fitted parameters).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::FitResult;
use crate::special::{f_sf, normal_cdf, t_two_sided};
use crate::spectrum::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub passed: bool,
    pub alpha: f64,
}

impl TestResult {
    fn new(statistic: f64, p_value: f64, alpha: f64) -> Self {
        let p_value = if p_value.is_nan() { 0.0 } else { p_value.clamp(0.0, 1.0) };
        Self { statistic, p_value, passed: p_value >= alpha, alpha }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagStatistic {
    pub lag: usize,
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DurbinWatsonResult {
    pub lags: Vec<LagStatistic>,
    pub passed: bool,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdequacyReport {
    pub normality: Option<TestResult>,
    pub zero_mean: Option<TestResult>,
    pub autocorrelation: Option<DurbinWatsonResult>,
    /// `None` when no measurement-error variance is known or the test failed to run.
    pub variance: Option<TestResult>,
    pub adequate: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    pub alpha: f64,
    pub max_lag: usize,
    pub dw_reps: usize,
    pub seed: u64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self { alpha: 0.05, max_lag: 5, dw_reps: 1000, seed: 42 }
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample standard deviation, rejecting (numerically) constant samples.
fn sample_sd(x: &[f64], m: f64) -> Result<f64> {
    let ss: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
    let sd = (ss / (x.len() - 1) as f64).sqrt();
    let scale = x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if !(sd > 1e-14 * scale) || sd == 0.0 {
        return Err(Error::ConstantSample);
    }
    Ok(sd)
}

/// Anderson–Darling test for composite normality.
///
/// `statistic` is the uncorrected A²; the p-value comes from the
/// small-sample corrected `A²·(1 + 0.75/n + 2.25/n²)` through the usual
/// piecewise-exponential approximation.
pub fn anderson_darling_test(sample: &[f64], alpha: f64) -> Result<TestResult> {
    let n = sample.len();
    if n < 8 {
        return Err(Error::InsufficientData { needed: 8, given: n });
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let m = mean(&x);
    let sd = sample_sd(&x, m)?;
    let z: Vec<f64> = x.iter().map(|v| (v - m) / sd).collect();

    let nf = n as f64;
    let s: f64 = (0..n)
        .map(|i| {
            let w = (2 * i + 1) as f64;
            w * (normal_cdf(z[i]).ln() + normal_cdf(-z[n - 1 - i]).ln())
        })
        .sum();
    let a2 = -nf - s / nf;
    let aa = a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf));
    let p = if aa < 0.2 {
        1.0 - (-13.436 + 101.14 * aa - 223.73 * aa * aa).exp()
    } else if aa < 0.34 {
        1.0 - (-8.318 + 42.796 * aa - 59.938 * aa * aa).exp()
    } else if aa < 0.6 {
        (0.9177 - 4.279 * aa - 1.38 * aa * aa).exp()
    } else if aa < 10.0 {
        (1.2937 - 5.709 * aa + 0.0186 * aa * aa).exp()
    } else {
        3.7e-24
    };
    Ok(TestResult::new(a2, p, alpha))
}

/// Two-sided one-sample t-test of zero mean.
pub fn one_sample_t_test(sample: &[f64], alpha: f64) -> Result<TestResult> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, given: n });
    }
    let m = mean(sample);
    let sd = sample_sd(sample, m)?;
    let t = m / (sd / (n as f64).sqrt());
    Ok(TestResult::new(t, t_two_sided(t, (n - 1) as f64)?, alpha))
}

/// Residuals of the OLS regression of `y` on `[1, x]`.
struct InnerRegression {
    x_centered: Vec<f64>,
    sxx: f64,
}

impl InnerRegression {
    fn new(x: &[f64]) -> Self {
        let mx = mean(x);
        let x_centered: Vec<f64> = x.iter().map(|v| v - mx).collect();
        let sxx = x_centered.iter().map(|v| v * v).sum();
        Self { x_centered, sxx }
    }

    fn residuals_into(&self, y: &[f64], out: &mut [f64]) {
        let my = mean(y);
        let slope = if self.sxx > 0.0 {
            self.x_centered.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / self.sxx
        } else {
            0.0
        };
        for ((o, yi), xi) in out.iter_mut().zip(y).zip(&self.x_centered) {
            *o = yi - my - slope * xi;
        }
    }
}

/// Generalized Durbin–Watson statistics `d_L` for `L = 1..=max_lag`.
fn dw_statistics(e: &[f64], max_lag: usize, out: &mut [f64]) -> bool {
    let denom: f64 = e.iter().map(|v| v * v).sum();
    if !(denom > 0.0) {
        return false;
    }
    for (lag, d) in (1..=max_lag).zip(out.iter_mut()) {
        let num: f64 = e[lag..].iter().zip(e).map(|(a, b)| (a - b).powi(2)).sum();
        *d = num / denom;
    }
    true
}

/// Durbin–Watson test of autocorrelation at lags `1..=max_lag`.
///
/// The residuals are first regressed on `[1, regressor]`; p-values are
/// two-sided and come from a parametric bootstrap of `reps` standard-normal
/// series pushed through the same regression.
pub fn durbin_watson_test(
    residuals: &[f64],
    regressor: &[f64],
    max_lag: usize,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<DurbinWatsonResult> {
    let n = residuals.len();
    if regressor.len() != n {
        return Err(Error::DimensionMismatch(format!("{n} residuals but {} regressor values", regressor.len())));
    }
    if max_lag == 0 {
        return Err(Error::Config("max_lag must be at least 1".into()));
    }
    if n < max_lag + 2 {
        return Err(Error::InsufficientData { needed: max_lag + 2, given: n });
    }
    if reps == 0 {
        return Err(Error::Config("bootstrap needs at least one replicate".into()));
    }

    let ols = InnerRegression::new(regressor);
    let mut e = vec![0.0; n];
    ols.residuals_into(residuals, &mut e);
    let mut observed = vec![0.0; max_lag];
    if !dw_statistics(&e, max_lag, &mut observed) {
        return Err(Error::ConstantSample);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut below = vec![0usize; max_lag];
    let mut above = vec![0usize; max_lag];
    let mut y = vec![0.0; n];
    let mut d = vec![0.0; max_lag];
    for _ in 0..reps {
        for v in y.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        ols.residuals_into(&y, &mut e);
        if !dw_statistics(&e, max_lag, &mut d) {
            continue;
        }
        for k in 0..max_lag {
            below[k] += usize::from(d[k] <= observed[k]);
            above[k] += usize::from(d[k] >= observed[k]);
        }
    }

    let lags: Vec<LagStatistic> = (0..max_lag)
        .map(|k| {
            let lo = below[k] as f64 / reps as f64;
            let hi = above[k] as f64 / reps as f64;
            LagStatistic { lag: k + 1, statistic: observed[k], p_value: (2.0 * lo.min(hi)).clamp(0.0, 1.0) }
        })
        .collect();
    let passed = lags.iter().all(|l| l.p_value >= alpha);
    Ok(DurbinWatsonResult { lags, passed, alpha })
}

/// F-test of residual variance against the known error variance `var_eps`.
///
/// The residual variance divides by `n − n_free_params`, and both degrees of
/// freedom of the reference F distribution are `n − n_free_params`.
pub fn variance_f_test(residuals: &[f64], var_eps: f64, n_free_params: usize, alpha: f64) -> Result<TestResult> {
    let n = residuals.len();
    if n <= n_free_params {
        return Err(Error::InsufficientData { needed: n_free_params + 1, given: n });
    }
    if !(var_eps > 0.0 && var_eps.is_finite()) {
        return Err(Error::Domain(format!("var_eps must be positive, got {var_eps}")));
    }
    let dof = (n - n_free_params) as f64;
    let m = mean(residuals);
    let var_res = residuals.iter().map(|e| (e - m).powi(2)).sum::<f64>() / dof;
    let f = var_eps.max(var_res) / var_eps.min(var_res);
    let p = if f.is_finite() { f_sf(f, dof, dof)? } else { 0.0 };
    Ok(TestResult::new(f, p, alpha))
}

/// Runs all residual criteria on a fit and aggregates the verdict.
///
/// A criterion that cannot be evaluated (too few points, constant residuals)
/// is recorded in `notes` and makes the report inadequate. A missing
/// `var_eps` skips the variance test without failing the report.
pub fn assess_adequacy(
    fit: &FitResult,
    spectrum: &Spectrum,
    n_free_params: usize,
    config: &DiagnosticsConfig,
) -> AdequacyReport {
    let resid = &fit.residuals;
    let mut notes = Vec::new();
    let mut complete = true;

    let mut record = |name: &str, r: Result<TestResult>| match r {
        Ok(t) => Some(t),
        Err(e) => {
            notes.push(format!("{name} test not run: {e}"));
            complete = false;
            None
        }
    };
    let normality = record("normality", anderson_darling_test(resid, config.alpha));
    let zero_mean = record("zero-mean", one_sample_t_test(resid, config.alpha));
    let variance = match spectrum.var_eps() {
        Some(v) => record("variance", variance_f_test(resid, v, n_free_params, config.alpha)),
        None => None,
    };
    let autocorrelation = match durbin_watson_test(
        resid,
        spectrum.temperatures(),
        config.max_lag,
        config.alpha,
        config.dw_reps,
        config.seed,
    ) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("autocorrelation test not run: {e}"));
            complete = false;
            None
        }
    };
    if spectrum.var_eps().is_none() {
        notes.push("variance test skipped: measurement-error variance unknown".into());
    }

    let adequate = complete
        && normality.is_some_and(|t| t.passed)
        && zero_mean.is_some_and(|t| t.passed)
        && autocorrelation.as_ref().is_some_and(|t| t.passed)
        && variance.is_none_or(|t| t.passed);
    AdequacyReport { normality, zero_mean, autocorrelation, variance, adequate, notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn t_test_zero_mean_sample() {
        let r = one_sample_t_test(&[-2.0, -1.0, 1.0, 2.0], 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(r.passed);
    }

    #[test]
    fn t_test_hand_computed() {
        // mean 2, s = 1, n = 3 → t = 2√3; p from scipy.stats.ttest_1samp
        let r = one_sample_t_test(&[1.0, 2.0, 3.0], 0.05).unwrap();
        assert_abs_diff_eq!(r.statistic, 2.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.p_value, 0.074_179_900_227_448_53, epsilon = 1e-10);
        assert!(r.passed);
    }

    #[test]
    fn t_test_errors() {
        assert!(matches!(one_sample_t_test(&[1.0], 0.05), Err(Error::InsufficientData { .. })));
        assert!(matches!(one_sample_t_test(&[3.0, 3.0, 3.0], 0.05), Err(Error::ConstantSample)));
    }

    #[test]
    fn ad_errors() {
        assert!(matches!(anderson_darling_test(&[1.0; 7], 0.05), Err(Error::InsufficientData { needed: 8, .. })));
        assert!(matches!(anderson_darling_test(&[1.0; 9], 0.05), Err(Error::ConstantSample)));
    }

    #[test]
    fn dw_alternating_series() {
        // regressor orthogonal to e, so the inner regression leaves e unchanged
        let e = [1.0, -1.0, 1.0, -1.0];
        let x = [1.0, 2.0, 2.0, 1.0];
        let r = durbin_watson_test(&e, &x, 2, 0.05, 200, 7).unwrap();
        assert_abs_diff_eq!(r.lags[0].statistic, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lags[1].statistic, 0.0, epsilon = 1e-12);
        assert_eq!(r.lags.len(), 2);
    }

    #[test]
    fn dw_errors() {
        assert!(durbin_watson_test(&[1.0, 2.0, 3.0], &[1.0, 2.0], 1, 0.05, 10, 0).is_err());
        assert!(matches!(
            durbin_watson_test(&[1.0, -1.0, 0.5, 2.0, 1.0, 3.0], &[1.0; 6], 5, 0.05, 10, 0),
            Err(Error::InsufficientData { needed: 7, given: 6 })
        ));
    }

    #[test]
    fn f_test_equal_variance() {
        let r = variance_f_test(&[1.0, -1.0, 1.0, -1.0], 4.0 / 3.0, 1, 0.05).unwrap();
        assert_abs_diff_eq!(r.statistic, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.p_value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn f_test_errors() {
        assert!(variance_f_test(&[1.0, -1.0], 1.0, 2, 0.05).is_err());
        assert!(variance_f_test(&[1.0, -1.0, 0.0], 0.0, 1, 0.05).is_err());
    }

    #[test]
    fn f_test_zero_residuals() {
        let r = variance_f_test(&[0.0; 10], 1.0, 2, 0.05).unwrap();
        assert_eq!(r.p_value, 0.0);
        assert!(!r.passed);
    }
}
