//! Checks the special functions and residual tests against frozen reference
//! values (mpmath for the distribution functions; scipy/statsmodels for the
//! test statistics on ten fixed samples).

use serde::Deserialize;

use crate::diagnostics::{anderson_darling_test, durbin_watson_test, one_sample_t_test, variance_f_test};
use crate::error::Result;
use crate::special::{f_cdf, f_sf, normal_cdf, t_cdf};

/// Frozen reference data, regenerated by `data/generate_reference.py`.
pub const REFERENCE_JSON: &str = include_str!("../data/reference.json");

pub const NORMAL_CDF_TOL: f64 = 1e-12;
pub const T_CDF_TOL: f64 = 1e-10;
pub const F_CDF_TOL: f64 = 1e-10;
pub const STATISTIC_TOL: f64 = 1e-6;
pub const P_VALUE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Deserialize)]
pub struct NormalPoint {
    pub x: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct TPoint {
    pub x: f64,
    pub df: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FPoint {
    pub x: f64,
    pub d1: f64,
    pub d2: f64,
    pub p: f64,
    pub sf: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct StatPair {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceSample {
    pub name: String,
    pub values: Vec<f64>,
    pub regressor: Vec<f64>,
    pub var_eps: f64,
    pub n_free_params: usize,
    pub anderson_darling: StatPair,
    pub t_test: StatPair,
    pub durbin_watson: Vec<f64>,
    pub variance_f: StatPair,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Reference {
    pub normal_cdf: Vec<NormalPoint>,
    pub t_cdf: Vec<TPoint>,
    pub f_cdf: Vec<FPoint>,
    pub samples: Vec<ReferenceSample>,
}

pub fn reference() -> Reference {
    serde_json::from_str(REFERENCE_JSON).expect("embedded reference data is valid")
}

/// One comparison against a reference value.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub got: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: String, got: f64, expected: f64, tolerance: f64) -> Self {
        Self { name, got, expected, tolerance }
    }

    pub fn error(&self) -> f64 {
        (self.got - self.expected).abs()
    }

    pub fn passed(&self) -> bool {
        self.error() <= self.tolerance
    }
}

pub fn special_function_checks(r: &Reference) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for p in &r.normal_cdf {
        out.push(Check::new(format!("normal_cdf({})", p.x), normal_cdf(p.x), p.p, NORMAL_CDF_TOL));
    }
    for p in &r.t_cdf {
        out.push(Check::new(format!("t_cdf({}, {})", p.x, p.df), t_cdf(p.x, p.df)?, p.p, T_CDF_TOL));
    }
    for p in &r.f_cdf {
        out.push(Check::new(format!("f_cdf({}, {}, {})", p.x, p.d1, p.d2), f_cdf(p.x, p.d1, p.d2)?, p.p, F_CDF_TOL));
        out.push(Check::new(format!("f_sf({}, {}, {})", p.x, p.d1, p.d2), f_sf(p.x, p.d1, p.d2)?, p.sf, F_CDF_TOL));
    }
    Ok(out)
}

/// Statistic and p-value checks for the residual tests. Durbin–Watson
/// p-values are bootstrap estimates and are not compared.
pub fn statistical_test_checks(r: &Reference) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in &r.samples {
        let ad = anderson_darling_test(&s.values, 0.05)?;
        out.push(Check::new(
            format!("{} AD statistic", s.name),
            ad.statistic,
            s.anderson_darling.statistic,
            STATISTIC_TOL,
        ));
        out.push(Check::new(format!("{} AD p-value", s.name), ad.p_value, s.anderson_darling.p_value, P_VALUE_TOL));

        let t = one_sample_t_test(&s.values, 0.05)?;
        out.push(Check::new(format!("{} t statistic", s.name), t.statistic, s.t_test.statistic, STATISTIC_TOL));
        out.push(Check::new(format!("{} t p-value", s.name), t.p_value, s.t_test.p_value, P_VALUE_TOL));

        let dw = durbin_watson_test(&s.values, &s.regressor, s.durbin_watson.len(), 0.05, 1, 0)?;
        for (lag, expected) in dw.lags.iter().zip(&s.durbin_watson) {
            out.push(Check::new(format!("{} DW lag {}", s.name, lag.lag), lag.statistic, *expected, STATISTIC_TOL));
        }

        let f = variance_f_test(&s.values, s.var_eps, s.n_free_params, 0.05)?;
        out.push(Check::new(format!("{} F statistic", s.name), f.statistic, s.variance_f.statistic, STATISTIC_TOL));
        out.push(Check::new(format!("{} F p-value", s.name), f.p_value, s.variance_f.p_value, P_VALUE_TOL));
    }
    Ok(out)
}

/// All reference checks.
pub fn run() -> Result<Vec<Check>> {
    let r = reference();
    let mut checks = special_function_checks(&r)?;
    checks.extend(statistical_test_checks(&r)?);
    Ok(checks)
}
