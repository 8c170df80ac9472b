//! Distribution functions needed by the residual tests.
//!
//! `erfc` comes from `libm` and `ln Γ` from `statrs`; the regularized
//! incomplete beta function is evaluated here with a modified-Lentz continued
//! fraction and a cancellation-free `ln B(a, b)` so that Student-t and F
//! probabilities stay accurate for very large degrees of freedom.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const CF_MAX_ITER: usize = 20_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Stirling-series remainder `ln Γ(x) − [(x − ½)ln x − x + ln √(2π)]`, for x ≥ 10.
fn lgamma_correction(x: f64) -> f64 {
    const COEF: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let x2 = 1.0 / (x * x);
    let mut acc = 0.0;
    for c in COEF.iter().rev() {
        acc = acc * x2 + c;
    }
    acc / x
}

/// `ln B(a, b)` without the catastrophic cancellation of
/// `ln Γ(a) + ln Γ(b) − ln Γ(a + b)` when one argument is large.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    let s = p + q;
    if p >= 10.0 {
        let corr = lgamma_correction(p) + lgamma_correction(q) - lgamma_correction(s);
        -0.5 * q.ln() + LN_SQRT_2PI + corr + (p - 0.5) * (p / s).ln() + q * (-p / s).ln_1p()
    } else if q >= 10.0 {
        let corr = lgamma_correction(q) - lgamma_correction(s);
        ln_gamma(p) + corr + p - p * s.ln() + (q - 0.5) * (-p / s).ln_1p()
    } else {
        ln_gamma(p) + ln_gamma(q) - ln_gamma(s)
    }
}

/// Continued fraction for `I_x(a, b)` (converges fast for `x < (a+1)/(a+b+2)`).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)` and its complement, given both
/// `x` and `y = 1 − x` so callers can supply whichever is computed exactly.
///
/// Returns `(I_x(a, b), 1 − I_x(a, b))`; the smaller of the two is computed
/// directly rather than by subtraction.
pub fn beta_reg_pair(a: f64, b: f64, x: f64, y: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    if y <= 0.0 {
        return (1.0, 0.0);
    }
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        let lower = (ln_front.exp() * beta_cf(a, b, x) / a).clamp(0.0, 1.0);
        (lower, 1.0 - lower)
    } else {
        let upper = (ln_front.exp() * beta_cf(b, a, y) / b).clamp(0.0, 1.0);
        (1.0 - upper, upper)
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_reg(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("beta_reg({a}, {b}, {x}) out of domain")));
    }
    Ok(beta_reg_pair(a, b, x, 1.0 - x).0)
}

fn check_dof(name: &str, df: f64) -> Result<()> {
    if df.is_nan() || df < 1.0 {
        Err(Error::Domain(format!("{name} must be at least 1, got {df}")))
    } else {
        Ok(())
    }
}

/// `(x², df)` split into the beta arguments `df/(df+x²)` and `x²/(df+x²)`.
fn t_beta_args(x: f64, df: f64) -> (f64, f64) {
    let x2 = x * x;
    if x2.is_infinite() {
        return (0.0, 1.0);
    }
    (df / (df + x2), x2 / (df + x2))
}

/// Student-t CDF with `df` degrees of freedom.
pub fn t_cdf(x: f64, df: f64) -> Result<f64> {
    check_dof("degrees of freedom", df)?;
    if x.is_nan() {
        return Err(Error::Domain("t_cdf of NaN".into()));
    }
    if x == 0.0 {
        return Ok(0.5);
    }
    let (bx, by) = t_beta_args(x, df);
    let tail = 0.5 * beta_reg_pair(0.5 * df, 0.5, bx, by).0;
    Ok(if x > 0.0 { 1.0 - tail } else { tail })
}

/// Two-sided tail probability `P(|T| ≥ |x|)`.
pub fn t_two_sided(x: f64, df: f64) -> Result<f64> {
    check_dof("degrees of freedom", df)?;
    if x.is_nan() {
        return Err(Error::Domain("t probability of NaN".into()));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let (bx, by) = t_beta_args(x, df);
    Ok(beta_reg_pair(0.5 * df, 0.5, bx, by).0)
}

fn f_beta(x: f64, d1: f64, d2: f64) -> Result<(f64, f64)> {
    check_dof("d1", d1)?;
    check_dof("d2", d2)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("F quantile must be non-negative, got {x}")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let denom = d1 * x + d2;
    Ok(beta_reg_pair(0.5 * d1, 0.5 * d2, d1 * x / denom, d2 / denom))
}

/// Fisher–Snedecor CDF.
pub fn f_cdf(x: f64, d1: f64, d2: f64) -> Result<f64> {
    Ok(f_beta(x, d1, d2)?.0)
}

/// Fisher–Snedecor upper tail `1 − F(x)`, computed without subtraction.
pub fn f_sf(x: f64, d1: f64, d2: f64) -> Result<f64> {
    Ok(f_beta(x, d1, d2)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_symmetry() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for x in [0.3, 1.0, 2.7, 6.0] {
            assert_abs_diff_eq!(normal_cdf(x) + normal_cdf(-x), 1.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(normal_cdf(1.959_964), 0.975, epsilon = 1e-7);
    }

    #[test]
    fn t_special_cases() {
        assert_eq!(t_cdf(0.0, 3.0).unwrap(), 0.5);
        assert_abs_diff_eq!(t_cdf(1.0, 1.0).unwrap(), 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(t_cdf(1.96, 1e6).unwrap(), normal_cdf(1.96), epsilon = 1e-5);
        assert!(t_cdf(1.0, 0.5).is_err());
        assert_eq!(t_cdf(f64::INFINITY, 4.0).unwrap(), 1.0);
        assert_eq!(t_two_sided(0.0, 4.0).unwrap(), 1.0);
    }

    #[test]
    fn f_special_cases() {
        for d in [1.0, 4.0, 17.0, 350.0] {
            assert_abs_diff_eq!(f_cdf(1.0, d, d).unwrap(), 0.5, epsilon = 1e-13);
        }
        assert_eq!(f_cdf(0.0, 3.0, 4.0).unwrap(), 0.0);
        assert!(f_cdf(-1.0, 3.0, 4.0).is_err());
        assert!(f_cdf(1.0, 0.0, 4.0).is_err());
        let (lo, hi) = (f_cdf(2.5, 3.0, 9.0).unwrap(), f_sf(2.5, 3.0, 9.0).unwrap());
        assert_abs_diff_eq!(lo + hi, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn ln_beta_branches_agree_with_gamma() {
        for (a, b) in [(0.5, 0.5), (2.0, 3.0), (0.5, 12.0), (15.0, 11.0), (3.0, 40.0)] {
            let naive = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
            assert_abs_diff_eq!(ln_beta(a, b), naive, epsilon = 1e-12);
        }
    }

    #[test]
    fn beta_reg_domain() {
        assert!(beta_reg(0.0, 1.0, 0.5).is_err());
        assert!(beta_reg(1.0, 1.0, 1.5).is_err());
        // I_x(1, 1) = x
        assert_abs_diff_eq!(beta_reg(1.0, 1.0, 0.3).unwrap(), 0.3, epsilon = 1e-15);
    }
}
