"""Regenerates reference.json: frozen reference values for the special
functions and residual tests, computed with mpmath / scipy / statsmodels.

    python3 generate_reference.py > reference.json
"""
import json

import mpmath as mp
import numpy as np
from scipy import stats
from statsmodels.stats.diagnostic import normal_ad
from statsmodels.stats.stattools import durbin_watson

mp.mp.dps = 50


def normal_cdf(x):
    return float(mp.ncdf(mp.mpf(x)))


def t_cdf(x, df):
    x, df = mp.mpf(x), mp.mpf(df)
    if x == 0:
        return 0.5
    tail = mp.betainc(df / 2, mp.mpf(1) / 2, 0, df / (df + x * x), regularized=True) / 2
    return float(1 - tail if x > 0 else tail)


def f_cdf(x, d1, d2):
    x, d1, d2 = mp.mpf(x), mp.mpf(d1), mp.mpf(d2)
    return float(mp.betainc(d1 / 2, d2 / 2, 0, d1 * x / (d1 * x + d2), regularized=True))


def f_sf(x, d1, d2):
    x, d1, d2 = mp.mpf(x), mp.mpf(d1), mp.mpf(d2)
    return float(mp.betainc(d2 / 2, d1 / 2, 0, d2 / (d1 * x + d2), regularized=True))


NORMAL_POINTS = [-8.0, -5.0, -3.0, -2.5, -1.959964, -1.5, -1.0, -0.5, -0.1, 0.0,
                 0.1, 0.5, 1.0, 1.5, 1.959964, 2.5, 3.0, 4.0, 5.0, 8.0]
T_POINTS = [(0.0, 1), (1.0, 1), (-1.0, 1), (2.5, 1), (1.0, 2), (-2.0, 2), (0.5, 3),
            (3.4641016151377544, 2), (1.96, 5), (-1.3, 7), (2.228, 10), (0.7, 15),
            (-2.1, 20), (1.5, 30), (3.0, 50), (-0.25, 100), (1.96, 1000),
            (1.96, 1000000), (6.0, 4), (-4.0, 12)]
F_POINTS = [(1.0, 5, 5), (4.0, 10, 10), (1.0, 10, 10), (0.5, 3, 7), (2.0, 1, 1),
            (3.5, 2, 20), (10.0, 20, 20), (0.1, 4, 4), (1.5, 30, 30), (2.2, 12, 5),
            (0.8, 1, 50), (5.0, 3, 3), (1.2, 200, 200), (1.05, 396, 396),
            (1.3, 394, 394), (0.3, 6, 2), (7.0, 8, 15), (1.8, 25, 40),
            (3.0, 100, 3), (10.0, 20, 20)]


def dw_lags(resid, regressor, max_lag):
    x = np.column_stack([np.ones_like(regressor), regressor])
    beta, *_ = np.linalg.lstsq(x, resid, rcond=None)
    e = resid - x @ beta
    out = []
    for lag in range(1, max_lag + 1):
        out.append(float(np.sum((e[lag:] - e[:-lag]) ** 2) / np.sum(e ** 2)))
    assert abs(out[0] - durbin_watson(e)) < 1e-12
    return out


def samples():
    rng = np.random.default_rng(20240611)
    out = []

    def add(name, x, var_eps, n_params, regressor=None):
        x = np.asarray(x, dtype=float)
        if regressor is None:
            regressor = np.linspace(350.0, 750.0, len(x))
        out.append((name, x, regressor, var_eps, n_params))

    add("normal_n12", rng.normal(0.0, 1.0, 12), 1.0, 2)
    add("shifted_normal_n20", rng.normal(0.3, 1.0, 20), 0.5, 2)
    add("uniform_n30", rng.uniform(-1.0, 1.0, 30), 1.0 / 3.0, 4)
    add("exponential_n50", rng.exponential(1.0, 50), 1.0, 2)
    n = 50
    add("normal_quantiles_n50", stats.norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25)), 1.0, 2)
    # values collinear with the default grid would leave nothing for the DW regression
    add("equispaced_n50", np.linspace(0.0, 1.0, 50), 0.01, 2,
        regressor=rng.permutation(np.linspace(350.0, 750.0, 50)))
    ar = np.zeros(100)
    eps = rng.normal(0.0, 1.0, 100)
    for i in range(100):
        ar[i] = (0.6 * ar[i - 1] if i else 0.0) + eps[i]
    add("ar1_n100", ar, 1.0, 4)
    add("normal_n200", rng.normal(0.0, 1.0, 200), 1.0, 6)
    add("student3_n25", rng.standard_t(3, 25), 3.0, 2)
    add("normal_small_sd_n400", rng.normal(0.0, 0.01, 400), 1e-4, 6)
    return out


def main():
    ref = {
        "normal_cdf": [{"x": x, "p": normal_cdf(x)} for x in NORMAL_POINTS],
        "t_cdf": [{"x": x, "df": df, "p": t_cdf(x, df)} for x, df in T_POINTS],
        "f_cdf": [{"x": x, "d1": d1, "d2": d2, "p": f_cdf(x, d1, d2), "sf": f_sf(x, d1, d2)}
                  for x, d1, d2 in F_POINTS],
        "samples": [],
    }
    for name, x, reg, var_eps, n_params in samples():
        ad_stat, ad_p = normal_ad(x)
        t = stats.ttest_1samp(x, 0.0)
        n = len(x)
        var_res = float(np.sum((x - x.mean()) ** 2) / (n - n_params))
        ff = max(var_eps, var_res) / min(var_eps, var_res)
        ref["samples"].append({
            "name": name,
            "values": [float(v) for v in x],
            "regressor": [float(v) for v in reg],
            "var_eps": var_eps,
            "n_free_params": n_params,
            "anderson_darling": {"statistic": float(ad_stat), "p_value": float(ad_p)},
            "t_test": {"statistic": float(t.statistic), "p_value": float(t.pvalue)},
            "durbin_watson": dw_lags(x, reg, 5),
            "variance_f": {"statistic": ff, "p_value": f_sf(ff, n - n_params, n - n_params)},
        })
    print(json.dumps(ref, indent=1))


if __name__ == "__main__":
    main()
