"""Smoke test for the debyefit Python bindings.

Build and install first:

    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/debyefit-*.whl
"""

import json
import math

import debyefit


def main():
    e = debyefit.activation_energy(500.0, 1.0)
    assert math.isclose(e, 124611.28701719574, rel_tol=1e-12), e

    model = debyefit.DebyeModel(1.0)
    q = model.evaluate([450.0, 550.0, 650.0], [1.0, 1.0, 1.0], [450.0, 550.0, 650.0])
    assert len(q) == 3 and all(v > 1.0 for v in q)
    jac = model.jacobian([500.0], [2.0], [500.0])
    assert jac == [[1.0, 0.0]], jac

    spectrum = debyefit.synth([(1.0, 450.0), (1.0, 550.0), (1.0, 650.0)], seed=42)
    assert len(spectrum) == 400 and spectrum.var_eps == 1e-4

    f = debyefit.fit(spectrum, [1.2, 0.8, 1.1], [440.0, 560.0, 640.0], 1.0)
    assert f.converged and len(f.residuals) == 400

    result = debyefit.decompose(spectrum, 1.0)
    assert result.status == "adequate", result
    assert result.n_components == 3
    for (q0, t0, _), want in zip(sorted(result.components, key=lambda c: c[1]), (450.0, 550.0, 650.0)):
        assert abs(t0 - want) <= 2.0 and abs(q0 - 1.0) <= 0.03
    doc = json.loads(result.to_json())
    assert doc["accepted"]["n_components"] == 3
    assert "<svg" in result.plot_svg(spectrum)

    capped = debyefit.decompose(spectrum, 1.0, max_components=1)
    assert capped.status == "cap_reached" and capped.n_components is None
    assert json.loads(capped.to_json())["accepted"] is None

    t = debyefit.one_sample_t_test([1.0, 2.0, 3.0])
    assert math.isclose(t.statistic, 2.0 * math.sqrt(3.0)) and abs(t.p_value - 0.0742) < 1e-4
    dw = debyefit.durbin_watson_test([1.0, -1.0, 1.0, -1.0], [1.0, 2.0, 2.0, 1.0], max_lag=2, reps=50)
    assert abs(dw.lags[0][1] - 3.0) < 1e-12
    fv = debyefit.variance_f_test([1.0, -1.0, 1.0, -1.0], 4.0 / 3.0, 1)
    assert abs(fv.p_value - 0.5) < 1e-12
    ad = debyefit.anderson_darling_test([x / 99.0 for x in range(100)])
    assert not ad.passed

    n_checks, failed = debyefit.run_selftest()
    assert n_checks > 0 and not failed, failed

    try:
        debyefit.Spectrum([1.0, 1.0], [0.0, 0.0])
    except debyefit.DebyefitError:
        pass
    else:
        raise AssertionError("duplicate temperatures accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
