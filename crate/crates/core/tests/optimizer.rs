use debyefit::synth::uniform_grid;
use debyefit::{
    fit, fit_traced, generate, DebyeModel, LmOptions, ParameterVector, Spectrum, SynthSpec, TerminationReason,
};

fn noise_free(q0: &[f64], t0: &[f64], points: usize) -> (Spectrum, DebyeModel) {
    let model = DebyeModel::new(1.0).unwrap();
    let grid = uniform_grid(350.0, 750.0, points);
    let p = ParameterVector::from_amplitudes_and_temperatures(q0, t0).unwrap();
    let q = model.evaluate(&grid, &p).unwrap();
    (Spectrum::new(grid, q, None).unwrap(), model)
}

#[test]
fn noise_free_single_peak_recovery() {
    let (s, model) = noise_free(&[1.0], &[550.0], 400);
    let start = ParameterVector::new(vec![0.8, 500.0]).unwrap();
    let r = fit(&s, &start, &LmOptions::default(), &model).unwrap();
    assert!(r.converged);
    assert!((r.params.as_slice()[0] - 1.0).abs() < 1e-8);
    assert!((r.params.as_slice()[1] - 550.0).abs() / 550.0 < 1e-8);
    assert!(r.sse < 1e-16 * 400.0, "sse {}", r.sse);
}

#[test]
fn start_at_truth() {
    let (s, model) = noise_free(&[1.0], &[550.0], 400);
    let r = fit(&s, &ParameterVector::new(vec![1.0, 550.0]).unwrap(), &LmOptions::default(), &model).unwrap();
    assert!(r.iterations <= 2);
    assert!(matches!(r.termination_reason, TerminationReason::Gradient | TerminationReason::Sse));
}

#[test]
fn noisy_three_peaks_recovered_within_two_kelvin() {
    let synth = generate(&SynthSpec::canonical(2024)).unwrap();
    let model = DebyeModel::new(1.0).unwrap();
    // ±30 K and ±30 % off the truth
    let start = ParameterVector::from_amplitudes_and_temperatures(&[1.3, 0.7, 1.25], &[420.0, 580.0, 625.0]).unwrap();
    let r = fit(&synth.spectrum, &start, &LmOptions::default(), &model).unwrap();
    let mut t0 = r.params.peak_temperatures().to_vec();
    t0.sort_by(f64::total_cmp);
    for (got, want) in t0.iter().zip([450.0, 550.0, 650.0]) {
        assert!((got - want).abs() <= 2.0, "{t0:?}");
    }
}

#[test]
fn sse_trace_is_non_increasing() {
    let synth = generate(&SynthSpec::canonical(9)).unwrap();
    let model = DebyeModel::new(1.0).unwrap();
    for start in [vec![0.5, 0.5, 0.5, 430.0, 560.0, 670.0], vec![1.5, 1.0, 0.2, 470.0, 530.0, 640.0], vec![1.0, 500.0]]
    {
        let start = ParameterVector::new(start).unwrap();
        let (r, trace) = fit_traced(&synth.spectrum, &start, &LmOptions::default(), &model).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]), "{trace:?}");
        assert!(r.sse <= trace[0]);
        assert_eq!(r.sse, r.residuals.iter().map(|e| e * e).sum::<f64>());
        assert_eq!(r.residuals.len(), synth.spectrum.len());
    }
}

#[test]
fn equivariant_under_relabeling() {
    let synth = generate(&SynthSpec::canonical(4)).unwrap();
    let model = DebyeModel::new(1.0).unwrap();
    let q = [1.2, 0.9, 0.8];
    let t = [440.0, 560.0, 640.0];
    let perm = [2, 0, 1];
    let a = fit(
        &synth.spectrum,
        &ParameterVector::from_amplitudes_and_temperatures(&q, &t).unwrap(),
        &LmOptions::default(),
        &model,
    )
    .unwrap();
    let qp: Vec<f64> = perm.iter().map(|&i| q[i]).collect();
    let tp: Vec<f64> = perm.iter().map(|&i| t[i]).collect();
    let b = fit(
        &synth.spectrum,
        &ParameterVector::from_amplitudes_and_temperatures(&qp, &tp).unwrap(),
        &LmOptions::default(),
        &model,
    )
    .unwrap();
    for (k, &i) in perm.iter().enumerate() {
        assert!((b.params.amplitudes()[k] - a.params.amplitudes()[i]).abs() < 1e-8);
        assert!((b.params.peak_temperatures()[k] - a.params.peak_temperatures()[i]).abs() < 1e-6);
    }
}

#[test]
fn deterministic() {
    let synth = generate(&SynthSpec::canonical(5)).unwrap();
    let model = DebyeModel::new(1.0).unwrap();
    let start = ParameterVector::new(vec![1.0, 1.0, 1.0, 440.0, 560.0, 640.0]).unwrap();
    let a = fit(&synth.spectrum, &start, &LmOptions::default(), &model).unwrap();
    let b = fit(&synth.spectrum, &start, &LmOptions::default(), &model).unwrap();
    assert_eq!(a, b);
}

#[test]
fn peak_temperatures_stay_in_bounds() {
    // A far-off start pushes T0 toward the clamp; it must stay within [min/2, 2·max].
    let (s, model) = noise_free(&[1.0], &[550.0], 200);
    let start = ParameterVector::new(vec![-3.0, 1490.0]).unwrap();
    let r = fit(&s, &start, &LmOptions::default(), &model).unwrap();
    let t0 = r.params.peak_temperatures()[0];
    assert!((175.0..=1500.0).contains(&t0), "{t0}");
    let out = ParameterVector::new(vec![1.0, 5000.0]).unwrap();
    let r = fit(&s, &out, &LmOptions::default(), &model).unwrap();
    assert!(r.params.peak_temperatures()[0] <= 1500.0);
}
