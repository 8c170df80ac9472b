use debyefit::synth::uniform_grid;
use debyefit::{
    decompose, fit, generate, initial_guess, DebyeComponent, DebyeModel, DecompositionConfig, DofMode, Error,
    LmOptions, ParameterVector, PhysicalConstants, Spectrum, Status, SynthSpec,
};

fn component(q0: f64, t0: f64) -> DebyeComponent {
    DebyeComponent::new(q0, t0, 1.0, &PhysicalConstants::CODATA_2018).unwrap()
}

fn sorted_components(p: &ParameterVector) -> Vec<(f64, f64)> {
    let mut c: Vec<(f64, f64)> = p.amplitudes().iter().copied().zip(p.peak_temperatures().iter().copied()).collect();
    c.sort_by(|a, b| a.1.total_cmp(&b.1));
    c
}

#[test]
fn single_component_accepted_at_one() {
    let spec = SynthSpec {
        components: vec![component(1.0, 550.0)],
        t_range: (350.0, 750.0),
        n_points: 400,
        noise_sd: 0.01,
        frequency: 1.0,
        seed: 42,
    };
    let synth = generate(&spec).unwrap();
    let r = decompose(&synth.spectrum, &DecompositionConfig::new(1.0)).unwrap();
    assert_eq!(r.status, Status::Adequate);
    let a = r.accepted_attempt().unwrap();
    assert_eq!(a.n_components, 1);
    let p = &a.fit.as_ref().unwrap().params;
    assert!((p.peak_temperatures()[0] - 550.0).abs() < 1.0);
    assert!((p.amplitudes()[0] - 1.0).abs() < 0.01);
}

#[test]
fn canonical_spectrum_needs_three() {
    let synth = generate(&SynthSpec::canonical(42)).unwrap();
    let r = decompose(&synth.spectrum, &DecompositionConfig::new(1.0)).unwrap();
    assert_eq!(r.status, Status::Adequate);
    assert_eq!(r.attempts.len(), 3);
    assert!(!r.attempts[0].adequate && !r.attempts[1].adequate);
    let a = r.accepted_attempt().unwrap();
    assert_eq!(a.n_components, 3);
    for ((q0, t0), want) in sorted_components(&a.fit.as_ref().unwrap().params).iter().zip([450.0, 550.0, 650.0]) {
        assert!((t0 - want).abs() <= 2.0, "T0 {t0}");
        assert!((q0 - 1.0).abs() <= 0.03, "Q0 {q0}");
    }
}

#[test]
fn cap_reached_when_limited() {
    let synth = generate(&SynthSpec::canonical(42)).unwrap();
    let cfg = DecompositionConfig { max_components: 1, ..DecompositionConfig::new(1.0) };
    let r = decompose(&synth.spectrum, &cfg).unwrap();
    assert_eq!(r.status, Status::CapReached);
    assert_eq!(r.accepted, None);
    assert_eq!(r.attempts.len(), 1);
}

#[test]
fn sse_non_increasing_across_attempts() {
    for seed in [1, 2, 3, 42] {
        let synth = generate(&SynthSpec::canonical(seed)).unwrap();
        let cfg = DecompositionConfig { max_components: 5, dw_reps: 200, ..DecompositionConfig::new(1.0) };
        let r = decompose(&synth.spectrum, &cfg).unwrap();
        let sse: Vec<f64> = r.attempts.iter().filter_map(|a| a.fit.as_ref()).map(|f| f.sse).collect();
        assert!(sse.windows(2).all(|w| w[1] <= w[0]), "seed {seed}: {sse:?}");
    }
}

#[test]
fn deterministic() {
    let synth = generate(&SynthSpec::canonical(8)).unwrap();
    let cfg = DecompositionConfig { max_components: 4, ..DecompositionConfig::new(1.0) };
    assert_eq!(decompose(&synth.spectrum, &cfg).unwrap(), decompose(&synth.spectrum, &cfg).unwrap());
}

#[test]
fn noise_free_never_accepted_early() {
    let model = DebyeModel::new(1.0).unwrap();
    let grid = uniform_grid(350.0, 750.0, 300);
    let truths: [(&[f64], &[f64]); 3] = [
        (&[1.0, 0.7], &[480.0, 600.0]),
        (&[1.0, 1.0, 1.0], &[450.0, 550.0, 650.0]),
        (&[0.6, 1.0, 0.8, 0.5], &[420.0, 500.0, 590.0, 680.0]),
    ];
    for (q, t) in truths {
        let m = q.len();
        let p = ParameterVector::from_amplitudes_and_temperatures(q, t).unwrap();
        let s = Spectrum::new(grid.clone(), model.evaluate(&grid, &p).unwrap(), Some(1e-6)).unwrap();
        let cfg = DecompositionConfig { max_components: m, dw_reps: 200, ..DecompositionConfig::new(1.0) };
        let r = decompose(&s, &cfg).unwrap();
        assert!(r.attempts.iter().take(m - 1).all(|a| !a.adequate), "{m} components");
    }
}

#[test]
fn next_guess_targets_missing_peak() {
    let synth = generate(&SynthSpec::canonical(42)).unwrap();
    let model = DebyeModel::new(1.0).unwrap();
    let start = ParameterVector::from_amplitudes_and_temperatures(&[1.0, 1.0], &[450.0, 650.0]).unwrap();
    let f2 = fit(&synth.spectrum, &start, &LmOptions::default(), &model).unwrap();
    let g = initial_guess(&synth.spectrum, Some(&f2)).unwrap();
    assert_eq!(g.n_components(), 3);
    assert_eq!(&g.as_slice()[..2], f2.params.amplitudes());
    let t_new = g.peak_temperatures()[2];
    assert!((t_new - 550.0).abs() <= 20.0, "{t_new}");
}

#[test]
fn dof_mode_changes_variance_dof() {
    assert_eq!(DofMode::Corrected.free_params(3), 6);
    assert_eq!(DofMode::PerComponent.free_params(3), 3);
    let synth = generate(&SynthSpec::canonical(42)).unwrap();
    let cfg = DecompositionConfig { dof_mode: DofMode::PerComponent, ..DecompositionConfig::new(1.0) };
    let r = decompose(&synth.spectrum, &cfg).unwrap();
    assert_eq!(r.accepted_attempt().unwrap().n_components, 3);
}

#[test]
fn rejects_bad_input() {
    let s = Spectrum::new(uniform_grid(400.0, 600.0, 10), vec![1.0; 10], None).unwrap();
    assert!(matches!(decompose(&s, &DecompositionConfig::new(1.0)), Err(Error::InsufficientData { .. })));
    let s = Spectrum::new(uniform_grid(400.0, 600.0, 30), vec![0.0; 30], None).unwrap();
    assert!(decompose(&s, &DecompositionConfig::new(1.0)).is_err());
    let s = Spectrum::new(uniform_grid(400.0, 600.0, 30), vec![1.0; 30], None).unwrap();
    assert!(decompose(&s, &DecompositionConfig::new(-1.0)).is_err());
    let cfg = DecompositionConfig { alpha: 1.5, ..DecompositionConfig::new(1.0) };
    assert!(decompose(&s, &cfg).is_err());
}
