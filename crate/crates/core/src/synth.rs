//! Ground-truth synthetic spectra.
//!
//! Noise is drawn from `ChaCha8Rng::seed_from_u64(seed)` through
//! `rand_distr::StandardNormal` (ziggurat sampler), scaled by `noise_sd`, one
//! draw per grid point in ascending temperature order. Both algorithms are
//! portable and value-stable, so a seed pins the fixture on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{spectrum_model, DebyeComponent, PhysicalConstants};
use crate::spectrum::Spectrum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub components: Vec<DebyeComponent>,
    pub t_range: (f64, f64),
    pub n_points: usize,
    pub noise_sd: f64,
    pub frequency: f64,
    pub seed: u64,
}

impl SynthSpec {
    /// Canonical three-peak configuration: Q0 = 1 at 450, 550 and 650 K,
    /// f = 1 Hz, 400 points over 350–750 K, σ = 0.01.
    pub fn canonical(seed: u64) -> Self {
        let c = PhysicalConstants::CODATA_2018;
        let components =
            [450.0, 550.0, 650.0].iter().map(|&t0| DebyeComponent::new(1.0, t0, 1.0, &c).expect("valid")).collect();
        Self { components, t_range: (350.0, 750.0), n_points: 400, noise_sd: 0.01, frequency: 1.0, seed }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.t_range;
        if !(lo > 0.0 && lo < hi && hi.is_finite()) {
            return Err(Error::Config(format!("invalid temperature range ({lo}, {hi})")));
        }
        if self.n_points < 2 {
            return Err(Error::Config("at least two grid points are required".into()));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::Config(format!("invalid noise sd {}", self.noise_sd)));
        }
        if self.components.is_empty() {
            return Err(Error::Config("at least one component is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpectrum {
    pub spectrum: Spectrum,
    /// Noise-free model values on the grid.
    pub clean: Vec<f64>,
    pub truth: Vec<DebyeComponent>,
}

/// Uniform grid with exact endpoints.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    grid[n - 1] = hi;
    grid
}

pub fn generate(spec: &SynthSpec) -> Result<SyntheticSpectrum> {
    generate_with_constants(spec, &PhysicalConstants::CODATA_2018)
}

pub fn generate_with_constants(spec: &SynthSpec, c: &PhysicalConstants) -> Result<SyntheticSpectrum> {
    spec.validate()?;
    let grid = uniform_grid(spec.t_range.0, spec.t_range.1, spec.n_points);
    // components carry E for the requested frequency
    let truth = spec
        .components
        .iter()
        .map(|comp| DebyeComponent::new(comp.q0(), comp.t0(), spec.frequency, c))
        .collect::<Result<Vec<_>>>()?;
    let clean = spectrum_model(&grid, &truth, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noisy: Vec<f64> = clean
        .iter()
        .map(|q| {
            let z: f64 = StandardNormal.sample(&mut rng);
            q + spec.noise_sd * z
        })
        .collect();
    let spectrum = Spectrum::new(grid, noisy, Some(spec.noise_sd * spec.noise_sd))?;
    Ok(SyntheticSpectrum { spectrum, clean, truth })
}
