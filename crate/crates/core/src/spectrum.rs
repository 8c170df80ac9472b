use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A measured spectrum on a strictly increasing temperature grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    temperatures: Vec<f64>,
    intensities: Vec<f64>,
    var_eps: Option<f64>,
}

impl Spectrum {
    /// Builds a spectrum, checking that temperatures are finite, positive and
    /// strictly increasing, that intensities are finite and that `var_eps`
    /// (when given) is a finite non-negative number.
    pub fn new(temperatures: Vec<f64>, intensities: Vec<f64>, var_eps: Option<f64>) -> Result<Self> {
        if temperatures.len() != intensities.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} temperatures but {} intensities",
                temperatures.len(),
                intensities.len()
            )));
        }
        for (i, (&t, &q)) in temperatures.iter().zip(&intensities).enumerate() {
            if !t.is_finite() || !q.is_finite() {
                return Err(Error::InvalidSpectrum(format!("non-finite value at index {i}")));
            }
            if t <= 0.0 {
                return Err(Error::InvalidSpectrum(format!("non-positive temperature {t} at index {i}")));
            }
        }
        if let Some(w) = temperatures.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpectrum(format!("temperatures not strictly increasing at index {}", w + 1)));
        }
        if let Some(v) = var_eps {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSpectrum(format!("invalid var_eps {v}")));
            }
        }
        Ok(Self { temperatures, intensities, var_eps })
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temperatures
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn var_eps(&self) -> Option<f64> {
        self.var_eps
    }

    pub fn with_var_eps(mut self, var_eps: Option<f64>) -> Result<Self> {
        if let Some(v) = var_eps {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSpectrum(format!("invalid var_eps {v}")));
            }
        }
        self.var_eps = var_eps;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.temperatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.temperatures.is_empty()
    }

    /// `(min T, max T)`, or `None` for an empty spectrum.
    pub fn temperature_range(&self) -> Option<(f64, f64)> {
        Some((*self.temperatures.first()?, *self.temperatures.last()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_nonpositive() {
        assert!(Spectrum::new(vec![1.0, 1.0], vec![0.0, 0.0], None).is_err());
        assert!(Spectrum::new(vec![0.0, 1.0], vec![0.0, 0.0], None).is_err());
        assert!(Spectrum::new(vec![1.0, 2.0], vec![f64::NAN, 0.0], None).is_err());
        assert!(Spectrum::new(vec![1.0, 2.0], vec![0.0], None).is_err());
        assert!(Spectrum::new(vec![1.0, 2.0], vec![0.0, 0.0], Some(-1.0)).is_err());
    }

    #[test]
    fn range() {
        let s = Spectrum::new(vec![300.0, 400.0, 500.0], vec![0.0; 3], Some(1e-4)).unwrap();
        assert_eq!(s.temperature_range(), Some((300.0, 500.0)));
        assert_eq!(s.var_eps(), Some(1e-4));
    }
}
