//! Discretized one-parameter families of states.

use num_complex::Complex64;

use crate::error::{PhaseError, Result};
use crate::quadrature::{self, derivative_stencils};
use crate::state::{same_basis, Basis, StateVector, Vector3c};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub s: f64,
    pub state: StateVector,
}

/// An ordered run of states `Ψ(sᵢ)` with strictly increasing `sᵢ`, all in one
/// basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    samples: Vec<Sample>,
}

impl Curve {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(PhaseError::Usage(format!(
                "a curve needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        for w in samples.windows(2) {
            same_basis(&w[0].state, &w[1].state)?;
            if !(w[1].s > w[0].s) {
                return Err(PhaseError::InvalidInput(format!(
                    "curve parameters must be strictly increasing ({} then {})",
                    w[0].s, w[1].s
                )));
            }
        }
        if let Some(bad) = samples.iter().find(|p| !p.s.is_finite()) {
            return Err(PhaseError::InvalidInput(format!(
                "non-finite curve parameter {}",
                bad.s
            )));
        }
        Ok(Curve { samples })
    }

    /// Sample `f` on `n` equally spaced parameters spanning `[start, stop]`.
    pub fn from_fn<F>(start: f64, stop: f64, n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<StateVector>,
    {
        if n < 2 {
            return Err(PhaseError::Usage(format!(
                "sample count must be at least 2, got {n}"
            )));
        }
        let samples = linspace(start, stop, n)
            .into_iter()
            .map(|s| f(s).map(|state| Sample { s, state }))
            .collect::<Result<Vec<_>>>()?;
        Curve::new(samples)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn basis(&self) -> Basis {
        self.samples[0].state.basis()
    }

    pub fn params(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    pub fn states(&self) -> impl Iterator<Item = &StateVector> {
        self.samples.iter().map(|p| &p.state)
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn uniform_step(&self) -> Option<f64> {
        quadrature::uniform_step(&self.params())
    }

    pub(crate) fn require_len(&self, min: usize, what: &str) -> Result<()> {
        if self.len() < min {
            Err(PhaseError::Usage(format!(
                "{what} needs at least {min} samples, got {}",
                self.len()
            )))
        } else {
            Ok(())
        }
    }

    /// Finite-difference tangent vectors `Ψ̇(sᵢ)`; fourth-order accurate on
    /// uniform grids of five or more samples, second-order otherwise.
    pub fn tangents(&self) -> Result<Vec<Vector3c>> {
        self.require_len(3, "a finite-difference tangent")?;
        Ok(derivative_stencils(&self.params())
            .iter()
            .map(|stencil| {
                stencil.iter().fold(Vector3c::zeros(), |acc, &(j, w)| {
                    acc + self.samples[j].state.as_vector() * Complex64::from(w)
                })
            })
            .collect())
    }

    /// `⟨Ψ(sᵢ)|Ψ̇(sᵢ)⟩` at every sample.
    pub fn connection(&self) -> Result<Vec<Complex64>> {
        Ok(self
            .tangents()?
            .iter()
            .zip(&self.samples)
            .map(|(t, p)| p.state.as_vector().dotc(t))
            .collect())
    }

    /// Append `other`, shifting its parameters so that its first sample lands at
    /// this curve's last parameter. The duplicated joint sample is dropped.
    pub fn concat(&self, other: &Curve) -> Result<Curve> {
        let shift = self.last().s - other.first().s;
        let mut samples = self.samples.clone();
        samples.extend(other.samples.iter().skip(1).map(|p| Sample {
            s: p.s + shift,
            state: p.state,
        }));
        Curve::new(samples)
    }
}

pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![start];
    }
    let step = (stop - start) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { stop } else { start + step * i as f64 })
        .collect()
}

/// Multiply every sample by `e^{iα(s)}`.
pub fn gauge_transform<F>(curve: &Curve, alpha: F) -> Result<Curve>
where
    F: Fn(f64) -> f64,
{
    let samples = curve
        .samples
        .iter()
        .map(|p| {
            let a = alpha(p.s);
            if !a.is_finite() {
                return Err(PhaseError::Numeric(format!(
                    "gauge function is not finite at s = {}",
                    p.s
                )));
            }
            Ok(Sample {
                s: p.s,
                state: p.state.with_phase(a),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve { samples })
}

/// Gauge transform with one phase per sample.
pub fn gauge_transform_samples(curve: &Curve, alphas: &[f64]) -> Result<Curve> {
    if alphas.len() != curve.len() {
        return Err(PhaseError::Usage(format!(
            "{} gauge phases for {} samples",
            alphas.len(),
            curve.len()
        )));
    }
    let samples = curve
        .samples
        .iter()
        .zip(alphas)
        .map(|(p, &a)| {
            if !a.is_finite() {
                return Err(PhaseError::Numeric(format!(
                    "gauge phase is not finite at s = {}",
                    p.s
                )));
            }
            Ok(Sample {
                s: p.s,
                state: p.state.with_phase(a),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve { samples })
}
