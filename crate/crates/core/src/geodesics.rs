//! Geodesics in Hilbert space, parallel transport, and the two-level plate
//! scenario.
//!
//! A strict geodesic obeys `Ψ̈ = −⟨Ψ̇|Ψ̇⟩Ψ` together with the horizontality
//! condition `⟨Ψ|Ψ̇⟩ = 0`; it extremizes the ray-space length
//! `∫ √(⟨Ψ̇|Ψ̇⟩ − |⟨Ψ|Ψ̇⟩|²) ds`, and the geometric phase along it vanishes.

use num_complex::Complex64;

use crate::angle;
use crate::converters::{q_matrix, q_matrix_closed_form, q_matrix_second_derivative, PlateSpec};
use crate::curve::{gauge_transform_samples, linspace, Curve};
use crate::error::{PhaseError, Result};
use crate::phases::{dynamical_phase_closed_form, pancharatnam};
use crate::quadrature;
use crate::state::{inner, ray_distance, same_basis, Basis, Matrix3c, StateVector, Vector3c};

/// Endpoints closer than this in ray distance have no unique geodesic.
pub const SAME_RAY_TOLERANCE: f64 = 1e-9;

/// Largest negative radicand tolerated in the length integrand before it is
/// treated as a numeric failure.
pub const RADICAND_TOLERANCE: f64 = 1e-12;

/// Tolerance for treating the scenario coupling as `±1`.
pub const COUPLING_TOLERANCE: f64 = 1e-12;

/// The great circle `Ψ(s) = a cos s + u sin s`, `s ∈ [0, s₀]`, from `a` to the
/// representative of `b` whose overlap with `a` is real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicArc {
    start: StateVector,
    end: StateVector,
    direction: Vector3c,
    span: f64,
}

impl GeodesicArc {
    pub fn new(a: &StateVector, b: &StateVector) -> Result<Self> {
        let distance = ray_distance(a, b)?;
        if distance <= SAME_RAY_TOLERANCE {
            return Err(PhaseError::DegenerateGeodesic { distance });
        }
        let overlap = inner(a, b)?;
        let end = if overlap.norm() > 0.0 {
            b.with_phase(-angle::arg(overlap))
        } else {
            *b
        };
        let cos0 = overlap.norm().min(1.0);
        let span = cos0.acos();
        let sin0 = span.sin();
        let direction = (end.as_vector() - a.as_vector() * Complex64::from(cos0)) / Complex64::from(sin0);
        let direction = direction.normalize();
        Ok(GeodesicArc {
            start: *a,
            end,
            direction,
            span,
        })
    }

    /// End parameter `s₀ = arccos|⟨a|b⟩|`.
    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn start(&self) -> &StateVector {
        &self.start
    }

    /// The re-gauged endpoint the arc actually reaches.
    pub fn end(&self) -> &StateVector {
        &self.end
    }

    pub fn state(&self, s: f64) -> StateVector {
        if s == self.span {
            return self.end;
        }
        let (sn, cs) = s.sin_cos();
        let v = self.start.as_vector() * Complex64::from(cs) + self.direction * Complex64::from(sn);
        StateVector::from_vector(self.start.basis(), v)
    }

    pub fn velocity(&self, s: f64) -> Vector3c {
        let (sn, cs) = s.sin_cos();
        self.direction * Complex64::from(cs) - self.start.as_vector() * Complex64::from(sn)
    }

    pub fn acceleration(&self, s: f64) -> Vector3c {
        let (sn, cs) = s.sin_cos();
        -(self.start.as_vector() * Complex64::from(cs) + self.direction * Complex64::from(sn))
    }

    /// `n` evenly spaced samples on `[0, s₀]`.
    pub fn sample(&self, n: usize) -> Result<Curve> {
        Curve::from_fn(0.0, self.span, n, |s| Ok(self.state(s)))
    }

    /// Largest `‖Ψ̈ + ⟨Ψ̇|Ψ̇⟩Ψ‖` and `|⟨Ψ|Ψ̇⟩|` over `n` points, from the exact
    /// derivatives.
    pub fn analytic_residuals(&self, n: usize) -> (f64, f64) {
        let mut geodesic = 0.0f64;
        let mut horizontal = 0.0f64;
        for s in linspace(0.0, self.span, n.max(2)) {
            let psi = self.state(s);
            let v = self.velocity(s);
            let speed = v.norm_squared();
            let eq = self.acceleration(s) + psi.as_vector() * Complex64::from(speed);
            geodesic = geodesic.max(eq.norm());
            horizontal = horizontal.max(psi.as_vector().dotc(&v).norm());
        }
        (geodesic, horizontal)
    }
}

/// Sample the geodesic from `a` to the ray of `b` at `n` points.
pub fn geodesic_between(a: &StateVector, b: &StateVector, n: usize) -> Result<Curve> {
    GeodesicArc::new(a, b)?.sample(n)
}

/// A finite-difference residual together with the step it was measured at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdResidual {
    pub residual: f64,
    pub step: f64,
}

/// Largest `‖Ψ̈ + ⟨Ψ̇|Ψ̇⟩Ψ‖` over interior samples, with `Ψ̈` from the central
/// second difference.
pub fn geodesic_residual(curve: &Curve) -> Result<FdResidual> {
    curve.require_len(5, "the geodesic residual")?;
    let step = curve
        .uniform_step()
        .ok_or_else(|| PhaseError::Usage("the geodesic residual needs uniformly spaced samples".into()))?;
    let tangents = curve.tangents()?;
    let samples = curve.samples();
    let inv_h2 = Complex64::from(1.0 / (step * step));
    let mut residual = 0.0f64;
    for i in 1..samples.len() - 1 {
        let prev = samples[i - 1].state.as_vector();
        let here = samples[i].state.as_vector();
        let next = samples[i + 1].state.as_vector();
        let accel = (next - here * Complex64::from(2.0) + prev) * inv_h2;
        let speed = tangents[i].norm_squared();
        residual = residual.max((accel + here * Complex64::from(speed)).norm());
    }
    Ok(FdResidual { residual, step })
}

/// Largest `|⟨Ψ|Ψ̇⟩|` over all samples.
pub fn horizontality_residual(curve: &Curve) -> Result<f64> {
    Ok(curve
        .connection()?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Gauge the curve with `α(s) = −∫₀ˢ Im⟨Ψ|Ψ̇⟩ ds'` so that it becomes
/// horizontal. The rays are untouched.
pub fn parallel_lift(curve: &Curve) -> Result<Curve> {
    let integrand: Vec<f64> = curve.connection()?.iter().map(|z| -z.im).collect();
    let alphas = quadrature::cumulative(&curve.params(), &integrand);
    gauge_transform_samples(curve, &alphas)
}

/// Ray-space length `∫ √(⟨Ψ̇|Ψ̇⟩ − |⟨Ψ|Ψ̇⟩|²) ds`.
pub fn curve_length(curve: &Curve) -> Result<f64> {
    let tangents = curve.tangents()?;
    let integrand = curve
        .samples()
        .iter()
        .zip(&tangents)
        .map(|(p, t)| {
            let radicand = t.norm_squared() - p.state.as_vector().dotc(t).norm_sqr();
            if radicand < -RADICAND_TOLERANCE {
                Err(PhaseError::Numeric(format!(
                    "negative length radicand {radicand:e} at s = {}",
                    p.s
                )))
            } else {
                Ok(radicand.max(0.0).sqrt())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(quadrature::integrate(&curve.params(), &integrand))
}

/// Which pair of phase-plate amplitudes the two-level scenario couples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeodesicFamily {
    /// Plate at `cos 2χ = 1`, state with `d₃ = 0`; couples `d₁` and `d₂`.
    Primary,
    /// Plate at `sin 2χ = 1`, state with `d₂ = 0`; couples `d₁` and `d₃`.
    Secondary,
}

impl GeodesicFamily {
    pub fn chi(self) -> f64 {
        match self {
            GeodesicFamily::Primary => 0.0,
            GeodesicFamily::Secondary => std::f64::consts::FRAC_PI_4,
        }
    }

    fn partner_index(self) -> usize {
        match self {
            GeodesicFamily::Primary => 1,
            GeodesicFamily::Secondary => 2,
        }
    }
}

/// A state confined to two phase-plate levels, carried by a plate that only
/// couples those levels, up to the thickness parameter `s = 2δ = smax`.
///
/// Along the way `⟨Ψ(0)|Ψ(s)⟩ = cos s + i c sin s` with the real coupling
/// `c = d₁*d₂ + d₂*d₁`, and `⟨Ψ̇|Ψ̇⟩ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicScenario {
    d1: Complex64,
    d2: Complex64,
    coupling: f64,
    smax: f64,
    family: GeodesicFamily,
}

impl GeodesicScenario {
    /// `d2` is the partner amplitude: the second level for
    /// [`GeodesicFamily::Primary`], the third for [`GeodesicFamily::Secondary`].
    pub fn new(d1: Complex64, d2: Complex64, smax: f64, family: GeodesicFamily) -> Result<Self> {
        if ![d1.re, d1.im, d2.re, d2.im, smax].iter().all(|x| x.is_finite()) {
            return Err(PhaseError::InvalidInput("non-finite scenario parameter".into()));
        }
        let norm_sq = d1.norm_sqr() + d2.norm_sqr();
        if (norm_sq - 1.0).abs() > crate::state::NORM_TOLERANCE {
            return Err(PhaseError::InvalidInput(format!(
                "|d1|² + |d2|² is {norm_sq}, expected 1"
            )));
        }
        let coupling = (2.0 * (d1.conj() * d2).re).clamp(-1.0, 1.0);
        Ok(GeodesicScenario {
            d1,
            d2,
            coupling,
            smax,
            family,
        })
    }

    /// Like [`GeodesicScenario::new`] but rescales the amplitudes to unit norm.
    pub fn normalized(d1: Complex64, d2: Complex64, smax: f64, family: GeodesicFamily) -> Result<Self> {
        let norm = (d1.norm_sqr() + d2.norm_sqr()).sqrt();
        if !(norm > 1e-300) {
            return Err(PhaseError::InvalidInput("zero scenario amplitudes".into()));
        }
        Self::new(d1 / norm, d2 / norm, smax, family)
    }

    pub fn d1(&self) -> Complex64 {
        self.d1
    }

    pub fn d2(&self) -> Complex64 {
        self.d2
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn smax(&self) -> f64 {
        self.smax
    }

    pub fn family(&self) -> GeodesicFamily {
        self.family
    }

    /// The same state and plate, stopped at `s`.
    pub fn at(&self, s: f64) -> Self {
        GeodesicScenario { smax: s, ..*self }
    }

    /// The initial state in the phase-plate basis.
    pub fn state(&self) -> StateVector {
        let mut amps = [Complex64::new(0.0, 0.0); 3];
        amps[0] = self.d1;
        amps[self.family.partner_index()] = self.d2;
        StateVector::from_vector(Basis::Pmz, Vector3c::from(amps))
    }

    /// The plate taken to its full thickness `δ = smax / 2`.
    pub fn plate(&self) -> PlateSpec {
        PlateSpec {
            delta: 0.5 * self.smax,
            chi: self.family.chi(),
        }
    }

    /// `Ψ(s) = Q(s/2)·Ψ(0)`.
    pub fn state_at(&self, s: f64) -> Result<StateVector> {
        q_matrix(&self.at(s).plate()).apply(&self.state())
    }

    /// Exact `Ψ̇(s)`: the coupled pair rotates as `d cos s + i σₓd sin s`.
    pub fn velocity_at(&self, s: f64) -> Vector3c {
        let (sn, cs) = s.sin_cos();
        let i = Complex64::i();
        let mut v = Vector3c::zeros();
        v[0] = -self.d1 * sn + i * self.d2 * cs;
        v[self.family.partner_index()] = -self.d2 * sn + i * self.d1 * cs;
        v
    }
}

/// The scenario's curve sampled at `n` points of `s ∈ [0, smax]`.
pub fn scenario_curve(scenario: &GeodesicScenario, n: usize) -> Result<Curve> {
    if !(scenario.smax > 0.0) {
        return Err(PhaseError::Usage(format!(
            "scenario curve needs smax > 0, got {}",
            scenario.smax
        )));
    }
    Curve::from_fn(0.0, scenario.smax, n, |s| scenario.state_at(s))
}

/// `(θ, φ_g)` at `s = smax`, where `tan θ = c·tan s` and `φ_g = θ − s·c`.
///
/// `θ` takes the principal value of the arctangent, so it lies in
/// `(−π/2, π/2)` and flips by `π` where `tan s` passes through infinity; this
/// is the jump reported by [`detect_phase_jump`]. When `|c| = 1` the state is
/// an eigenvector of the plate and `θ = c·s` exactly, with no jump.
pub fn two_level_scenario(scenario: &GeodesicScenario) -> (f64, f64) {
    let s = scenario.smax;
    let c = scenario.coupling;
    let theta = if (c.abs() - 1.0).abs() <= COUPLING_TOLERANCE {
        c.signum() * s
    } else {
        (c * s.tan()).atan()
    };
    (theta, theta - s * c)
}

/// `φ_g(π/2 + ε) − φ_g(π/2 − ε)`; tends to `∓π` as `ε → 0` for `0 < |c| < 1`
/// and is `0` when `|c| = 1`.
pub fn detect_phase_jump(scenario: &GeodesicScenario, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.1) {
        return Err(PhaseError::Usage(format!(
            "jump half-width must lie in (0, 0.1), got {epsilon}"
        )));
    }
    if (scenario.coupling.abs() - 1.0).abs() <= COUPLING_TOLERANCE {
        return Ok(0.0);
    }
    let half = std::f64::consts::FRAC_PI_2;
    let (_, after) = two_level_scenario(&scenario.at(half + epsilon));
    let (_, before) = two_level_scenario(&scenario.at(half - epsilon));
    Ok(after - before)
}

/// How `Q̈` is obtained in [`generalized_geodesic_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMethod {
    /// Exact second derivative of the trigonometric entries.
    Analytic,
    /// Central second difference on the thickness grid.
    FiniteDifference,
}

/// `Q̈ + 4Q` at one plate setting, from the exact derivative.
pub fn harmonic_defect(spec: &PlateSpec) -> Matrix3c {
    q_matrix_second_derivative(spec) + q_matrix_closed_form(spec) * Complex64::from(4.0)
}

/// Largest `|Im(Q̈ + 4Q)|` over the thickness grid and all entries.
///
/// The finite-difference method evaluates only the interior grid points.
pub fn generalized_geodesic_check(chi: f64, delta_grid: &[f64], method: DerivativeMethod) -> Result<f64> {
    if delta_grid.len() < 5 {
        return Err(PhaseError::Usage(format!(
            "thickness grid needs at least 5 points, got {}",
            delta_grid.len()
        )));
    }
    let step = quadrature::uniform_step(delta_grid)
        .filter(|h| *h > 0.0)
        .ok_or_else(|| PhaseError::Usage("thickness grid must be uniform and increasing".into()))?;
    let max_im = |m: &Matrix3c| m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let worst = match method {
        DerivativeMethod::Analytic => delta_grid
            .iter()
            .map(|&delta| max_im(&harmonic_defect(&PlateSpec { delta, chi })))
            .fold(0.0, f64::max),
        DerivativeMethod::FiniteDifference => {
            let qs: Vec<Matrix3c> = delta_grid
                .iter()
                .map(|&delta| *q_matrix(&PlateSpec { delta, chi }).entries())
                .collect();
            let inv_h2 = Complex64::from(1.0 / (step * step));
            qs.windows(3)
                .map(|w| {
                    let second = (w[2] - w[1] * Complex64::from(2.0) + w[0]) * inv_h2;
                    max_im(&(second + w[1] * Complex64::from(4.0)))
                })
                .fold(0.0, f64::max)
        }
    };
    Ok(worst)
}

/// Geometric phase of one thin plate: `arg⟨d|Q d⟩` minus the dynamical phase
/// accumulated across the plate's thickness `spec.delta`.
pub fn step_geometric_phase(state: &StateVector, spec: &PlateSpec) -> Result<f64> {
    let out = q_matrix(spec).apply(state)?;
    Ok(angle::principal(
        pancharatnam(state, &out)? - dynamical_phase_closed_form(state, spec)?,
    ))
}

/// Apparent order `log₂(φ_g(h) / φ_g(h/2))` of the thin-plate geometric phase
/// at orientation `chi`. Geodesic evolutions in the general sense give `3`
/// or more: the phase vanishes to second order in the step.
pub fn step_phase_order(state: &StateVector, chi: f64, h: f64) -> Result<f64> {
    let full = step_geometric_phase(state, &PlateSpec::new(h, chi)?)?;
    let half = step_geometric_phase(state, &PlateSpec::new(0.5 * h, chi)?)?;
    if full == 0.0 || half == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((full / half).abs().log2())
}

/// Check that two states can share a geodesic without building one.
pub fn same_ray(a: &StateVector, b: &StateVector) -> Result<bool> {
    same_basis(a, b)?;
    Ok(ray_distance(a, b)? <= SAME_RAY_TOLERANCE)
}
