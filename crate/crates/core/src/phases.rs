//! Pancharatnam, dynamical and geometric phases.
//!
//! For a curve `Ψ(s)`, `s ∈ [s₁, s₂]`:
//!
//! * Pancharatnam phase `φ_p = arg⟨Ψ(s₁)|Ψ(s₂)⟩`, the shift that maximizes the
//!   interference of the two endpoints;
//! * dynamical phase `φ_dyn = Im ∫ ⟨Ψ|Ψ̇⟩ ds`;
//! * geometric phase `φ_g = φ_p − φ_dyn`, which depends only on the path of
//!   rays and is unchanged by any gauge `Ψ → e^{iα(s)}Ψ`.

use num_complex::Complex64;

use crate::angle;
use crate::converters::{evolve, q_matrix, PlateSpec};
use crate::curve::Curve;
use crate::error::{PhaseError, Result};
use crate::quadrature;
use crate::state::{inner, Basis, StateVector};

/// Overlaps smaller than this in magnitude have no meaningful argument.
pub const ORTHOGONALITY_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseReport {
    pub pancharatnam: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub visibility: f64,
}

impl PhaseReport {
    pub fn from_parts(pancharatnam: f64, dynamical: f64, visibility: f64) -> Self {
        PhaseReport {
            pancharatnam,
            dynamical,
            geometric: angle::principal(pancharatnam - dynamical),
            visibility,
        }
    }
}

fn checked_arg(z: Complex64, threshold: f64) -> Result<f64> {
    let magnitude = z.norm();
    if !(magnitude >= threshold) {
        return Err(PhaseError::IndeterminatePhase {
            magnitude,
            threshold,
        });
    }
    Ok(angle::arg(z))
}

/// `arg⟨a|b⟩` on `(-π, π]`.
pub fn pancharatnam(a: &StateVector, b: &StateVector) -> Result<f64> {
    pancharatnam_with_threshold(a, b, ORTHOGONALITY_THRESHOLD)
}

pub fn pancharatnam_with_threshold(a: &StateVector, b: &StateVector, threshold: f64) -> Result<f64> {
    checked_arg(inner(a, b)?, threshold)
}

/// `|⟨a|b⟩|`, the fringe contrast of the two states.
pub fn visibility(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner(a, b)?.norm().min(1.0))
}

/// `|e^{iφ}|a⟩ + |b⟩|² = 2 + 2|⟨a|b⟩| cos(φ − arg⟨a|b⟩)`.
pub fn interference_intensity(a: &StateVector, b: &StateVector, phi: f64) -> Result<f64> {
    let overlap = inner(a, b)?;
    if overlap.norm() == 0.0 {
        return Ok(2.0);
    }
    Ok(2.0 + 2.0 * overlap.norm() * (phi - angle::arg(overlap)).cos())
}

/// Dynamical phase picked up while a plate's thickness grows from 0 to `δ`.
///
/// The integrand `Im⟨Ψ|∂_δΨ⟩ = Im⟨d|Q⁻¹∂_δQ|d⟩` does not depend on `δ`, so the
/// integral is `δ` times
/// `Im{2i cos 2χ (d₁d₂* + d₁*d₂) + 2i sin 2χ (d₁d₃* + d₁*d₃)}`.
pub fn dynamical_phase_closed_form(d: &StateVector, spec: &PlateSpec) -> Result<f64> {
    d.expect_basis(Basis::Pmz)?;
    let [d1, d2, d3] = d.amplitudes();
    let i2 = Complex64::new(0.0, 2.0);
    let (s2x, c2x) = (2.0 * spec.chi).sin_cos();
    let integrand = i2 * c2x * (d1 * d2.conj() + d1.conj() * d2)
        + i2 * s2x * (d1 * d3.conj() + d1.conj() * d3);
    Ok(spec.delta * integrand.im)
}

/// `Im ∫ ⟨Ψ|Ψ̇⟩ ds` by composite quadrature of finite-difference tangents.
pub fn dynamical_phase_numeric(curve: &Curve) -> Result<f64> {
    curve.require_len(3, "the dynamical-phase quadrature")?;
    let integrand: Vec<f64> = curve.connection()?.iter().map(|z| z.im).collect();
    Ok(quadrature::integrate(&curve.params(), &integrand))
}

/// `Σ arg⟨Ψᵢ|Ψᵢ₊₁⟩` over consecutive samples.
///
/// Converges to the dynamical phase as the sampling refines (each step
/// differs from `Im∫⟨Ψ|Ψ̇⟩` only by the geometric phase of a thin sliver,
/// which is third order in the step). Needs no derivatives, so it also
/// handles curves with kinks, such as successive plates joined end to end.
pub fn dynamical_phase_increments(curve: &Curve) -> Result<f64> {
    curve
        .samples()
        .windows(2)
        .map(|w| pancharatnam(&w[0].state, &w[1].state))
        .sum()
}

/// Pancharatnam, dynamical and geometric phases of a curve.
pub fn geometric_phase(curve: &Curve) -> Result<PhaseReport> {
    let (a, b) = (&curve.first().state, &curve.last().state);
    let p = pancharatnam(a, b)?;
    let dynamical = dynamical_phase_numeric(curve)?;
    Ok(PhaseReport::from_parts(p, dynamical, visibility(a, b)?))
}

/// `arg⟨Ψ(s₁)|Ψ(s)⟩` at every sample, unwrapped by continuity along the curve.
pub fn pancharatnam_unwrapped(curve: &Curve) -> Result<Vec<f64>> {
    let start = &curve.first().state;
    let raw = curve
        .states()
        .map(|s| pancharatnam(start, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(angle::unwrap(&raw))
}

/// `(arg⟨Ψin|QΨin⟩, Im⟨Ψin|QΨin⟩)` for a single plate.
pub fn transformation_phase(d: &StateVector, spec: &PlateSpec) -> Result<(f64, f64)> {
    d.expect_basis(Basis::Pmz)?;
    let out = q_matrix(spec).apply(d)?;
    let overlap = inner(d, &out)?;
    Ok((checked_arg(overlap, ORTHOGONALITY_THRESHOLD)?, overlap.im))
}

/// `sin 2δ {cos 2χ (d₁*d₂ + d₂*d₁) + sin 2χ (d₁*d₃ + d₁d₃*)}`, the imaginary
/// part of `⟨Ψin|QΨin⟩` written out.
pub fn transformation_phase_formula(d: &StateVector, spec: &PlateSpec) -> Result<f64> {
    d.expect_basis(Basis::Pmz)?;
    let [d1, d2, d3] = d.amplitudes();
    let (s2x, c2x) = (2.0 * spec.chi).sin_cos();
    let bracket = (d1.conj() * d2 + d2.conj() * d1) * c2x + (d1.conj() * d3 + d1 * d3.conj()) * s2x;
    Ok((2.0 * spec.delta).sin() * bracket.re)
}

/// `−arg{⟨Ψ_N|Ψ_1⟩⟨Ψ_1|Ψ_2⟩···⟨Ψ_{N−1}|Ψ_N⟩}`, the geometric phase of the
/// polygon whose sides are geodesics through the given states.
pub fn vertex_product(states: &[StateVector]) -> Result<f64> {
    if states.len() < 2 {
        return Err(PhaseError::Usage(format!(
            "the vertex product needs at least 2 states, got {}",
            states.len()
        )));
    }
    let closing = inner(&states[states.len() - 1], &states[0])?;
    let mut product = closing;
    let check = |z: Complex64| -> Result<()> {
        if z.norm() < ORTHOGONALITY_THRESHOLD {
            Err(PhaseError::IndeterminatePhase {
                magnitude: z.norm(),
                threshold: ORTHOGONALITY_THRESHOLD,
            })
        } else {
            Ok(())
        }
    };
    check(closing)?;
    for w in states.windows(2) {
        let z = inner(&w[0], &w[1])?;
        check(z)?;
        // Keep the running product at unit scale so long chains cannot underflow.
        product = product * z / z.norm();
    }
    Ok(angle::principal(-angle::arg(product)))
}

/// The vertex product over all samples of a curve, closed by
/// `⟨Ψ(s₂)|Ψ(s₁)⟩`. Approaches the curve's geometric phase as the sampling
/// refines.
pub fn bargmann_limit(curve: &Curve) -> Result<f64> {
    curve.require_len(3, "the discretized Bargmann product")?;
    let states: Vec<StateVector> = curve.states().copied().collect();
    vertex_product(&states)
}

/// Phases of one plate in a sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentReport {
    pub plate: PlateSpec,
    pub report: PhaseReport,
    /// The same dynamical phase from the constant-integrand closed form.
    pub dynamical_closed_form: f64,
    pub curve: Curve,
}

/// Phases of a state carried through several plates in turn.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceReport {
    pub segments: Vec<SegmentReport>,
    /// Endpoints of the whole path; the dynamical phase is the sum over
    /// segments.
    pub total: PhaseReport,
    /// Dynamical phase of the joined path from consecutive-sample phase
    /// increments, an independent check on the segment sum.
    pub total_dynamical_increments: f64,
    pub output: StateVector,
}

/// Carry `state` through `plates` in order, each plate's thickness ramped from
/// zero and sampled with `n` points.
pub fn plate_sequence(state: &StateVector, plates: &[PlateSpec], n: usize) -> Result<SequenceReport> {
    if plates.is_empty() {
        return Err(PhaseError::Usage("no plates given".into()));
    }
    state.expect_basis(Basis::Pmz)?;
    let mut segments = Vec::with_capacity(plates.len());
    let mut current = *state;
    let mut joined: Option<Curve> = None;
    for plate in plates {
        let curve = evolve(plate, &current, n)?;
        let report = geometric_phase(&curve)?;
        let dynamical_closed_form = dynamical_phase_closed_form(&current, plate)?;
        current = curve.last().state;
        joined = Some(match joined {
            None => curve.clone(),
            Some(j) => j.concat(&curve)?,
        });
        segments.push(SegmentReport {
            plate: *plate,
            report,
            dynamical_closed_form,
            curve,
        });
    }
    let dynamical: f64 = segments.iter().map(|s| s.report.dynamical).sum();
    let total = PhaseReport::from_parts(
        pancharatnam(state, &current)?,
        dynamical,
        visibility(state, &current)?,
    );
    let total_dynamical_increments = dynamical_phase_increments(&joined.expect("non-empty"))?;
    Ok(SequenceReport {
        segments,
        total,
        total_dynamical_increments,
        output: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::gauge_transform;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};

    fn pmz(v: [f64; 3]) -> StateVector {
        StateVector::from_real(Basis::Pmz, v).unwrap()
    }

    fn pmzc(v: [(f64, f64); 3]) -> StateVector {
        StateVector::normalized(Basis::Pmz, v.map(|(r, i)| Complex64::new(r, i))).unwrap()
    }

    fn qwp_eigenvector(chi: f64) -> StateVector {
        pmz([1.0, (2.0 * chi).cos(), (2.0 * chi).sin()])
    }

    #[test]
    fn pancharatnam_examples() {
        let a = pmz([1.0, 0.0, 0.0]);
        assert!((pancharatnam(&a, &a.with_phase(1.1)).unwrap() - 1.1).abs() < 1e-15);
        assert_eq!(pancharatnam(&a, &pmz([1.0, 1.0, 0.0])).unwrap(), 0.0);
        assert!(matches!(
            pancharatnam(&a, &pmz([0.0, 1.0, 0.0])),
            Err(PhaseError::IndeterminatePhase { .. })
        ));
    }

    #[test]
    fn visibility_examples() {
        let a = pmz([1.0, 0.0, 0.0]);
        assert!((visibility(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(visibility(&a, &pmz([0.0, 0.0, 1.0])).unwrap(), 0.0);
        let b = pmzc([(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)]);
        assert!((visibility(&a, &b).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn interference_examples() {
        let a = pmz([0.6, 0.8, 0.0]);
        assert!((interference_intensity(&a, &a, 0.0).unwrap() - 4.0).abs() < 1e-15);
        let o = pmz([0.0, 0.0, 1.0]);
        for phi in [0.0, 1.0, -2.5] {
            assert!((interference_intensity(&a, &o, phi).unwrap() - 2.0).abs() < 1e-15);
        }
        let x = pmz([1.0, 0.0, 0.0]);
        let y = pmzc([(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)]);
        let phi = pancharatnam(&x, &y).unwrap() + std::f64::consts::PI;
        assert!((interference_intensity(&x, &y, phi).unwrap() - (2.0 - SQRT_2)).abs() < 1e-14);
    }

    #[test]
    fn interference_matches_direct_superposition() {
        let a = pmzc([(0.3, 0.1), (-0.2, 0.5), (0.4, -0.6)]);
        let b = pmzc([(0.1, -0.7), (0.5, 0.2), (-0.3, 0.1)]);
        for phi in [-2.0, -0.3, 0.0, 0.9, 3.0] {
            let direct = (a.as_vector() * Complex64::from_polar(1.0, phi) + b.as_vector()).norm_squared();
            assert!((interference_intensity(&a, &b, phi).unwrap() - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_dynamical_examples() {
        let spec = PlateSpec::new(0.9, 0.4).unwrap();
        assert_eq!(dynamical_phase_closed_form(&pmz([1.0, 0.0, 0.0]), &spec).unwrap(), 0.0);
        for chi in [0.0, 0.3, 1.0] {
            let v = dynamical_phase_closed_form(&qwp_eigenvector(chi), &PlateSpec::quarter_wave(chi)).unwrap();
            assert!((v - FRAC_PI_2).abs() < 1e-15);
        }
        let v = dynamical_phase_closed_form(&pmz([1.0, 1.0, 0.0]), &PlateSpec::new(FRAC_PI_8, 0.0).unwrap()).unwrap();
        assert!((v - FRAC_PI_4).abs() < 1e-15);
        let fock = StateVector::from_real(Basis::Fock, [1.0, 0.0, 0.0]).unwrap();
        assert!(dynamical_phase_closed_form(&fock, &spec).is_err());
    }

    #[test]
    fn quadrature_oracle_for_eighth_wave_example() {
        // (1,1,0)/√2 through δ = π/8 at χ = 0
        let curve = evolve(&PlateSpec::new(FRAC_PI_8, 0.0).unwrap(), &pmz([1.0, 1.0, 0.0]), 2001).unwrap();
        assert!((dynamical_phase_numeric(&curve).unwrap() - FRAC_PI_4).abs() < 1e-8);
    }

    #[test]
    fn numeric_dynamical_examples() {
        let flat = evolve(&PlateSpec::new(0.0, 0.0).unwrap(), &pmz([0.2, 0.3, 0.9]), 11).unwrap();
        assert!(dynamical_phase_numeric(&flat).unwrap().abs() < 1e-15);

        let chi = 0.35;
        let curve = evolve(&PlateSpec::quarter_wave(chi), &qwp_eigenvector(chi), 2001).unwrap();
        assert!((dynamical_phase_numeric(&curve).unwrap() - FRAC_PI_2).abs() < 1e-6);

        let short = evolve(&PlateSpec::quarter_wave(chi), &qwp_eigenvector(chi), 2).unwrap();
        assert!(matches!(dynamical_phase_numeric(&short), Err(PhaseError::Usage(_))));
    }

    #[test]
    fn cyclic_qwp_decomposition() {
        let chi = 0.2;
        let curve = evolve(&PlateSpec::quarter_wave(chi), &qwp_eigenvector(chi), 2001).unwrap();
        let r = geometric_phase(&curve).unwrap();
        assert!((r.pancharatnam - FRAC_PI_2).abs() < 1e-12);
        assert!((r.dynamical - FRAC_PI_2).abs() < 1e-6);
        assert!(r.geometric.abs() < 1e-6);
        assert!((r.visibility - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_phase_rejects_orthogonal_endpoints() {
        // (cos s, sin s, 0) ends orthogonal to where it starts.
        let curve = Curve::from_fn(0.0, FRAC_PI_2, 51, |s| {
            Ok(pmz([s.cos(), s.sin(), 0.0]))
        })
        .unwrap();
        assert!(matches!(geometric_phase(&curve), Err(PhaseError::IndeterminatePhase { .. })));
    }

    #[test]
    fn gauge_covariance_of_each_piece() {
        let spec = PlateSpec::new(0.8, 0.3).unwrap();
        let curve = evolve(&spec, &pmzc([(0.5, 0.1), (0.2, -0.4), (0.6, 0.3)]), 1001).unwrap();
        let alpha = |s: f64| 0.7 * (2.0 * s).sin() + 0.4 * s * s;
        let moved = gauge_transform(&curve, alpha).unwrap();
        let (s1, s2) = (curve.first().s, curve.last().s);
        let before = geometric_phase(&curve).unwrap();
        let after = geometric_phase(&moved).unwrap();
        let shift = alpha(s2) - alpha(s1);
        assert!(angle::circular_distance(after.pancharatnam, before.pancharatnam + shift) < 1e-12);
        assert!((after.dynamical - before.dynamical - shift).abs() < 1e-6);
        assert!(angle::circular_distance(after.geometric, before.geometric) < 1e-6);
    }

    #[test]
    fn transformation_phase_examples() {
        let d = pmzc([(0.5, 0.1), (0.2, -0.4), (0.6, 0.3)]);
        let (arg, im) = transformation_phase(&d, &PlateSpec::new(0.0, 0.7).unwrap()).unwrap();
        assert!(arg.abs() < 1e-15 && im.abs() < 1e-15);

        let spec = PlateSpec::new(1.3, -0.2).unwrap();
        let (_, im) = transformation_phase(&d, &spec).unwrap();
        assert!((im - transformation_phase_formula(&d, &spec).unwrap()).abs() < 1e-12);

        // small-δ behaviour: Im ≈ 2δ (d1 d2 + d2 d1) for real amplitudes at χ = 0
        let real = pmz([0.6, 0.48, 0.64]);
        let delta = 1e-4;
        let (_, im) = transformation_phase(&real, &PlateSpec::new(delta, 0.0).unwrap()).unwrap();
        let [d1, d2, _] = real.amplitudes().map(|z| z.re);
        assert!((im - 2.0 * delta * (2.0 * d1 * d2)).abs() < 1e-10);
    }

    #[test]
    fn vertex_examples() {
        let a = pmzc([(0.3, 0.1), (-0.2, 0.5), (0.4, -0.6)]);
        assert!(vertex_product(&[a, a, a]).unwrap().abs() < 1e-15);
        let real = [pmz([1.0, 0.0, 0.0]), pmz([1.0, 1.0, 0.0]), pmz([1.0, 1.0, 1.0])];
        assert!(vertex_product(&real).unwrap().abs() < 1e-15);

        let tri = [
            pmz([1.0, 0.0, 0.0]),
            pmz([1.0, 1.0, 0.0]),
            pmzc([(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)]),
        ];
        // ⟨3|1⟩⟨1|2⟩⟨2|3⟩ = (1 + i)/4
        let oracle = -angle::arg(Complex64::new(0.25, 0.25));
        assert!((vertex_product(&tri).unwrap() - oracle).abs() < 1e-15);
        assert!((oracle + FRAC_PI_4).abs() < 1e-15);

        let orth = [pmz([1.0, 0.0, 0.0]), pmz([0.0, 1.0, 0.0])];
        assert!(matches!(vertex_product(&orth), Err(PhaseError::IndeterminatePhase { .. })));
        assert!(matches!(vertex_product(&orth[..1]), Err(PhaseError::Usage(_))));
    }

    #[test]
    fn bargmann_examples() {
        let flat = evolve(&PlateSpec::new(0.0, 0.0).unwrap(), &pmz([0.2, 0.3, 0.9]), 11).unwrap();
        assert!(bargmann_limit(&flat).unwrap().abs() < 1e-15);

        let spec = PlateSpec::new(0.8, 0.3).unwrap();
        let curve = evolve(&spec, &pmzc([(0.5, 0.1), (0.2, -0.4), (0.6, 0.3)]), 2001).unwrap();
        let g = geometric_phase(&curve).unwrap().geometric;
        assert!(angle::circular_distance(bargmann_limit(&curve).unwrap(), g) < 1e-5);
    }

    #[test]
    fn increments_match_quadrature_on_smooth_curves() {
        let spec = PlateSpec::new(0.8, 0.3).unwrap();
        let curve = evolve(&spec, &pmzc([(0.5, 0.1), (0.2, -0.4), (0.6, 0.3)]), 2001).unwrap();
        let a = dynamical_phase_increments(&curve).unwrap();
        let b = dynamical_phase_numeric(&curve).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn unwrapped_pancharatnam_is_continuous() {
        let d = pmz([1.0, 0.2, 0.0]);
        let curve = evolve(&PlateSpec::new(3.0, 0.0).unwrap(), &d, 3001).unwrap();
        let un = pancharatnam_unwrapped(&curve).unwrap();
        assert!(un.windows(2).all(|w| (w[1] - w[0]).abs() < 0.05));
    }

    #[test]
    fn sequence_requires_plates() {
        assert!(plate_sequence(&pmz([1.0, 0.0, 0.0]), &[], 11).is_err());
    }
}
