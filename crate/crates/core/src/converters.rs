//! Loss-free linear phase plates acting on the biphoton.
//!
//! A plate of optical thickness `δ` at orientation `χ` has amplitude
//! transmission `t = cos δ + i sin δ cos 2χ` and reflection
//! `r = i sin δ sin 2χ`. On photon-number coefficients it acts as the SU(3)
//! matrix `G(t, r)`; on phase-plate coefficients as `Q = A·G·A⁻¹`.

use num_complex::Complex64;

use crate::curve::{Curve, Sample};
use crate::error::{PhaseError, Result};
use crate::state::{Basis, BasisChange, Matrix3c, StateVector};

/// Allowed max-abs deviation of `U†U` from the identity.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;
/// Allowed `|det U − 1|`.
pub const DETERMINANT_TOLERANCE: f64 = 1e-10;
/// Unitarity budget for products of several plates.
pub const COMPOSED_TOLERANCE: f64 = 1e-9;
/// `g_matrix` rejects `(t, r)` whose `|t|² + |r|²` is further than this from 1.
pub const TRANSMISSION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateSpec {
    /// Optical thickness in radians.
    pub delta: f64,
    /// Orientation relative to the horizontal axis in radians.
    pub chi: f64,
}

impl PlateSpec {
    pub fn new(delta: f64, chi: f64) -> Result<Self> {
        if !delta.is_finite() || !chi.is_finite() {
            return Err(PhaseError::InvalidInput(format!(
                "plate parameters must be finite (delta={delta}, chi={chi})"
            )));
        }
        Ok(PlateSpec { delta, chi })
    }

    pub fn quarter_wave(chi: f64) -> Self {
        PlateSpec {
            delta: std::f64::consts::FRAC_PI_4,
            chi,
        }
    }

    pub fn half_wave(chi: f64) -> Self {
        PlateSpec {
            delta: std::f64::consts::FRAC_PI_2,
            chi,
        }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        PlateSpec { delta, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionPair {
    pub t: Complex64,
    pub r: Complex64,
}

impl TransmissionPair {
    /// `|t|² + |r|² − 1`.
    pub fn norm_deviation(&self) -> f64 {
        self.t.norm_sqr() + self.r.norm_sqr() - 1.0
    }
}

pub fn plate_coefficients(spec: &PlateSpec) -> TransmissionPair {
    let (sd, cd) = spec.delta.sin_cos();
    let (s2c, c2c) = (2.0 * spec.chi).sin_cos();
    TransmissionPair {
        t: Complex64::new(cd, sd * c2c),
        r: Complex64::new(0.0, sd * s2c),
    }
}

/// A 3×3 unitary with unit determinant, tagged with the basis whose
/// coefficients it acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary3 {
    entries: Matrix3c,
    basis: Basis,
}

impl Unitary3 {
    pub fn new(entries: Matrix3c, basis: Basis) -> Result<Self> {
        Self::with_tolerance(entries, basis, UNITARITY_TOLERANCE)
    }

    fn with_tolerance(entries: Matrix3c, basis: Basis, tol: f64) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(PhaseError::InvalidInput("non-finite matrix entry".into()));
        }
        let u = Unitary3 { entries, basis };
        let dev = u.unitarity_deviation();
        if dev > tol {
            return Err(PhaseError::InvalidInput(format!(
                "matrix is not unitary: max |U†U − I| = {dev:e}"
            )));
        }
        let det_dev = (u.determinant() - Complex64::new(1.0, 0.0)).norm();
        if det_dev > tol.max(DETERMINANT_TOLERANCE) {
            return Err(PhaseError::InvalidInput(format!(
                "determinant deviates from 1 by {det_dev:e}"
            )));
        }
        Ok(u)
    }

    pub fn identity(basis: Basis) -> Self {
        Unitary3 {
            entries: Matrix3c::identity(),
            basis,
        }
    }

    pub fn entries(&self) -> &Matrix3c {
        &self.entries
    }

    /// Zero-based `(row, col)` entry.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn unitarity_deviation(&self) -> f64 {
        (self.entries.adjoint() * self.entries - Matrix3c::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries.determinant()
    }

    pub fn adjoint(&self) -> Unitary3 {
        Unitary3 {
            entries: self.entries.adjoint(),
            basis: self.basis,
        }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        state.expect_basis(self.basis)?;
        Ok(StateVector::from_vector(
            self.basis,
            self.entries * state.as_vector(),
        ))
    }

    /// `later · self`: apply `self` first, then `later`.
    pub fn then(&self, later: &Unitary3) -> Result<Unitary3> {
        if self.basis != later.basis {
            return Err(PhaseError::BasisMismatch {
                left: self.basis,
                right: later.basis,
            });
        }
        Unitary3::with_tolerance(later.entries * self.entries, self.basis, COMPOSED_TOLERANCE)
    }

    /// The same operator written for the other coefficient basis.
    pub fn to_basis(&self, target: Basis) -> Unitary3 {
        let a = BasisChange::new();
        let entries = match (self.basis, target) {
            (Basis::Fock, Basis::Pmz) => a.complex() * self.entries * a.inverse_complex(),
            (Basis::Pmz, Basis::Fock) => a.inverse_complex() * self.entries * a.complex(),
            _ => self.entries,
        };
        Unitary3 {
            entries,
            basis: target,
        }
    }
}

/// The photon-number-basis matrix `G(t, r)`.
pub fn g_matrix(tr: &TransmissionPair) -> Result<Unitary3> {
    let dev = tr.norm_deviation();
    if !dev.is_finite() || dev.abs() > TRANSMISSION_TOLERANCE {
        return Err(PhaseError::InvalidInput(format!(
            "|t|² + |r|² deviates from 1 by {dev:e}"
        )));
    }
    let scale = Complex64::from((1.0 + dev).sqrt().recip());
    let (t, r) = (tr.t * scale, tr.r * scale);
    let (tc, rc) = (t.conj(), r.conj());
    let s2 = Complex64::from(std::f64::consts::SQRT_2);
    let diag = Complex64::from(t.norm_sqr() - r.norm_sqr());
    #[rustfmt::skip]
    let g = Matrix3c::new(
        t * t,        s2 * t * r,   r * r,
        -s2 * t * rc, diag,         s2 * tc * r,
        rc * rc,      -s2 * tc * rc, tc * tc,
    );
    Unitary3::new(g, Basis::Fock)
}

/// The phase-plate-basis matrix `Q = A·G·A⁻¹`.
pub fn q_matrix(spec: &PlateSpec) -> Unitary3 {
    let g = g_matrix(&plate_coefficients(spec)).expect("plate coefficients are always normalized");
    g.to_basis(Basis::Pmz)
}

/// Trigonometric form of `Q(δ, χ)`, consistent with `A·G·A⁻¹` in every entry.
pub fn q_matrix_closed_form(spec: &PlateSpec) -> Matrix3c {
    let PlateSpec { delta, chi } = *spec;
    let (s2d, c2d) = (2.0 * delta).sin_cos();
    let (s2x, c2x) = (2.0 * chi).sin_cos();
    let (s4x, c4x) = (4.0 * chi).sin_cos();
    let (sd, cd) = delta.sin_cos();
    let (sd2, cd2) = (sd * sd, cd * cd);
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    #[rustfmt::skip]
    let q = Matrix3c::new(
        re(c2d),        im(s2d * c2x),         im(s2d * s2x),
        im(s2d * c2x),  re(cd2 - sd2 * c4x),   re(-s4x * sd2),
        im(s2d * s2x),  re(-s4x * sd2),        re(cd2 + sd2 * c4x),
    );
    q
}

/// `∂²Q/∂δ²` of the trigonometric form, entry by entry.
pub fn q_matrix_second_derivative(spec: &PlateSpec) -> Matrix3c {
    let PlateSpec { delta, chi } = *spec;
    let (s2d, c2d) = (2.0 * delta).sin_cos();
    let (s2x, c2x) = (2.0 * chi).sin_cos();
    let (s4x, c4x) = (4.0 * chi).sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    // (cos²δ)'' = −2 cos 2δ, (sin²δ)'' = 2 cos 2δ
    #[rustfmt::skip]
    let q = Matrix3c::new(
        re(-4.0 * c2d),           im(-4.0 * s2d * c2x),               im(-4.0 * s2d * s2x),
        im(-4.0 * s2d * c2x),     re(-2.0 * c2d - 2.0 * c2d * c4x),   re(-2.0 * s4x * c2d),
        im(-4.0 * s2d * s2x),     re(-2.0 * s4x * c2d),               re(-2.0 * c2d + 2.0 * c2d * c4x),
    );
    q
}

/// The trigonometric matrix exactly as it appears in the printed derivation,
/// including its `(1,3)` entry `i sin δ sin 2χ`. Not unitary in general; use
/// [`explicit_form_discrepancies`] to compare it against [`q_matrix`].
pub fn q_matrix_explicit(spec: &PlateSpec) -> Matrix3c {
    let mut q = q_matrix_closed_form(spec);
    let (s2x, _) = (2.0 * spec.chi).sin_cos();
    q[(0, 2)] = Complex64::new(0.0, spec.delta.sin() * s2x);
    q
}

/// One entry where the printed trigonometric matrix and `A·G·A⁻¹` disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryDiscrepancy {
    /// One-based row.
    pub row: usize,
    /// One-based column.
    pub col: usize,
    pub printed: Complex64,
    pub derived: Complex64,
}

impl EntryDiscrepancy {
    pub fn magnitude(&self) -> f64 {
        (self.printed - self.derived).norm()
    }
}

/// Entries of [`q_matrix_explicit`] that differ from [`q_matrix`] by more than
/// `tol`.
pub fn explicit_form_discrepancies(spec: &PlateSpec, tol: f64) -> Vec<EntryDiscrepancy> {
    let printed = q_matrix_explicit(spec);
    let derived = q_matrix(spec);
    let mut out = Vec::new();
    for row in 0..3 {
        for col in 0..3 {
            let d = EntryDiscrepancy {
                row: row + 1,
                col: col + 1,
                printed: printed[(row, col)],
                derived: derived.entry(row, col),
            };
            if d.magnitude() > tol {
                out.push(d);
            }
        }
    }
    out
}

/// Product of the plates' `Q` matrices in traversal order:
/// `Q(last) ··· Q(first)`.
pub fn compose(plates: &[PlateSpec]) -> Result<Unitary3> {
    let (first, rest) = plates
        .split_first()
        .ok_or_else(|| PhaseError::Usage("cannot compose an empty list of plates".into()))?;
    rest.iter()
        .try_fold(q_matrix(first), |acc, p| acc.then(&q_matrix(p)))
}

/// The state carried through a plate whose thickness grows continuously from
/// zero to `spec.delta`, sampled at `n` evenly spaced thicknesses.
///
/// The curve parameter is the thickness traversed, `s ∈ [0, |δ|]`. A plate
/// of zero thickness yields the constant curve on `s ∈ [0, 1]`.
pub fn evolve(spec: &PlateSpec, state: &StateVector, n: usize) -> Result<Curve> {
    if n < 2 {
        return Err(PhaseError::Usage(format!(
            "evolve needs at least 2 samples, got {n}"
        )));
    }
    state.expect_basis(Basis::Pmz)?;
    let sign = spec.delta.signum();
    let span = if spec.delta == 0.0 { 1.0 } else { spec.delta.abs() };
    let samples = (0..n)
        .map(|i| {
            let s = if i == n - 1 {
                span
            } else {
                span * i as f64 / (n - 1) as f64
            };
            let thickness = if spec.delta == 0.0 { 0.0 } else { sign * s };
            let state = if i == 0 {
                *state
            } else {
                q_matrix(&spec.with_delta(thickness)).apply(state)?
            };
            Ok(Sample { s, state })
        })
        .collect::<Result<Vec<_>>>()?;
    Curve::new(samples)
}

/// Max-abs entry difference of two matrices.
pub fn max_entry_difference(a: &Matrix3c, b: &Matrix3c) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
