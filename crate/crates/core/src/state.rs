//! Three-level biphoton states and the two coefficient bases they are written in.
//!
//! The photon-number basis orders `|2,0⟩, |1,1⟩, |0,2⟩`. The phase-plate basis
//! orders `|Ψ+⟩ = (|2,0⟩ + |0,2⟩)/√2`, `|Ψ−⟩ = (|2,0⟩ − |0,2⟩)/√2`,
//! `|Ψ0⟩ = |1,1⟩`. Both are carried as an explicit tag so that coefficient
//! triples of one basis are never fed to a matrix written for the other.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{PhaseError, Result};

pub type Vector3c = Vector3<Complex64>;
pub type Matrix3c = Matrix3<Complex64>;

/// Allowed deviation of `Σ|cᵢ|²` from one.
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `(|2,0⟩, |1,1⟩, |0,2⟩)`
    Fock,
    /// `(|Ψ+⟩, |Ψ−⟩, |Ψ0⟩)`
    Pmz,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Fock => "FOCK",
            Basis::Pmz => "PMZ",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Basis {
    type Err = PhaseError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FOCK" => Ok(Basis::Fock),
            "PMZ" => Ok(Basis::Pmz),
            other => Err(PhaseError::InvalidInput(format!(
                "unknown basis {other:?}, expected FOCK or PMZ"
            ))),
        }
    }
}

/// A unit-norm biphoton state in a tagged basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amplitudes: Vector3c,
    basis: Basis,
}

impl StateVector {
    /// Build a state from amplitudes that are already normalized.
    pub fn new(basis: Basis, amplitudes: [Complex64; 3]) -> Result<Self> {
        let v = Vector3c::from(amplitudes);
        check_finite(&v)?;
        let norm_sq = v.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(PhaseError::InvalidInput(format!(
                "state norm² is {norm_sq}, expected 1 within {NORM_TOLERANCE:e}"
            )));
        }
        Ok(StateVector {
            amplitudes: v,
            basis,
        })
    }

    /// Build a state by normalizing arbitrary (non-zero) amplitudes.
    pub fn normalized(basis: Basis, amplitudes: [Complex64; 3]) -> Result<Self> {
        let v = Vector3c::from(amplitudes);
        check_finite(&v)?;
        let norm = v.norm();
        if norm < 1e-300 {
            return Err(PhaseError::InvalidInput("zero state vector".into()));
        }
        Ok(StateVector {
            amplitudes: v / Complex64::from(norm),
            basis,
        })
    }

    /// Real-amplitude shorthand used throughout tests and examples.
    pub fn from_real(basis: Basis, amplitudes: [f64; 3]) -> Result<Self> {
        Self::normalized(basis, amplitudes.map(Complex64::from))
    }

    /// Wrap the output of a norm-preserving computation. The residual rounding
    /// drift is removed so the unit-norm invariant holds exactly.
    pub(crate) fn from_vector(basis: Basis, v: Vector3c) -> Self {
        let norm = v.norm();
        debug_assert!((norm - 1.0).abs() < 1e-8, "norm drifted to {norm}");
        StateVector {
            amplitudes: v / Complex64::from(norm),
            basis,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitudes(&self) -> [Complex64; 3] {
        [self.amplitudes[0], self.amplitudes[1], self.amplitudes[2]]
    }

    pub fn as_vector(&self) -> &Vector3c {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Multiply by a global phase `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes * Complex64::from_polar(1.0, theta),
            basis: self.basis,
        }
    }

    pub fn expect_basis(&self, expected: Basis) -> Result<()> {
        if self.basis == expected {
            Ok(())
        } else {
            Err(PhaseError::WrongBasis {
                expected,
                found: self.basis,
            })
        }
    }

    /// Express the state in the other basis.
    pub fn to_basis(&self, target: Basis) -> StateVector {
        match (self.basis, target) {
            (Basis::Fock, Basis::Pmz) => to_pmz_unchecked(self),
            (Basis::Pmz, Basis::Fock) => to_fock_unchecked(self),
            _ => *self,
        }
    }
}

fn check_finite(v: &Vector3c) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(PhaseError::InvalidInput("non-finite amplitude".into()))
    }
}

/// The real orthogonal change of basis from photon-number to phase-plate
/// coefficients, `d = A·c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisChange {
    matrix: Matrix3<f64>,
}

impl BasisChange {
    pub fn new() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        BasisChange {
            matrix: Matrix3::new(
                h, 0.0, h, //
                h, 0.0, -h, //
                0.0, 1.0, 0.0,
            ),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn complex(&self) -> Matrix3c {
        self.matrix.map(Complex64::from)
    }

    /// `A⁻¹ = Aᵀ`.
    pub fn inverse_complex(&self) -> Matrix3c {
        self.matrix.transpose().map(Complex64::from)
    }
}

impl Default for BasisChange {
    fn default() -> Self {
        Self::new()
    }
}

fn to_pmz_unchecked(state: &StateVector) -> StateVector {
    let a = BasisChange::new().complex();
    StateVector::from_vector(Basis::Pmz, a * state.amplitudes)
}

fn to_fock_unchecked(state: &StateVector) -> StateVector {
    let a_inv = BasisChange::new().inverse_complex();
    StateVector::from_vector(Basis::Fock, a_inv * state.amplitudes)
}

/// Photon-number coefficients `c` to phase-plate coefficients `A·c`.
pub fn to_pmz(state: &StateVector) -> Result<StateVector> {
    state.expect_basis(Basis::Fock)?;
    Ok(to_pmz_unchecked(state))
}

/// Phase-plate coefficients `d` to photon-number coefficients `Aᵀ·d`.
pub fn to_fock(state: &StateVector) -> Result<StateVector> {
    state.expect_basis(Basis::Pmz)?;
    Ok(to_fock_unchecked(state))
}

pub(crate) fn same_basis(a: &StateVector, b: &StateVector) -> Result<Basis> {
    if a.basis == b.basis {
        Ok(a.basis)
    } else {
        Err(PhaseError::BasisMismatch {
            left: a.basis,
            right: b.basis,
        })
    }
}

/// `⟨a|b⟩ = Σ conj(aᵢ)·bᵢ`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    same_basis(a, b)?;
    Ok(a.amplitudes.dotc(&b.amplitudes))
}

/// Distance between rays, `sqrt(1 − |⟨a|b⟩|²)`, in `[0, 1]`.
///
/// Evaluated as the norm of the part of `b` orthogonal to `a`, which equals the
/// closed form for unit vectors but does not lose half the digits near zero.
pub fn ray_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    let overlap = inner(a, b)?;
    let perp = b.amplitudes - a.amplitudes * overlap;
    Ok(perp.norm().clamp(0.0, 1.0))
}
