//! Geometric-phase numerics for three-level biphoton polarization states.
//!
//! A biphoton is described by three amplitudes, either in the photon-number
//! basis `(|2,0⟩, |1,1⟩, |0,2⟩)` or in the phase-plate basis `(Ψ+, Ψ−, Ψ0)`.
//! Loss-free linear phase plates act on it as `SU(3)` matrices. The crate
//! builds those matrices, carries states through them, and splits the
//! Pancharatnam phase of the result into its dynamical and geometric parts.
//!
//! * [`state`]: states, bases, inner products and the ray metric.
//! * [`converters`]: plate matrices `G` and `Q`, composition, evolution curves.
//! * [`eigen`]: spectra of 3×3 unitaries with a deterministic phase convention.
//! * [`phases`]: Pancharatnam, dynamical and geometric phases; Bargmann products.
//! * [`geodesics`]: geodesic arcs, residual checks, parallel lifts, the
//!   two-level scenario and the harmonic condition on `Q`.
//!
//! ```
//! use biphase::{eigen, q_matrix, PlateSpec};
//!
//! let q = q_matrix(&PlateSpec::quarter_wave(0.3));
//! let spectrum = eigen(&q).unwrap();
//! assert!(spectrum.max_residual(&q) < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod converters;
pub mod curve;
pub mod eigen;
pub mod error;
pub mod geodesics;
pub mod phases;
pub mod quadrature;
pub mod state;

pub use converters::{compose, evolve, g_matrix, plate_coefficients, q_matrix, PlateSpec, TransmissionPair, Unitary3};
pub use curve::{gauge_transform, Curve, Sample};
pub use eigen::{eigen, EigenPair, EigenSystem};
pub use error::{PhaseError, Result};
pub use geodesics::{
    curve_length, detect_phase_jump, generalized_geodesic_check, geodesic_between, geodesic_residual,
    horizontality_residual, parallel_lift, two_level_scenario, DerivativeMethod, GeodesicArc, GeodesicFamily,
    GeodesicScenario,
};
pub use phases::{
    bargmann_limit, dynamical_phase_closed_form, dynamical_phase_numeric, geometric_phase, pancharatnam,
    vertex_product, visibility, PhaseReport,
};
pub use state::{inner, ray_distance, to_fock, to_pmz, Basis, StateVector};
