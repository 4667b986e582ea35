//! Shared inputs for the benchmarks.

use biphase::{Basis, PlateSpec, StateVector};

pub fn generic_state() -> StateVector {
    StateVector::from_real(Basis::Pmz, [0.5, -0.3, 0.8]).expect("non-zero amplitudes")
}

pub fn other_state() -> StateVector {
    StateVector::from_real(Basis::Pmz, [0.1, 0.9, -0.4]).expect("non-zero amplitudes")
}

pub fn generic_plate() -> PlateSpec {
    PlateSpec::new(1.1, 0.37).expect("finite plate")
}
