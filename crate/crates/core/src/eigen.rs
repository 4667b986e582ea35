//! Eigen-decomposition of 3×3 unitaries.
//!
//! A unitary `U` is normal, so it shares its eigenvectors with the two
//! commuting Hermitian parts `(U + U†)/2` and `(U − U†)/2i`. We diagonalize a
//! generic real combination of them with cyclic complex Jacobi rotations,
//! which always returns an orthonormal basis (degenerate eigenspaces
//! included), and read each eigenvalue off as the Rayleigh quotient `v†Uv`.
//! If two distinct eigenvalues of `U` happen to project onto the same value
//! of the chosen combination, another mixing weight is tried.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::angle;
use crate::converters::Unitary3;
use crate::error::{PhaseError, Result};
use crate::state::{Matrix3c, StateVector, Vector3c};

/// Largest accepted `‖Uv − λv‖` per eigenpair.
pub const EIGEN_RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Eigenvalues closer than this are treated as one degenerate eigenspace.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;
/// Components below this magnitude count as zero when fixing the phase.
const ZERO_COMPONENT: f64 = 1e-8;
const MAX_SWEEPS: usize = 50;
const MIXING_WEIGHTS: [f64; 5] = [
    0.618_033_988_749_894_8,
    -1.324_717_957_244_746,
    0.261_799_387_799_149_4,
    std::f64::consts::E,
    -0.414_213_562_373_095,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: StateVector,
}

impl EigenPair {
    /// Principal argument of the eigenvalue.
    pub fn argument(&self) -> f64 {
        sortable_arg(self.value)
    }
}

/// Three eigenpairs sorted by ascending principal argument of the eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pairs: Vec<EigenPair>,
}

impl EigenSystem {
    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn values(&self) -> [Complex64; 3] {
        [self.pairs[0].value, self.pairs[1].value, self.pairs[2].value]
    }

    pub fn arguments(&self) -> [f64; 3] {
        [
            self.pairs[0].argument(),
            self.pairs[1].argument(),
            self.pairs[2].argument(),
        ]
    }

    /// The pair whose eigenvalue is nearest to `target`.
    pub fn nearest(&self, target: Complex64) -> &EigenPair {
        self.pairs
            .iter()
            .min_by(|a, b| {
                (a.value - target)
                    .norm()
                    .total_cmp(&(b.value - target).norm())
            })
            .expect("three pairs")
    }

    /// Largest `‖Uv − λv‖` over the pairs.
    pub fn max_residual(&self, u: &Unitary3) -> f64 {
        self.pairs
            .iter()
            .map(|p| residual(u.entries(), p.vector.as_vector(), p.value))
            .fold(0.0, f64::max)
    }
}

fn sortable_arg(z: Complex64) -> f64 {
    let a = angle::arg(z);
    // -1 with a rounding-sized negative imaginary part belongs at +π
    if a < -PI + 1e-9 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn residual(u: &Matrix3c, v: &Vector3c, lambda: Complex64) -> f64 {
    (u * v - v * lambda).norm()
}

fn rayleigh(u: &Matrix3c, v: &Vector3c) -> Complex64 {
    v.dotc(&(u * v))
}

/// Eigenvalues and orthonormal eigenvectors of a unitary.
///
/// Eigenvectors are phase-fixed so that their first non-zero component is
/// real and positive. Degenerate eigenspaces are spanned by the Gram–Schmidt
/// orthonormalization of the projections of the standard basis vectors, taken
/// in order, which makes the output independent of solver internals.
pub fn eigen(u: &Unitary3) -> Result<EigenSystem> {
    let m = *u.entries();
    let herm_re = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let herm_im = (m - m.adjoint()) * Complex64::new(0.0, -0.5);

    let mut best: Option<(f64, Vec<(Complex64, Vector3c)>)> = None;
    for &w in &MIXING_WEIGHTS {
        let h = herm_re + herm_im * Complex64::from(w);
        let vecs = hermitian_jacobi(h)?;
        let pairs: Vec<(Complex64, Vector3c)> = (0..3)
            .map(|k| {
                let v: Vector3c = vecs.column(k).into_owned();
                (rayleigh(&m, &v), v)
            })
            .collect();
        let worst = pairs
            .iter()
            .map(|(l, v)| residual(&m, v, *l))
            .fold(0.0, f64::max);
        let better = best.as_ref().is_none_or(|(r, _)| worst < *r);
        if better {
            best = Some((worst, pairs));
        }
        if worst <= 1e-13 {
            break;
        }
    }
    let (worst, pairs) = best.expect("at least one mixing weight");
    if worst > EIGEN_RESIDUAL_TOLERANCE {
        return Err(PhaseError::Convergence { residual: worst });
    }

    let pairs = canonicalize(&m, pairs);
    let basis = u.basis();
    let system = EigenSystem {
        pairs: pairs
            .into_iter()
            .map(|(value, v)| EigenPair {
                value,
                vector: StateVector::from_vector(basis, v),
            })
            .collect(),
    };
    let worst = system.max_residual(u);
    if worst > EIGEN_RESIDUAL_TOLERANCE {
        return Err(PhaseError::Convergence { residual: worst });
    }
    Ok(system)
}

fn canonicalize(m: &Matrix3c, pairs: Vec<(Complex64, Vector3c)>) -> Vec<(Complex64, Vector3c)> {
    // Group into degenerate clusters.
    let mut clusters: Vec<Vec<(Complex64, Vector3c)>> = Vec::new();
    for p in pairs {
        match clusters
            .iter_mut()
            .find(|c| c.iter().any(|q| (q.0 - p.0).norm() < DEGENERACY_TOLERANCE))
        {
            Some(c) => c.push(p),
            None => clusters.push(vec![p]),
        }
    }

    let mut out: Vec<(f64, Vec<(Complex64, Vector3c)>)> = clusters
        .into_iter()
        .map(|c| {
            let members = if c.len() == 1 {
                c
            } else {
                canonical_eigenspace(m, &c)
            };
            let key = sortable_arg(members[0].0);
            let members = members
                .into_iter()
                .map(|(l, v)| (l, fix_phase(v)))
                .collect();
            (key, members)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.into_iter().flat_map(|(_, c)| c).collect()
}

fn canonical_eigenspace(
    m: &Matrix3c,
    members: &[(Complex64, Vector3c)],
) -> Vec<(Complex64, Vector3c)> {
    let projector = members
        .iter()
        .fold(Matrix3c::zeros(), |acc, (_, v)| acc + v * v.adjoint());
    let mut basis: Vec<Vector3c> = Vec::with_capacity(members.len());
    for j in 0..3 {
        if basis.len() == members.len() {
            break;
        }
        let mut w: Vector3c = projector.column(j).into_owned();
        for b in &basis {
            w -= b * b.dotc(&w);
        }
        let norm = w.norm();
        if norm > 1e-4 {
            basis.push(w / Complex64::from(norm));
        }
    }
    if basis.len() < members.len() {
        // Projector too ill-conditioned to rebuild; keep the solver's basis.
        return members.to_vec();
    }
    basis.into_iter().map(|v| (rayleigh(m, &v), v)).collect()
}

fn fix_phase(v: Vector3c) -> Vector3c {
    match v.iter().find(|z| z.norm() > ZERO_COMPONENT) {
        Some(z) => v * (z.conj() / z.norm()),
        None => v,
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian 3×3 matrix. Returns the
/// unitary whose columns are the eigenvectors.
fn hermitian_jacobi(mut a: Matrix3c) -> Result<Matrix3c> {
    let mut v = Matrix3c::identity();
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= 1e-32 * scale {
            return Ok(v);
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            let b = apq.norm();
            if b <= 1e-300 {
                continue;
            }
            let phase = apq.conj() / b;
            let theta = 0.5 * (2.0 * b).atan2(a[(q, q)].re - a[(p, p)].re);
            let (s, c) = theta.sin_cos();
            let mut j = Matrix3c::identity();
            j[(p, p)] = Complex64::from(c);
            j[(p, q)] = Complex64::from(s);
            j[(q, p)] = phase * -s;
            j[(q, q)] = phase * c;
            a = j.adjoint() * a * j;
            v *= j;
        }
    }
    let off: f64 = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(p, q)| a[(p, q)].norm_sqr())
        .sum();
    Err(PhaseError::Convergence {
        residual: off.sqrt(),
    })
}
