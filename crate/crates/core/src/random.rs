//! Random states, unitaries and POVMs for property tests and sweeps.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hilbert::{c, Ket, Operator, Space};
use crate::povm::{DensityMatrix, Povm};

/// Standard complex Gaussian (Box-Muller).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = libm::sqrt(-libm::log(u1));
    let theta = core::f64::consts::TAU * u2;
    Complex64::new(r * libm::cos(theta), r * libm::sin(theta))
}

/// Haar-random unit vector.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Ket {
    loop {
        let amps = (0..space.dim()).map(|_| complex_gaussian(rng)).collect();
        let k = Ket::new(space, amps).expect("finite");
        if let Some(u) = k.normalised(1e-6) {
            return u;
        }
    }
}

/// Haar-random orthonormal basis (the columns of a random unitary).
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Vec<Ket> {
    let n = space.dim();
    let mut basis: Vec<Ket> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = random_ket(rng, space);
        // modified Gram-Schmidt, twice for stability
        for _ in 0..2 {
            for b in &basis {
                let p = b.inner(&v).expect("same space");
                v = v.sub(&b.scale(p)).expect("same space");
            }
        }
        if let Some(u) = v.normalised(1e-6) {
            basis.push(u);
        }
    }
    basis
}

/// Haar-random unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Operator {
    let cols = random_basis(rng, space);
    let n = space.dim();
    let rows = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
    Operator::new(space, rows).expect("shape")
}

/// Random full-rank density matrix `Σ_k p_k |ψ_k⟩⟨ψ_k|`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, space: Space) -> DensityMatrix {
    let n = space.dim();
    let weights: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut op = Operator::zero(space);
    for w in weights {
        let k = random_ket(rng, space);
        op = op.add(&k.projector().scale(c(w / total))).expect("same space");
    }
    DensityMatrix::new(op, 1e-9).expect("valid by construction")
}

/// Random complete rank-one POVM with `count ≥ dim` outcomes: the element
/// vectors are the columns of the first `dim` rows of a Haar unitary on
/// `C^count`, i.e. the columns of a random co-isometry.
pub fn random_rank_one_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Result<Povm> {
    if count < dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: count,
        });
    }
    let big = random_basis(rng, Space::system(count)?);
    let space = Space::system(dim)?;
    let elements = (0..count)
        .map(|m| {
            let amps = (0..dim).map(|i| big[i][m].conj()).collect();
            (format!("m{}", m + 1), Ket::new(space, amps).expect("shape"))
        })
        .collect();
    Povm::from_vectors(dim, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::orthonormality_residual;
    use rand::{rngs::StdRng, SeedableRng};

    #[test]
    fn unitary_is_unitary() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 1..6 {
            let u = random_unitary(&mut rng, Space::System(n));
            assert!(u.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn povm_is_complete() {
        let mut rng = StdRng::seed_from_u64(11);
        let p = random_rank_one_povm(&mut rng, 3, 5).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.completeness_check() < 1e-12);
        let b = random_basis(&mut rng, Space::System(4));
        assert!(orthonormality_residual(&b).unwrap() < 1e-12);
        assert!(random_rank_one_povm(&mut rng, 3, 2).is_err());
    }
}
