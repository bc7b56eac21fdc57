//! Seeded random states, unitaries and channels for oracle checks.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::KrausChannel;
use crate::error::Result;
use crate::linalg::{matrix_function, ComplexMatrix, DensityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Ginibre matrix with standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `G (G†G)^{-1/2}`, an isometry with the columns of `G`'s polar factor.
fn polar_isometry(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = &g.adjoint() * g;
    Ok(g * &matrix_function(&gram, |x| 1.0 / x.sqrt())?)
}

/// Mixed state `G G† / tr(G G†)` of full rank almost surely.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    let g = ginibre(dim, dim, rng);
    DensityMatrix::normalized(&(&g * &g.adjoint()))
}

pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    let v = ginibre(dim, 1, rng);
    let norm = v.frobenius_norm();
    DensityMatrix::pure(&v.as_slice().iter().map(|z| z / norm).collect::<Vec<_>>())
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    polar_isometry(&ginibre(dim, dim, rng))
}

/// Channel with `kraus_rank` operators cut from a random isometry `C^d → C^{k d}`.
pub fn random_channel<R: Rng + ?Sized>(dim: usize, kraus_rank: usize, rng: &mut R) -> Result<KrausChannel> {
    let v = polar_isometry(&ginibre(kraus_rank * dim, dim, rng))?;
    let ops = (0..kraus_rank)
        .map(|k| ComplexMatrix::from_fn(dim, dim, |r, c| v[(k * dim + r, c)]))
        .collect();
    KrausChannel::new(ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_valid_and_reproducible() {
        let mut a = rng(7);
        let mut b = rng(7);
        for d in [2, 3] {
            let rho = random_density(d, &mut a).unwrap();
            assert!(rho.spectrum().unwrap().iter().all(|&l| l >= 0.0));
            assert_eq!(rho, random_density(d, &mut b).unwrap());
            let u = random_unitary(d, &mut a).unwrap();
            assert!((&(&u * &u.adjoint()) - &ComplexMatrix::identity(d)).max_abs() < 1e-12);
            let ch = random_channel(d, 3, &mut a).unwrap();
            assert!(ch.completeness_error() < 1e-12);
            let psi = random_pure(d, &mut a).unwrap();
            assert!(((psi.matrix() * psi.matrix()).trace().re - 1.0).abs() < 1e-12);
            let _ = (random_unitary(d, &mut b), random_channel(d, 3, &mut b), random_pure(d, &mut b));
        }
    }
}
