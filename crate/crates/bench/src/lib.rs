//! Fixtures shared by the benchmarks.

use qswitch_core::random::{random_channel, random_density, rng};
use qswitch_core::{decompose, CollisionParams, Result, SwitchDecomposition};

/// Switch decomposition of a random qubit channel pair.
pub fn qubit_fixture(seed: u64) -> Result<SwitchDecomposition> {
    let mut r = rng(seed);
    let m = random_channel(2, 2, &mut r)?;
    let n = random_channel(2, 3, &mut r)?;
    let rho = random_density(2, &mut r)?;
    decompose(&m, &n, &rho)
}

pub fn collision_params(n: u32) -> Result<CollisionParams> {
    CollisionParams::free_system(1.0, 0.2, 1.0, 1.0, n, 2)
}
