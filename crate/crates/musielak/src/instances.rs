//! Seeded random instances.
//!
//! Every instance draws from its own ChaCha8 stream, derived from the
//! campaign seed, a campaign tag, the dimension and the instance index, so
//! results do not depend on thread scheduling or on which other instances
//! were generated.

use musielak_core::{Cube, MusielakSystem, OrliczFunction, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Family;
use crate::Result;

/// Generator for instance `index` of dimension `n` in the campaign `tag`.
pub fn instance_rng(seed: u64, tag: u8, n: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(
        ((tag as u64) << 56) | ((n as u64 & 0xff_ffff) << 32) | (index as u64 & 0xffff_ffff),
    );
    rng
}

/// Rows of `offset + U(0, 1)` sorted nonincreasingly.
pub fn random_decreasing(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    offset: f64,
) -> Result<WeightMatrix> {
    let data = (0..rows)
        .map(|_| {
            let mut r: Vec<f64> = (0..cols).map(|_| offset + rng.random::<f64>()).collect();
            r.sort_by(|a, b| b.total_cmp(a));
            r
        })
        .collect();
    Ok(WeightMatrix::new(data)?)
}

/// Square matrix from a matrix family; `None` for the power family.
pub fn family_matrix(
    family: &Family,
    rng: &mut impl Rng,
    n: usize,
) -> Result<Option<WeightMatrix>> {
    Ok(match family {
        Family::Constant { value } => Some(WeightMatrix::constant(n, n, *value)?),
        Family::RandomDecreasing { offset } => Some(random_decreasing(rng, n, n, *offset)?),
        Family::PowerFamily { .. } => None,
    })
}

/// Power system with `p_i = exponents[i mod len]`, each normalized so that
/// `M_i*(1) = 1`.
pub fn power_system(exponents: &[f64], n: usize) -> Result<MusielakSystem> {
    let functions = (0..n)
        .map(|i| musielak_core::power_orlicz(exponents[i % exponents.len()]))
        .collect::<musielak_core::Result<Vec<OrliczFunction>>>()?;
    Ok(MusielakSystem::new(functions)?)
}

pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn uniform_vector(rng: &mut impl Rng, n: usize, half_width: f64) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(-half_width..half_width))
        .collect()
}

/// `n × n × n` array of signed `U(−1, 1)` entries.
pub fn signed_cube(rng: &mut impl Rng, n: usize) -> Result<Cube> {
    Ok(Cube::from_fn(n, |_, _, _| rng.random_range(-1.0..1.0))?)
}
