use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::spectral::DEFAULT_TOL;
use super::{AlgebraDescriptor, EjaElement};
use crate::error::{Error, Result};

const FRAME_RETRIES: u64 = 16;

pub(crate) fn gaussian_element(alg: AlgebraDescriptor, rng: &mut ChaCha8Rng) -> EjaElement {
    let coeffs = (0..alg.dim()).map(|_| StandardNormal.sample(rng)).collect();
    EjaElement::new(alg, coeffs).expect("length matches")
}

/// Element with i.i.d. standard normal coefficients.
pub fn random_element(alg: AlgebraDescriptor, seed: u64) -> EjaElement {
    gaussian_element(alg, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Unit-trace square `y∘y / tr(y∘y)`.
pub fn random_state(alg: AlgebraDescriptor, seed: u64) -> EjaElement {
    let y = random_element(alg, seed).square();
    let t = y.trace();
    y.scale(1.0 / t)
}

/// Jordan frame of a random element with simple spectrum.
pub fn random_jordan_frame(alg: AlgebraDescriptor, seed: u64) -> Result<Vec<EjaElement>> {
    for attempt in 0..FRAME_RETRIES {
        let x = random_element(alg, seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9)));
        let d = x.spectral_decompose_seeded(DEFAULT_TOL, seed)?;
        if d.coarse.len() == alg.rank() {
            return Ok(d.frame);
        }
    }
    Err(Error::RetryCap(FRAME_RETRIES as usize))
}
