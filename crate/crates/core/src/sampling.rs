//! Seeded random streams. Every stage draws from its own ChaCha stream, derived
//! from the run seed and a stage label, so results do not depend on stage order
//! or thread scheduling.

use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{Cq, C64};

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// The stream for `label` under `seed`.
pub fn substream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// Complex vector with real and imaginary parts uniform on `[-1, 1]`.
pub fn complex_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
        .collect()
}

/// Complex rationals `(p + iq)/den` with `p, q` uniform on `[-den, den]`.
pub fn rational_vector<R: Rng>(rng: &mut R, len: usize, den: i64) -> Vec<Cq> {
    let d = num_bigint::BigInt::from(den);
    (0..len)
        .map(|_| {
            let p = rng.random_range(-den..=den);
            let q = rng.random_range(-den..=den);
            Complex::new(
                BigRational::new(p.into(), d.clone()),
                BigRational::new(q.into(), d.clone()),
            )
        })
        .collect()
}
