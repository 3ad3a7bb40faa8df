#![allow(dead_code)]

use idmps::{DenseTensor, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tensor(rng: &mut ChaCha8Rng, shape: &[usize]) -> DenseTensor {
    let len = shape.iter().product();
    let data = (0..len)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    DenseTensor::new(shape.to_vec(), data).unwrap()
}

pub fn random_shape(rng: &mut ChaCha8Rng, sites: std::ops::RangeInclusive<usize>, dims: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    let n = rng.random_range(sites);
    (0..n).map(|_| rng.random_range(dims.clone())).collect()
}

pub fn ghz(n: usize) -> DenseTensor {
    let mut data = vec![C64::new(0.0, 0.0); 1 << n];
    data[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    data[(1 << n) - 1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    DenseTensor::new(vec![2; n], data).unwrap()
}

/// `‖a − b‖ / ‖b‖`.
pub fn rel_dist(a: &DenseTensor, b: &DenseTensor) -> f64 {
    a.distance(b).unwrap() / b.norm()
}

pub fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch {a:?} vs {b:?}");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
