#![allow(dead_code)]

use l1_qubo::QuboModel;
use proptest::prelude::*;

/// Random model on `1..=max_n` variables with coefficients in [-10, 10] and
/// roughly half of the pairs coupled.
pub fn qubo_model(max_n: usize) -> impl Strategy<Value = QuboModel> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            prop::collection::vec(prop::option::of(-10.0..10.0f64), n),
            prop::collection::vec(prop::option::of(-10.0..10.0f64), pairs),
            -10.0..10.0f64,
        )
            .prop_map(|(n, lin, quad, offset)| {
                let mut b = QuboModel::builder(n);
                for (i, v) in lin.into_iter().enumerate() {
                    if let Some(v) = v {
                        b.set_linear(i, v).unwrap();
                    }
                }
                let mut k = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        if let Some(v) = quad[k] {
                            b.set_quadratic(i, j, v).unwrap();
                        }
                        k += 1;
                    }
                }
                b.set_offset(offset).unwrap();
                b.build()
            })
    })
}

/// Same as [`qubo_model`] but driven by a plain seed, for loops over many models.
pub fn seeded_model(n: usize, seed: u64) -> QuboModel {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut b = QuboModel::builder(n);
    for i in 0..n {
        b.set_linear(i, rng.random_range(-10.0..10.0)).unwrap();
        for j in (i + 1)..n {
            if rng.random_bool(0.5) {
                b.set_quadratic(i, j, rng.random_range(-10.0..10.0))
                    .unwrap();
            }
        }
    }
    b.set_offset(rng.random_range(-10.0..10.0)).unwrap();
    b.build()
}
