use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{accept, AnnealSchedule, SolveResult};
use crate::error::Result;
use crate::model::QuboModel;

/// Adjacency-list form of a [`QuboModel`] for fast single-flip deltas.
#[derive(Debug, Clone)]
pub struct CompiledQubo {
    linear: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
    offset: f64,
}

impl CompiledQubo {
    pub fn new(model: &QuboModel) -> Self {
        let n = model.num_vars();
        let mut linear = vec![0.0; n];
        for (&i, &v) in model.linear() {
            linear[i] = v;
        }
        let mut neighbors = vec![Vec::new(); n];
        for (&(i, j), &v) in model.quadratic() {
            neighbors[i].push((j, v));
            neighbors[j].push((i, v));
        }
        CompiledQubo {
            linear,
            neighbors,
            offset: model.offset(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn energy(&self, bits: &[u8]) -> f64 {
        let mut e = self.offset;
        for (i, &b) in bits.iter().enumerate() {
            if b == 1 {
                e += self.linear[i];
                // each pair counted from both ends
                e += self.neighbors[i]
                    .iter()
                    .filter(|&&(j, _)| bits[j] == 1)
                    .map(|&(_, v)| v)
                    .sum::<f64>()
                    / 2.0;
            }
        }
        e
    }

    /// Energy change from flipping bit `i`.
    #[inline]
    pub fn flip_delta(&self, bits: &[u8], i: usize) -> f64 {
        let field = self.linear[i]
            + self.neighbors[i]
                .iter()
                .filter(|&&(j, _)| bits[j] == 1)
                .map(|&(_, v)| v)
                .sum::<f64>();
        if bits[i] == 0 {
            field
        } else {
            -field
        }
    }
}

/// Single-bit-flip Metropolis annealing from a uniformly random start.
pub fn anneal_discrete(
    model: &QuboModel,
    sched: &AnnealSchedule,
    seed: u64,
) -> Result<SolveResult<Vec<u8>>> {
    anneal_discrete_observed(model, sched, seed, |_, _| {})
}

/// As [`anneal_discrete`], calling `observe(move_index, best_energy_so_far)` after every move.
pub fn anneal_discrete_observed(
    model: &QuboModel,
    sched: &AnnealSchedule,
    seed: u64,
    mut observe: impl FnMut(usize, f64),
) -> Result<SolveResult<Vec<u8>>> {
    sched.validate()?;
    let compiled = CompiledQubo::new(model);
    let n = compiled.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut bits: Vec<u8> = (0..n).map(|_| rng.random_range(0..=1u8)).collect();
    let mut energy = compiled.energy(&bits);
    let mut best = bits.clone();
    let mut best_energy = energy;
    let mut moves = 0usize;

    for temperature in sched.temperatures() {
        for _ in 0..sched.moves_per_temperature {
            if n > 0 {
                let i = rng.random_range(0..n);
                let delta = compiled.flip_delta(&bits, i);
                let u: f64 = rng.random();
                if accept(delta, temperature, u) {
                    bits[i] ^= 1;
                    energy += delta;
                    if energy < best_energy {
                        best_energy = energy;
                        best.copy_from_slice(&bits);
                    }
                }
            }
            observe(moves, best_energy);
            moves += 1;
        }
    }

    let best_energy = model.energy_unchecked(&best);
    Ok(SolveResult {
        best,
        best_energy,
        steps_taken: moves,
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{all_assignments, QuboBuilder};

    #[test]
    fn compiled_energy_and_delta_agree_with_model() {
        let mut b = QuboBuilder::new(4);
        b.set_linear(0, 1.5).unwrap();
        b.set_linear(3, -2.0).unwrap();
        b.set_quadratic(0, 1, -3.0).unwrap();
        b.set_quadratic(1, 3, 4.0).unwrap();
        b.set_quadratic(0, 2, 0.5).unwrap();
        b.set_offset(-1.0).unwrap();
        let m = b.build();
        let c = CompiledQubo::new(&m);
        for a in all_assignments(4) {
            let e = m.energy(&a).unwrap();
            assert!((c.energy(&a) - e).abs() < 1e-12);
            for i in 0..4 {
                let mut f = a.clone();
                f[i] ^= 1;
                let want = m.energy(&f).unwrap() - e;
                assert!((c.flip_delta(&a, i) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_variable_model() {
        let mut b = QuboBuilder::new(1);
        b.set_linear(0, -1.0).unwrap();
        let r = anneal_discrete(&b.build(), &AnnealSchedule::default(), 7).unwrap();
        assert_eq!(r.best, vec![1]);
        assert_eq!(r.best_energy, -1.0);
        assert_eq!(r.steps_taken, 138_149);
    }

    #[test]
    fn zero_model() {
        let r = anneal_discrete(&QuboModel::zero(5), &AnnealSchedule::default(), 1).unwrap();
        assert_eq!(r.best_energy, 0.0);
    }

    #[test]
    fn empty_model() {
        let r = anneal_discrete(&QuboModel::zero(0), &AnnealSchedule::default(), 1).unwrap();
        assert!(r.best.is_empty());
        assert_eq!(r.best_energy, 0.0);
    }

    #[test]
    fn deterministic_per_seed() {
        let mut b = QuboBuilder::new(3);
        b.set_quadratic(0, 1, 2.0).unwrap();
        b.set_linear(2, -1.0).unwrap();
        let m = b.build();
        let s = AnnealSchedule::new(10.0, 0.99, 0.01).unwrap();
        assert_eq!(
            anneal_discrete(&m, &s, 3).unwrap(),
            anneal_discrete(&m, &s, 3).unwrap()
        );
    }
}
