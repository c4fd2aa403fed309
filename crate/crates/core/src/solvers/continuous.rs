use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{accept, AnnealSchedule, SolveResult};
use crate::error::{Error, Result};

/// Move proposals for the continuous annealer: every variable steps by
/// `+step` or `-step` with equal probability, and a proposal that leaves the
/// box is rejected as a whole.
#[derive(Debug, Clone, PartialEq)]
pub struct ProposalConfig {
    step: f64,
    domains: Vec<(f64, f64)>,
}

impl ProposalConfig {
    /// `domains[i] = (lo, hi)`; `hi` may be `f64::INFINITY`.
    pub fn new(step: f64, domains: Vec<(f64, f64)>) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Domain(format!("step must be positive, got {step}")));
        }
        for &(lo, hi) in &domains {
            if !(lo.is_finite() && lo <= hi) || hi.is_nan() {
                return Err(Error::Domain(format!("invalid domain [{lo}, {hi}]")));
            }
        }
        Ok(ProposalConfig { step, domains })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn domains(&self) -> &[(f64, f64)] {
        &self.domains
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.domains.len()
            && x.iter()
                .zip(&self.domains)
                .all(|(&v, &(lo, hi))| v >= lo && v <= hi)
    }
}

/// Metropolis annealing of `objective` over the box in `prop`, starting at `init`.
///
/// One proposal is one joint move of every variable, accepted or rejected as
/// a whole. Returns the best point seen.
pub fn anneal_continuous<F>(
    objective: F,
    init: &[f64],
    prop: &ProposalConfig,
    sched: &AnnealSchedule,
    seed: u64,
) -> Result<SolveResult<Vec<f64>>>
where
    F: Fn(&[f64]) -> f64,
{
    anneal_continuous_observed(objective, init, prop, sched, seed, |_, _| {})
}

/// As [`anneal_continuous`], calling `observe(move_index, best_energy_so_far)` after every move.
pub fn anneal_continuous_observed<F>(
    objective: F,
    init: &[f64],
    prop: &ProposalConfig,
    sched: &AnnealSchedule,
    seed: u64,
    mut observe: impl FnMut(usize, f64),
) -> Result<SolveResult<Vec<f64>>>
where
    F: Fn(&[f64]) -> f64,
{
    sched.validate()?;
    if init.len() != prop.domains.len() {
        return Err(Error::Dimension {
            expected: prop.domains.len(),
            got: init.len(),
        });
    }
    if !prop.contains(init) {
        return Err(Error::Domain(format!(
            "initial point {init:?} outside the domain"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = init.to_vec();
    let mut energy = objective(&current);
    let mut best = current.clone();
    let mut best_energy = energy;
    let mut candidate = current.clone();
    let mut moves = 0usize;

    for temperature in sched.temperatures() {
        for _ in 0..sched.moves_per_temperature {
            let mut inside = true;
            for ((c, &x), &(lo, hi)) in candidate.iter_mut().zip(&current).zip(&prop.domains) {
                *c = if rng.random::<bool>() {
                    x + prop.step
                } else {
                    x - prop.step
                };
                inside &= *c >= lo && *c <= hi;
            }
            // Draw u unconditionally so the random stream does not depend on the domain.
            let u: f64 = rng.random();
            if inside {
                let e = objective(&candidate);
                if accept(e - energy, temperature, u) {
                    std::mem::swap(&mut current, &mut candidate);
                    energy = e;
                    if energy < best_energy {
                        best_energy = energy;
                        best.copy_from_slice(&current);
                    }
                }
            }
            observe(moves, best_energy);
            moves += 1;
        }
    }

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

    #[test]
    fn convex_one_dimensional() {
        let prop = ProposalConfig::new(1e-3, vec![(-10.0, 10.0)]).unwrap();
        let r = anneal_continuous(
            |x| (x[0] - 1.0).powi(2),
            &[0.8],
            &prop,
            &AnnealSchedule::default(),
            11,
        )
        .unwrap();
        assert!((r.best[0] - 1.0).abs() < 0.05, "{:?}", r.best);
        assert_eq!(r.best_energy, (r.best[0] - 1.0).powi(2));
    }

    #[test]
    fn constant_objective() {
        let prop = ProposalConfig::new(0.1, vec![(0.0, 1.0), (0.0, f64::INFINITY)]).unwrap();
        let s = AnnealSchedule::new(1.0, 0.9, 0.01).unwrap();
        let r = anneal_continuous(|_| 2.5, &[0.5, 3.0], &prop, &s, 0).unwrap();
        assert_eq!(r.best_energy, 2.5);
    }

    #[test]
    fn stays_inside_domain() {
        let prop = ProposalConfig::new(0.05, vec![(0.0, 0.2)]).unwrap();
        let s = AnnealSchedule::new(10.0, 0.999, 0.01).unwrap();
        let seen_outside = std::cell::Cell::new(false);
        let r = anneal_continuous(
            |x| {
                if !(0.0..=0.2).contains(&x[0]) {
                    seen_outside.set(true);
                }
                -x[0]
            },
            &[0.1],
            &prop,
            &s,
            5,
        )
        .unwrap();
        assert!(!seen_outside.get());
        assert!(prop.contains(&r.best));
    }

    #[test]
    fn rejects_bad_init() {
        let prop = ProposalConfig::new(0.1, vec![(0.0, 1.0)]).unwrap();
        let s = AnnealSchedule::default();
        assert!(matches!(
            anneal_continuous(|_| 0.0, &[2.0], &prop, &s, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            anneal_continuous(|_| 0.0, &[0.5, 0.5], &prop, &s, 0),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn rejects_bad_proposal_config() {
        assert!(ProposalConfig::new(0.0, vec![]).is_err());
        assert!(ProposalConfig::new(0.1, vec![(1.0, 0.0)]).is_err());
        assert!(ProposalConfig::new(0.1, vec![(f64::NEG_INFINITY, 0.0)]).is_err());
    }
}
