//! Energy minimizers: exhaustive enumeration, single-flip simulated
//! annealing on bitstrings, and a Metropolis annealer over continuous boxes.

mod brute;
mod continuous;
mod discrete;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use brute::{brute_force, brute_force_with_cap, DEFAULT_BRUTE_CAP};
pub use continuous::{anneal_continuous, anneal_continuous_observed, ProposalConfig};
pub use discrete::{anneal_discrete, anneal_discrete_observed, CompiledQubo};

/// Geometric cooling `T_{n+1} = ratio * T_n`, from `t_initial` until the
/// temperature drops below `t_stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub t_initial: f64,
    pub ratio: f64,
    pub t_stop: f64,
    /// Proposals evaluated at each temperature before cooling.
    pub moves_per_temperature: usize,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            t_initial: 1000.0,
            ratio: 0.9999,
            t_stop: 1e-3,
            moves_per_temperature: 1,
        }
    }
}

impl AnnealSchedule {
    pub fn new(t_initial: f64, ratio: f64, t_stop: f64) -> Result<Self> {
        let s = AnnealSchedule {
            t_initial,
            ratio,
            t_stop,
            moves_per_temperature: 1,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_moves_per_temperature(mut self, moves: usize) -> Result<Self> {
        self.moves_per_temperature = moves;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_initial.is_finite() && self.t_stop > 0.0 && self.t_initial > self.t_stop) {
            return Err(Error::Domain(format!(
                "schedule needs t_initial > t_stop > 0, got {} and {}",
                self.t_initial, self.t_stop
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Domain(format!(
                "cooling ratio must lie in (0, 1), got {}",
                self.ratio
            )));
        }
        if self.moves_per_temperature == 0 {
            return Err(Error::Domain("at least one move per temperature".into()));
        }
        Ok(())
    }

    /// Number of temperature levels, `ceil(ln(t_stop / t_initial) / ln(ratio))`.
    pub fn steps(&self) -> usize {
        ((self.t_stop / self.t_initial).ln() / self.ratio.ln()).ceil() as usize
    }

    /// Total proposals over the whole run.
    pub fn total_moves(&self) -> usize {
        self.steps() * self.moves_per_temperature
    }

    /// Temperatures visited, hottest first.
    pub fn temperatures(&self) -> impl Iterator<Item = f64> + '_ {
        let mut t = self.t_initial;
        (0..self.steps()).map(move |_| {
            let cur = t;
            t *= self.ratio;
            cur
        })
    }
}

/// Metropolis rule: always accept downhill, uphill with probability `exp(-ΔE/T)`.
pub fn metropolis_accept(delta_e: f64, temperature: f64, u: f64) -> Result<bool> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(accept(delta_e, temperature, u))
}

#[inline]
pub(crate) fn accept(delta_e: f64, temperature: f64, u: f64) -> bool {
    delta_e <= 0.0 || u < (-delta_e / temperature).exp()
}

/// Best state found by a solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult<P> {
    pub best: P,
    pub best_energy: f64,
    pub steps_taken: usize,
    /// RNG seed; `None` for deterministic exhaustive search.
    pub seed: Option<u64>,
}
