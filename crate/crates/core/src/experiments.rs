//! Reproducible experiment runners behind the command-line tool.
//!
//! * [`run_continuous`]: anneal the closed-form l1 / ReLU objectives over a
//!   continuous box for random inputs `m` and compare the minimum with `|m|`.
//! * [`run_discrete_verification`]: build the QUBO gadget for grid inputs and
//!   minimize it exactly or by single-flip annealing.
//! * [`run_lasso_demo`]: one-coefficient regularized least squares solved as
//!   a QUBO, compared against the soft-threshold closed form.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{AffineExpr, FixedPointEncoding, VarAllocator};
use crate::error::{Error, Result};
use crate::gadgets::{
    abs_reference, build_l1_gadget, build_regularized_ls, build_relu_gadget, l1_naive_value,
    l1_reduced_value, relu_reference, relu_wolfe_value, soft_threshold, AuxConfig, GadgetExpansion,
    GadgetVariant, PenaltyConfig, RegularizedLsConfig,
};
use crate::solvers::{
    anneal_continuous, anneal_discrete, brute_force, AnnealSchedule, ProposalConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Continuous,
    Discrete,
    Brute,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Continuous => "continuous",
            Solver::Discrete => "discrete",
            Solver::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub variant: GadgetVariant,
    /// Random inputs for continuous runs, grid points for verification.
    pub n_samples: usize,
    pub m_range: (f64, f64),
    #[serde(rename = "M")]
    pub penalty: f64,
    pub seed: u64,
    pub solver: Solver,
    pub aux: AuxConfig,
    pub schedule: AnnealSchedule,
    /// Proposal step of the continuous annealer.
    pub step: f64,
    /// Initial `z1, z2` are drawn from `[0, z_init_hi]`.
    pub z_init_hi: f64,
    /// Independent annealing runs per grid point in discrete verification.
    pub restarts: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            variant: GadgetVariant::L1Naive,
            n_samples: 200,
            m_range: (-10.0, 10.0),
            penalty: 10.0,
            seed: 0,
            solver: Solver::Continuous,
            aux: AuxConfig::default(),
            schedule: AnnealSchedule::default(),
            step: 1e-3,
            z_init_hi: 10.0,
            restarts: 5,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.m_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Domain(format!("invalid m range [{lo}, {hi}]")));
        }
        PenaltyConfig::new(self.penalty)?;
        self.schedule.validate()?;
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Domain(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if !(self.z_init_hi.is_finite() && self.z_init_hi >= 0.0) {
            return Err(Error::Domain(format!(
                "bad initial z bound {}",
                self.z_init_hi
            )));
        }
        if self.restarts == 0 {
            return Err(Error::Domain("need at least one restart".into()));
        }
        Ok(())
    }
}

/// splitmix64 of `master + index * golden`; gives well-spread per-sample seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn reference_for(variant: GadgetVariant, m: f64) -> Result<f64> {
    match variant {
        GadgetVariant::L1Naive | GadgetVariant::L1Reduced => Ok(abs_reference(m)),
        GadgetVariant::ReluWolfe => Ok(relu_reference(m)),
        GadgetVariant::Qloss => Err(Error::Domain(
            "q-loss has no continuous or grid experiment".into(),
        )),
    }
}

/// One solved input of a continuous run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub m: f64,
    /// Best objective value found.
    pub f_value: f64,
    pub t: Option<f64>,
    pub z1: f64,
    pub z2: f64,
    /// `f_value` minus the target function at `m`.
    pub gap: f64,
    pub seed: u64,
}

impl SampleRecord {
    /// Whether both slacks are within `tol` of their exact values
    /// `z1 = max(-m, 0)`, `z2 = max(m, 0)`.
    pub fn aux_within(&self, tol: f64) -> bool {
        (self.z1 - (-self.m).max(0.0)).abs() <= tol && (self.z2 - self.m.max(0.0)).abs() <= tol
    }
}

fn solve_sample(cfg: &ExperimentConfig, index: usize) -> Result<SampleRecord> {
    let seed = derive_seed(cfg.seed, index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = cfg.m_range;
    let m = if lo < hi {
        rng.random_range(lo..hi)
    } else {
        lo
    };
    let z_init = |rng: &mut ChaCha8Rng| {
        if cfg.z_init_hi > 0.0 {
            rng.random_range(0.0..cfg.z_init_hi)
        } else {
            0.0
        }
    };
    let pen = cfg.penalty;
    let z_dom = (0.0, f64::INFINITY);
    let anneal_seed = derive_seed(seed, 0);

    let (best, f_value, t) = match cfg.variant {
        GadgetVariant::L1Reduced => {
            let init = [z_init(&mut rng), z_init(&mut rng)];
            let prop = ProposalConfig::new(cfg.step, vec![z_dom, z_dom])?;
            let r = anneal_continuous(
                |x| l1_reduced_value(m, x[0], x[1], pen),
                &init,
                &prop,
                &cfg.schedule,
                anneal_seed,
            )?;
            ((r.best[0], r.best[1]), r.best_energy, None)
        }
        GadgetVariant::L1Naive | GadgetVariant::ReluWolfe => {
            let relu = cfg.variant == GadgetVariant::ReluWolfe;
            let t_dom = if relu { (-1.0, 0.0) } else { (-1.0, 1.0) };
            let init = [
                rng.random_range(t_dom.0..t_dom.1),
                z_init(&mut rng),
                z_init(&mut rng),
            ];
            let prop = ProposalConfig::new(cfg.step, vec![t_dom, z_dom, z_dom])?;
            let f = |x: &[f64]| {
                if relu {
                    relu_wolfe_value(m, x[0], x[1], x[2], pen)
                } else {
                    l1_naive_value(m, x[0], x[1], x[2], pen)
                }
            };
            let r = anneal_continuous(f, &init, &prop, &cfg.schedule, anneal_seed)?;
            ((r.best[1], r.best[2]), r.best_energy, Some(r.best[0]))
        }
        GadgetVariant::Qloss => return Err(Error::Domain("q-loss is not annealed here".into())),
    };

    Ok(SampleRecord {
        m,
        f_value,
        t,
        z1: best.0,
        z2: best.1,
        gap: f_value - reference_for(cfg.variant, m)?,
        seed,
    })
}

/// Continuous annealing of the closed-form objective for `n_samples` random
/// inputs. Samples run in parallel but each depends only on its own seed, so
/// the output (sorted by `m`) is reproducible.
pub fn run_continuous(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    cfg.validate()?;
    let mut out = (0..cfg.n_samples)
        .into_par_iter()
        .map(|i| solve_sample(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.m.total_cmp(&b.m));
    Ok(out)
}

/// The naive l1 experiment.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    run_continuous(&ExperimentConfig {
        variant: GadgetVariant::L1Naive,
        ..cfg.clone()
    })
}

/// The reduced l1 experiment.
pub fn run_reduced(cfg: &ExperimentConfig) -> Result<Vec<SampleRecord>> {
    run_continuous(&ExperimentConfig {
        variant: GadgetVariant::L1Reduced,
        ..cfg.clone()
    })
}

/// `%.{sig}g`-style formatting: `sig` significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if exp < -4 || exp >= sig as i32 {
        let s = format!("{:.*e}", sig.saturating_sub(1), x);
        let (mant, e) = s.split_once('e').expect("exponent");
        let mant = trim_zeros(mant);
        let e: i32 = e.parse().expect("exponent digits");
        format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header `m,f,t,z1,z2,gap,seed`; the `t` column is omitted for the reduced
/// gadget, which has no `t`.
pub fn write_records_csv(
    records: &[SampleRecord],
    variant: GadgetVariant,
    mut w: impl Write,
) -> Result<()> {
    let with_t = variant != GadgetVariant::L1Reduced;
    let header = if with_t {
        "m,f,t,z1,z2,gap,seed"
    } else {
        "m,f,z1,z2,gap,seed"
    };
    writeln!(w, "{header}")?;
    let g = |v: f64| format_sig(v, 12);
    for r in records {
        let mut cols = vec![g(r.m), g(r.f_value)];
        if with_t {
            cols.push(r.t.map(g).unwrap_or_default());
        }
        cols.extend([g(r.z1), g(r.z2), g(r.gap), r.seed.to_string()]);
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub variant: GadgetVariant,
    pub n_samples: usize,
    pub max_abs_dev: f64,
    pub mean_abs_dev: f64,
    pub frac_within_0_1: f64,
    /// Fraction whose slacks `z1, z2` are both within 0.1 of exact.
    pub frac_aux_within_0_1: f64,
    pub seed: u64,
    pub config: ExperimentConfig,
}

pub fn summarize(records: &[SampleRecord], cfg: &ExperimentConfig) -> RunSummary {
    let n = records.len().max(1) as f64;
    let dev = |r: &SampleRecord| r.gap.abs();
    RunSummary {
        variant: cfg.variant,
        n_samples: records.len(),
        max_abs_dev: records.iter().map(dev).fold(0.0, f64::max),
        mean_abs_dev: records.iter().map(dev).sum::<f64>() / n,
        frac_within_0_1: records.iter().filter(|r| dev(r) <= 0.1).count() as f64 / n,
        frac_aux_within_0_1: records.iter().filter(|r| r.aux_within(0.1)).count() as f64 / n,
        seed: cfg.seed,
        config: cfg.clone(),
    }
}

/// Gadget for a fixed (constant) input.
pub fn build_fixed_input_gadget(
    m: f64,
    variant: GadgetVariant,
    aux: &AuxConfig,
    pc: PenaltyConfig,
) -> Result<GadgetExpansion> {
    let input = AffineExpr::constant(m);
    let mut alloc = VarAllocator::new();
    match variant {
        GadgetVariant::L1Naive | GadgetVariant::L1Reduced => {
            build_l1_gadget(&input, aux, pc, variant, &mut alloc)
        }
        GadgetVariant::ReluWolfe => build_relu_gadget(&input, aux, pc, &mut alloc),
        GadgetVariant::Qloss => Err(Error::Domain(
            "q-loss needs its own threshold encoding".into(),
        )),
    }
}

/// `n` evenly spaced points of `[lo, hi]`, each snapped to the `z` grid so the
/// exact constraint `z2 - z1 = m` is representable. Points beyond `z_hi` are
/// left alone so that building their gadget reports them.
pub fn grid_inputs(lo: f64, hi: f64, n: usize, aux: &AuxConfig) -> Result<Vec<f64>> {
    let z = FixedPointEncoding::from_ids(
        0.0,
        aux.z_hi,
        (0..aux.z_bits).map(crate::model::VarId).collect(),
    )?;
    let snap = |v: f64| {
        if v.abs() > aux.z_hi {
            return v;
        }
        let k = z.nearest_index(v.abs());
        z.grid_value(k).copysign(v)
    };
    Ok((0..n)
        .map(|k| {
            let v = if n == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            };
            let s = snap(v);
            if s == 0.0 {
                0.0
            } else {
                s
            }
        })
        .collect())
}

/// One minimization of a fixed-input gadget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub m: f64,
    pub seed: Option<u64>,
    /// Gadget energy at the assignment found.
    pub energy: f64,
    pub reference: f64,
    pub abs_dev: f64,
    pub z1: f64,
    pub z2: f64,
    pub t: Option<f64>,
    pub residual: f64,
}

impl VerificationRow {
    /// Whether the decoded point breaks `z2 - z1 = m`.
    pub fn violates_penalty(&self) -> bool {
        self.residual.abs() > 1e-9 * self.m.abs().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub variant: GadgetVariant,
    pub solver: Solver,
    #[serde(rename = "M")]
    pub penalty: f64,
    pub aux_bits: usize,
    pub tolerance: f64,
    pub max_abs_dev: f64,
    pub frac_within_tol: f64,
    pub penalty_violations: usize,
    pub passed: bool,
    pub rows: Vec<VerificationRow>,
}

/// Minimize the QUBO gadget at `n_samples` grid inputs. Brute force must be
/// within `tolerance` everywhere with no penalty-violating optimum; annealing
/// must be within `tolerance` on at least 90% of (input, restart) pairs.
pub fn run_discrete_verification(
    cfg: &ExperimentConfig,
    tolerance: f64,
) -> Result<VerificationReport> {
    cfg.validate()?;
    if cfg.n_samples == 0 {
        return Err(Error::Domain("need at least one grid input".into()));
    }
    if cfg.solver == Solver::Continuous {
        return Err(Error::Domain("verification needs a discrete solver".into()));
    }
    let pc = PenaltyConfig::new(cfg.penalty)?;
    let ms = grid_inputs(cfg.m_range.0, cfg.m_range.1, cfg.n_samples, &cfg.aux)?;
    let gadgets = ms
        .iter()
        .map(|&m| build_fixed_input_gadget(m, cfg.variant, &cfg.aux, pc))
        .collect::<Result<Vec<_>>>()?;
    let aux_bits = gadgets.first().map_or(0, |g| g.aux_bits());

    let jobs: Vec<(usize, Option<u64>)> = match cfg.solver {
        Solver::Brute => (0..ms.len()).map(|i| (i, None)).collect(),
        _ => (0..ms.len())
            .flat_map(|i| {
                (0..cfg.restarts).map(move |r| {
                    (
                        i,
                        Some(derive_seed(cfg.seed, (i * cfg.restarts + r) as u64)),
                    )
                })
            })
            .collect(),
    };
    let rows = jobs
        .into_par_iter()
        .map(|(i, seed)| {
            let g = &gadgets[i];
            let r = match seed {
                None => brute_force(g.model())?,
                Some(s) => anneal_discrete(g.model(), &cfg.schedule, s)?,
            };
            let aux = g.decode_aux(&r.best)?;
            let reference = g.reference(ms[i]);
            Ok(VerificationRow {
                m: ms[i],
                seed,
                energy: r.best_energy,
                reference,
                abs_dev: (r.best_energy - reference).abs(),
                z1: aux["z1"],
                z2: aux["z2"],
                t: aux.get("t").copied(),
                residual: g.residual(&r.best)?.unwrap_or(0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let max_abs_dev = rows.iter().map(|r| r.abs_dev).fold(0.0, f64::max);
    let within = rows.iter().filter(|r| r.abs_dev <= tolerance).count();
    let frac_within_tol = within as f64 / rows.len().max(1) as f64;
    let penalty_violations = rows.iter().filter(|r| r.violates_penalty()).count();
    let passed = match cfg.solver {
        Solver::Brute => max_abs_dev <= tolerance && penalty_violations == 0,
        _ => frac_within_tol >= 0.9,
    };
    Ok(VerificationReport {
        variant: cfg.variant,
        solver: cfg.solver,
        penalty: cfg.penalty,
        aux_bits,
        tolerance,
        max_abs_dev,
        frac_within_tol,
        penalty_violations,
        passed,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LassoConfig {
    pub problem: RegularizedLsConfig,
    pub solver: Solver,
    pub schedule: AnnealSchedule,
    pub seed: u64,
}

impl Default for LassoConfig {
    /// `m` on `[-6.35, 6.35]` at resolution 0.1, `z` on `[0, 6.35]` at 0.05.
    fn default() -> Self {
        LassoConfig {
            problem: RegularizedLsConfig {
                m_hi: 6.35,
                m_bits: 7,
                aux: AuxConfig {
                    z_hi: 6.35,
                    z_bits: 7,
                    t_bits: 2,
                },
                penalty: None,
                variant: GadgetVariant::L1Reduced,
            },
            solver: Solver::Brute,
            schedule: AnnealSchedule::default(),
            seed: 0,
        }
    }
}

/// A spread of `(a, λ)` pairs covering both sides of the threshold and `λ = 0`.
pub fn default_lasso_pairs() -> Vec<(f64, f64)> {
    vec![
        (5.0, 0.0),
        (5.0, 4.0),
        (1.0, 4.0),
        (-5.0, 4.0),
        (-1.0, 4.0),
        (3.3, 1.2),
        (-2.7, 2.2),
        (0.4, 0.5),
        (-0.4, 1.0),
        (6.0, 3.0),
        (-6.0, 0.6),
        (2.0, 4.0),
        (-2.0, 3.9),
        (4.45, 0.3),
        (-3.15, 5.1),
        (0.9, 1.6),
        (-4.8, 2.4),
        (1.5, 0.0),
        (-0.2, 0.0),
        (2.25, 1.5),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LassoRow {
    pub a: f64,
    pub lambda: f64,
    pub m_found: f64,
    pub m_exact: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LassoReport {
    /// Grid spacing of the coefficient encoding.
    pub resolution: f64,
    pub max_abs_err: f64,
    /// Whether every error is within two grid steps.
    pub passed: bool,
    pub rows: Vec<LassoRow>,
}

/// Solve `(m - a)^2 + λ|m|` as a QUBO for each pair and compare with the
/// soft-threshold minimizer.
pub fn run_lasso_demo(pairs: &[(f64, f64)], cfg: &LassoConfig) -> Result<LassoReport> {
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(a, lambda))| {
            let ls = build_regularized_ls(&[(a, lambda)], &cfg.problem)?;
            let best = match cfg.solver {
                Solver::Brute => brute_force(&ls.model)?.best,
                Solver::Discrete => {
                    anneal_discrete(&ls.model, &cfg.schedule, derive_seed(cfg.seed, i as u64))?.best
                }
                Solver::Continuous => {
                    return Err(Error::Domain(
                        "the LASSO demo needs a discrete solver".into(),
                    ))
                }
            };
            let m_found = ls.decode(&best)?[0];
            let m_exact = soft_threshold(a, lambda / 2.0);
            Ok(LassoRow {
                a,
                lambda,
                m_found,
                m_exact,
                abs_err: (m_found - m_exact).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let resolution = 2.0 * cfg.problem.m_hi / ((1u64 << cfg.problem.m_bits) - 1) as f64;
    let max_abs_err = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    Ok(LassoReport {
        resolution,
        max_abs_err,
        passed: max_abs_err <= 2.0 * resolution + 1e-9,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(1.5, 12), "1.5");
        assert_eq!(format_sig(-10.0, 12), "-10");
        assert_eq!(format_sig(0.1 + 0.2, 12), "0.3");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(1e-7, 12), "1e-07");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_sig(0.0001234, 3), "0.000123");
    }

    #[test]
    fn seeds_are_distinct() {
        let s: std::collections::BTreeSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(derive_seed(0, 0), derive_seed(1, 0));
    }

    #[test]
    fn grid_inputs_are_representable() {
        let aux = AuxConfig::default();
        let ms = grid_inputs(-10.0, 10.0, 21, &aux).unwrap();
        assert_eq!(ms.len(), 21);
        assert_eq!(ms[10], 0.0);
        for (k, m) in ms.iter().enumerate() {
            // the default z grid has spacing 0.01 exactly representable steps
            let want = -10.0 + k as f64;
            assert!((m - want).abs() < 1e-9, "{m} vs {want}");
        }
    }

    #[test]
    fn csv_layout() {
        let r = SampleRecord {
            m: 1.0,
            f_value: 1.25,
            t: None,
            z1: 0.0,
            z2: 1.0,
            gap: 0.25,
            seed: 3,
        };
        let mut buf = Vec::new();
        write_records_csv(std::slice::from_ref(&r), GadgetVariant::L1Reduced, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "m,f,z1,z2,gap,seed\n1,1.25,0,1,0.25,3\n"
        );
        let mut buf = Vec::new();
        let r = SampleRecord { t: Some(-0.5), ..r };
        write_records_csv(&[r], GadgetVariant::L1Naive, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "m,f,t,z1,z2,gap,seed\n1,1.25,-0.5,0,1,0.25,3\n"
        );
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::default().validate().is_ok());
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.m_range = (1.0, -1.0)));
        assert!(bad(|c| c.penalty = 0.0));
        assert!(bad(|c| c.step = -1.0));
        assert!(bad(|c| c.restarts = 0));
    }

    #[test]
    fn small_continuous_run_is_deterministic() {
        let cfg = ExperimentConfig {
            n_samples: 4,
            schedule: AnnealSchedule::new(10.0, 0.99, 0.01).unwrap(),
            step: 0.05,
            ..Default::default()
        };
        let a = run_reduced(&cfg).unwrap();
        let b = run_reduced(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].m <= w[1].m));
        for r in &a {
            assert!(r.t.is_none());
            assert!(r.z1 >= 0.0 && r.z2 >= 0.0);
            let want = l1_reduced_value(r.m, r.z1, r.z2, cfg.penalty);
            assert!((r.f_value - want).abs() < 1e-9);
        }
        let naive = run_fig2(&cfg).unwrap();
        assert!(naive
            .iter()
            .all(|r| r.t.is_some_and(|t| (-1.0..=1.0).contains(&t))));
    }

    #[test]
    fn zero_samples_give_header_only() {
        let cfg = ExperimentConfig {
            n_samples: 0,
            ..Default::default()
        };
        let recs = run_fig2(&cfg).unwrap();
        assert!(recs.is_empty());
        let mut buf = Vec::new();
        write_records_csv(&recs, GadgetVariant::L1Naive, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "m,f,t,z1,z2,gap,seed\n");
        let s = summarize(&recs, &cfg);
        assert_eq!(s.n_samples, 0);
        assert_eq!(s.max_abs_dev, 0.0);
    }

    #[test]
    fn qloss_is_not_a_continuous_experiment() {
        let cfg = ExperimentConfig {
            variant: GadgetVariant::Qloss,
            n_samples: 1,
            ..Default::default()
        };
        assert!(run_continuous(&cfg).is_err());
    }
}
