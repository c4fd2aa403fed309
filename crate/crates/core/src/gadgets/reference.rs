//! Ground-truth evaluators for the non-smooth functions and the continuous
//! objectives whose minima over auxiliary variables reproduce them.

use super::{PenaltyConfig, QLossParams};
use crate::error::{Error, Result};

/// `-min(-m, m)`, i.e. `|m|`.
pub fn abs_reference(m: f64) -> f64 {
    // `+ 0.0` turns the `-0.0` produced at m = 0 into `0.0`
    -(-m).min(m) + 0.0
}

/// `-min(0, m)`, i.e. `max(0, -m)`.
pub fn relu_reference(m: f64) -> f64 {
    -(0.0f64.min(m)) + 0.0
}

/// `min[(1-q)^2, max(0, 1-m)^2]`.
pub fn qloss_reference(m: f64, p: QLossParams) -> f64 {
    let cap = (1.0 - p.q()).powi(2);
    let hinge = (1.0 - m).max(0.0).powi(2);
    cap.min(hinge)
}

/// Sign with `sign(0) = +1`.
pub fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `(m - t)^2 + (1-q)^2 (1 - sign(t - 1)) / 2`; minimizing over `t` gives the q-loss.
pub fn qloss_objective(m: f64, t: f64, p: QLossParams) -> f64 {
    (m - t).powi(2) + (1.0 - p.q()).powi(2) * (1.0 - sign(t - 1.0)) / 2.0
}

fn check_range(name: &str, v: f64, lo: f64, hi: f64) -> Result<()> {
    if v >= lo && v <= hi {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} outside [{lo}, {hi}]")))
    }
}

/// Equality residual `-m - z1 + z2` shared by the l1 and ReLU-type constructions.
pub fn residual(m: f64, z1: f64, z2: f64) -> f64 {
    -m - z1 + z2
}

/// `m t + z1 (t + 1) - z2 (t - 1) + M (-m - z1 + z2)^2` without domain checks.
#[inline]
pub fn l1_naive_value(m: f64, t: f64, z1: f64, z2: f64, penalty: f64) -> f64 {
    let r = residual(m, z1, z2);
    m * t + z1 * (t + 1.0) - z2 * (t - 1.0) + penalty * r * r
}

/// `z1 + z2 + M (-m - z1 + z2)^2` without domain checks.
#[inline]
pub fn l1_reduced_value(m: f64, z1: f64, z2: f64, penalty: f64) -> f64 {
    let r = residual(m, z1, z2);
    z1 + z2 + penalty * r * r
}

/// `m t + z1 (t + 1) - z2 t + M (-m - z1 + z2)^2` without domain checks.
#[inline]
pub fn relu_wolfe_value(m: f64, t: f64, z1: f64, z2: f64, penalty: f64) -> f64 {
    let r = residual(m, z1, z2);
    m * t + z1 * (t + 1.0) - z2 * t + penalty * r * r
}

/// Three-auxiliary l1 objective; requires `-1 <= t <= 1` and `z1, z2 >= 0`.
pub fn l1_naive_objective(m: f64, t: f64, z1: f64, z2: f64, pc: PenaltyConfig) -> Result<f64> {
    check_range("t", t, -1.0, 1.0)?;
    check_range("z1", z1, 0.0, f64::INFINITY)?;
    check_range("z2", z2, 0.0, f64::INFINITY)?;
    Ok(l1_naive_value(m, t, z1, z2, pc.weight()))
}

/// Two-auxiliary l1 objective with the Legendre variable eliminated; requires `z1, z2 >= 0`.
pub fn l1_reduced_objective(m: f64, z1: f64, z2: f64, pc: PenaltyConfig) -> Result<f64> {
    check_range("z1", z1, 0.0, f64::INFINITY)?;
    check_range("z2", z2, 0.0, f64::INFINITY)?;
    Ok(l1_reduced_value(m, z1, z2, pc.weight()))
}

/// ReLU-type objective with a positive penalty; requires `-1 <= t <= 0` and `z1, z2 >= 0`.
pub fn relu_wolfe_objective(m: f64, t: f64, z1: f64, z2: f64, pc: PenaltyConfig) -> Result<f64> {
    check_range("t", t, -1.0, 0.0)?;
    check_range("z1", z1, 0.0, f64::INFINITY)?;
    check_range("z2", z2, 0.0, f64::INFINITY)?;
    Ok(relu_wolfe_value(m, t, z1, z2, pc.weight()))
}

/// Grid approximation of the convex conjugate `sup_x { t x - f(x) }`.
pub fn legendre_conjugate_numeric(xs: &[f64], f: impl Fn(f64) -> f64, t: f64) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Domain("conjugate needs a non-empty grid".into()));
    }
    Ok(xs
        .iter()
        .map(|&x| t * x - f(x))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `sign(a) max(|a| - kappa, 0)`, the minimizer of `(m - a)^2 + 2 kappa |m|`.
pub fn soft_threshold(a: f64, kappa: f64) -> f64 {
    a.signum() * (a.abs() - kappa).max(0.0)
}

/// `lo, lo + step, ...` up to and including `hi` (within half a step).
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 0.5).floor() as usize;
    (0..=n).map(|k| lo + step * k as f64).collect()
}
