use super::SolveResult;
use crate::error::{Error, Result};
use crate::model::QuboModel;

pub const DEFAULT_BRUTE_CAP: usize = 24;

/// Recompute energy and local fields from scratch this often to bound
/// accumulated rounding in the incremental updates.
const RESYNC_EVERY: u64 = 1 << 12;

/// Global minimum over all `2^n` assignments; ties go to the
/// lexicographically smallest bitstring `(b_0, b_1, ...)`.
pub fn brute_force(model: &QuboModel) -> Result<SolveResult<Vec<u8>>> {
    brute_force_with_cap(model, DEFAULT_BRUTE_CAP)
}

pub fn brute_force_with_cap(model: &QuboModel, cap: usize) -> Result<SolveResult<Vec<u8>>> {
    let n = model.num_vars();
    if n > cap || n >= 63 {
        return Err(Error::TooLarge { num_vars: n, cap });
    }

    let mut coupling = vec![0.0; n * n];
    for (&(i, j), &v) in model.quadratic() {
        coupling[i * n + j] = v;
        coupling[j * n + i] = v;
    }
    let mut linear = vec![0.0; n];
    for (&i, &v) in model.linear() {
        linear[i] = v;
    }
    let scale = model.offset().abs()
        + linear.iter().map(|v| v.abs()).sum::<f64>()
        + model.quadratic().values().map(|v| v.abs()).sum::<f64>();
    let tie_tol = 1e-11 * scale.max(1.0);

    // field[k] = linear[k] + Σ_j Q_kj x_j, so flipping k changes E by ±field[k].
    let resync = |x: u64, field: &mut [f64]| -> f64 {
        let mut e = model.offset();
        for k in 0..n {
            let mut f = linear[k];
            for j in 0..n {
                if (x >> j) & 1 == 1 {
                    f += coupling[k * n + j];
                }
            }
            field[k] = f;
            if (x >> k) & 1 == 1 {
                // each pair is seen twice across k, halve its share
                e += linear[k] + (f - linear[k]) / 2.0;
            }
        }
        e
    };

    let mut field = vec![0.0; n];
    let mut x = 0u64;
    let mut energy = resync(x, &mut field);
    let mut best_x = x;
    let mut best_e = energy;

    let total = 1u64 << n;
    for step in 1..total {
        let k = step.trailing_zeros() as usize;
        let up = (x >> k) & 1 == 0;
        let sign = if up { 1.0 } else { -1.0 };
        energy += sign * field[k];
        x ^= 1 << k;
        let row = &coupling[k * n..(k + 1) * n];
        for (f, &c) in field.iter_mut().zip(row) {
            *f += sign * c;
        }
        if step % RESYNC_EVERY == 0 {
            energy = resync(x, &mut field);
        }

        if energy < best_e - tie_tol || (energy <= best_e + tie_tol && lex_less(x, best_x)) {
            best_x = x;
            best_e = energy;
        }
    }

    let best: Vec<u8> = (0..n).map(|k| ((best_x >> k) & 1) as u8).collect();
    let best_energy = model.energy_unchecked(&best);
    Ok(SolveResult {
        best,
        best_energy,
        steps_taken: total as usize,
        seed: None,
    })
}

/// Lexicographic order on `(b_0, b_1, ...)` where `b_k` is bit `k`.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && (a >> diff.trailing_zeros()) & 1 == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{all_assignments, QuboBuilder};

    #[test]
    fn single_variable() {
        let mut b = QuboBuilder::new(1);
        b.set_linear(0, -1.0).unwrap();
        let r = brute_force(&b.build()).unwrap();
        assert_eq!(r.best, vec![1]);
        assert_eq!(r.best_energy, -1.0);
    }

    #[test]
    fn zero_model_tie_breaks_to_all_zero() {
        let r = brute_force(&QuboModel::zero(3)).unwrap();
        assert_eq!(r.best, vec![0, 0, 0]);
        assert_eq!(r.best_energy, 0.0);
    }

    #[test]
    fn ties_pick_lexicographically_smallest() {
        // minima at (1,0) and (0,1); lexicographic order prefers (0,1)
        let mut b = QuboBuilder::new(2);
        b.set_linear(0, -1.0).unwrap();
        b.set_linear(1, -1.0).unwrap();
        b.set_quadratic(0, 1, 5.0).unwrap();
        let r = brute_force(&b.build()).unwrap();
        assert_eq!(r.best, vec![0, 1]);
    }

    #[test]
    fn lex_order() {
        assert!(lex_less(0b10, 0b01)); // (0,1) < (1,0)
        assert!(!lex_less(0b01, 0b10));
        assert!(!lex_less(0b11, 0b11));
        assert!(lex_less(0b000, 0b100));
    }

    #[test]
    fn rejects_oversized_models() {
        assert!(matches!(
            brute_force(&QuboModel::zero(25)),
            Err(Error::TooLarge {
                num_vars: 25,
                cap: 24
            })
        ));
        assert!(brute_force_with_cap(&QuboModel::zero(4), 3).is_err());
    }

    #[test]
    fn matches_naive_enumeration() {
        let mut b = QuboBuilder::new(6);
        let coeffs = [3.0, -2.5, 1.25, -4.0, 0.5, 2.0];
        for (i, c) in coeffs.iter().enumerate() {
            b.set_linear(i, *c).unwrap();
            for j in (i + 1)..6 {
                b.set_quadratic(i, j, c * (j as f64) - 3.0).unwrap();
            }
        }
        b.set_offset(7.0).unwrap();
        let m = b.build();
        let naive = all_assignments(6)
            .map(|a| m.energy(&a).unwrap())
            .fold(f64::INFINITY, f64::min);
        let r = brute_force(&m).unwrap();
        assert!((r.best_energy - naive).abs() < 1e-12);
        assert_eq!(r.best_energy, m.energy(&r.best).unwrap());
    }
}
