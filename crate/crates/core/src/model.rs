//! Binary (QUBO) and spin (Ising) energy models.
//!
//! Both forms are stored as signed coefficients of a minimization-form
//! energy. For QUBO:
//!
//! ```text
//! E(q) = Σ_{i<j} Q_ij q_i q_j + Σ_i b_i q_i + c,      q ∈ {0,1}^n
//! ```
//!
//! and for Ising, keeping the usual ferromagnetic sign convention:
//!
//! ```text
//! H(σ) = -Σ_{i<j} J_ij σ_i σ_j - Σ_i h_i σ_i + c,      σ ∈ {-1,+1}^n
//! ```
//!
//! The constant `c` is tracked explicitly so that conversions preserve
//! energies state by state, not just the argmin.

use std::collections::BTreeMap;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

/// Index of one binary or spin variable. Models with `n` variables use ids `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VarId {
    fn from(i: usize) -> Self {
        VarId(i)
    }
}

fn ordered(i: usize, j: usize) -> Result<(usize, usize)> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Ok((i, j)),
        std::cmp::Ordering::Greater => Ok((j, i)),
        std::cmp::Ordering::Equal => Err(Error::SelfPair(i)),
    }
}

/// Shared sparse storage of pairwise, single-site and constant terms.
#[derive(Debug, Clone, Default, PartialEq)]
struct Terms {
    num_vars: usize,
    pairs: BTreeMap<(usize, usize), f64>,
    sites: BTreeMap<usize, f64>,
    offset: f64,
}

impl Terms {
    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.num_vars {
            Ok(())
        } else {
            Err(Error::VarOutOfRange {
                index: i,
                num_vars: self.num_vars,
            })
        }
    }

    fn set_site(&mut self, i: usize, v: f64) -> Result<()> {
        self.check_index(i)?;
        self.sites.insert(i, check_finite(v)?);
        Ok(())
    }

    fn add_site(&mut self, i: usize, v: f64) -> Result<()> {
        self.check_index(i)?;
        *self.sites.entry(i).or_insert(0.0) += check_finite(v)?;
        Ok(())
    }

    fn set_pair(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        let key = ordered(i, j)?;
        self.check_index(key.1)?;
        self.pairs.insert(key, check_finite(v)?);
        Ok(())
    }

    fn add_pair(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        let key = ordered(i, j)?;
        self.check_index(key.1)?;
        *self.pairs.entry(key).or_insert(0.0) += check_finite(v)?;
        Ok(())
    }

    fn prune(mut self) -> Self {
        self.pairs.retain(|_, v| *v != 0.0);
        self.sites.retain(|_, v| *v != 0.0);
        self
    }

    fn merged(&self, other: &Terms) -> Terms {
        let mut out = self.clone();
        out.num_vars = self.num_vars.max(other.num_vars);
        for (&k, &v) in &other.pairs {
            *out.pairs.entry(k).or_insert(0.0) += v;
        }
        for (&k, &v) in &other.sites {
            *out.sites.entry(k).or_insert(0.0) += v;
        }
        out.offset += other.offset;
        out.prune()
    }

    fn scaled(&self, c: f64) -> Terms {
        Terms {
            num_vars: self.num_vars,
            pairs: self.pairs.iter().map(|(&k, &v)| (k, c * v)).collect(),
            sites: self.sites.iter().map(|(&k, &v)| (k, c * v)).collect(),
            offset: c * self.offset,
        }
        .prune()
    }
}

/// A quadratic pseudo-boolean energy over `num_vars` binary variables.
///
/// Immutable; build one with [`QuboBuilder`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuboModel {
    terms: Terms,
}

impl QuboModel {
    /// The model with `num_vars` variables and every coefficient zero.
    pub fn zero(num_vars: usize) -> Self {
        QuboModel {
            terms: Terms {
                num_vars,
                ..Terms::default()
            },
        }
    }

    pub fn builder(num_vars: usize) -> QuboBuilder {
        QuboBuilder::new(num_vars)
    }

    pub fn num_vars(&self) -> usize {
        self.terms.num_vars
    }

    /// Pairwise coefficients keyed by `(i, j)` with `i < j`.
    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.terms.pairs
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.terms.sites
    }

    pub fn offset(&self) -> f64 {
        self.terms.offset
    }

    /// Energy of a binary assignment.
    pub fn energy(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.num_vars() {
            return Err(Error::Dimension {
                expected: self.num_vars(),
                got: bits.len(),
            });
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Domain(format!(
                "binary entry must be 0 or 1, got {b}"
            )));
        }
        Ok(self.energy_unchecked(bits))
    }

    /// Energy without validating length or entries; callers guarantee both.
    pub fn energy_unchecked(&self, bits: &[u8]) -> f64 {
        let mut e = 0.0;
        for (&(i, j), &v) in &self.terms.pairs {
            if bits[i] == 1 && bits[j] == 1 {
                e += v;
            }
        }
        for (&i, &v) in &self.terms.sites {
            if bits[i] == 1 {
                e += v;
            }
        }
        e + self.terms.offset
    }

    /// Same coefficients, `num_vars` raised to at least `n`.
    pub fn widened(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.terms.num_vars = out.terms.num_vars.max(n);
        out
    }

    /// Every coefficient (and the offset) multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        QuboModel {
            terms: self.terms.scaled(c),
        }
    }

    /// Same model with `c` added to the offset.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.terms.offset += c;
        out
    }

    /// Convert to spin form via `q = (σ + 1) / 2`.
    pub fn to_ising(&self) -> IsingModel {
        let mut b = IsingBuilder::new(self.num_vars());
        // a q_i q_j = a/4 (σ_i σ_j + σ_i + σ_j + 1); coupling enters H with a minus sign.
        for (&(i, j), &a) in &self.terms.pairs {
            let q = a / 4.0;
            b.terms.pairs.insert((i, j), -q);
            *b.terms.sites.entry(i).or_insert(0.0) -= q;
            *b.terms.sites.entry(j).or_insert(0.0) -= q;
            b.terms.offset += q;
        }
        // b q_i = b/2 (σ_i + 1)
        for (&i, &v) in &self.terms.sites {
            *b.terms.sites.entry(i).or_insert(0.0) -= v / 2.0;
            b.terms.offset += v / 2.0;
        }
        b.terms.offset += self.terms.offset;
        b.build()
    }
}

impl Add for &QuboModel {
    type Output = QuboModel;

    fn add(self, rhs: &QuboModel) -> QuboModel {
        QuboModel {
            terms: self.terms.merged(&rhs.terms),
        }
    }
}

impl Add for QuboModel {
    type Output = QuboModel;

    fn add(self, rhs: QuboModel) -> QuboModel {
        &self + &rhs
    }
}

/// Single-owner builder for [`QuboModel`].
///
/// `set_*` overwrites an existing coefficient, `add_*` accumulates into it.
#[derive(Debug, Clone)]
pub struct QuboBuilder {
    terms: Terms,
}

impl QuboBuilder {
    pub fn new(num_vars: usize) -> Self {
        QuboBuilder {
            terms: Terms {
                num_vars,
                ..Terms::default()
            },
        }
    }

    pub fn num_vars(&self) -> usize {
        self.terms.num_vars
    }

    pub fn set_linear(&mut self, i: usize, v: f64) -> Result<&mut Self> {
        self.terms.set_site(i, v)?;
        Ok(self)
    }

    pub fn add_linear(&mut self, i: usize, v: f64) -> Result<&mut Self> {
        self.terms.add_site(i, v)?;
        Ok(self)
    }

    pub fn set_quadratic(&mut self, i: usize, j: usize, v: f64) -> Result<&mut Self> {
        self.terms.set_pair(i, j, v)?;
        Ok(self)
    }

    pub fn add_quadratic(&mut self, i: usize, j: usize, v: f64) -> Result<&mut Self> {
        self.terms.add_pair(i, j, v)?;
        Ok(self)
    }

    pub fn set_offset(&mut self, v: f64) -> Result<&mut Self> {
        self.terms.offset = check_finite(v)?;
        Ok(self)
    }

    pub fn add_offset(&mut self, v: f64) -> Result<&mut Self> {
        self.terms.offset += check_finite(v)?;
        Ok(self)
    }

    /// Finalize; coefficients that are exactly zero are dropped.
    pub fn build(self) -> QuboModel {
        QuboModel {
            terms: self.terms.prune(),
        }
    }
}

/// A spin Hamiltonian `H(σ) = -Σ J_ij σ_i σ_j - Σ h_i σ_i + c`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IsingModel {
    terms: Terms,
}

impl IsingModel {
    pub fn builder(num_spins: usize) -> IsingBuilder {
        IsingBuilder::new(num_spins)
    }

    pub fn num_spins(&self) -> usize {
        self.terms.num_vars
    }

    /// Couplings `J_ij` keyed by `(i, j)` with `i < j`.
    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.terms.pairs
    }

    /// Fields `h_i`.
    pub fn fields(&self) -> &BTreeMap<usize, f64> {
        &self.terms.sites
    }

    pub fn offset(&self) -> f64 {
        self.terms.offset
    }

    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.num_spins() {
            return Err(Error::Dimension {
                expected: self.num_spins(),
                got: spins.len(),
            });
        }
        if let Some(s) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Domain(format!("spin must be -1 or +1, got {s}")));
        }
        let mut e = 0.0;
        for (&(i, j), &v) in &self.terms.pairs {
            e -= v * f64::from(spins[i] * spins[j]);
        }
        for (&i, &v) in &self.terms.sites {
            e -= v * f64::from(spins[i]);
        }
        Ok(e + self.terms.offset)
    }

    /// Convert to binary form via `σ = 2q - 1`.
    pub fn to_qubo(&self) -> QuboModel {
        let mut b = QuboBuilder::new(self.num_spins());
        // -J σ_i σ_j = -J (4 q_i q_j - 2 q_i - 2 q_j + 1)
        for (&(i, j), &v) in &self.terms.pairs {
            b.terms.pairs.insert((i, j), -4.0 * v);
            *b.terms.sites.entry(i).or_insert(0.0) += 2.0 * v;
            *b.terms.sites.entry(j).or_insert(0.0) += 2.0 * v;
            b.terms.offset -= v;
        }
        // -h σ_i = -h (2 q_i - 1)
        for (&i, &v) in &self.terms.sites {
            *b.terms.sites.entry(i).or_insert(0.0) -= 2.0 * v;
            b.terms.offset += v;
        }
        b.terms.offset += self.terms.offset;
        b.build()
    }
}

/// Builder for [`IsingModel`]; same overwrite/accumulate rules as [`QuboBuilder`].
#[derive(Debug, Clone)]
pub struct IsingBuilder {
    terms: Terms,
}

impl IsingBuilder {
    pub fn new(num_spins: usize) -> Self {
        IsingBuilder {
            terms: Terms {
                num_vars: num_spins,
                ..Terms::default()
            },
        }
    }

    pub fn set_field(&mut self, i: usize, v: f64) -> Result<&mut Self> {
        self.terms.set_site(i, v)?;
        Ok(self)
    }

    pub fn add_field(&mut self, i: usize, v: f64) -> Result<&mut Self> {
        self.terms.add_site(i, v)?;
        Ok(self)
    }

    pub fn set_coupling(&mut self, i: usize, j: usize, v: f64) -> Result<&mut Self> {
        self.terms.set_pair(i, j, v)?;
        Ok(self)
    }

    pub fn add_coupling(&mut self, i: usize, j: usize, v: f64) -> Result<&mut Self> {
        self.terms.add_pair(i, j, v)?;
        Ok(self)
    }

    pub fn set_offset(&mut self, v: f64) -> Result<&mut Self> {
        self.terms.offset = check_finite(v)?;
        Ok(self)
    }

    pub fn build(self) -> IsingModel {
        IsingModel {
            terms: self.terms.prune(),
        }
    }
}

/// Iterate over all `2^n` binary assignments in ascending binary order,
/// bit 0 as the least significant.
pub fn all_assignments(n: usize) -> impl Iterator<Item = Vec<u8>> {
    assert!(n < 64, "enumeration of 2^{n} states");
    (0u64..1 << n).map(move |x| (0..n).map(|k| ((x >> k) & 1) as u8).collect())
}

pub fn bits_to_spins(bits: &[u8]) -> Vec<i8> {
    bits.iter().map(|&b| 2 * b as i8 - 1).collect()
}
