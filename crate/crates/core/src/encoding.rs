//! Fixed-point binary encodings of bounded reals and lowering of quadratic
//! expressions over them into [`QuboModel`]s.
//!
//! A `bits`-wide encoding on `[lo, hi]` decodes as
//!
//! ```text
//! x(b) = lo + (hi - lo) / (2^bits - 1) * Σ_k 2^k b_k
//! ```
//!
//! so both endpoints are exactly representable.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{QuboBuilder, QuboModel, VarId};

/// Hands out fresh, dense variable ids for one model build.
#[derive(Debug, Default)]
pub struct VarAllocator {
    next: usize,
}

impl VarAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&mut self, n: usize) -> Vec<VarId> {
        let ids = (self.next..self.next + n).map(VarId).collect();
        self.next += n;
        ids
    }

    /// Number of variables handed out so far.
    pub fn count(&self) -> usize {
        self.next
    }
}

/// Largest supported width; keeps `2^bits - 1` exact in an `f64` and a `u64`.
pub const MAX_BITS: usize = 52;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointEncoding {
    /// Least-significant bit first.
    var_ids: Vec<VarId>,
    lo: f64,
    hi: f64,
}

impl FixedPointEncoding {
    /// Allocate `bits` fresh variables encoding a value in `[lo, hi]`.
    pub fn new(lo: f64, hi: f64, bits: usize, alloc: &mut VarAllocator) -> Result<Self> {
        Self::validate(lo, hi, bits)?;
        Ok(FixedPointEncoding {
            var_ids: alloc.alloc(bits),
            lo,
            hi,
        })
    }

    /// Build over already-allocated ids.
    pub fn from_ids(lo: f64, hi: f64, var_ids: Vec<VarId>) -> Result<Self> {
        Self::validate(lo, hi, var_ids.len())?;
        Ok(FixedPointEncoding { var_ids, lo, hi })
    }

    fn validate(lo: f64, hi: f64, bits: usize) -> Result<()> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Domain(format!(
                "encoding bounds must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo >= hi {
            return Err(Error::Domain(format!(
                "encoding needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if bits == 0 || bits > MAX_BITS {
            return Err(Error::Domain(format!(
                "encoding width must be in 1..={MAX_BITS}, got {bits}"
            )));
        }
        Ok(())
    }

    pub fn var_ids(&self) -> &[VarId] {
        &self.var_ids
    }

    pub fn bits(&self) -> usize {
        self.var_ids.len()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Number of grid steps, `2^bits - 1`.
    pub fn steps(&self) -> u64 {
        (1u64 << self.bits()) - 1
    }

    /// Grid spacing.
    pub fn resolution(&self) -> f64 {
        (self.hi - self.lo) / self.steps() as f64
    }

    /// Value at grid index `k` (`0 ..= steps`).
    pub fn grid_value(&self, k: u64) -> f64 {
        debug_assert!(k <= self.steps());
        if k == self.steps() {
            self.hi
        } else {
            self.lo + self.resolution() * k as f64
        }
    }

    /// Grid index nearest to `v`, clamped to the encodable range.
    pub fn nearest_index(&self, v: f64) -> u64 {
        let k = ((v - self.lo) / self.resolution()).round();
        k.clamp(0.0, self.steps() as f64) as u64
    }

    /// Grid index of `v` when `v` sits on the grid within `tol`.
    pub fn exact_index(&self, v: f64, tol: f64) -> Option<u64> {
        let k = self.nearest_index(v);
        ((self.grid_value(k) - v).abs() <= tol).then_some(k)
    }

    /// Write the bits of grid index `k` into a full model assignment.
    pub fn write_index(&self, k: u64, assignment: &mut [u8]) {
        for (pos, id) in self.var_ids.iter().enumerate() {
            assignment[id.index()] = ((k >> pos) & 1) as u8;
        }
    }

    /// Grid index currently held by `assignment`.
    pub fn read_index(&self, assignment: &[u8]) -> Result<u64> {
        let mut k = 0u64;
        for (pos, id) in self.var_ids.iter().enumerate() {
            let b = *assignment.get(id.index()).ok_or(Error::Dimension {
                expected: id.index() + 1,
                got: assignment.len(),
            })?;
            if b > 1 {
                return Err(Error::Domain(format!(
                    "binary entry must be 0 or 1, got {b}"
                )));
            }
            k |= u64::from(b) << pos;
        }
        Ok(k)
    }

    /// Decoded value of the bits in `assignment` (indexed by model variable id).
    pub fn decode(&self, assignment: &[u8]) -> Result<f64> {
        Ok(self.grid_value(self.read_index(assignment)?))
    }

    /// The decoded value as an affine function of the encoding's bits.
    pub fn as_affine(&self) -> AffineExpr {
        let res = self.resolution();
        AffineExpr {
            terms: self
                .var_ids
                .iter()
                .enumerate()
                .map(|(k, &id)| (id, res * (1u64 << k) as f64))
                .collect(),
            constant: self.lo,
        }
    }
}

/// `constant + Σ coeff_i b_i` over binary variables.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AffineExpr {
    #[serde(with = "terms_as_pairs")]
    pub terms: BTreeMap<VarId, f64>,
    pub constant: f64,
}

mod terms_as_pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &BTreeMap<VarId, f64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(t.iter().map(|(id, v)| (id.0, *v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<VarId, f64>, D::Error> {
        let pairs: Vec<(usize, f64)> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().map(|(i, v)| (VarId(i), v)).collect())
    }
}

impl AffineExpr {
    pub fn constant(c: f64) -> Self {
        AffineExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(id: VarId) -> Self {
        AffineExpr {
            terms: BTreeMap::from([(id, 1.0)]),
            constant: 0.0,
        }
    }

    /// True when no binary variable appears with a nonzero coefficient.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(|&v| v == 0.0)
    }

    pub fn evaluate(&self, assignment: &[u8]) -> Result<f64> {
        let mut v = self.constant;
        for (&id, &c) in &self.terms {
            let b = *assignment.get(id.index()).ok_or(Error::Dimension {
                expected: id.index() + 1,
                got: assignment.len(),
            })?;
            v += c * f64::from(b);
        }
        Ok(v)
    }

    /// Smallest and largest value over all binary assignments.
    pub fn range(&self) -> (f64, f64) {
        self.terms
            .values()
            .fold((self.constant, self.constant), |(lo, hi), &c| {
                if c < 0.0 {
                    (lo + c, hi)
                } else {
                    (lo, hi + c)
                }
            })
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<VarId> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: f64) -> Self {
        AffineExpr {
            terms: self.terms.iter().map(|(&k, &v)| (k, c * v)).collect(),
            constant: c * self.constant,
        }
    }
}

impl Add for &AffineExpr {
    type Output = AffineExpr;

    fn add(self, rhs: &AffineExpr) -> AffineExpr {
        let mut out = self.clone();
        for (&k, &v) in &rhs.terms {
            *out.terms.entry(k).or_insert(0.0) += v;
        }
        out.constant += rhs.constant;
        out
    }
}

impl Sub for &AffineExpr {
    type Output = AffineExpr;

    fn sub(self, rhs: &AffineExpr) -> AffineExpr {
        self + &rhs.scale(-1.0)
    }
}

impl Add<f64> for &AffineExpr {
    type Output = AffineExpr;

    fn add(self, rhs: f64) -> AffineExpr {
        let mut out = self.clone();
        out.constant += rhs;
        out
    }
}

impl Mul<f64> for &AffineExpr {
    type Output = AffineExpr;

    fn mul(self, rhs: f64) -> AffineExpr {
        self.scale(rhs)
    }
}

impl Neg for &AffineExpr {
    type Output = AffineExpr;

    fn neg(self) -> AffineExpr {
        self.scale(-1.0)
    }
}

/// `coeff * Π factors`. An empty factor list is a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub factors: Vec<AffineExpr>,
}

/// A polynomial written as a sum of scaled products of affine expressions.
///
/// Only terms with at most two factors can be lowered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PolyExpr {
    pub terms: Vec<Monomial>,
}

impl PolyExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_constant(&mut self, c: f64) -> &mut Self {
        self.add_term(c, vec![])
    }

    pub fn add_affine(&mut self, c: f64, e: &AffineExpr) -> &mut Self {
        self.add_term(c, vec![e.clone()])
    }

    pub fn add_product(&mut self, c: f64, a: &AffineExpr, b: &AffineExpr) -> &mut Self {
        self.add_term(c, vec![a.clone(), b.clone()])
    }

    pub fn add_square(&mut self, c: f64, e: &AffineExpr) -> &mut Self {
        self.add_product(c, e, e)
    }

    pub fn add_term(&mut self, c: f64, factors: Vec<AffineExpr>) -> &mut Self {
        self.terms.push(Monomial { coeff: c, factors });
        self
    }

    pub fn evaluate(&self, assignment: &[u8]) -> Result<f64> {
        let mut total = 0.0;
        for m in &self.terms {
            let mut v = m.coeff;
            for f in &m.factors {
                v *= f.evaluate(assignment)?;
            }
            total += v;
        }
        Ok(total)
    }

    fn max_var(&self) -> Option<VarId> {
        self.terms
            .iter()
            .flat_map(|m| m.factors.iter().filter_map(AffineExpr::max_var))
            .max()
    }

    /// Lower into a model over `max(num_vars, highest referenced id + 1)` variables.
    pub fn lower(&self, num_vars: usize) -> Result<QuboModel> {
        let n = self
            .max_var()
            .map_or(num_vars, |id| num_vars.max(id.index() + 1));
        let mut b = QuboBuilder::new(n);
        for m in &self.terms {
            match m.factors.as_slice() {
                [] => {
                    b.add_offset(m.coeff)?;
                }
                [e] => add_affine(&mut b, m.coeff, e)?,
                [x, y] => add_product(&mut b, m.coeff, x, y)?,
                more => return Err(Error::UnsupportedDegree(more.len())),
            }
        }
        Ok(b.build())
    }
}

fn add_affine(b: &mut QuboBuilder, c: f64, e: &AffineExpr) -> Result<()> {
    b.add_offset(c * e.constant)?;
    for (&id, &v) in &e.terms {
        b.add_linear(id.index(), c * v)?;
    }
    Ok(())
}

fn add_product(b: &mut QuboBuilder, c: f64, x: &AffineExpr, y: &AffineExpr) -> Result<()> {
    // (x0 + Σ x_i b_i)(y0 + Σ y_j b_j)
    b.add_offset(c * x.constant * y.constant)?;
    for (&id, &v) in &y.terms {
        b.add_linear(id.index(), c * x.constant * v)?;
    }
    for (&id, &v) in &x.terms {
        b.add_linear(id.index(), c * y.constant * v)?;
    }
    for (&i, &xi) in &x.terms {
        for (&j, &yj) in &y.terms {
            let w = c * xi * yj;
            if i == j {
                // b² = b
                b.add_linear(i.index(), w)?;
            } else {
                b.add_quadratic(i.index(), j.index(), w)?;
            }
        }
    }
    Ok(())
}

/// Lower a quadratic expression, sizing the model from the variables it uses.
pub fn lower_quadratic(expr: &PolyExpr) -> Result<QuboModel> {
    expr.lower(0)
}
