use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GadgetExpansion, GadgetVariant, PenaltyConfig, QLossParams};
use crate::encoding::{AffineExpr, FixedPointEncoding, PolyExpr, VarAllocator};
use crate::error::{Error, Result};
use crate::model::QuboModel;

/// `M * residual^2`, lowered with `b^2 = b`.
pub fn penalize_equality(residual: &AffineExpr, pc: PenaltyConfig) -> Result<QuboModel> {
    let mut p = PolyExpr::new();
    p.add_square(pc.weight(), residual);
    p.lower(0)
}

/// Encodings of the auxiliary variables of the l1 and ReLU-type gadgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxConfig {
    /// Upper bound of both `z` encodings; must cover the largest `|m|`.
    pub z_hi: f64,
    pub z_bits: usize,
    /// Width of the `t` encoding (naive l1 and ReLU-type only).
    pub t_bits: usize,
}

impl Default for AuxConfig {
    fn default() -> Self {
        AuxConfig {
            z_hi: 10.23,
            z_bits: 10,
            t_bits: 8,
        }
    }
}

impl AuxConfig {
    pub fn z_resolution(&self) -> f64 {
        self.z_hi / ((1u64 << self.z_bits) - 1) as f64
    }

    /// The default penalty weight for these encodings.
    pub fn dominant_penalty(&self) -> Result<PenaltyConfig> {
        PenaltyConfig::dominant(self.z_hi, self.z_resolution())
    }
}

fn check_input_range(input: &AffineExpr, z_hi: f64) -> Result<()> {
    if !(z_hi.is_finite() && z_hi > 0.0) {
        return Err(Error::Domain(format!("z_hi must be positive, got {z_hi}")));
    }
    let (lo, hi) = input.range();
    let magnitude = lo.abs().max(hi.abs());
    // Grid values of an input encoding may overshoot a bound by an ulp.
    if magnitude > z_hi * (1.0 + 1e-12) {
        return Err(Error::Infeasible { magnitude, z_hi });
    }
    Ok(())
}

struct WolfeParts {
    t: Option<FixedPointEncoding>,
    z1: FixedPointEncoding,
    z2: FixedPointEncoding,
}

fn alloc_wolfe(
    aux: &AuxConfig,
    t_range: Option<(f64, f64)>,
    alloc: &mut VarAllocator,
) -> Result<WolfeParts> {
    let t = t_range
        .map(|(lo, hi)| FixedPointEncoding::new(lo, hi, aux.t_bits, alloc))
        .transpose()?;
    let z1 = FixedPointEncoding::new(0.0, aux.z_hi, aux.z_bits, alloc)?;
    let z2 = FixedPointEncoding::new(0.0, aux.z_hi, aux.z_bits, alloc)?;
    Ok(WolfeParts { t, z1, z2 })
}

fn finish(
    poly: &PolyExpr,
    parts: WolfeParts,
    input: &AffineExpr,
    pc: PenaltyConfig,
    variant: GadgetVariant,
    alloc: &VarAllocator,
) -> Result<GadgetExpansion> {
    let residual = &(&parts.z2.as_affine() - &parts.z1.as_affine()) - input;
    let model = &poly.lower(alloc.count())? + &penalize_equality(&residual, pc)?;
    let mut aux = BTreeMap::new();
    if let Some(t) = parts.t {
        aux.insert("t".to_string(), t);
    }
    aux.insert("z1".to_string(), parts.z1);
    aux.insert("z2".to_string(), parts.z2);
    Ok(GadgetExpansion {
        model: model.widened(alloc.count()),
        input: input.clone(),
        aux,
        penalty: pc,
        variant,
        qloss: None,
    })
}

/// Build the l1 gadget for `input`.
///
/// `variant` must be [`GadgetVariant::L1Naive`] (auxiliaries `t, z1, z2`) or
/// [`GadgetVariant::L1Reduced`] (auxiliaries `z1, z2`).
pub fn build_l1_gadget(
    input: &AffineExpr,
    aux: &AuxConfig,
    pc: PenaltyConfig,
    variant: GadgetVariant,
    alloc: &mut VarAllocator,
) -> Result<GadgetExpansion> {
    check_input_range(input, aux.z_hi)?;
    let mut poly = PolyExpr::new();
    let parts = match variant {
        GadgetVariant::L1Reduced => {
            let parts = alloc_wolfe(aux, None, alloc)?;
            poly.add_affine(1.0, &parts.z1.as_affine())
                .add_affine(1.0, &parts.z2.as_affine());
            parts
        }
        GadgetVariant::L1Naive => {
            let parts = alloc_wolfe(aux, Some((-1.0, 1.0)), alloc)?;
            let t = parts.t.as_ref().expect("naive gadget has t").as_affine();
            poly.add_product(1.0, input, &t)
                .add_product(1.0, &parts.z1.as_affine(), &(&t + 1.0))
                .add_product(-1.0, &parts.z2.as_affine(), &(&t + -1.0));
            parts
        }
        other => {
            return Err(Error::Domain(format!(
                "{} is not an l1 gadget variant",
                other.as_str()
            )))
        }
    };
    finish(&poly, parts, input, pc, variant, alloc)
}

/// Build the ReLU-type gadget (target `max(0, -m)`), `t ∈ [-1, 0]`.
pub fn build_relu_gadget(
    input: &AffineExpr,
    aux: &AuxConfig,
    pc: PenaltyConfig,
    alloc: &mut VarAllocator,
) -> Result<GadgetExpansion> {
    check_input_range(input, aux.z_hi)?;
    let parts = alloc_wolfe(aux, Some((-1.0, 0.0)), alloc)?;
    let t = parts.t.as_ref().expect("relu gadget has t").as_affine();
    let mut poly = PolyExpr::new();
    poly.add_product(1.0, input, &t)
        .add_product(1.0, &parts.z1.as_affine(), &(&t + 1.0))
        .add_product(-1.0, &parts.z2.as_affine(), &t);
    finish(&poly, parts, input, pc, GadgetVariant::ReluWolfe, alloc)
}

/// Encoding of the q-loss `t` variable.
///
/// The threshold `t = 1` must coincide with the boundary where the most
/// significant bit switches on, i.e. `grid_value(2^(bits-1)) == 1`, so that
/// `t >= 1` holds exactly when that bit is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QLossTEncoding {
    pub lo: f64,
    pub hi: f64,
    pub bits: usize,
}

impl QLossTEncoding {
    /// The encoding starting at `lo` whose upper half begins exactly at `t = 1`.
    pub fn centered(lo: f64, bits: usize) -> Self {
        let steps = ((1u64 << bits) - 1) as f64;
        let half = (1u64 << (bits.max(1) - 1)) as f64;
        QLossTEncoding {
            lo,
            hi: lo + (1.0 - lo) * steps / half,
            bits,
        }
    }
}

/// Build the q-loss gadget.
///
/// The step `(1 - sign(t - 1)) / 2` becomes the one-body term `1 - s` for an
/// indicator bit `s`, tied to the most significant bit of `t` by
/// `M_s (s - msb)^2` with `M_s = 10 max(1, (1-q)^2)`.
pub fn build_qloss_gadget(
    input: &AffineExpr,
    p: QLossParams,
    t_spec: QLossTEncoding,
    alloc: &mut VarAllocator,
) -> Result<GadgetExpansion> {
    let q = p.q();
    if t_spec.lo > q || t_spec.hi < 2.0 {
        return Err(Error::Domain(format!(
            "t encoding [{}, {}] must contain [{q}, 2]",
            t_spec.lo, t_spec.hi
        )));
    }
    if t_spec.bits < 2 {
        return Err(Error::Domain(
            "q-loss t encoding needs at least 2 bits".into(),
        ));
    }
    let t = FixedPointEncoding::new(t_spec.lo, t_spec.hi, t_spec.bits, alloc)?;
    let msb_index = 1u64 << (t_spec.bits - 1);
    let at_msb = t.grid_value(msb_index);
    let tol = 1e-9 * (t_spec.hi - t_spec.lo);
    if (at_msb - 1.0).abs() > tol {
        return Err(Error::ThresholdOffGrid {
            threshold: 1.0,
            reason: format!(
                "most significant bit switches on at t = {at_msb}; use QLossTEncoding::centered"
            ),
        });
    }
    let s = FixedPointEncoding::new(0.0, 1.0, 1, alloc)?;

    let cap = (1.0 - q).powi(2);
    let tie = PenaltyConfig::new(10.0 * cap.max(1.0))?;
    let t_aff = t.as_affine();
    let s_aff = s.as_affine();
    let msb = AffineExpr::var(*t.var_ids().last().expect("t has bits"));

    let mut poly = PolyExpr::new();
    poly.add_square(1.0, &(input - &t_aff))
        .add_constant(cap)
        .add_affine(-cap, &s_aff);
    let model = &poly.lower(alloc.count())? + &penalize_equality(&(&s_aff - &msb), tie)?;

    let aux = BTreeMap::from([("t".to_string(), t), ("s".to_string(), s)]);
    Ok(GadgetExpansion {
        model: model.widened(alloc.count()),
        input: input.clone(),
        aux,
        penalty: tie,
        variant: GadgetVariant::Qloss,
        qloss: Some(p),
    })
}

/// Encodings for the l1-regularized least-squares model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizedLsConfig {
    /// Each coefficient is encoded on `[-m_hi, m_hi]`.
    pub m_hi: f64,
    pub m_bits: usize,
    pub aux: AuxConfig,
    /// Gadget penalty; `None` uses [`AuxConfig::dominant_penalty`].
    pub penalty: Option<PenaltyConfig>,
    pub variant: GadgetVariant,
}

/// `Σ_k (m_k - a_k)^2 + λ_k |m_k|` with each `|m_k|` realized by an l1 gadget.
#[derive(Debug, Clone)]
pub struct RegularizedLs {
    pub model: QuboModel,
    pub coefficients: Vec<FixedPointEncoding>,
    pub gadgets: Vec<GadgetExpansion>,
}

impl RegularizedLs {
    /// Decoded coefficient values.
    pub fn decode(&self, assignment: &[u8]) -> Result<Vec<f64>> {
        self.coefficients
            .iter()
            .map(|e| e.decode(assignment))
            .collect()
    }
}

/// Build the regularized least-squares model for `(a_k, λ_k)` targets.
///
/// Minimizing over every bit gives `m_k ≈ soft_threshold(a_k, λ_k / 2)`.
pub fn build_regularized_ls(
    targets: &[(f64, f64)],
    cfg: &RegularizedLsConfig,
) -> Result<RegularizedLs> {
    let pc = match cfg.penalty {
        Some(pc) => pc,
        None => cfg.aux.dominant_penalty()?,
    };
    let mut alloc = VarAllocator::new();
    let mut model = QuboModel::zero(0);
    let mut coefficients = Vec::with_capacity(targets.len());
    let mut gadgets = Vec::with_capacity(targets.len());
    for &(a, lambda) in targets {
        if !(a.is_finite() && lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Domain(format!(
                "target a = {a} must be finite and λ = {lambda} non-negative"
            )));
        }
        let m = FixedPointEncoding::new(-cfg.m_hi, cfg.m_hi, cfg.m_bits, &mut alloc)?;
        let m_aff = m.as_affine();
        let gadget = build_l1_gadget(&m_aff, &cfg.aux, pc, cfg.variant, &mut alloc)?;
        let mut ls = PolyExpr::new();
        ls.add_square(1.0, &(&m_aff + -a));
        model = &(&model + &ls.lower(0)?) + &gadget.model().scaled(lambda);
        coefficients.push(m);
        gadgets.push(gadget);
    }
    Ok(RegularizedLs {
        model: model.widened(alloc.count()),
        coefficients,
        gadgets,
    })
}
