//! QUBO gadgets for non-smooth functions.
//!
//! A gadget is a QUBO fragment over auxiliary encoded variables whose minimum,
//! with the input held fixed, reproduces a target function of the input:
//!
//! | variant      | fragment                                             | target        |
//! |--------------|------------------------------------------------------|---------------|
//! | `L1Naive`    | `m t + z1 (t+1) - z2 (t-1) + M (-m - z1 + z2)^2`     | `|m|`         |
//! | `L1Reduced`  | `z1 + z2 + M (-m - z1 + z2)^2`                       | `|m|`         |
//! | `ReluWolfe`  | `m t + z1 (t+1) - z2 t + M (-m - z1 + z2)^2`         | `max(0, -m)`  |
//! | `QLoss`      | `(m - t)^2 + (1-q)^2 (1 - s) + M_s (s - msb(t))^2`   | q-loss        |
//!
//! with `t ∈ [-1, 1]` (`[-1, 0]` for ReLU) and `z1, z2 ∈ [0, z_hi]`.
//!
//! Any penalty weight leaks a little below the target off the constraint
//! surface: for the reduced l1 gadget the continuous minimum is
//! `|m| - 1/(4M)`, and for the naive one `|m| - 1/M`. On an encoding grid of
//! spacing `δ` the leak vanishes entirely once `M δ^2 >= δ`, i.e. `M >= 1/δ`,
//! which is what [`PenaltyConfig::dominant`] guarantees.

mod build;
mod reference;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::encoding::{AffineExpr, FixedPointEncoding};
use crate::error::{Error, Result};
use crate::model::QuboModel;

pub use build::{
    build_l1_gadget, build_qloss_gadget, build_regularized_ls, build_relu_gadget,
    penalize_equality, AuxConfig, QLossTEncoding, RegularizedLs, RegularizedLsConfig,
};
pub use reference::{
    abs_reference, grid, l1_naive_objective, l1_naive_value, l1_reduced_objective,
    l1_reduced_value, legendre_conjugate_numeric, qloss_objective, qloss_reference, relu_reference,
    relu_wolfe_objective, relu_wolfe_value, residual, sign, soft_threshold,
};

/// Weight `M` of a squared equality penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PenaltyConfig(f64);

impl PenaltyConfig {
    pub fn new(weight: f64) -> Result<Self> {
        if weight.is_finite() && weight > 0.0 {
            Ok(PenaltyConfig(weight))
        } else {
            Err(Error::Domain(format!(
                "penalty weight must be positive and finite, got {weight}"
            )))
        }
    }

    /// `10 * max(1, z_hi) / resolution`: one grid step off the constraint
    /// costs more than the largest linear gain available.
    pub fn dominant(z_hi: f64, resolution: f64) -> Result<Self> {
        Self::new(10.0 * z_hi.max(1.0) / resolution)
    }

    pub fn weight(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QLossParams(f64);

impl QLossParams {
    /// Requires `q <= 0`.
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q <= 0.0 {
            Ok(QLossParams(q))
        } else {
            Err(Error::Domain(format!(
                "q-loss parameter must satisfy q <= 0, got {q}"
            )))
        }
    }

    pub fn q(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetVariant {
    L1Naive,
    L1Reduced,
    ReluWolfe,
    Qloss,
}

impl GadgetVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            GadgetVariant::L1Naive => "l1_naive",
            GadgetVariant::L1Reduced => "l1_reduced",
            GadgetVariant::ReluWolfe => "relu_wolfe",
            GadgetVariant::Qloss => "qloss",
        }
    }
}

/// Serialized description of a gadget, written next to its model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetMetadata {
    pub variant: GadgetVariant,
    #[serde(rename = "M")]
    pub penalty: f64,
    pub input: AffineExpr,
    pub aux: BTreeMap<String, FixedPointEncoding>,
}

/// A built gadget: its model fragment plus what is needed to decode it.
#[derive(Debug, Clone)]
pub struct GadgetExpansion {
    model: QuboModel,
    input: AffineExpr,
    aux: BTreeMap<String, FixedPointEncoding>,
    penalty: PenaltyConfig,
    variant: GadgetVariant,
    qloss: Option<QLossParams>,
}

impl GadgetExpansion {
    pub fn model(&self) -> &QuboModel {
        &self.model
    }

    pub fn input(&self) -> &AffineExpr {
        &self.input
    }

    pub fn aux(&self) -> &BTreeMap<String, FixedPointEncoding> {
        &self.aux
    }

    pub fn aux_encoding(&self, name: &str) -> Option<&FixedPointEncoding> {
        self.aux.get(name)
    }

    pub fn penalty(&self) -> PenaltyConfig {
        self.penalty
    }

    pub fn variant(&self) -> GadgetVariant {
        self.variant
    }

    /// Number of auxiliary binary variables.
    pub fn aux_bits(&self) -> usize {
        self.aux.values().map(FixedPointEncoding::bits).sum()
    }

    /// Value of the function this gadget realizes, at input `m`.
    pub fn reference(&self, m: f64) -> f64 {
        match self.variant {
            GadgetVariant::L1Naive | GadgetVariant::L1Reduced => abs_reference(m),
            GadgetVariant::ReluWolfe => relu_reference(m),
            GadgetVariant::Qloss => qloss_reference(m, self.qloss.expect("q-loss params")),
        }
    }

    pub fn input_value(&self, assignment: &[u8]) -> Result<f64> {
        self.input.evaluate(assignment)
    }

    /// Decoded auxiliary values by name.
    pub fn decode_aux(&self, assignment: &[u8]) -> Result<BTreeMap<String, f64>> {
        self.aux
            .iter()
            .map(|(k, e)| Ok((k.clone(), e.decode(assignment)?)))
            .collect()
    }

    /// Equality residual `-m - z1 + z2` for the variants that carry one.
    pub fn residual(&self, assignment: &[u8]) -> Result<Option<f64>> {
        match (self.aux.get("z1"), self.aux.get("z2")) {
            (Some(z1), Some(z2)) => Ok(Some(residual(
                self.input_value(assignment)?,
                z1.decode(assignment)?,
                z2.decode(assignment)?,
            ))),
            _ => Ok(None),
        }
    }

    pub fn metadata(&self) -> GadgetMetadata {
        GadgetMetadata {
            variant: self.variant,
            penalty: self.penalty.weight(),
            input: self.input.clone(),
            aux: self.aux.clone(),
        }
    }
}
