//! Exact cost arithmetic shared by every distance computation.
//!
//! All edit costs are rationals so that oracle comparisons in the test
//! suite can demand exact equality instead of float tolerances.

use num_rational::Ratio;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::graph::LabelId;

/// Exact edit cost. `i128` components leave ample headroom for the
/// per-level weight denominators (`w^depth`) at realistic depths.
pub type Cost = Ratio<i128>;

/// Shorthand for an integer-valued cost.
pub fn cost(n: i64) -> Cost {
    Ratio::from_integer(n as i128)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostParseError {
    #[error("empty cost literal")]
    Empty,
    #[error("invalid cost literal {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"3"`, `"1/2"` or `"0.25"` into an exact rational.
///
/// Decimal literals are read digit-for-digit (`0.1` becomes exactly 1/10),
/// never through floating point.
pub fn parse_cost(text: &str) -> Result<Cost, CostParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(CostParseError::Empty);
    }
    let invalid = || CostParseError::Invalid(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num.trim().parse().map_err(|_| invalid())?;
        let d: i128 = den.trim().parse().map_err(|_| invalid())?;
        if d == 0 {
            return Err(CostParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let negative = int.trim_start().starts_with('-');
        let i: i128 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| invalid())?
        };
        let f: i128 = frac.parse().map_err(|_| invalid())?;
        let scale = 10i128.checked_pow(frac.len() as u32).ok_or_else(invalid)?;
        let magnitude = Ratio::new(i.abs() * scale + f, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: i128 = s.parse().map_err(|_| invalid())?;
    Ok(Ratio::from_integer(n))
}

/// Per-operation edit costs. Substituting equal labels is always free;
/// the stored substitution costs apply only when the labels differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditCostModel {
    pub vertex_substitution: Cost,
    pub vertex_deletion: Cost,
    pub vertex_insertion: Cost,
    pub edge_substitution: Cost,
    pub edge_deletion: Cost,
    pub edge_insertion: Cost,
}

impl EditCostModel {
    /// The uniform model: every operation costs 1.
    pub fn uniform() -> Self {
        EditCostModel {
            vertex_substitution: cost(1),
            vertex_deletion: cost(1),
            vertex_insertion: cost(1),
            edge_substitution: cost(1),
            edge_deletion: cost(1),
            edge_insertion: cost(1),
        }
    }

    pub fn vertex_sub(&self, a: LabelId, b: LabelId) -> Cost {
        if a == b {
            Cost::zero()
        } else {
            self.vertex_substitution
        }
    }

    pub fn edge_sub(&self, a: LabelId, b: LabelId) -> Cost {
        if a == b {
            Cost::zero()
        } else {
            self.edge_substitution
        }
    }

    pub fn vertex_del(&self, _label: LabelId) -> Cost {
        self.vertex_deletion
    }

    pub fn vertex_ins(&self, _label: LabelId) -> Cost {
        self.vertex_insertion
    }

    pub fn edge_del(&self, _label: LabelId) -> Cost {
        self.edge_deletion
    }

    pub fn edge_ins(&self, _label: LabelId) -> Cost {
        self.edge_insertion
    }

    /// Deletion and insertion agree, which is what licenses solving the
    /// assignment on the reduced square matrix with a swapped orientation.
    pub fn is_symmetric(&self) -> bool {
        self.vertex_deletion == self.vertex_insertion && self.edge_deletion == self.edge_insertion
    }

    pub fn validate(&self) -> Result<(), CostModelError> {
        let all = [
            self.vertex_substitution,
            self.vertex_deletion,
            self.vertex_insertion,
            self.edge_substitution,
            self.edge_deletion,
            self.edge_insertion,
        ];
        if all.iter().any(|c| c < &Cost::zero()) {
            return Err(CostModelError::NegativeCost);
        }
        Ok(())
    }
}

impl Default for EditCostModel {
    fn default() -> Self {
        EditCostModel::uniform()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostModelError {
    #[error("edit costs must be non-negative")]
    NegativeCost,
    #[error("level weight must lie in [0, 1]")]
    WeightOutOfRange,
}

/// Depth discount for tree distances: level `i` costs are scaled by `w^i`.
/// `w = 1` reproduces the unweighted distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelWeights {
    w: Cost,
}

impl LevelWeights {
    pub fn new(w: Cost) -> Result<Self, CostModelError> {
        if w < Cost::zero() || w > Cost::one() {
            return Err(CostModelError::WeightOutOfRange);
        }
        Ok(LevelWeights { w })
    }

    pub fn unweighted() -> Self {
        LevelWeights { w: Cost::one() }
    }

    /// The default used throughout the benchmark harness.
    pub fn half() -> Self {
        LevelWeights { w: Ratio::new(1, 2) }
    }

    pub fn base(&self) -> Cost {
        self.w
    }

    pub fn is_unweighted(&self) -> bool {
        self.w.is_one()
    }

    /// `w^depth`, exactly.
    pub fn level(&self, depth: u32) -> Cost {
        if self.w.is_one() {
            Cost::one()
        } else {
            self.w.pow(depth as i32)
        }
    }
}

impl Default for LevelWeights {
    fn default() -> Self {
        LevelWeights::half()
    }
}
