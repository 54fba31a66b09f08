//! Whittaker vectors in truncations, and simplicity verdicts.
//!
//! The equations `(e_i - psi(e_i)) w = 0` split along blocks keyed by summand
//! and outside degree: an outside generator lowers the outside degree by a
//! unit vector, a support generator preserves it, so the images of distinct
//! blocks never meet. Each block is solved on its own and the canonical
//! nullspace basis is re-verified with the exact action.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::module::{BasisKey, ModuleElement, ModulePresentation};
use crate::parabolic::ZWeight;
use crate::scalar::Scalar;

/// Number of smaller truncations a dimension must agree with.
pub const DEFAULT_WINDOW: usize = 3;

/// Finite part of a module presentation.
///
/// A basis vector at depth `d <= depth` may carry up to `factor + (depth - d)`
/// factors `f_a` per support root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub depth: usize,
    pub factor: usize,
    pub window: usize,
}

impl Truncation {
    pub fn new(depth: usize, factor: usize) -> Self {
        Self {
            depth,
            factor,
            window: DEFAULT_WINDOW,
        }
    }

    pub fn with_window(self, window: usize) -> Self {
        Self { window, ..self }
    }

    /// Both bounds lowered by `k`, saturating at zero.
    pub fn shrink(&self, k: usize) -> Self {
        Self {
            depth: self.depth.saturating_sub(k),
            factor: self.factor.saturating_sub(k),
            window: self.window,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NOT_SIMPLE")]
    NotSimple,
    #[serde(rename = "SIMPLE_UPTO")]
    SimpleUpTo,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::NotSimple => "NOT_SIMPLE",
            Self::SimpleUpTo => "SIMPLE_UPTO",
            Self::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Whittaker vectors of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockResult<S: Scalar> {
    pub summand: usize,
    pub outside_degree: Vec<u32>,
    /// `z`-weight of the block; `None` without a centre grading.
    pub weight: Option<ZWeight<S>>,
    pub columns: usize,
    pub vectors: Vec<ModuleElement<S>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderStep {
    pub depth: usize,
    pub factor: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WhittakerReport<S: Scalar> {
    pub truncation: Truncation,
    pub basis_size: usize,
    pub exact_vectors: Vec<ModuleElement<S>>,
    pub dim_lower_bound: usize,
    pub stabilized: bool,
    pub ladder: Vec<LadderStep>,
    pub verdict: Verdict,
    pub witnesses: Vec<ModuleElement<S>>,
    /// Blocks with at least one Whittaker vector, in block order.
    pub per_weight: Vec<BlockResult<S>>,
    /// Whether the dominance relation on `z*` is antisymmetric here.
    pub order_is_partial: bool,
}

/// Whittaker vectors inside one truncation, without the stabilization ladder.
pub fn whittaker_vectors<S: Scalar>(p: &ModulePresentation<S>, t: &Truncation) -> Result<WhittakerReport<S>> {
    let basis = p.truncated_basis(t);
    let basis_size = basis.len();
    let mut blocks: BTreeMap<(usize, Vec<u32>), Vec<BasisKey>> = BTreeMap::new();
    for key in basis {
        blocks.entry((key.summand, p.outside_degree(&key))).or_default().push(key);
    }
    let blocks: Vec<((usize, Vec<u32>), Vec<BasisKey>)> = blocks.into_iter().collect();
    let solved: Vec<BlockResult<S>> = blocks
        .par_iter()
        .map(|((summand, degree), keys)| solve_block(p, t, *summand, degree, keys))
        .collect::<Result<Vec<_>>>()?;

    let mut exact_vectors = Vec::new();
    let mut per_weight = Vec::new();
    for block in solved {
        if block.vectors.is_empty() {
            continue;
        }
        exact_vectors.extend(block.vectors.iter().cloned());
        per_weight.push(block);
    }
    let dim = exact_vectors.len();
    let witnesses = witnesses_of(p, &exact_vectors);
    let verdict = if dim >= 2 { Verdict::NotSimple } else { Verdict::Inconclusive };
    Ok(WhittakerReport {
        truncation: *t,
        basis_size,
        exact_vectors,
        dim_lower_bound: dim,
        stabilized: false,
        ladder: vec![LadderStep {
            depth: t.depth,
            factor: t.factor,
            dim,
        }],
        verdict,
        witnesses,
        per_weight,
        order_is_partial: p.parabolic().order_is_partial(),
    })
}

/// Simplicity verdict: solves at `T - k(1, 1)` for `k = window, ..., 0` and
/// declares the dimension stabilized when all of these agree.
pub fn certify_simplicity<S: Scalar>(p: &ModulePresentation<S>, t: &Truncation) -> Result<WhittakerReport<S>> {
    let mut ladder = Vec::with_capacity(t.window + 1);
    for k in (1..=t.window).rev() {
        let smaller = t.shrink(k);
        let dim = whittaker_vectors(p, &smaller)?.dim_lower_bound;
        ladder.push(LadderStep {
            depth: smaller.depth,
            factor: smaller.factor,
            dim,
        });
    }
    let mut report = whittaker_vectors(p, t)?;
    ladder.push(LadderStep {
        depth: t.depth,
        factor: t.factor,
        dim: report.dim_lower_bound,
    });
    report.stabilized = ladder.iter().all(|s| s.dim == report.dim_lower_bound);
    report.ladder = ladder;
    report.verdict = match report.dim_lower_bound {
        d if d >= 2 => Verdict::NotSimple,
        1 if report.stabilized => Verdict::SimpleUpTo,
        _ => Verdict::Inconclusive,
    };
    Ok(report)
}

/// Nullity of the unblocked system over the whole truncation.
pub fn full_space_dimension<S: Scalar>(p: &ModulePresentation<S>, t: &Truncation) -> Result<usize> {
    let basis = p.truncated_basis(t);
    let (ech, _) = assemble(p, t, &basis)?;
    Ok(basis.len() - ech.rank())
}

/// Checks `(e_i - psi(e_i)) w = 0` for every simple root with the full action.
pub fn is_whittaker<S: Scalar>(p: &ModulePresentation<S>, w: &ModuleElement<S>) -> Result<bool> {
    for i in 0..p.uea().system().rank() {
        if !p.bullet_simple(i, w)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn solve_block<S: Scalar>(
    p: &ModulePresentation<S>,
    t: &Truncation,
    summand: usize,
    degree: &[u32],
    keys: &[BasisKey],
) -> Result<BlockResult<S>> {
    let (ech, _) = assemble(p, t, keys)?;
    let mut vectors = Vec::new();
    for null in ech.nullspace() {
        let w = ModuleElement::from_terms(null.into_iter().map(|(c, v)| (keys[c].clone(), v)));
        if !is_whittaker(p, &w)? {
            return Err(Error::TruncationNotClosed {
                depth: t.depth,
                factor: t.factor,
                detail: format!("candidate {w:?} fails the exact check"),
                advice: "the truncation".into(),
            });
        }
        vectors.push(w);
    }
    let weight = if p.is_graded() {
        Some(p.z_weight_of(&keys[0])?)
    } else {
        None
    };
    Ok(BlockResult {
        summand,
        outside_degree: degree.to_vec(),
        weight,
        columns: keys.len(),
        vectors,
    })
}

/// Echelon form of the transposed system: one row per image coordinate.
fn assemble<S: Scalar>(p: &ModulePresentation<S>, t: &Truncation, keys: &[BasisKey]) -> Result<(Echelon<S>, usize)> {
    let rank = p.uea().system().rank();
    let mut rows: BTreeMap<(usize, BasisKey), SparseVec<S>> = BTreeMap::new();
    for (col, key) in keys.iter().enumerate() {
        let w = ModuleElement::basis(key.clone());
        for i in 0..rank {
            let image = p.bullet_simple(i, &w)?;
            for (k, c) in image.terms() {
                if !p.in_truncation(k, t) {
                    return Err(not_closed(p, t, key, k));
                }
                rows.entry((i, k.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let count = rows.len();
    let mut ech = Echelon::new(keys.len());
    for row in rows.into_values() {
        ech.insert(row);
    }
    Ok((ech, count))
}

fn not_closed<S: Scalar>(p: &ModulePresentation<S>, t: &Truncation, from: &BasisKey, to: &BasisKey) -> Error {
    let sys = p.uea().system();
    let depth = p.depth(to);
    let advice = if depth > t.depth {
        format!("--depth to at least {depth}")
    } else {
        "--factor-deg by one".to_string()
    };
    Error::TruncationNotClosed {
        depth: t.depth,
        factor: t.factor,
        detail: format!(
            "{} v maps onto {} v",
            from.monomial.display(sys),
            to.monomial.display(sys)
        ),
        advice,
    }
}

/// Whittaker vectors that are not multiples of the first generator.
fn witnesses_of<S: Scalar>(p: &ModulePresentation<S>, vectors: &[ModuleElement<S>]) -> Vec<ModuleElement<S>> {
    if vectors.len() < 2 {
        return Vec::new();
    }
    let v = p.generator(0);
    vectors
        .iter()
        .filter(|w| !is_multiple_of(w, &v))
        .cloned()
        .collect()
}

fn is_multiple_of<S: Scalar>(w: &ModuleElement<S>, v: &ModuleElement<S>) -> bool {
    let Some((k, c)) = v.terms().iter().next() else {
        return w.is_zero();
    };
    let ratio = w.coefficient(k) / c.clone();
    w.sub(&v.scale(&ratio)).is_zero()
}
