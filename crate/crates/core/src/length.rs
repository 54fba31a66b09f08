//! Composition lengths with certified values, and the check that the number
//! of independent Whittaker vectors never exceeds the length.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::{ModuleParams, ModulePresentation};
use crate::parabolic::WhittakerCharacter;
use crate::pbw::Uea;
use crate::roots::CartanType;
use crate::scalar::Scalar;
use crate::solver::{certify_simplicity, Truncation};

/// Composition length where it is known without computation:
///
/// - Verma modules over sl2: 2 if the highest weight is a non-negative integer, else 1;
/// - modules induced from a non-singular character: 1 (Kostant);
/// - direct sums: the sum over the summands.
pub fn known_length<S: Scalar>(p: &ModulePresentation<S>) -> Result<usize> {
    let sys = p.uea().system();
    let rank_one = sys.cartan_type() == CartanType::A && sys.rank() == 1;
    let mut total = 0;
    for k in 0..p.num_summands() {
        total += match p.summand_params(k) {
            ModuleParams::Verma { lambda } if rank_one => {
                let natural = lambda[0]
                    .to_rational()
                    .is_some_and(|q| q.is_integer() && q >= num_rational::BigRational::from_integer(0.into()));
                if natural {
                    2
                } else {
                    1
                }
            }
            ModuleParams::UniversalSl2 { .. } => 1,
            ModuleParams::McDowell { .. } if p.character().is_nonsingular() => 1,
            other => {
                return Err(Error::UnknownLength(format!(
                    "{} summand {} over {}",
                    other.family(),
                    k,
                    sys.label()
                )))
            }
        };
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthRow {
    pub label: String,
    pub dim: Option<usize>,
    pub length: Option<usize>,
    pub status: RowStatus,
    pub equality: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthReport {
    pub rows: Vec<LengthRow>,
    pub equality_rows: usize,
    pub violations: usize,
}

impl LengthReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Compares `dim Wh` with the known length on each instance. Instances
/// without a certified length are skipped; computation errors count as
/// violations since they leave the inequality unchecked.
pub fn length_bound_check<S: Scalar>(instances: &[(String, ModulePresentation<S>)], t: &Truncation) -> LengthReport {
    let rows: Vec<LengthRow> = instances
        .iter()
        .map(|(label, p)| check_one(label, p, t))
        .collect();
    let equality_rows = rows.iter().filter(|r| r.equality).count();
    let violations = rows.iter().filter(|r| r.status == RowStatus::Fail).count();
    LengthReport {
        rows,
        equality_rows,
        violations,
    }
}

fn check_one<S: Scalar>(label: &str, p: &ModulePresentation<S>, t: &Truncation) -> LengthRow {
    let length = match known_length(p) {
        Ok(l) => l,
        Err(e) => {
            return LengthRow {
                label: label.to_string(),
                dim: None,
                length: None,
                status: RowStatus::Skipped,
                equality: false,
                note: Some(e.to_string()),
            }
        }
    };
    match certify_simplicity(p, t) {
        Ok(report) => {
            let dim = report.dim_lower_bound;
            LengthRow {
                label: label.to_string(),
                dim: Some(dim),
                length: Some(length),
                status: if dim <= length { RowStatus::Pass } else { RowStatus::Fail },
                equality: dim == length,
                note: None,
            }
        }
        Err(e) => LengthRow {
            label: label.to_string(),
            dim: None,
            length: Some(length),
            status: RowStatus::Fail,
            equality: false,
            note: Some(e.to_string()),
        },
    }
}

/// Rank-one Vermas, universal modules and direct sums of at most three simples.
pub fn default_suite<S: Scalar>(sl2: &Arc<Uea>) -> Result<Vec<(String, ModulePresentation<S>)>> {
    let q = |n: i64, d: i64| S::from_ratio(n, d);
    let verma = |l: S| ModuleParams::Verma { lambda: vec![l] };
    let universal = |c: S| ModuleParams::UniversalSl2 { casimir: c };
    let zero = || WhittakerCharacter::zero(1);
    let one = || WhittakerCharacter::new(vec![S::one()]);

    let specs: Vec<(&str, WhittakerCharacter<S>, ModuleParams<S>)> = vec![
        ("verma(0)", zero(), verma(q(0, 1))),
        ("verma(1)", zero(), verma(q(1, 1))),
        ("verma(2)", zero(), verma(q(2, 1))),
        ("verma(-1)", zero(), verma(q(-1, 1))),
        ("verma(1/2)", zero(), verma(q(1, 2))),
        ("universal(eta=1,c=0)", one(), universal(q(0, 1))),
        ("universal(eta=1,c=17/3)", one(), universal(q(17, 3))),
        (
            "verma(-1)+verma(1/2)+verma(-3/2)",
            zero(),
            ModuleParams::DirectSum(vec![verma(q(-1, 1)), verma(q(1, 2)), verma(q(-3, 2))]),
        ),
        (
            "verma(1)+verma(-2)",
            zero(),
            ModuleParams::DirectSum(vec![verma(q(1, 1)), verma(q(-2, 1))]),
        ),
        (
            "universal(c=0)+universal(c=2)",
            one(),
            ModuleParams::DirectSum(vec![universal(q(0, 1)), universal(q(2, 1))]),
        ),
    ];
    specs
        .into_iter()
        .map(|(label, psi, params)| Ok((label.to_string(), ModulePresentation::build(sl2, psi, params)?)))
        .collect()
}
