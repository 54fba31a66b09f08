//! JSON documents for module descriptors and Whittaker reports.
//!
//! Scalars are written as exact strings (`"p/q"` or `"p"`), never as floats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::{BasisKey, ModuleElement, ModuleParams, ModulePresentation};
use crate::pbw::Monomial;
use crate::scalar::{parse_rational, Scalar};
use crate::solver::{LadderStep, Truncation, Verdict, WhittakerReport};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Module family parameters with exact string scalars.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum ParamsDoc {
    #[serde(rename = "verma")]
    Verma { lambda: Vec<String> },
    #[serde(rename = "mcdowell")]
    McDowell { centre_weight: Vec<String>, casimir: Vec<String> },
    #[serde(rename = "universal_sl2")]
    UniversalSl2 { casimir: String },
    #[serde(rename = "direct_sum")]
    DirectSum { summands: Vec<ParamsDoc> },
}

impl ParamsDoc {
    pub fn from_params<S: Scalar>(params: &ModuleParams<S>) -> Self {
        let strings = |v: &[S]| v.iter().map(Scalar::to_exact_string).collect();
        match params {
            ModuleParams::Verma { lambda } => Self::Verma { lambda: strings(lambda) },
            ModuleParams::McDowell { centre_weight, casimir } => Self::McDowell {
                centre_weight: strings(centre_weight),
                casimir: strings(casimir),
            },
            ModuleParams::UniversalSl2 { casimir } => Self::UniversalSl2 {
                casimir: casimir.to_exact_string(),
            },
            ModuleParams::DirectSum(parts) => Self::DirectSum {
                summands: parts.iter().map(Self::from_params).collect(),
            },
        }
    }

    pub fn to_params<S: Scalar>(&self) -> Result<ModuleParams<S>> {
        Ok(match self {
            Self::Verma { lambda } => ModuleParams::Verma {
                lambda: parse_all(lambda, "lambda")?,
            },
            Self::McDowell { centre_weight, casimir } => ModuleParams::McDowell {
                centre_weight: parse_all(centre_weight, "centre_weight")?,
                casimir: parse_all(casimir, "casimir")?,
            },
            Self::UniversalSl2 { casimir } => ModuleParams::UniversalSl2 {
                casimir: parse_scalar(casimir, "casimir")?,
            },
            Self::DirectSum { summands } => {
                ModuleParams::DirectSum(summands.iter().map(Self::to_params).collect::<Result<_>>()?)
            }
        })
    }
}

pub fn parse_scalar<S: Scalar>(text: &str, field: &str) -> Result<S> {
    parse_rational(text)
        .map(|q| S::from_rational(&q))
        .map_err(|e| Error::InvalidParams(format!("{field}: {e}")))
}

pub fn parse_all<S: Scalar>(texts: &[String], field: &str) -> Result<Vec<S>> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_scalar(t, &format!("{field}[{i}]")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    /// Root system label such as `A2`.
    pub system: String,
    pub params: ParamsDoc,
}

/// Central data acting on one summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaDoc {
    pub centre_weight: Vec<String>,
    pub casimir: Vec<String>,
}

/// One term `coeff * monomial * v_summand`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub summand: usize,
    pub monomial: String,
    pub exponents: Vec<u16>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDoc {
    pub summand: usize,
    pub outside_degree: Vec<u32>,
    /// `None` when the Levi factor has no centre.
    pub weight: Option<Vec<String>>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub module: ModuleDescriptor,
    pub psi: Vec<String>,
    pub omega: Vec<OmegaDoc>,
    pub truncation: Truncation,
    pub basis_size: usize,
    pub dim_lower_bound: usize,
    pub stabilized: bool,
    pub verdict: Verdict,
    pub ladder: Vec<LadderStep>,
    pub order_is_partial: bool,
    pub witnesses: Vec<Vec<TermDoc>>,
    pub exact_vectors: Vec<Vec<TermDoc>>,
    pub per_weight: Vec<WeightDoc>,
}

impl ReportDocument {
    pub fn new<S: Scalar>(p: &ModulePresentation<S>, report: &WhittakerReport<S>) -> Self {
        let vectors = |vs: &[ModuleElement<S>]| vs.iter().map(|w| vector_terms(p, w)).collect();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            module: ModuleDescriptor {
                system: p.uea().system().label(),
                params: ParamsDoc::from_params(p.params()),
            },
            psi: p.character().values().iter().map(Scalar::to_exact_string).collect(),
            omega: (0..p.num_summands())
                .map(|k| {
                    let c = p.central(k);
                    OmegaDoc {
                        centre_weight: c.centre_weight.to_strings(),
                        casimir: c.casimir_scalars.iter().map(Scalar::to_exact_string).collect(),
                    }
                })
                .collect(),
            truncation: report.truncation,
            basis_size: report.basis_size,
            dim_lower_bound: report.dim_lower_bound,
            stabilized: report.stabilized,
            verdict: report.verdict,
            ladder: report.ladder.clone(),
            order_is_partial: report.order_is_partial,
            witnesses: vectors(&report.witnesses),
            exact_vectors: vectors(&report.exact_vectors),
            per_weight: report
                .per_weight
                .iter()
                .map(|b| WeightDoc {
                    summand: b.summand,
                    outside_degree: b.outside_degree.clone(),
                    weight: b.weight.as_ref().map(|w| w.to_strings()),
                    dim: b.vectors.len(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub fn vector_terms<S: Scalar>(p: &ModulePresentation<S>, w: &ModuleElement<S>) -> Vec<TermDoc> {
    let sys = p.uea().system();
    w.terms()
        .iter()
        .map(|(k, c)| TermDoc {
            summand: k.summand,
            monomial: k.monomial.display(sys),
            exponents: k.monomial.exponents().to_vec(),
            coeff: c.to_exact_string(),
        })
        .collect()
}

/// Rebuilds a vector from its serialized terms, rejecting non-basis monomials.
pub fn vector_from_terms<S: Scalar>(p: &ModulePresentation<S>, terms: &[TermDoc]) -> Result<ModuleElement<S>> {
    let mut w = ModuleElement::zero();
    for t in terms {
        let key = BasisKey {
            summand: t.summand,
            monomial: Monomial::from_exponents(t.exponents.clone()),
        };
        if !p.is_basis_key(&key) {
            return Err(Error::InvalidParams(format!("{:?} is not a basis monomial", t.exponents)));
        }
        w.add_term(key, parse_scalar(&t.coeff, "coeff")?);
    }
    Ok(w)
}
