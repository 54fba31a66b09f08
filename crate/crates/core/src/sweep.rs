//! Parameter sweeps: one certification per grid point.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Result;
use crate::module::{ModuleParams, ModulePresentation};
use crate::parabolic::WhittakerCharacter;
use crate::pbw::Uea;
use crate::scalar::Scalar;
use crate::solver::{certify_simplicity, Truncation, WhittakerReport};

#[derive(Debug, Clone)]
pub struct SweepRow<S: Scalar> {
    pub coords: Vec<S>,
    pub outcome: std::result::Result<WhittakerReport<S>, String>,
}

#[derive(Debug, Clone)]
pub struct SweepResult<S: Scalar> {
    pub rows: Vec<SweepRow<S>>,
}

impl<S: Scalar> SweepResult<S> {
    /// Grid points with at least two independent Whittaker vectors.
    pub fn locus(&self) -> Vec<&Vec<S>> {
        self.rows
            .iter()
            .filter(|r| matches!(&r.outcome, Ok(rep) if rep.dim_lower_bound >= 2))
            .map(|r| &r.coords)
            .collect()
    }

    pub fn errors(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }
}

/// Cartesian product of the axes, last axis fastest.
pub fn grid<S: Scalar>(axes: &[Vec<S>]) -> Vec<Vec<S>> {
    if axes.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out: Vec<Vec<S>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    if axes.is_empty() {
        Vec::new()
    } else {
        out
    }
}

/// Certifies every grid point. `params` turns grid coordinates into module
/// parameters; per-point failures are recorded in the row.
pub fn sweep<S, F>(
    uea: &Arc<Uea>,
    character: &WhittakerCharacter<S>,
    points: Vec<Vec<S>>,
    params: F,
    t: &Truncation,
) -> SweepResult<S>
where
    S: Scalar,
    F: Fn(&[S]) -> Result<ModuleParams<S>> + Sync,
{
    let rows = points
        .into_par_iter()
        .map(|coords| {
            let outcome = params(&coords)
                .and_then(|p| ModulePresentation::build(uea, character.clone(), p))
                .and_then(|p| certify_simplicity(&p, t))
                .map_err(|e| e.to_string());
            SweepRow { coords, outcome }
        })
        .collect();
    SweepResult { rows }
}
