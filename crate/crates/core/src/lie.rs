//! Elements of the Lie algebra in its Chevalley basis.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::roots::{RootId, RootSystem};
use crate::scalar::Scalar;

/// Chevalley basis vector. The derived order (all `F`, then `H`, then `E`,
/// each by index) is the PBW order used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisSymbol {
    /// `f_gamma` for the positive root with this index.
    F(usize),
    /// Simple coroot `h_i`.
    H(usize),
    /// `e_gamma` for the positive root with this index.
    E(usize),
}

impl BasisSymbol {
    /// Position in the PBW order.
    pub fn index(self, system: &RootSystem) -> usize {
        let n = system.num_positive_roots();
        match self {
            Self::F(k) => k,
            Self::H(i) => n + i,
            Self::E(k) => n + system.rank() + k,
        }
    }

    pub fn from_index(index: usize, system: &RootSystem) -> Self {
        let n = system.num_positive_roots();
        let r = system.rank();
        if index < n {
            Self::F(index)
        } else if index < n + r {
            Self::H(index - n)
        } else {
            Self::E(index - n - r)
        }
    }

    fn root_id(self) -> Option<RootId> {
        match self {
            Self::F(k) => Some(-(k as RootId + 1)),
            Self::E(k) => Some(k as RootId + 1),
            Self::H(_) => None,
        }
    }

    fn from_root_id(id: RootId) -> Self {
        if id > 0 {
            Self::E(id as usize - 1)
        } else {
            Self::F((-id) as usize - 1)
        }
    }

    pub fn label(self, system: &RootSystem) -> String {
        let coords = |k: usize| {
            system.positive_roots()[k]
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("")
        };
        match self {
            Self::F(k) => format!("f{}", coords(k)),
            Self::H(i) => format!("h{}", i + 1),
            Self::E(k) => format!("e{}", coords(k)),
        }
    }

    /// Every basis symbol in PBW order.
    pub fn all(system: &RootSystem) -> Vec<Self> {
        (0..system.dimension()).map(|i| Self::from_index(i, system)).collect()
    }
}

/// `[x, y]` for two basis vectors, as integer combination of basis vectors.
pub fn basis_bracket(system: &RootSystem, x: BasisSymbol, y: BasisSymbol) -> Vec<(BasisSymbol, i64)> {
    use BasisSymbol::*;
    match (x, y) {
        (H(_), H(_)) => vec![],
        (H(i), s) => {
            let id = s.root_id().unwrap();
            let c = system.pairing(&system.root(id), i) as i64;
            if c == 0 {
                vec![]
            } else {
                vec![(s, c)]
            }
        }
        (_, H(_)) => negate(basis_bracket(system, y, x)),
        _ => {
            let (a, b) = (x.root_id().unwrap(), y.root_id().unwrap());
            if a == -b {
                let gamma = system.root(a.abs());
                let coroot = system.coroot(&gamma);
                let sign = if a > 0 { 1 } else { -1 };
                coroot
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (H(i), sign * c))
                    .collect()
            } else {
                match system.structure_constant(a, b) {
                    Some(n) => {
                        let ra = system.root(a);
                        let rb = system.root(b);
                        let sum: Vec<i32> = ra.iter().zip(&rb).map(|(p, q)| p + q).collect();
                        let id = system.root_id(&sum).expect("sum is a root");
                        vec![(BasisSymbol::from_root_id(id), n)]
                    }
                    None => vec![],
                }
            }
        }
    }
}

fn negate(v: Vec<(BasisSymbol, i64)>) -> Vec<(BasisSymbol, i64)> {
    v.into_iter().map(|(s, c)| (s, -c)).collect()
}

/// Dense bracket table over symbol indices.
#[derive(Debug, Clone)]
pub struct BracketTable {
    dim: usize,
    entries: Vec<Vec<(usize, i64)>>,
}

impl BracketTable {
    pub fn new(system: &RootSystem) -> Self {
        let dim = system.dimension();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let x = BasisSymbol::from_index(i, system);
                let y = BasisSymbol::from_index(j, system);
                entries.push(
                    basis_bracket(system, x, y)
                        .into_iter()
                        .map(|(s, c)| (s.index(system), c))
                        .collect(),
                );
            }
        }
        Self { dim, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.entries[i * self.dim + j]
    }
}

/// Element of the Lie algebra with scalar coefficients.
#[derive(Clone)]
pub struct LieElement<S: Scalar> {
    system: Arc<RootSystem>,
    coeffs: BTreeMap<BasisSymbol, S>,
}

impl<S: Scalar> LieElement<S> {
    pub fn zero(system: Arc<RootSystem>) -> Self {
        Self {
            system,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(system: Arc<RootSystem>, symbol: BasisSymbol) -> Self {
        Self::from_terms(system, [(symbol, S::one())])
    }

    pub fn from_terms(system: Arc<RootSystem>, terms: impl IntoIterator<Item = (BasisSymbol, S)>) -> Self {
        let mut e = Self::zero(system);
        for (s, c) in terms {
            e.add_term(s, c);
        }
        e
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisSymbol, &S)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, symbol: BasisSymbol) -> S {
        self.coeffs.get(&symbol).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, symbol: BasisSymbol, c: S) {
        let entry = self.coeffs.entry(symbol).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&symbol);
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(
            self.system.clone(),
            self.coeffs.iter().map(|(s, v)| (*s, v.clone() * c.clone())),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_system(&self.system, &other.system)?;
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    /// True when every term is some `e_gamma`.
    pub fn in_nilradical(&self) -> bool {
        self.coeffs.keys().all(|s| matches!(s, BasisSymbol::E(_)))
    }
}

impl<S: Scalar> PartialEq for LieElement<S> {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> fmt::Debug for LieElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(s, c)| format!("({c:?})*{}", s.label(&self.system)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub(crate) fn same_system(a: &Arc<RootSystem>, b: &Arc<RootSystem>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::MixedRootSystem)
    }
}

/// Lie bracket, extended bilinearly from the Chevalley basis.
pub fn bracket<S: Scalar>(x: &LieElement<S>, y: &LieElement<S>) -> Result<LieElement<S>> {
    same_system(&x.system, &y.system)?;
    let mut out = LieElement::zero(x.system.clone());
    for (a, ca) in &x.coeffs {
        for (b, cb) in &y.coeffs {
            for (s, n) in basis_bracket(&x.system, *a, *b) {
                out.add_term(s, ca.clone() * cb.clone() * S::from_i64(n));
            }
        }
    }
    Ok(out)
}
