//! Whittaker module families as normal-form bases with an exact action.
//!
//! Every family here is induced from a Whittaker character `psi` whose support
//! `S` consists of pairwise orthogonal simple roots. The Levi factor is then
//! `l = z + (sl2)^S`, and its module `Y` is a tensor product of sl2 Whittaker
//! modules on which `z` acts by a fixed weight. The induced module has basis
//!
//! ```text
//!     F * prod_{a in S} h_a^{eps_a} * v,     F a PBW monomial in the f's, eps_a in {0, 1}
//! ```
//!
//! and the action of `x` on a basis vector is computed by straightening
//! `x * F * h^eps` in `U(g)` and then evaluating each PBW term `F' H E` at `v`:
//!
//! - `e_gamma v = 0` for `gamma` in `m`, `e_a v = psi(e_a) v` for `a` in `S`,
//! - `z v = Omega(z) v` for `z` in the centre,
//! - `h_a^2 v = (2 c_a - 2 h_a - 4 psi(e_a) f_a) v` (the Casimir of the `a`
//!   factor acting by `c_a`).
//!
//! Verma modules are the case `S` empty, universal sl2 Whittaker modules the
//! case `g = sl2`, `S = {alpha}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{BasisSymbol, LieElement};
use crate::parabolic::{ParabolicData, WhittakerCharacter, ZWeight};
use crate::pbw::{Monomial, Uea, UeaElement};
use crate::roots::CartanType;
use crate::scalar::Scalar;
use crate::solver::Truncation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Verma,
    #[serde(rename = "mcdowell")]
    McDowell,
    UniversalSl2,
    DirectSum,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Verma => "verma",
            Self::McDowell => "mcdowell",
            Self::UniversalSl2 => "universal_sl2",
            Self::DirectSum => "direct_sum",
        };
        f.write_str(s)
    }
}

/// Parameters of a module family.
#[derive(Debug, Clone, PartialEq)]
pub enum ModuleParams<S: Scalar> {
    /// Highest weight, as values on the simple coroots. Requires `psi = 0`.
    Verma { lambda: Vec<S> },
    /// Weight of `z` on the centre basis, and one Casimir scalar per support root.
    McDowell { centre_weight: Vec<S>, casimir: Vec<S> },
    /// Casimir scalar for `g = sl2`, with `psi(e)` taken from the character.
    UniversalSl2 { casimir: S },
    DirectSum(Vec<ModuleParams<S>>),
}

impl<S: Scalar> ModuleParams<S> {
    pub fn family(&self) -> Family {
        match self {
            Self::Verma { .. } => Family::Verma,
            Self::McDowell { .. } => Family::McDowell,
            Self::UniversalSl2 { .. } => Family::UniversalSl2,
            Self::DirectSum(_) => Family::DirectSum,
        }
    }
}

/// The central character restricted to what acts on `Y`: the weight of `z`
/// and the scalars of the factor Casimirs.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralCharacter<S: Scalar> {
    pub centre_weight: ZWeight<S>,
    pub casimir_scalars: Vec<S>,
}

/// Basis vector: summand index and a PBW monomial `F h^eps`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub summand: usize,
    pub monomial: Monomial,
}

/// Vector of a module presentation, in its normal-form basis.
#[derive(Clone, PartialEq)]
pub struct ModuleElement<S: Scalar> {
    terms: BTreeMap<BasisKey, S>,
}

impl<S: Scalar> Default for ModuleElement<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> ModuleElement<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn basis(key: BasisKey) -> Self {
        let mut e = Self::zero();
        e.add_term(key, S::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisKey, S)>) -> Self {
        let mut e = Self::zero();
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<BasisKey, S> {
        &self.terms
    }

    pub fn coefficient(&self, key: &BasisKey) -> S {
        self.terms.get(key).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: BasisKey, c: S) {
        if c.is_negligible() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_negligible() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-S::one());
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }
}

impl<S: Scalar> fmt::Debug for ModuleElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("({c:?}) [{}]{:?}", k.summand, k.monomial))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `h_a^b v` in one sl2 factor, as a combination of `f_a^j h_a^eps v`.
type FactorTable<S> = Vec<Vec<(u16, bool, S)>>;

struct Summand<S: Scalar> {
    params: ModuleParams<S>,
    central: CentralCharacter<S>,
    /// `Omega(zeta_i)` for each simple coroot.
    zeta_values: Vec<S>,
    /// `t_ia` from `h_i = zeta_i + sum_a t_ia h_a`.
    support_coeffs: Vec<Vec<S>>,
    factor_tables: Vec<RwLock<FactorTable<S>>>,
}

/// Upper bound on the number of PBW terms evaluated by a single action call.
pub const STEP_BUDGET: usize = 50_000_000;

/// A module family with its exact action.
pub struct ModulePresentation<S: Scalar> {
    uea: Arc<Uea>,
    character: WhittakerCharacter<S>,
    parabolic: Arc<ParabolicData>,
    params: ModuleParams<S>,
    summands: Vec<Summand<S>>,
    /// Positive-root index of each support root, in support order.
    support_roots: Vec<usize>,
    action_cache: RwLock<HashMap<(usize, BasisKey), Arc<ModuleElement<S>>>>,
}

impl<S: Scalar> fmt::Debug for ModulePresentation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModulePresentation")
            .field("system", &self.uea.system().label())
            .field("family", &self.family())
            .field("params", &self.params)
            .finish()
    }
}

impl<S: Scalar> ModulePresentation<S> {
    /// Builds a presentation for the given family parameters.
    pub fn build(uea: &Arc<Uea>, character: WhittakerCharacter<S>, params: ModuleParams<S>) -> Result<Self> {
        let system = uea.system().clone();
        let parabolic = Arc::new(ParabolicData::for_character(&character, system.clone())?);
        if let Some((a, b)) = parabolic.adjacent_pair() {
            return Err(Error::NonOrthogonalSupport(a, b));
        }
        let leaves: Vec<ModuleParams<S>> = match &params {
            ModuleParams::DirectSum(parts) => {
                let mut flat = Vec::new();
                flatten(parts, &mut flat);
                if flat.is_empty() {
                    return Err(Error::InvalidParams("direct sum needs at least one summand".into()));
                }
                flat
            }
            other => vec![other.clone()],
        };
        let mut summands = Vec::with_capacity(leaves.len());
        for leaf in leaves {
            summands.push(Self::summand(&character, &parabolic, leaf)?);
        }
        let support_roots = parabolic
            .support()
            .iter()
            .map(|&i| (system.root_id(&system.simple_root(i)).unwrap() - 1) as usize)
            .collect();
        Ok(Self {
            uea: uea.clone(),
            character,
            parabolic,
            params,
            summands,
            support_roots,
            action_cache: RwLock::new(HashMap::new()),
        })
    }

    fn summand(character: &WhittakerCharacter<S>, parabolic: &ParabolicData, params: ModuleParams<S>) -> Result<Summand<S>> {
        let system = parabolic.system();
        let rank = system.rank();
        let support = parabolic.support().len();
        let central = match &params {
            ModuleParams::Verma { lambda } => {
                if !character.is_zero() {
                    return Err(Error::InvalidParams("Verma modules need the zero character".into()));
                }
                if lambda.len() != rank {
                    return Err(Error::InvalidParams(format!(
                        "highest weight needs {rank} values, got {}",
                        lambda.len()
                    )));
                }
                // with psi = 0 the centre basis is the basis of simple coroots
                CentralCharacter {
                    centre_weight: ZWeight::new(lambda.clone()),
                    casimir_scalars: Vec::new(),
                }
            }
            ModuleParams::McDowell { centre_weight, casimir } => {
                if centre_weight.len() != parabolic.centre_dim() {
                    return Err(Error::InvalidParams(format!(
                        "centre weight needs {} values, got {}",
                        parabolic.centre_dim(),
                        centre_weight.len()
                    )));
                }
                if casimir.len() != support {
                    return Err(Error::InvalidParams(format!(
                        "need one Casimir scalar per support root ({support}), got {}",
                        casimir.len()
                    )));
                }
                CentralCharacter {
                    centre_weight: ZWeight::new(centre_weight.clone()),
                    casimir_scalars: casimir.clone(),
                }
            }
            ModuleParams::UniversalSl2 { casimir } => {
                if system.cartan_type() != CartanType::A || rank != 1 {
                    return Err(Error::InvalidParams("the universal sl2 family needs g = sl2".into()));
                }
                if character.is_zero() {
                    return Err(Error::InvalidParams("the universal sl2 family needs a nonzero character".into()));
                }
                CentralCharacter {
                    centre_weight: ZWeight::new(Vec::new()),
                    casimir_scalars: vec![casimir.clone()],
                }
            }
            ModuleParams::DirectSum(_) => unreachable!("flattened"),
        };
        let zeta_values = (0..rank)
            .map(|i| {
                parabolic
                    .zeta_coords(i)
                    .iter()
                    .zip(&central.centre_weight.coordinates)
                    .fold(S::zero(), |acc, (c, w)| acc + S::from_rational(c) * w.clone())
            })
            .collect();
        let support_coeffs = (0..rank)
            .map(|i| parabolic.support_coeffs(i).iter().map(S::from_rational).collect())
            .collect();
        let factor_tables = (0..support)
            .map(|_| RwLock::new(vec![vec![(0u16, false, S::one())]]))
            .collect();
        Ok(Summand {
            params,
            central,
            zeta_values,
            support_coeffs,
            factor_tables,
        })
    }

    pub fn uea(&self) -> &Arc<Uea> {
        &self.uea
    }

    pub fn family(&self) -> Family {
        self.params.family()
    }

    pub fn params(&self) -> &ModuleParams<S> {
        &self.params
    }

    pub fn character(&self) -> &WhittakerCharacter<S> {
        &self.character
    }

    pub fn parabolic(&self) -> &ParabolicData {
        &self.parabolic
    }

    pub fn num_summands(&self) -> usize {
        self.summands.len()
    }

    pub fn summand_params(&self, k: usize) -> &ModuleParams<S> {
        &self.summands[k].params
    }

    pub fn central(&self, summand: usize) -> &CentralCharacter<S> {
        &self.summands[summand].central
    }

    /// Whether the centre of the Levi factor is nonzero, i.e. there is a grading.
    pub fn is_graded(&self) -> bool {
        self.parabolic.centre_dim() > 0
    }

    /// The cyclic vector `v` of a summand.
    pub fn generator(&self, summand: usize) -> ModuleElement<S> {
        ModuleElement::basis(BasisKey {
            summand,
            monomial: Monomial::one(self.uea.dim()),
        })
    }

    /// Whether a key is a legal basis vector of this presentation.
    pub fn is_basis_key(&self, key: &BasisKey) -> bool {
        if key.summand >= self.summands.len() {
            return false;
        }
        let sys = self.uea.system();
        let n = sys.num_positive_roots();
        let r = sys.rank();
        let ex = key.monomial.exponents();
        if ex.len() != self.uea.dim() || ex[n + r..].iter().any(|&e| e > 0) {
            return false;
        }
        (0..r).all(|i| ex[n + i] == 0 || (ex[n + i] == 1 && self.parabolic.support().contains(&i)))
    }

    /// Multi-degree of a basis vector along the simple roots outside the support.
    pub fn outside_degree(&self, key: &BasisKey) -> Vec<u32> {
        let sys = self.uea.system();
        let mut deg = vec![0u32; self.parabolic.outside_support().len()];
        for k in 0..sys.num_positive_roots() {
            let b = key.monomial.exponent(k) as u32;
            if b > 0 {
                for (d, c) in deg.iter_mut().zip(self.parabolic.outside_degree(k)) {
                    *d += b * c;
                }
            }
        }
        deg
    }

    /// Total depth: the sum of the outside degree.
    pub fn depth(&self, key: &BasisKey) -> usize {
        self.outside_degree(key).iter().map(|&d| d as usize).sum()
    }

    /// Weight of `z` on a basis vector: `Omega - sum_gamma b_gamma * gamma|z`.
    pub fn z_weight_of(&self, key: &BasisKey) -> Result<ZWeight<S>> {
        if !self.is_graded() {
            return Err(Error::NotGraded);
        }
        let mut coords = self.summands[key.summand].central.centre_weight.coordinates.clone();
        for k in 0..self.uea.system().num_positive_roots() {
            let b = key.monomial.exponent(k);
            if b > 0 {
                for (c, r) in coords.iter_mut().zip(self.parabolic.restriction(k)) {
                    *c = c.clone() - S::from_bigint(&(r * BigInt::from(b)));
                }
            }
        }
        Ok(ZWeight::new(coords))
    }

    /// Splits an element into its `z`-homogeneous components, keyed by
    /// summand and outside degree.
    pub fn graded_components(&self, w: &ModuleElement<S>) -> BTreeMap<(usize, Vec<u32>), ModuleElement<S>> {
        let mut out: BTreeMap<(usize, Vec<u32>), ModuleElement<S>> = BTreeMap::new();
        for (k, c) in w.terms() {
            out.entry((k.summand, self.outside_degree(k)))
                .or_default()
                .add_term(k.clone(), c.clone());
        }
        out
    }

    /// Every basis vector inside a truncation, sorted.
    ///
    /// A vector at depth `d` may carry at most `K + (D - d)` factors `f_a` for
    /// each support root `a`.
    pub fn truncated_basis(&self, t: &Truncation) -> Vec<BasisKey> {
        let sys = self.uea.system();
        let n = sys.num_positive_roots();
        let dim = self.uea.dim();
        let support = self.parabolic.support().to_vec();
        let graded_roots: Vec<(usize, usize)> = (0..n)
            .filter(|k| !self.support_roots.contains(k))
            .map(|k| (k, self.parabolic.outside_degree(k).iter().sum::<u32>() as usize))
            .collect();

        let mut f_parts: Vec<(Vec<u16>, usize)> = Vec::new();
        fn rec(
            roots: &[(usize, usize)],
            idx: usize,
            budget: usize,
            used: usize,
            current: &mut Vec<u16>,
            out: &mut Vec<(Vec<u16>, usize)>,
        ) {
            if idx == roots.len() {
                out.push((current.clone(), used));
                return;
            }
            let (k, w) = roots[idx];
            let mut b = 0u16;
            loop {
                let cost = w * b as usize;
                if cost > budget {
                    break;
                }
                current[k] = b;
                rec(roots, idx + 1, budget - cost, used + cost, current, out);
                if w == 0 {
                    break;
                }
                b += 1;
            }
            current[k] = 0;
        }
        let mut current = vec![0u16; dim];
        rec(&graded_roots, 0, t.depth, 0, &mut current, &mut f_parts);

        let mut keys = Vec::new();
        for (summand, _) in self.summands.iter().enumerate() {
            for (base, depth) in &f_parts {
                let cap = (t.factor + (t.depth - depth)) as u16;
                let mut combos: Vec<Vec<u16>> = vec![base.clone()];
                for &k in &self.support_roots {
                    let mut next = Vec::new();
                    for c in &combos {
                        for a in 0..=cap {
                            let mut m = c.clone();
                            m[k] = a;
                            next.push(m);
                        }
                    }
                    combos = next;
                }
                for &i in &support {
                    let mut next = Vec::new();
                    for c in &combos {
                        for eps in 0..=1u16 {
                            let mut m = c.clone();
                            m[n + i] = eps;
                            next.push(m);
                        }
                    }
                    combos = next;
                }
                keys.extend(combos.into_iter().map(|m| BasisKey {
                    summand,
                    monomial: Monomial::from_exponents(m),
                }));
            }
        }
        keys.sort();
        keys
    }

    /// Whether a basis vector lies inside a truncation.
    pub fn in_truncation(&self, key: &BasisKey, t: &Truncation) -> bool {
        let depth = self.depth(key);
        if depth > t.depth {
            return false;
        }
        let cap = t.factor + (t.depth - depth);
        self.support_roots
            .iter()
            .all(|&k| (key.monomial.exponent(k) as usize) <= cap)
    }

    /// Action of one Chevalley generator on a basis vector.
    pub fn act_symbol_on_basis(&self, symbol: BasisSymbol, key: &BasisKey) -> Result<Arc<ModuleElement<S>>> {
        let x = self.uea.symbol_index(symbol);
        let cache_key = (x, key.clone());
        if let Some(hit) = self.action_cache.read().unwrap().get(&cache_key) {
            return Ok(hit.clone());
        }
        let straightened = self.uea.left_mul(x, &key.monomial);
        let mut out = ModuleElement::zero();
        let mut steps = 0usize;
        for (t, c) in straightened.iter() {
            self.evaluate_at_generator(key.summand, t, &S::from_bigint(c), &mut out, &mut steps)?;
        }
        let out = Arc::new(out);
        self.action_cache.write().unwrap().insert(cache_key, out.clone());
        Ok(out)
    }

    /// Action of one generator on an element.
    pub fn act_symbol(&self, symbol: BasisSymbol, w: &ModuleElement<S>) -> Result<ModuleElement<S>> {
        let mut out = ModuleElement::zero();
        for (k, c) in w.terms() {
            out.add_scaled(&*self.act_symbol_on_basis(symbol, k)?, c);
        }
        Ok(out)
    }

    /// `u . w` for `u` in `U(g)`.
    pub fn act(&self, u: &UeaElement<S>, w: &ModuleElement<S>) -> Result<ModuleElement<S>> {
        crate::lie::same_system(u.uea().system(), self.uea.system())?;
        let sys = self.uea.system().clone();
        let mut out = ModuleElement::zero();
        for (m, c) in u.terms() {
            let mut current = w.clone();
            for x in m.word().into_iter().rev() {
                current = self.act_symbol(BasisSymbol::from_index(x, &sys), &current)?;
                if current.is_zero() {
                    break;
                }
            }
            out.add_scaled(&current, c);
        }
        Ok(out)
    }

    /// `x . w` for a Lie algebra element.
    pub fn act_lie(&self, x: &LieElement<S>, w: &ModuleElement<S>) -> Result<ModuleElement<S>> {
        crate::lie::same_system(x.system(), self.uea.system())?;
        let mut out = ModuleElement::zero();
        for (s, c) in x.terms() {
            out.add_scaled(&self.act_symbol(*s, w)?, c);
        }
        Ok(out)
    }

    /// `x . w - psi(x) w` for `x` in the nilradical.
    pub fn bullet(&self, x: &LieElement<S>, w: &ModuleElement<S>) -> Result<ModuleElement<S>> {
        let psi = self.character.eval(x)?;
        Ok(self.act_lie(x, w)?.sub(&w.scale(&psi)))
    }

    /// `(e_a - psi(e_a)) . w` for the simple root `a = alpha_i`.
    pub fn bullet_simple(&self, i: usize, w: &ModuleElement<S>) -> Result<ModuleElement<S>> {
        let sys = self.uea.system();
        let k = (sys.root_id(&sys.simple_root(i)).unwrap() - 1) as usize;
        let image = self.act_symbol(BasisSymbol::E(k), w)?;
        Ok(image.sub(&w.scale(self.character.value(i))))
    }

    /// Least `k <= k_max` such that every word of `k + 1` bullets by simple
    /// root vectors kills `w`, or `None` if there is none.
    pub fn bullet_depth(&self, w: &ModuleElement<S>, k_max: usize) -> Result<Option<usize>> {
        let rank = self.uea.system().rank();
        let mut layer: Vec<ModuleElement<S>> = if w.is_zero() { vec![] } else { vec![w.clone()] };
        for k in 0..=k_max {
            let mut next = Vec::new();
            for u in &layer {
                for i in 0..rank {
                    let b = self.bullet_simple(i, u)?;
                    if !b.is_zero() {
                        next.push(b);
                    }
                }
            }
            if next.is_empty() {
                return Ok(Some(k));
            }
            layer = independent_subset(next);
        }
        Ok(None)
    }

    /// Evaluates `coeff * F H E` at the generator of a summand.
    fn evaluate_at_generator(
        &self,
        summand: usize,
        term: &Monomial,
        coeff: &S,
        out: &mut ModuleElement<S>,
        steps: &mut usize,
    ) -> Result<()> {
        *steps += 1;
        if *steps > STEP_BUDGET {
            return Err(Error::ReductionDivergence(STEP_BUDGET));
        }
        let sys = self.uea.system();
        let n = sys.num_positive_roots();
        let r = sys.rank();
        let ex = term.exponents();
        let support = self.parabolic.support();

        // E . v
        let mut scalar = coeff.clone();
        for k in 0..n {
            let e = ex[n + r + k];
            if e == 0 {
                continue;
            }
            match self.support_roots.iter().position(|&s| s == k) {
                Some(pos) => {
                    let psi = self.character.value(support[pos]).clone();
                    for _ in 0..e {
                        scalar = scalar * psi.clone();
                    }
                }
                None => return Ok(()),
            }
        }
        if scalar.is_negligible() {
            return Ok(());
        }

        // H . v as a polynomial in the support coroots
        let data = &self.summands[summand];
        let mut poly: HashMap<Vec<u16>, S> = HashMap::new();
        poly.insert(vec![0; support.len()], scalar);
        for i in 0..r {
            for _ in 0..ex[n + i] {
                let mut next: HashMap<Vec<u16>, S> = HashMap::new();
                for (m, c) in &poly {
                    let z = c.clone() * data.zeta_values[i].clone();
                    add_poly(&mut next, m.clone(), z);
                    for (a, t) in data.support_coeffs[i].iter().enumerate() {
                        if !t.is_zero() {
                            let mut m2 = m.clone();
                            m2[a] += 1;
                            add_poly(&mut next, m2, c.clone() * t.clone());
                        }
                    }
                }
                poly = next;
            }
        }

        let f_part = Monomial::from_exponents(
            ex.iter()
                .enumerate()
                .map(|(i, &e)| if i < n { e } else { 0 })
                .collect(),
        );
        let mut poly: Vec<(Vec<u16>, S)> = poly.into_iter().collect();
        poly.sort_by(|a, b| a.0.cmp(&b.0));
        for (hexp, c) in poly {
            // per factor reduction, then the tensor product of the results
            let mut states: Vec<(Vec<u16>, Vec<bool>, S)> = vec![(vec![], vec![], c)];
            for (a, &b) in hexp.iter().enumerate() {
                let table = self.factor_row(summand, a, b as usize);
                let mut next = Vec::with_capacity(states.len() * table.len());
                for (js, eps, c) in &states {
                    for (j, e, d) in &table {
                        let mut js = js.clone();
                        js.push(*j);
                        let mut eps = eps.clone();
                        eps.push(*e);
                        next.push((js, eps, c.clone() * d.clone()));
                    }
                }
                states = next;
            }
            for (js, eps, c) in states {
                let mut g = Monomial::one(self.uea.dim());
                for (pos, &j) in js.iter().enumerate() {
                    g = g.with_extra(self.support_roots[pos], j);
                }
                for (f_mono, k) in self.uea.mono_mul(&f_part, &g).iter() {
                    let mut m = f_mono.clone();
                    for (pos, &e) in eps.iter().enumerate() {
                        if e {
                            m = m.with_extra(n + support[pos], 1);
                        }
                    }
                    out.add_term(
                        BasisKey {
                            summand,
                            monomial: m,
                        },
                        c.clone() * S::from_bigint(k),
                    );
                }
            }
        }
        Ok(())
    }

    /// `h_a^b v` in the sl2 factor of the support root at position `a`.
    fn factor_row(&self, summand: usize, a: usize, b: usize) -> Vec<(u16, bool, S)> {
        let data = &self.summands[summand];
        {
            let table = data.factor_tables[a].read().unwrap();
            if b < table.len() {
                return table[b].clone();
            }
        }
        let mut table = data.factor_tables[a].write().unwrap();
        let c = data.central.casimir_scalars[a].clone();
        let eta = self.character.value(self.parabolic.support()[a]).clone();
        let two = S::from_i64(2);
        let four = S::from_i64(4);
        while table.len() <= b {
            let last = table.last().unwrap().clone();
            let mut acc: BTreeMap<(u16, bool), S> = BTreeMap::new();
            let mut push = |j: u16, e: bool, v: S| {
                let entry = acc.entry((j, e)).or_insert_with(S::zero);
                *entry = entry.clone() + v;
            };
            for (j, e, v) in last {
                let jj = S::from_i64(j as i64);
                if !e {
                    // h f^j v = f^j h v - 2j f^j v
                    push(j, true, v.clone());
                    push(j, false, -(two.clone() * jj * v));
                } else {
                    // h f^j h v = f^j h^2 v - 2j f^j h v, then h^2 v = (2c - 2h - 4 eta f) v
                    push(j, false, two.clone() * c.clone() * v.clone());
                    push(j, true, -(two.clone() + two.clone() * jj) * v.clone());
                    push(j + 1, false, -(four.clone() * eta.clone() * v));
                }
            }
            table.push(
                acc.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|((j, e), v)| (j, e, v))
                    .collect(),
            );
        }
        table[b].clone()
    }
}

fn add_poly<S: Scalar>(poly: &mut HashMap<Vec<u16>, S>, m: Vec<u16>, c: S) {
    if c.is_zero() {
        return;
    }
    let entry = poly.entry(m).or_insert_with(S::zero);
    *entry = entry.clone() + c;
}

fn flatten<S: Scalar>(parts: &[ModuleParams<S>], out: &mut Vec<ModuleParams<S>>) {
    for p in parts {
        match p {
            ModuleParams::DirectSum(inner) => flatten(inner, out),
            other => out.push(other.clone()),
        }
    }
}

/// A maximal linearly independent subset, in order.
pub fn independent_subset<S: Scalar>(vectors: Vec<ModuleElement<S>>) -> Vec<ModuleElement<S>> {
    let mut index: BTreeMap<BasisKey, usize> = BTreeMap::new();
    for v in &vectors {
        for k in v.terms().keys() {
            let next = index.len();
            index.entry(k.clone()).or_insert(next);
        }
    }
    let mut ech = crate::linalg::Echelon::new(index.len());
    let mut kept = Vec::new();
    for v in vectors {
        let mut row: Vec<(usize, S)> = v.terms().iter().map(|(k, c)| (index[k], c.clone())).collect();
        row.sort_by_key(|(i, _)| *i);
        if ech.insert(row) {
            kept.push(v);
        }
    }
    kept
}

/// Rank of a family of module vectors.
pub fn rank_of<S: Scalar>(vectors: &[ModuleElement<S>]) -> usize {
    independent_subset(vectors.to_vec()).len()
}
