//! The universal enveloping algebra in PBW normal form.
//!
//! A [`Monomial`] is an exponent vector over the Chevalley basis in PBW order
//! (all `f`, then `h`, then `e`). Products are normalised by moving one
//! generator at a time to its place with `xy = yx + [x, y]`. The single
//! generator products `x * m` have integer coefficients and are memoised in a
//! table shared by every element built on the same [`Uea`]; the table is a
//! pure cache and never changes a result.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{same_system, BasisSymbol, BracketTable, LieElement};
use crate::roots::RootSystem;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn from_exponents(exponents: Vec<u16>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u16 {
        self.0[index]
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn first_symbol(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    pub fn last_symbol(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    pub fn with_extra(&self, index: usize, count: u16) -> Self {
        let mut m = self.clone();
        m.0[index] += count;
        m
    }

    fn without_one(&self, index: usize) -> Self {
        let mut m = self.clone();
        m.0[index] -= 1;
        m
    }

    /// The monomial as a word of symbol indices, in order.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize))
            .collect()
    }

    /// Concatenation, valid when every symbol of `self` precedes every symbol of `other`.
    fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn display(&self, system: &RootSystem) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let label = BasisSymbol::from_index(i, system).label(system);
                if e == 1 {
                    label
                } else {
                    format!("{label}^{e}")
                }
            })
            .collect();
        parts.join(" ")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Integer combination of monomials, sorted by monomial.
pub type IntCombination = Vec<(Monomial, BigInt)>;

fn accumulate(acc: &mut HashMap<Monomial, BigInt>, m: &Monomial, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                acc.remove(m);
            }
        }
        None => {
            acc.insert(m.clone(), c);
        }
    }
}

fn finish(acc: HashMap<Monomial, BigInt>) -> IntCombination {
    let mut v: IntCombination = acc.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub entries: usize,
    pub product_entries: usize,
    pub hits: u64,
    pub misses: u64,
}

/// Straightening engine for one root system.
pub struct Uea {
    system: Arc<RootSystem>,
    brackets: BracketTable,
    left_cache: RwLock<HashMap<(usize, Monomial), Arc<IntCombination>>>,
    product_cache: RwLock<HashMap<(Monomial, Monomial), Arc<IntCombination>>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl fmt::Debug for Uea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Uea").field("system", &self.system.label()).finish()
    }
}

impl Uea {
    pub fn new(system: Arc<RootSystem>) -> Arc<Self> {
        let brackets = BracketTable::new(&system);
        Arc::new(Self {
            system,
            brackets,
            left_cache: RwLock::new(HashMap::new()),
            product_cache: RwLock::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        })
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.system.dimension()
    }

    pub fn symbol_index(&self, s: BasisSymbol) -> usize {
        s.index(&self.system)
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            entries: self.left_cache.read().unwrap().len(),
            product_entries: self.product_cache.read().unwrap().len(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    pub fn clear_cache(&self) {
        self.left_cache.write().unwrap().clear();
        self.product_cache.write().unwrap().clear();
    }

    pub(crate) fn cached_entries(&self) -> Vec<((usize, Monomial), Arc<IntCombination>)> {
        let guard = self.left_cache.read().unwrap();
        let mut v: Vec<_> = guard.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub(crate) fn insert_cached(&self, symbol: usize, m: Monomial, value: IntCombination) {
        self.left_cache.write().unwrap().insert((symbol, m), Arc::new(value));
    }

    /// Normal form of `x * m` for a single generator `x`.
    pub fn left_mul(&self, x: usize, m: &Monomial) -> Arc<IntCombination> {
        let y = match m.first_symbol() {
            Some(y) if y < x => y,
            _ => return Arc::new(vec![(m.with_extra(x, 1), BigInt::one())]),
        };
        if let Some(hit) = self.left_cache.read().unwrap().get(&(x, m.clone())) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return hit.clone();
        }
        self.misses.fetch_add(1, Ordering::Relaxed);

        // x y rest = y (x rest) + [x, y] rest
        let rest = m.without_one(y);
        let mut acc = HashMap::new();
        for (t, c) in self.left_mul(x, &rest).iter() {
            for (u, d) in self.left_mul(y, t).iter() {
                accumulate(&mut acc, u, c * d);
            }
        }
        for &(z, n) in self.brackets.get(x, y) {
            for (u, d) in self.left_mul(z, &rest).iter() {
                accumulate(&mut acc, u, d * n);
            }
        }
        let result = Arc::new(finish(acc));
        self.left_cache
            .write()
            .unwrap()
            .insert((x, m.clone()), result.clone());
        result
    }

    /// Normal form of the product of two monomials.
    pub fn mono_mul(&self, a: &Monomial, b: &Monomial) -> Arc<IntCombination> {
        match (a.last_symbol(), b.first_symbol()) {
            (None, _) => return Arc::new(vec![(b.clone(), BigInt::one())]),
            (_, None) => return Arc::new(vec![(a.clone(), BigInt::one())]),
            (Some(x), Some(y)) if x <= y => return Arc::new(vec![(a.concat(b), BigInt::one())]),
            _ => {}
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.product_cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let mut current: IntCombination = vec![(b.clone(), BigInt::one())];
        for x in a.word().into_iter().rev() {
            let mut acc = HashMap::new();
            for (t, c) in &current {
                for (u, d) in self.left_mul(x, t).iter() {
                    accumulate(&mut acc, u, c * d);
                }
            }
            current = finish(acc);
        }
        let result = Arc::new(current);
        self.product_cache.write().unwrap().insert(key, result.clone());
        result
    }
}

/// Element of `U(g)` in PBW normal form.
#[derive(Clone)]
pub struct UeaElement<S: Scalar> {
    uea: Arc<Uea>,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> UeaElement<S> {
    pub fn zero(uea: &Arc<Uea>) -> Self {
        Self {
            uea: uea.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(uea: &Arc<Uea>) -> Self {
        Self::monomial(uea, Monomial::one(uea.dim()), S::one())
    }

    pub fn monomial(uea: &Arc<Uea>, m: Monomial, c: S) -> Self {
        let mut e = Self::zero(uea);
        e.add_term(m, c);
        e
    }

    pub fn generator(uea: &Arc<Uea>, s: BasisSymbol) -> Self {
        let m = Monomial::one(uea.dim()).with_extra(uea.symbol_index(s), 1);
        Self::monomial(uea, m, S::one())
    }

    pub fn from_lie(uea: &Arc<Uea>, x: &LieElement<S>) -> Result<Self> {
        same_system(uea.system(), x.system())?;
        let mut out = Self::zero(uea);
        for (s, c) in x.terms() {
            out = out.add(&Self::generator(uea, *s).scale(c))?;
        }
        Ok(out)
    }

    pub fn uea(&self) -> &Arc<Uea> {
        &self.uea
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, S> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree; zero for the zero element.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.uea, &other.uea) {
            Ok(())
        } else {
            same_system(self.uea.system(), other.uea.system())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.uea);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.uea);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let coeff = ca.clone() * cb.clone();
                for (m, n) in self.uea.mono_mul(a, b).iter() {
                    out.add_term(m.clone(), coeff.clone() * S::from_bigint(n));
                }
            }
        }
        Ok(out)
    }

    /// `x * self` for a single generator.
    pub fn left_mul_symbol(&self, s: BasisSymbol) -> Self {
        let x = self.uea.symbol_index(s);
        let mut out = Self::zero(&self.uea);
        for (m, c) in &self.terms {
            for (t, n) in self.uea.left_mul(x, m).iter() {
                out.add_term(t.clone(), c.clone() * S::from_bigint(n));
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }
}

impl<S: Scalar> PartialEq for UeaElement<S> {
    fn eq(&self, other: &Self) -> bool {
        self.uea.system() == other.uea.system() && self.terms == other.terms
    }
}

impl<S: Scalar> fmt::Debug for UeaElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let sys = self.uea.system();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c:?}) {}", m.display(sys)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Product of a word of generators, associated from the right.
pub fn straighten<S: Scalar>(uea: &Arc<Uea>, word: &[BasisSymbol]) -> UeaElement<S> {
    word.iter()
        .rev()
        .fold(UeaElement::one(uea), |acc, &s| acc.left_mul_symbol(s))
}

/// Product of a word of generators, associated from the left.
pub fn straighten_from_left<S: Scalar>(uea: &Arc<Uea>, word: &[BasisSymbol]) -> UeaElement<S> {
    word.iter().fold(UeaElement::one(uea), |acc, &s| {
        acc.multiply(&UeaElement::generator(uea, s))
            .expect("same algebra")
    })
}

/// `e f + f e + h^2 / 2` for the sl2-triple of a simple root, in normal form
/// `2 f e + h + h^2 / 2`.
pub fn casimir_sl2<S: Scalar>(uea: &Arc<Uea>, simple_root: &[i32]) -> Result<UeaElement<S>> {
    let sys = uea.system();
    let i = sys
        .simple_index(simple_root)
        .ok_or_else(|| Error::NotSimpleRoot(simple_root.to_vec()))?;
    let k = (sys.root_id(simple_root).unwrap() - 1) as usize;
    let e = BasisSymbol::E(k);
    let f = BasisSymbol::F(k);
    let h = BasisSymbol::H(i);
    let ef = straighten::<S>(uea, &[e, f]);
    let fe = straighten::<S>(uea, &[f, e]);
    let hh = straighten::<S>(uea, &[h, h]).scale(&S::from_ratio(1, 2));
    ef.add(&fe)?.add(&hh)
}
