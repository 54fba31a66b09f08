//! Root systems and Chevalley structure constants.
//!
//! Roots are integer vectors in the basis of simple roots. The Cartan matrix
//! entry `a[i][j]` is `<alpha_j, alpha_i^vee>`, i.e. the value of `alpha_j` on
//! the simple coroot `h_i`.
//!
//! Positive roots are ordered by height, then by descending lexicographic
//! order of their coordinates, so the simple roots come first in their natural
//! order. Structure constants follow the extraspecial-pair construction: for
//! every non-simple positive root `xi`, the pair `(a, xi - a)` with `a` minimal
//! in that order gets `N = +(p + 1)`, and everything else is forced by the
//! Chevalley relations with `N_{-a,-b} = -N_{a,b}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G,
}

impl CartanType {
    pub fn parse(label: &str) -> Option<Self> {
        match label.trim() {
            "A" | "a" => Some(Self::A),
            "B" | "b" => Some(Self::B),
            "C" | "c" => Some(Self::C),
            "D" | "d" => Some(Self::D),
            "G" | "g" => Some(Self::G),
            _ => None,
        }
    }

    fn supports(self, rank: usize) -> bool {
        match self {
            Self::A => (1..=4).contains(&rank),
            Self::B | Self::C => (2..=4).contains(&rank),
            Self::D => rank == 4,
            Self::G => rank == 2,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::D => "D",
            Self::G => "G",
        };
        f.write_str(s)
    }
}

/// Signed 1-based root label: `+k` is the k-th positive root, `-k` its negative.
pub type RootId = i32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    cartan_matrix: Vec<Vec<i32>>,
    /// `(alpha_i, alpha_i) / 2` for each simple root.
    half_lengths: Vec<i64>,
    positive_roots: Vec<Vec<i32>>,
    structure_constants: BTreeMap<(RootId, RootId), i64>,
    lookup: HashMap<Vec<i32>, RootId>,
}

fn cartan_matrix(cartan_type: CartanType, rank: usize) -> Vec<Vec<i32>> {
    let mut a = vec![vec![0; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    match cartan_type {
        CartanType::A | CartanType::B | CartanType::C => {
            for i in 0..rank.saturating_sub(1) {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            let n = rank - 1;
            match cartan_type {
                // alpha_n short
                CartanType::B => a[n][n - 1] = -2,
                // alpha_n long
                CartanType::C => a[n - 1][n] = -2,
                _ => {}
            }
        }
        CartanType::D => {
            // Bourbaki labelling: 1 - 2 - 3 and 2 - 4
            for (i, j) in [(0, 1), (1, 2), (1, 3)] {
                a[i][j] = -1;
                a[j][i] = -1;
            }
        }
        CartanType::G => {
            // alpha_1 short
            a[0][1] = -3;
            a[1][0] = -1;
        }
    }
    a
}

/// Integers `d_i` with `d_i a_ij = d_j a_ji`, smallest one equal to 1.
fn symmetrizer(a: &[Vec<i32>]) -> Vec<i64> {
    let n = a.len();
    let mut d: Vec<Option<Rational64>> = vec![None; n];
    d[0] = Some(Rational64::from_integer(1));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                let di = d[i].unwrap();
                d[j] = Some(di * Rational64::from_integer(a[i][j] as i64) / Rational64::from_integer(a[j][i] as i64));
                stack.push(j);
            }
        }
    }
    let d: Vec<Rational64> = d.into_iter().map(|x| x.expect("Dynkin diagram is connected")).collect();
    let lcm = d.iter().fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()));
    let ints: Vec<i64> = d.iter().map(|q| (q * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    ints.into_iter().map(|x| x / g).collect()
}

fn height(root: &[i32]) -> i32 {
    root.iter().sum()
}

fn root_order(a: &[i32], b: &[i32]) -> std::cmp::Ordering {
    height(a).cmp(&height(b)).then_with(|| b.cmp(a))
}

impl RootSystem {
    pub fn build(cartan_type: CartanType, rank: usize) -> Result<Self> {
        if !cartan_type.supports(rank) {
            return Err(Error::UnsupportedType {
                label: cartan_type.to_string(),
                rank,
            });
        }
        let cartan_matrix = cartan_matrix(cartan_type, rank);
        let half_lengths = symmetrizer(&cartan_matrix);
        let positive_roots = enumerate_positive_roots(&cartan_matrix);
        let mut lookup = HashMap::new();
        for (k, r) in positive_roots.iter().enumerate() {
            lookup.insert(r.clone(), k as RootId + 1);
            lookup.insert(r.iter().map(|x| -x).collect(), -(k as RootId + 1));
        }
        let mut system = RootSystem {
            cartan_type,
            rank,
            cartan_matrix,
            half_lengths,
            positive_roots,
            structure_constants: BTreeMap::new(),
            lookup,
        };
        system.structure_constants = StructureConstantBuilder::new(&system).build_all();
        Ok(system)
    }

    /// Parses a label such as `"A"` and builds.
    pub fn from_label(label: &str, rank: usize) -> Result<Self> {
        let cartan_type = CartanType::parse(label).ok_or_else(|| Error::UnsupportedType {
            label: label.to_string(),
            rank,
        })?;
        Self::build(cartan_type, rank)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan_matrix
    }

    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Dimension of the Lie algebra.
    pub fn dimension(&self) -> usize {
        2 * self.positive_roots.len() + self.rank
    }

    pub fn structure_constants(&self) -> &BTreeMap<(RootId, RootId), i64> {
        &self.structure_constants
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.cartan_type, self.rank)
    }

    pub fn simple_root(&self, i: usize) -> Vec<i32> {
        let mut r = vec![0; self.rank];
        r[i] = 1;
        r
    }

    pub fn simple_index(&self, root: &[i32]) -> Option<usize> {
        if root.len() != self.rank || height(root) != 1 || root.iter().any(|&x| x < 0) {
            return None;
        }
        root.iter().position(|&x| x == 1)
    }

    pub fn root_id(&self, root: &[i32]) -> Option<RootId> {
        self.lookup.get(root).copied()
    }

    pub fn is_root(&self, root: &[i32]) -> bool {
        self.lookup.contains_key(root)
    }

    pub fn root(&self, id: RootId) -> Vec<i32> {
        let r = &self.positive_roots[id.unsigned_abs() as usize - 1];
        if id > 0 {
            r.clone()
        } else {
            r.iter().map(|x| -x).collect()
        }
    }

    /// `<beta, alpha_i^vee>`, the value of `beta` on the simple coroot `h_i`.
    pub fn pairing(&self, beta: &[i32], i: usize) -> i32 {
        beta.iter().zip(&self.cartan_matrix[i]).map(|(b, a)| b * a).sum()
    }

    /// Invariant form normalised so that `(alpha_i, alpha_i) = 2 d_i`.
    pub fn inner(&self, a: &[i32], b: &[i32]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] as i64 * b[j] as i64 * self.half_lengths[i] * self.cartan_matrix[i][j] as i64;
            }
        }
        s
    }

    /// The coroot `h_gamma` in the basis of simple coroots `h_i`.
    pub fn coroot(&self, gamma: &[i32]) -> Vec<i64> {
        let half = self.inner(gamma, gamma) / 2;
        gamma
            .iter()
            .zip(&self.half_lengths)
            .map(|(&g, &d)| {
                let num = g as i64 * d;
                debug_assert_eq!(num % half, 0);
                num / half
            })
            .collect()
    }

    /// `(p, q)` for the `alpha`-string through `beta`.
    pub fn root_string(&self, alpha: &[i32], beta: &[i32]) -> Result<(usize, usize)> {
        for r in [alpha, beta] {
            if !self.is_root(r) {
                return Err(Error::NotARoot(r.to_vec()));
            }
        }
        let neg: Vec<i32> = alpha.iter().map(|x| -x).collect();
        if alpha == beta || neg == beta {
            return Err(Error::ProportionalRoots(alpha.to_vec(), beta.to_vec()));
        }
        Ok(self.string_lengths(alpha, beta))
    }

    fn string_lengths(&self, alpha: &[i32], beta: &[i32]) -> (usize, usize) {
        let step = |sign: i32| {
            let mut k = 0usize;
            loop {
                let next: Vec<i32> = beta
                    .iter()
                    .zip(alpha)
                    .map(|(b, a)| b + sign * (k as i32 + 1) * a)
                    .collect();
                if self.is_root(&next) {
                    k += 1;
                } else {
                    return k;
                }
            }
        };
        (step(-1), step(1))
    }

    /// `N_{a,b}` if `a + b` is a root.
    pub fn structure_constant(&self, a: RootId, b: RootId) -> Option<i64> {
        self.structure_constants.get(&(a, b)).copied()
    }

    /// Stable digest of the type, Cartan matrix and structure constants.
    pub fn fingerprint(&self) -> String {
        let doc = self.to_document();
        let bytes = serde_json::to_vec(&doc).expect("root system serialises");
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!("{}-{}", self.label(), hex)
    }

    pub fn to_document(&self) -> RootSystemDocument {
        RootSystemDocument {
            schema_version: ROOTS_SCHEMA_VERSION,
            cartan_type: self.cartan_type.to_string(),
            rank: self.rank,
            cartan_matrix: self.cartan_matrix.clone(),
            positive_roots: self.positive_roots.clone(),
            structure_constants: self
                .structure_constants
                .iter()
                .map(|(&(a, b), &n)| [a as i64, b as i64, n])
                .collect(),
        }
    }
}

pub const ROOTS_SCHEMA_VERSION: u32 = 1;

/// JSON form of a root system. Structure constants are triples
/// `[a, b, N]` with signed 1-based root labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemDocument {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i32>>,
    pub positive_roots: Vec<Vec<i32>>,
    pub structure_constants: Vec<[i64; 3]>,
}

fn enumerate_positive_roots(a: &[Vec<i32>]) -> Vec<Vec<i32>> {
    let rank = a.len();
    let pairing = |beta: &[i32], i: usize| -> i32 { beta.iter().zip(&a[i]).map(|(b, c)| b * c).sum() };
    let mut roots: Vec<Vec<i32>> = (0..rank)
        .map(|i| {
            let mut r = vec![0; rank];
            r[i] = 1;
            r
        })
        .collect();
    let mut known: std::collections::HashSet<Vec<i32>> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..rank {
                // p: how far the alpha_i-string extends below beta
                let mut p = 0;
                loop {
                    let mut down = beta.clone();
                    down[i] -= p + 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pairing(beta, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by(|x, y| root_order(x, y));
    roots
}

struct StructureConstantBuilder<'a> {
    system: &'a RootSystem,
    /// `N_{a,b}` for special pairs of positive roots, `a` before `b`.
    special: HashMap<(Vec<i32>, Vec<i32>), i64>,
}

impl<'a> StructureConstantBuilder<'a> {
    fn new(system: &'a RootSystem) -> Self {
        Self {
            system,
            special: HashMap::new(),
        }
    }

    fn position(&self, r: &[i32]) -> usize {
        self.system.root_id(r).expect("positive root") as usize
    }

    fn is_positive(r: &[i32]) -> bool {
        r.iter().any(|&x| x > 0)
    }

    fn build_all(mut self) -> BTreeMap<(RootId, RootId), i64> {
        let sys = self.system;
        let positives = sys.positive_roots.clone();
        // special pairs, in increasing height of the sum
        for xi in positives.iter().filter(|r| height(r) > 1) {
            let decompositions: Vec<(Vec<i32>, Vec<i32>)> = positives
                .iter()
                .filter_map(|a| {
                    let b: Vec<i32> = xi.iter().zip(a).map(|(x, y)| x - y).collect();
                    (Self::is_positive(&b) && sys.is_root(&b) && self.position(a) < self.position(&b))
                        .then(|| (a.clone(), b))
                })
                .collect();
            let (a0, b0) = decompositions[0].clone();
            let (p0, _) = sys.string_lengths(&a0, &b0);
            self.special.insert((a0.clone(), b0.clone()), p0 as i64 + 1);
            for (a, b) in decompositions.iter().skip(1) {
                let n = self.from_extraspecial(a, b, &a0, &b0, xi);
                self.special.insert((a.clone(), b.clone()), n);
            }
        }

        let mut table = BTreeMap::new();
        let n = positives.len() as RootId;
        let ids: Vec<RootId> = (1..=n).chain((1..=n).map(|k| -k)).collect();
        for &a in &ids {
            for &b in &ids {
                let ra = sys.root(a);
                let rb = sys.root(b);
                let sum: Vec<i32> = ra.iter().zip(&rb).map(|(x, y)| x + y).collect();
                if sys.is_root(&sum) {
                    table.insert((a, b), self.n(&ra, &rb));
                }
            }
        }
        table
    }

    fn neg(r: &[i32]) -> Vec<i32> {
        r.iter().map(|x| -x).collect()
    }

    fn add(a: &[i32], b: &[i32]) -> Vec<i32> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    /// `N_{a,b}` for arbitrary roots with `a + b` a root; zero otherwise.
    fn n(&self, a: &[i32], b: &[i32]) -> i64 {
        let sys = self.system;
        let sum = Self::add(a, b);
        if !sys.is_root(&sum) {
            return 0;
        }
        let (pa, pb) = (Self::is_positive(a), Self::is_positive(b));
        match (pa, pb) {
            (true, true) => {
                if self.position(a) < self.position(b) {
                    self.special[&(a.to_vec(), b.to_vec())]
                } else {
                    -self.special[&(b.to_vec(), a.to_vec())]
                }
            }
            (false, false) => -self.n(&Self::neg(a), &Self::neg(b)),
            (false, true) => -self.n(b, a),
            (true, false) => {
                // a + b + c = 0 gives N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
                let c = Self::neg(&sum);
                let cc = sys.inner(&c, &c);
                let value = if Self::is_positive(&sum) {
                    Rational64::new(cc * self.n(b, &c), sys.inner(a, a))
                } else {
                    Rational64::new(cc * self.n(&c, a), sys.inner(b, b))
                };
                assert!(value.is_integer(), "non-integral structure constant");
                value.to_integer()
            }
        }
    }

    /// Determines `N_{a,b}` for a special pair from the extraspecial pair of
    /// the same sum via the four-root relation.
    fn from_extraspecial(&self, a: &[i32], b: &[i32], a0: &[i32], b0: &[i32], xi: &[i32]) -> i64 {
        let sys = self.system;
        let (na0, nb0) = (Self::neg(a0), Self::neg(b0));
        let term = |x: &[i32], y: &[i32], z: &[i32], w: &[i32]| -> Rational64 {
            let s = Self::add(x, y);
            if !sys.is_root(&s) {
                return Rational64::from_integer(0);
            }
            Rational64::new(self.n(x, y) * self.n(z, w), sys.inner(&s, &s))
        };
        // N_{a,b} N_{-a0,-b0} / (xi,xi) + N_{b,-a0} N_{a,-b0} / (b-a0)^2 + N_{-a0,a} N_{b,-b0} / (a-a0)^2 = 0
        let rest = term(b, &na0, a, &nb0) + term(&na0, a, b, &nb0);
        let n_neg = -self.special[&(a0.to_vec(), b0.to_vec())];
        let value = -rest * Rational64::from_integer(sys.inner(xi, xi)) / Rational64::from_integer(n_neg);
        assert!(value.is_integer(), "non-integral structure constant");
        value.to_integer()
    }
}
