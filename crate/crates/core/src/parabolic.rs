//! Whittaker characters and the parabolic data they determine.
//!
//! A character `psi` on the nilradical is fixed by its values on the simple
//! root vectors. Its support picks out the Levi subalgebra `l` (Cartan plus the
//! root spaces in the span of the support), the centre `z` of `l` inside the
//! Cartan subalgebra, and the splitting `g = mbar + l + m`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lie::{BasisSymbol, LieElement};
use crate::linalg;
use crate::roots::RootSystem;
use crate::scalar::{primitive_integer_vector, Scalar};

/// Values of `psi` on the simple root vectors `e_{alpha_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhittakerCharacter<S: Scalar> {
    values: Vec<S>,
}

impl<S: Scalar> WhittakerCharacter<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn zero(rank: usize) -> Self {
        Self {
            values: vec![S::zero(); rank],
        }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &S {
        &self.values[i]
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// Indices of the simple roots where `psi` is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.values[i].is_zero()).collect()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// `psi(x)` for `x` in the nilradical. Non-simple root vectors map to zero.
    pub fn eval(&self, x: &LieElement<S>) -> Result<S> {
        let sys = x.system();
        let mut total = S::zero();
        for (s, c) in x.terms() {
            match s {
                BasisSymbol::E(k) => {
                    if let Some(i) = sys.simple_index(&sys.positive_roots()[*k]) {
                        total = total + c.clone() * self.values[i].clone();
                    }
                }
                other => return Err(Error::NotInNilradical(other.label(sys))),
            }
        }
        Ok(total)
    }
}

/// Levi decomposition attached to a support set of simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicData {
    system: Arc<RootSystem>,
    support: Vec<usize>,
    levi_roots: Vec<usize>,
    m_roots: Vec<usize>,
    centre_basis: Vec<Vec<BigInt>>,
    /// `gamma` restricted to `z`, for each positive root, on `centre_basis`.
    restrictions: Vec<Vec<BigInt>>,
    /// Simple roots outside the support.
    outside: Vec<usize>,
    /// `h_i = zeta_i + sum_a t_ia h_a`: zeta coordinates on `centre_basis`.
    zeta_coords: Vec<Vec<BigRational>>,
    /// The `t_ia`, one column per support root.
    support_coeffs: Vec<Vec<BigRational>>,
}

impl ParabolicData {
    /// Parabolic data for the support of a character.
    pub fn for_character<S: Scalar>(psi: &WhittakerCharacter<S>, system: Arc<RootSystem>) -> Result<Self> {
        if psi.rank() != system.rank() {
            return Err(Error::DimensionMismatch {
                expected: system.rank(),
                got: psi.rank(),
            });
        }
        Ok(Self::new(system, &psi.support()))
    }

    pub fn new(system: Arc<RootSystem>, support: &[usize]) -> Self {
        let rank = system.rank();
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        let outside: Vec<usize> = (0..rank).filter(|i| !support.contains(i)).collect();

        let in_support_span = |root: &[i32]| root.iter().enumerate().all(|(i, &c)| c == 0 || support.contains(&i));
        let (levi_roots, m_roots): (Vec<usize>, Vec<usize>) =
            (0..system.num_positive_roots()).partition(|&k| in_support_span(&system.positive_roots()[k]));

        // z = common kernel of the support roots, as h = sum_i x_i h_i
        let conditions: Vec<Vec<BigRational>> = support
            .iter()
            .map(|&j| {
                (0..rank)
                    .map(|i| BigRational::from_integer(system.cartan_matrix()[i][j].into()))
                    .collect()
            })
            .collect();
        let centre_basis: Vec<Vec<BigInt>> = linalg::nullspace(&conditions, rank)
            .iter()
            .map(|v| primitive_integer_vector(v))
            .collect();

        let restrictions = system
            .positive_roots()
            .iter()
            .map(|gamma| restrict(&system, gamma, &centre_basis))
            .collect();

        // h_i = zeta_i + sum_{a in S} t_ia h_a with b(zeta_i) = 0 for b in S:
        // sum_a t_ia b(h_a) = b(h_i), a system with the Cartan submatrix of S
        let mut zeta_coords = Vec::with_capacity(rank);
        let mut support_coeffs = Vec::with_capacity(rank);
        let sub: Vec<Vec<BigRational>> = support
            .iter()
            .map(|&b| {
                support
                    .iter()
                    .map(|&a| BigRational::from_integer(system.cartan_matrix()[a][b].into()))
                    .collect()
            })
            .collect();
        let zmat: Vec<Vec<BigRational>> = (0..rank)
            .map(|i| {
                centre_basis
                    .iter()
                    .map(|z| BigRational::from_integer(z[i].clone()))
                    .collect()
            })
            .collect();
        for i in 0..rank {
            let rhs: Vec<BigRational> = support
                .iter()
                .map(|&b| BigRational::from_integer(system.cartan_matrix()[i][b].into()))
                .collect();
            let t = if support.is_empty() {
                Vec::new()
            } else {
                linalg::solve(&sub, &rhs).expect("Cartan submatrix is invertible")
            };
            let mut zeta: Vec<BigRational> = (0..rank)
                .map(|j| BigRational::from_integer(BigInt::from((i == j) as i32)))
                .collect();
            for (&a, ta) in support.iter().zip(&t) {
                zeta[a] -= ta;
            }
            let coords = if centre_basis.is_empty() {
                Vec::new()
            } else {
                solve_overdetermined(&zmat, &zeta).expect("zeta lies in the centre")
            };
            zeta_coords.push(coords);
            support_coeffs.push(t);
        }

        Self {
            system,
            support,
            levi_roots,
            m_roots,
            centre_basis,
            restrictions,
            outside,
            zeta_coords,
            support_coeffs,
        }
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Positive roots of the Levi factor, as positive-root indices.
    pub fn levi_roots(&self) -> &[usize] {
        &self.levi_roots
    }

    pub fn m_roots(&self) -> &[usize] {
        &self.m_roots
    }

    /// Roots of `mbar` are the negatives of `m_roots`; indices are shared.
    pub fn mbar_roots(&self) -> &[usize] {
        &self.m_roots
    }

    pub fn centre_basis(&self) -> &[Vec<BigInt>] {
        &self.centre_basis
    }

    pub fn centre_dim(&self) -> usize {
        self.centre_basis.len()
    }

    pub fn levi_dim(&self) -> usize {
        self.system.rank() + 2 * self.levi_roots.len()
    }

    pub fn outside_support(&self) -> &[usize] {
        &self.outside
    }

    /// Restriction of the positive root with index `k` to `z`.
    pub fn restriction(&self, k: usize) -> &[BigInt] {
        &self.restrictions[k]
    }

    /// Restrictions of the simple roots outside the support: the generators of the order cone.
    pub fn cone_generators(&self) -> Vec<Vec<BigInt>> {
        self.outside
            .iter()
            .map(|&i| restrict(&self.system, &self.system.simple_root(i), &self.centre_basis))
            .collect()
    }

    /// Coordinates of the root `k` along the simple roots outside the support.
    pub fn outside_degree(&self, k: usize) -> Vec<u32> {
        let root = &self.system.positive_roots()[k];
        self.outside.iter().map(|&i| root[i] as u32).collect()
    }

    pub fn zeta_coords(&self, i: usize) -> &[BigRational] {
        &self.zeta_coords[i]
    }

    pub fn support_coeffs(&self, i: usize) -> &[BigRational] {
        &self.support_coeffs[i]
    }

    /// True when the support roots are pairwise orthogonal.
    pub fn support_is_orthogonal(&self) -> bool {
        self.adjacent_pair().is_none()
    }

    pub fn adjacent_pair(&self) -> Option<(usize, usize)> {
        for (x, &a) in self.support.iter().enumerate() {
            for &b in &self.support[x + 1..] {
                if self.system.cartan_matrix()[a][b] != 0 {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Whether the cone generators are linearly independent, so that the
    /// dominance relation on `z*` is antisymmetric.
    pub fn order_is_partial(&self) -> bool {
        let gens = self.cone_generators();
        if gens.is_empty() {
            return true;
        }
        let rows: Vec<Vec<BigRational>> = gens
            .iter()
            .map(|g| g.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        linalg::rank(&rows, self.centre_dim()) == gens.len()
    }
}

fn restrict(system: &RootSystem, gamma: &[i32], centre_basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    centre_basis
        .iter()
        .map(|z| {
            (0..system.rank())
                .map(|i| &z[i] * BigInt::from(system.pairing(gamma, i)))
                .sum()
        })
        .collect()
}

/// Solves `A x = b` for a consistent system with independent columns.
fn solve_overdetermined(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    let rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(-bi.clone());
            r
        })
        .collect();
    let ns = linalg::nullspace(&rows, cols + 1);
    let v = ns.into_iter().find(|v| !v[cols].is_zero())?;
    let s = v[cols].clone();
    Some(v[..cols].iter().map(|x| x / &s).collect())
}

/// A functional on `z`, given by its values on the centre basis.
#[derive(Clone, PartialEq)]
pub struct ZWeight<S: Scalar> {
    pub coordinates: Vec<S>,
}

impl<S: Scalar> ZWeight<S> {
    pub fn new(coordinates: Vec<S>) -> Self {
        Self { coordinates }
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.coordinates
                .iter()
                .zip(&other.coordinates)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coordinates.iter().map(Scalar::to_exact_string).collect()
    }
}

impl<S: Scalar> fmt::Debug for ZWeight<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// `eta <= mu` in the dominance order on `z*`: `mu - eta` is the restriction of
/// a non-negative integer combination of the simple roots outside the support.
pub fn zweight_leq<S: Scalar>(eta: &ZWeight<S>, mu: &ZWeight<S>, parabolic: &ParabolicData) -> Result<bool> {
    let dim = parabolic.centre_dim();
    for w in [eta, mu] {
        if w.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: w.dim(),
            });
        }
    }
    let diff = mu.sub(eta);
    let Some(diff) = diff
        .coordinates
        .iter()
        .map(Scalar::to_rational)
        .collect::<Option<Vec<BigRational>>>()
    else {
        return Ok(false);
    };
    if diff.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    let gens = parabolic.cone_generators();
    if gens.is_empty() {
        return Ok(false);
    }
    // diff = sum_k c_k gens[k]; with independent generators the c_k are unique
    let a: Vec<Vec<BigRational>> = (0..dim)
        .map(|row| {
            gens.iter()
                .map(|g| BigRational::from_integer(g[row].clone()))
                .collect()
        })
        .collect();
    match solve_overdetermined(&a, &diff) {
        Some(c) => Ok(c.iter().all(|x| x.is_integer() && !x.is_negative())),
        None => Ok(false),
    }
}

/// Centre-grading degree as a plain integer vector, if the weight difference
/// is an integral combination of the cone generators.
pub fn cone_coordinates(parabolic: &ParabolicData, diff: &[BigRational]) -> Option<Vec<i64>> {
    let gens = parabolic.cone_generators();
    let dim = parabolic.centre_dim();
    let a: Vec<Vec<BigRational>> = (0..dim)
        .map(|row| {
            gens.iter()
                .map(|g| BigRational::from_integer(g[row].clone()))
                .collect()
        })
        .collect();
    let c = solve_overdetermined(&a, diff)?;
    c.iter()
        .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
        .collect()
}
