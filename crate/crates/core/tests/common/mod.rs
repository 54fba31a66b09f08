#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use whittaker_core::module::{BasisKey, ModuleElement, ModulePresentation};
use whittaker_core::pbw::{Monomial, Uea, UeaElement};
use whittaker_core::{CartanType, Rational, RootSystem, Scalar};

pub type Q = Rational;

pub fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

pub fn uea(t: CartanType, rank: usize) -> Arc<Uea> {
    Uea::new(Arc::new(RootSystem::build(t, rank).unwrap()))
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Q {
    let n = rng.gen_range(-5i64..=5);
    let d = rng.gen_range(1i64..=3);
    if n == 0 {
        q(1, d)
    } else {
        q(n, d)
    }
}

pub fn random_monomial(rng: &mut ChaCha8Rng, dim: usize, max_degree: usize) -> Monomial {
    let degree = rng.gen_range(0..=max_degree);
    let mut ex = vec![0u16; dim];
    for _ in 0..degree {
        ex[rng.gen_range(0..dim)] += 1;
    }
    Monomial::from_exponents(ex)
}

/// A sum of one to three random monomials of degree at most `max_degree`.
pub fn random_element(rng: &mut ChaCha8Rng, u: &Arc<Uea>, max_degree: usize) -> UeaElement<Q> {
    let mut x = UeaElement::zero(u);
    for _ in 0..rng.gen_range(1..=3) {
        x.add_term(random_monomial(rng, u.dim(), max_degree), random_scalar(rng));
    }
    x
}

/// A random combination of basis vectors with small exponents.
pub fn random_vector(rng: &mut ChaCha8Rng, p: &ModulePresentation<Q>, max_degree: usize) -> ModuleElement<Q> {
    let sys = p.uea().system();
    let n = sys.num_positive_roots();
    let mut w = ModuleElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut ex = vec![0u16; p.uea().dim()];
        for _ in 0..rng.gen_range(0..=max_degree) {
            ex[rng.gen_range(0..n)] += 1;
        }
        for &i in p.parabolic().support() {
            ex[n + i] = rng.gen_range(0..=1);
        }
        let key = BasisKey {
            summand: rng.gen_range(0..p.num_summands()),
            monomial: Monomial::from_exponents(ex),
        };
        assert!(p.is_basis_key(&key));
        w.add_term(key, random_scalar(rng));
    }
    w
}

/// `f_k^a` times extra exponents, as a basis key of summand 0.
pub fn key(p: &ModulePresentation<Q>, exponents: &[(usize, u16)]) -> BasisKey {
    let mut ex = vec![0u16; p.uea().dim()];
    for &(i, e) in exponents {
        ex[i] = e;
    }
    BasisKey {
        summand: 0,
        monomial: Monomial::from_exponents(ex),
    }
}
