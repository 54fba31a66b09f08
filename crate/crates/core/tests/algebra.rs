mod common;

use std::sync::Arc;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whittaker_core::lie::{bracket, BasisSymbol, LieElement};
use whittaker_core::pbw::{casimir_sl2, straighten, straighten_from_left, UeaElement};
use whittaker_core::{CartanType, RootSystem};

fn jacobi_holds(t: CartanType, rank: usize) -> bool {
    let sys = Arc::new(RootSystem::build(t, rank).unwrap());
    let basis: Vec<LieElement<Q>> = BasisSymbol::all(&sys)
        .into_iter()
        .map(|s| LieElement::basis(sys.clone(), s))
        .collect();
    for x in &basis {
        for y in &basis {
            let xy = bracket(x, y).unwrap();
            for z in &basis {
                let a = bracket(x, &bracket(y, z).unwrap()).unwrap();
                let b = bracket(y, &bracket(z, x).unwrap()).unwrap();
                let c = bracket(z, &xy).unwrap();
                if !a.add(&b).unwrap().add(&c).unwrap().is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn jacobi_identity_exhaustive_small_rank() {
    for (t, r) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2), (CartanType::A, 3)] {
        assert!(jacobi_holds(t, r), "{t}{r}");
    }
}

#[test]
fn jacobi_identity_rest_of_envelope() {
    for (t, r) in [
        (CartanType::C, 2),
        (CartanType::G, 2),
        (CartanType::B, 3),
        (CartanType::C, 3),
        (CartanType::A, 4),
        (CartanType::D, 4),
    ] {
        assert!(jacobi_holds(t, r), "{t}{r}");
    }
}

#[test]
fn root_strings_match_cartan_pairings() {
    for (t, r) in [(CartanType::A, 3), (CartanType::B, 3), (CartanType::C, 3), (CartanType::G, 2)] {
        let sys = RootSystem::build(t, r).unwrap();
        let n = sys.num_positive_roots() as i32;
        let ids: Vec<i32> = (1..=n).chain((1..=n).map(|i| -i)).collect();
        for &a in &ids {
            for &b in &ids {
                if a == b || a == -b {
                    continue;
                }
                let (alpha, beta) = (sys.root(a), sys.root(b));
                let (p, q) = sys.root_string(&alpha, &beta).unwrap();
                // <beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha)
                let pairing = 2 * sys.inner(&beta, &alpha) / sys.inner(&alpha, &alpha);
                assert_eq!(p as i64 - q as i64, pairing);
                match sys.structure_constant(a, b) {
                    Some(c) => {
                        assert_eq!(c.unsigned_abs(), p as u64 + 1);
                        assert_eq!(sys.structure_constant(b, a), Some(-c));
                    }
                    None => assert_eq!(q, 0),
                }
            }
        }
    }
}

#[test]
fn associativity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (t, r, count) in [(CartanType::A, 2, 120), (CartanType::B, 2, 80)] {
        let u = uea(t, r);
        for _ in 0..count {
            let a = random_element(&mut rng, &u, 4);
            let b = random_element(&mut rng, &u, 4);
            let c = random_element(&mut rng, &u, 4);
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}

#[test]
fn identity_is_neutral() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = uea(CartanType::A, 2);
    let one = UeaElement::one(&u);
    for _ in 0..20 {
        let x = random_element(&mut rng, &u, 4);
        assert_eq!(one.multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&one).unwrap(), x);
    }
}

#[test]
fn commutators_of_generators_are_brackets() {
    for (t, r) in [(CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2), (CartanType::A, 3)] {
        let u = uea(t, r);
        let sys = u.system().clone();
        for x in BasisSymbol::all(&sys) {
            for y in BasisSymbol::all(&sys) {
                let gx = UeaElement::<Q>::generator(&u, x);
                let gy = UeaElement::<Q>::generator(&u, y);
                let lie = bracket(&LieElement::basis(sys.clone(), x), &LieElement::basis(sys.clone(), y)).unwrap();
                assert_eq!(gx.commutator(&gy).unwrap(), UeaElement::from_lie(&u, &lie).unwrap());
            }
        }
    }
}

fn top_part(x: &UeaElement<Q>) -> UeaElement<Q> {
    let d = x.degree();
    let mut out = UeaElement::zero(x.uea());
    for (m, c) in x.terms() {
        if m.degree() == d {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

#[test]
fn degree_filtration_and_commutative_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = uea(CartanType::B, 2);
    for _ in 0..60 {
        let a = random_element(&mut rng, &u, 4);
        let b = random_element(&mut rng, &u, 4);
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        assert_eq!(ab.degree(), a.degree() + b.degree());
        assert_eq!(top_part(&ab), top_part(&ba));
    }
}

#[test]
fn straightening_is_independent_of_association() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (t, r) in [(CartanType::A, 2), (CartanType::G, 2), (CartanType::C, 3)] {
        let u = uea(t, r);
        let symbols = BasisSymbol::all(u.system());
        for _ in 0..40 {
            let len = rng.gen_range(0..=7);
            let word: Vec<BasisSymbol> = (0..len).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect();
            assert_eq!(straighten::<Q>(&u, &word), straighten_from_left::<Q>(&u, &word));
        }
    }
}

#[test]
fn casimirs_are_central_in_their_sl2() {
    for (t, r) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2)] {
        let u = uea(t, r);
        let sys = u.system().clone();
        for i in 0..r {
            let root = sys.simple_root(i);
            let cas = casimir_sl2::<Q>(&u, &root).unwrap();
            let k = (sys.root_id(&root).unwrap() - 1) as usize;
            for s in [BasisSymbol::E(k), BasisSymbol::F(k), BasisSymbol::H(i)] {
                let g = UeaElement::generator(&u, s);
                assert!(cas.commutator(&g).unwrap().is_zero(), "{t}{r} root {i} {s:?}");
            }
        }
    }
}

#[test]
fn sl2_casimir_is_central_in_the_whole_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = uea(CartanType::A, 1);
    let cas = casimir_sl2::<Q>(&u, &[1]).unwrap();
    for _ in 0..30 {
        let x = random_element(&mut rng, &u, 4);
        assert!(cas.commutator(&x).unwrap().is_zero());
    }
}
