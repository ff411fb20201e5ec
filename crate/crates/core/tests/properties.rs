//! Algebraic laws checked on every fixture with random inputs.

mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerodiv::algebra::AlgebraHandle;
use zerodiv::ezd::{is_exact_pair, is_exact_zero_divisor};
use zerodiv::family::theta;
use zerodiv::field::PrimeField;
use zerodiv::linalg::Matrix;
use zerodiv::module::{verify_totally_acyclic_periodic, PresentedModule, SearchOptions};
use zerodiv::{Element, GradedAlgebra};

use common::{element_from, load_prime, scramble, unit_from, PRIME_FIXTURES};

type Alg = Arc<GradedAlgebra<PrimeField>>;

fn fixtures() -> &'static [Alg] {
    static CELL: OnceLock<Vec<Alg>> = OnceLock::new();
    CELL.get_or_init(|| PRIME_FIXTURES.iter().map(|&(name, p)| load_prime(name, p)).collect())
}

/// Known exact pairs `(w, x)`, one per fixture that has any.
fn pairs() -> &'static [(Alg, &'static str, &'static str)] {
    static CELL: OnceLock<Vec<(Alg, &'static str, &'static str)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let table: [(&str, &str, &str); 7] = [
            ("ring8_f5.alg", "3*s + t - 2*u + 4*v", "s + t + 2*u - v"),
            ("ring8_f7.alg", "3*s + t - 2*u + 4*v", "s + t + 2*u - v"),
            ("ex72_e3_f5.alg", "x1", "x1"),
            ("ex72_e4_f5.alg", "x1", "x1"),
            ("ci2_f2.alg", "x", "x"),
            ("ci2_f3.alg", "x + y", "x - y"),
            ("ci2_f3.alg", "y", "y"),
        ];
        table
            .iter()
            .map(|&(name, w, x)| {
                let i = PRIME_FIXTURES.iter().position(|&(n, _)| n == name).unwrap();
                (fixtures()[i].clone(), w, x)
            })
            .collect()
    })
}

fn raw_vec() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 24)
}

fn rng_raw(rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..24).map(|_| rng.random()).collect()
}

#[test]
fn length_is_additive_on_every_fixture() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for (alg, (name, _)) in fixtures().iter().zip(PRIME_FIXTURES) {
        for _ in 0..500 {
            let x = element_from(alg, &rng_raw(&mut rng), false);
            assert_eq!(
                x.principal_ideal().dim() + x.annihilator().dim(),
                alg.dim(),
                "{name}: x = {x}"
            );
        }
    }
}

/// An element `z` in `ann(y) ∩ m`.
fn annihilating<F: zerodiv::Field>(y: &Element<F>, raw: &[u64]) -> Element<F> {
    let alg = y.algebra();
    let f = alg.field();
    let q = f.size().unwrap();
    let mut z = alg.zero();
    for (b, r) in y.annihilator().basis().iter().zip(raw) {
        z = z.add_scaled(&f.element(r % q), b).unwrap();
    }
    z.try_sub(&z.component(0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_pairs_are_symmetric(i in 0..PRIME_FIXTURES.len(), raw in raw_vec(), raw2 in raw_vec()) {
        let alg = &fixtures()[i];
        let x = element_from(alg, &raw, true);
        let w = element_from(alg, &raw2, true);
        prop_assume!(!x.is_zero() && !w.is_zero());
        prop_assert_eq!(is_exact_pair(&w, &x).unwrap(), is_exact_pair(&x, &w).unwrap());
        if let Some(cert) = is_exact_zero_divisor(&x).unwrap().certificate() {
            prop_assert!(is_exact_pair(&cert.w, &x).unwrap());
            let back = is_exact_zero_divisor(&cert.w).unwrap();
            prop_assert!(back.is_exact());
            prop_assert!(is_exact_pair(&back.certificate().unwrap().w, &cert.w).unwrap());
        }
    }

    #[test]
    fn exactness_is_invariant_under_units(i in 0..PRIME_FIXTURES.len(), raw in raw_vec(), u in raw_vec()) {
        let alg = &fixtures()[i];
        let x = element_from(alg, &raw, true);
        prop_assume!(!x.is_zero());
        let ux = unit_from(alg, &u).multiply(&x).unwrap();
        prop_assert_eq!(is_exact_zero_divisor(&x).unwrap().is_exact(), is_exact_zero_divisor(&ux).unwrap().is_exact());
    }

    #[test]
    fn syzygy_of_a_family_member_is_the_partner_member(k in 0..7usize, raw in raw_vec(), raw2 in raw_vec(), n in 1..=4usize) {
        let (alg, w, x) = &pairs()[k];
        let w = alg.parse_element(w).unwrap();
        let x = alg.parse_element(x).unwrap();
        let y = element_from(alg, &raw, true);
        let z = annihilating(&y, &raw2);
        prop_assert!(y.multiply(&z).unwrap().is_zero());
        let t = theta(n, &w, &x, &y, &z).unwrap();
        let partner = theta(n, &x, &w, &y.neg(), &z.neg()).unwrap();
        prop_assert!(verify_totally_acyclic_periodic(&t, &partner).unwrap().passed());
        let m = PresentedModule::new(alg, &t).unwrap();
        let expected = PresentedModule::new(alg, &partner).unwrap();
        let (syz, _) = m.syzygy().unwrap();
        let verdict = syz.is_isomorphic(&expected, &SearchOptions::default());
        // the only acceptable non-answer is an explicit undecided verdict
        match verdict {
            Ok(v) => prop_assert!(v.isomorphic),
            Err(e) => prop_assert!(e.is_undecided(), "{e}"),
        }
    }

    #[test]
    fn acyclicity_certificates_are_self_dual(k in 0..7usize, raw in raw_vec(), raw2 in raw_vec(), n in 1..=3usize, perturb in any::<bool>()) {
        let (alg, w, x) = &pairs()[k];
        let w = alg.parse_element(w).unwrap();
        let mut x = alg.parse_element(x).unwrap();
        if perturb {
            x = x.try_add(&element_from(alg, &raw2, true)).unwrap();
        }
        let y = element_from(alg, &raw, true);
        let z = annihilating(&y, &raw2);
        let phi = theta(n, &w, &x, &y, &z).unwrap();
        let psi = theta(n, &x, &w, &y.neg(), &z.neg()).unwrap();
        let forward = verify_totally_acyclic_periodic(&phi, &psi).unwrap().passed();
        let dual = verify_totally_acyclic_periodic(&psi.transpose(), &phi.transpose()).unwrap().passed();
        prop_assert_eq!(forward, dual);
    }

    #[test]
    fn random_one_by_one_complexes_are_self_dual(i in 0..PRIME_FIXTURES.len(), raw in raw_vec(), raw2 in raw_vec()) {
        let alg = &fixtures()[i];
        let a = Matrix::from_rows(1, vec![vec![element_from(alg, &raw, true)]]);
        let b = Matrix::from_rows(1, vec![vec![element_from(alg, &raw2, true)]]);
        let forward = verify_totally_acyclic_periodic(&a, &b).unwrap().passed();
        let dual = verify_totally_acyclic_periodic(&b.transpose(), &a.transpose()).unwrap().passed();
        prop_assert_eq!(forward, dual);
    }
}

fn iso(a: &PresentedModule<PrimeField>, b: &PresentedModule<PrimeField>) -> Option<bool> {
    match a.is_isomorphic(b, &SearchOptions::default()) {
        Ok(v) => Some(v.isomorphic),
        Err(e) if e.is_undecided() => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn isomorphism_is_an_equivalence(k in 0..7usize, raw in raw_vec(), s1 in raw_vec(), s2 in raw_vec(), other in raw_vec(), n in 1..=2usize) {
        let (alg, w, x) = &pairs()[k];
        let w = alg.parse_element(w).unwrap();
        let x = alg.parse_element(x).unwrap();
        let y = element_from(alg, &raw, true);
        let z = annihilating(&y, &other);
        let t = theta(n, &w, &x, &y, &z).unwrap();
        let a = PresentedModule::new(alg, &t).unwrap();
        let b = PresentedModule::new(alg, &scramble(alg, &t, &s1)).unwrap();
        let c = PresentedModule::new(alg, &scramble(alg, &t, &s2)).unwrap();
        let d = PresentedModule::new(alg, &Matrix::from_rows(1, vec![vec![element_from(alg, &other, true)]])).unwrap();

        prop_assert_eq!(iso(&a, &a), Some(true));
        prop_assert_eq!(iso(&a, &b), Some(true));
        prop_assert_eq!(iso(&b, &c), Some(true));
        prop_assert_eq!(iso(&a, &c), Some(true));
        let (ad, da) = (iso(&a, &d), iso(&d, &a));
        if let (Some(p), Some(q)) = (ad, da) {
            prop_assert_eq!(p, q);
        }
        if let (Some(true), Some(bd)) = (ad, iso(&b, &d)) {
            prop_assert!(bd);
        }
    }
}
