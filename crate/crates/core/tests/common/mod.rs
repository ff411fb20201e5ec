#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use zerodiv::field::{ExtensionField, PrimeField};
use zerodiv::parser::parse_presentation;
use zerodiv::{Field, GradedAlgebra};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_with<F: Field>(field: F, name: &str) -> Arc<GradedAlgebra<F>> {
    let src = parse_presentation(&fixture_text(name)).unwrap();
    assert_eq!(src.field, field.spec(), "{name} declares a different field");
    GradedAlgebra::build(field, &src).unwrap()
}

pub fn load_prime(name: &str, p: u64) -> Arc<GradedAlgebra<PrimeField>> {
    load_with(PrimeField::new(p).unwrap(), name)
}

pub fn load_gf9() -> Arc<GradedAlgebra<ExtensionField>> {
    load_with(ExtensionField::new(3, vec![1, 0, 1], "a").unwrap(), "ring8_gf9.alg")
}

/// Every fixture over a prime field, with its characteristic.
pub const PRIME_FIXTURES: &[(&str, u64)] = &[
    ("ring8_f2.alg", 2),
    ("ring8_f3.alg", 3),
    ("ring8_f5.alg", 5),
    ("ring8_f7.alg", 7),
    ("ex72_e3_f5.alg", 5),
    ("ex72_e4_f5.alg", 5),
    ("ci2_f2.alg", 2),
    ("ci2_f3.alg", 3),
    ("xy3_f5.alg", 5),
    ("m4_f3.alg", 3),
];

use zerodiv::algebra::AlgebraHandle;
use zerodiv::linalg::Matrix;
use zerodiv::Element;

/// The element whose i-th coordinate is `field.element(raw[i] mod q)`;
/// with `in_m` the constant term is dropped.
pub fn element_from<F: Field>(alg: &Arc<GradedAlgebra<F>>, raw: &[u64], in_m: bool) -> Element<F> {
    let f = alg.field();
    let q = f.size().expect("finite field");
    let coords = (0..alg.dim())
        .map(|i| {
            if in_m && i == 0 {
                f.zero()
            } else {
                f.element(raw.get(i).copied().unwrap_or(0) % q)
            }
        })
        .collect();
    alg.element(coords).unwrap()
}

/// A random unit: nonzero constant plus an element of m.
pub fn unit_from<F: Field>(alg: &Arc<GradedAlgebra<F>>, raw: &[u64]) -> Element<F> {
    let f = alg.field();
    let q = f.size().expect("finite field");
    let c = f.element(1 + raw.first().copied().unwrap_or(0) % (q - 1));
    alg.one().scale(&c).try_add(&element_from(alg, &raw[1.min(raw.len())..], true)).unwrap()
}

/// `P · A · Q` for invertible `P`, `Q` built from unitriangular factors and
/// unit diagonals with entries drawn from `raw`.
pub fn scramble<F: Field>(alg: &Arc<GradedAlgebra<F>>, a: &Matrix<Element<F>>, raw: &[u64]) -> Matrix<Element<F>> {
    let mut chunks = raw.chunks(alg.dim().max(1)).cycle();
    let mut invertible = |n: usize| {
        let mut lower = Matrix::from_fn(n, n, |i, j| if i == j { alg.one() } else { alg.zero() });
        let mut upper = lower.clone();
        for i in 0..n {
            for j in 0..n {
                let c = chunks.next().unwrap();
                if i > j {
                    lower.set(i, j, element_from(alg, c, false));
                } else if i < j {
                    upper.set(i, j, element_from(alg, c, false));
                } else {
                    upper.set(i, i, unit_from(alg, c));
                }
            }
        }
        zerodiv::module::matrix_product(&lower, &upper).unwrap()
    };
    let p = invertible(a.rows());
    let q = invertible(a.cols());
    let pa = zerodiv::module::matrix_product(&p, a).unwrap();
    zerodiv::module::matrix_product(&pa, &q).unwrap()
}
