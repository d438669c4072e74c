//! Field arithmetic against an independent model of `O_K / π^N`: vectors of
//! `e` coordinates in `Z / p^M` with `N = e M`, multiplied as polynomials in
//! `π` and reduced with `π^e = p`.

use proptest::prelude::*;
use siegel_core::{FieldParams, PadicScalar};

const M: u32 = 4;

#[derive(Clone, Debug, PartialEq)]
struct Model {
    p: u128,
    modulus: u128,
    c: Vec<u128>,
}

impl Model {
    fn zero(p: u64, e: u32) -> Self {
        Self { p: p as u128, modulus: (p as u128).pow(M), c: vec![0; e as usize] }
    }

    /// `Σ digits[i] π^(shift + i)` with `shift >= 0`.
    fn from_digits(p: u64, e: u32, shift: usize, digits: &[u64]) -> Self {
        let mut out = Self::zero(p, e);
        for (i, &d) in digits.iter().enumerate() {
            out = out.add(&out.monomial(d as u128, shift + i));
        }
        out
    }

    fn monomial(&self, d: u128, k: usize) -> Self {
        let e = self.c.len();
        let mut out = Self { c: vec![0; e], ..self.clone() };
        let lift = (k / e) as u32;
        if lift < M {
            out.c[k % e] = d * self.p.pow(lift) % self.modulus;
        }
        out
    }

    fn add(&self, other: &Self) -> Self {
        let c = self.c.iter().zip(&other.c).map(|(a, b)| (a + b) % self.modulus).collect();
        Self { c, ..self.clone() }
    }

    fn mul(&self, other: &Self) -> Self {
        let e = self.c.len();
        let mut c = vec![0; e];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                let t = a * b % self.modulus;
                let (k, t) = if i + j >= e { (i + j - e, t * self.p % self.modulus) } else { (i + j, t) };
                c[k] = (c[k] + t) % self.modulus;
            }
        }
        Self { c, ..self.clone() }
    }

    fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }
}

fn to_model(x: &PadicScalar) -> Model {
    let params = x.params();
    match x.valuation() {
        None => Model::zero(params.p(), params.e()),
        Some(v) => Model::from_digits(params.p(), params.e(), v as usize, &x.digits()),
    }
}

fn field(p: u64, e: u32) -> FieldParams {
    FieldParams::new(p, e, e * M).unwrap()
}

prop_compose! {
    fn unit_digits(p: u64, len: usize)(first in 1..p, rest in prop::collection::vec(0..p, len - 1)) -> Vec<u64> {
        let mut d = vec![first];
        d.extend(rest);
        d
    }
}

fn case() -> impl Strategy<Value = (u64, u32, Vec<u64>, Vec<u64>)> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..=4).prop_flat_map(|(p, e)| {
        let n = (e * M) as usize;
        (Just(p), Just(e), unit_digits(p, n), unit_digits(p, n))
    })
}

proptest! {
    #[test]
    fn product_of_units_matches_model((p, e, a, b) in case()) {
        let k = field(p, e);
        let x = PadicScalar::from_digits(k, 0, &a).unwrap();
        let y = PadicScalar::from_digits(k, 0, &b).unwrap();
        let expected = Model::from_digits(p, e, 0, &a).mul(&Model::from_digits(p, e, 0, &b));
        prop_assert_eq!(to_model(&(x * y)), expected);
    }

    #[test]
    fn sum_matches_model((p, e, a, b) in case()) {
        let k = field(p, e);
        let x = PadicScalar::from_digits(k, 0, &a).unwrap();
        let y = PadicScalar::from_digits(k, 0, &b).unwrap();
        let expected = Model::from_digits(p, e, 0, &a).add(&Model::from_digits(p, e, 0, &b));
        prop_assert_eq!(to_model(&(x + y)), expected);
    }

    #[test]
    fn inverse_of_unit_is_inverse_in_model((p, e, a, _) in case()) {
        let k = field(p, e);
        let x = PadicScalar::from_digits(k, 0, &a).unwrap();
        let inv = x.inv().unwrap();
        prop_assert_eq!(inv.valuation(), Some(0));
        prop_assert!(Model::from_digits(p, e, 0, &a).mul(&to_model(&inv)).is_one());
    }

    #[test]
    fn ratio_matches_modular_inverse(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        a in -10_000i64..10_000,
        b in 1i64..10_000,
    ) {
        prop_assume!(!(b as u64).is_multiple_of(p));
        let k = field(p, 1);
        let x = PadicScalar::from_ratio(k, a, b).unwrap();
        let modulus = (p as i128).pow(M);
        let inv = modular_inverse(b as i128, modulus);
        let expected = (a as i128 * inv).rem_euclid(modulus) as u128;
        prop_assert_eq!(to_model(&x).c[0], expected);
    }
}

fn modular_inverse(b: i128, m: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (b.rem_euclid(m), m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

#[test]
fn uniformizer_power_e_is_p() {
    for (p, e) in [(2, 3), (3, 2), (5, 4)] {
        let k = field(p, e);
        let lhs = PadicScalar::pi(k).pow(e as i64).unwrap();
        assert_eq!(lhs, PadicScalar::from_i64(k, p as i64));
        assert_eq!(lhs.valuation(), Some(e as i64));
    }
}
