//! Algebraic invariants over random inputs: determinants against the
//! permutation expansion over `ℤ`, closure of the symplectic group, Euclidean
//! division and the product rule for rational functions.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use siegel_core::sample::sp_integral;
use siegel_core::symplectic::is_symplectic;
use siegel_core::{Error, FieldParams, KMatrix, PadicScalar, Poly, RationalFunction};

const PRECISION: u32 = 24;

fn primes() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn field(p: u64, e: u32) -> FieldParams {
    FieldParams::new(p, e, PRECISION).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for at in 0..n {
            let mut s = rest.clone();
            s.insert(at, n - 1);
            out.push(s);
        }
    }
    out
}

fn sign(perm: &[usize]) -> i128 {
    let inversions = (0..perm.len()).flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn leibniz(n: usize, a: &[i64]) -> i128 {
    permutations(n).iter().map(|s| sign(s) * (0..n).map(|i| a[i * n + s[i]] as i128).product::<i128>()).sum()
}

fn square() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(-20i64..20, n * n)))
}

proptest! {
    #[test]
    fn determinant_matches_permutation_expansion(p in primes(), e in 1u32..=3, (n, a) in square()) {
        let k = field(p, e);
        let m = KMatrix::from_i64(k, n, n, &a).unwrap();
        let expected = leibniz(n, &a);
        let det = m.det();
        if expected == 0 {
            prop_assert!(det.map_or(true, |d| d.is_zero()));
        } else {
            prop_assert_eq!(det.unwrap(), PadicScalar::from_i64(k, expected as i64));
        }
    }

    #[test]
    fn inverse_is_two_sided(p in primes(), e in 1u32..=3, (n, a) in square()) {
        let det = leibniz(n, &a);
        prop_assume!(det != 0);
        let k = field(p, e);
        let m = KMatrix::from_i64(k, n, n, &a).unwrap();
        // A determinant deep in the maximal ideal may vanish at the working
        // precision or leave too few digits to certify the inverse; a unit
        // determinant never does.
        let inv = match m.inverse() {
            Ok(inv) => inv,
            Err(Error::PrecisionLoss(_) | Error::Singular) if det % p as i128 == 0 => return Ok(()),
            Err(err) => return Err(TestCaseError::fail(format!("{err}"))),
        };
        prop_assert_eq!(m.mul(&inv).unwrap(), KMatrix::identity(k, n));
        prop_assert_eq!(inv.mul(&m).unwrap(), KMatrix::identity(k, n));
    }

    #[test]
    fn valuation_is_additive(
        p in primes(),
        e in 1u32..=4,
        (va, vb) in (-6i64..6, -6i64..6),
        (a, b) in (1u64..1000, 1u64..1000),
    ) {
        let k = field(p, e);
        let x = PadicScalar::from_i64(k, a as i64) * PadicScalar::pi_pow(k, va);
        let y = PadicScalar::from_i64(k, b as i64) * PadicScalar::pi_pow(k, vb);
        let product = x * y;
        prop_assert_eq!(product.valuation(), Some(x.valuation().unwrap() + y.valuation().unwrap()));
        prop_assert_eq!(product.abs(), x.abs().mul(&y.abs()));
    }

    #[test]
    fn symplectic_group_is_closed(p in primes(), e in 1u32..=2, n in 1usize..=2, seed in any::<u64>()) {
        let k = field(p, e);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sp_integral(&mut rng, k, n, 4);
        let h = sp_integral(&mut rng, k, n, 4);
        let gh = g.mul(&h).unwrap();
        // Entries divisible by a high power of p leave the relations known to
        // fewer digits than the certification floor; that is a refusal.
        match is_symplectic(gh.matrix()) {
            Ok(report) => prop_assert!(report.is_symplectic()),
            Err(err) => prop_assert!(matches!(err, Error::PrecisionLoss(_)), "{}", err),
        }
        let unit = gh.mul(&gh.inverse()).unwrap();
        prop_assert_eq!(unit.matrix(), &KMatrix::identity(k, 2 * n));
        prop_assert_eq!(gh.matrix().det().unwrap(), PadicScalar::one(k));
    }

    #[test]
    fn division_reassembles(
        p in primes(),
        f in prop::collection::vec(-50i64..50, 1..8),
        mut d in prop::collection::vec(-50i64..50, 1..4),
    ) {
        let k = field(p, 1);
        d.push(1);
        let (f, d) = (Poly::from_i64s(k, &f), Poly::from_i64s(k, &d));
        let (q, r) = f.div_rem(&d).unwrap();
        prop_assert!(r.degree().is_none_or(|deg| deg < d.degree().unwrap()));
        let back = q.mul(&d).add(&r);
        prop_assert_eq!(back.coeffs(), f.coeffs());
    }

    #[test]
    fn product_rule_holds_pointwise(
        p in primes(),
        (f, g) in (prop::collection::vec(-9i64..9, 1..4), prop::collection::vec(-9i64..9, 1..4)),
        (ra, rb) in (1i64..=4, 1i64..=4),
        (qa, qb) in (-3i64..3, -3i64..3),
        z in -20i64..20,
    ) {
        let k = field(p, 1);
        // Poles at unit distance from the evaluation point.
        let q = p as i64;
        let (a, b) = (z - (ra % q).max(1) - q * qa, z - (rb % q).max(1) - q * qb);
        let pole = |c: i64| RationalFunction::linear_power(PadicScalar::from_i64(k, c), -1);
        let f = RationalFunction::from_poly(Poly::from_i64s(k, &f)).mul(&pole(a));
        let g = RationalFunction::from_poly(Poly::from_i64s(k, &g)).mul(&pole(b).mul(&pole(b)));
        let at = PadicScalar::from_i64(k, z);
        let lhs = f.mul(&g).derivative().eval(&at).unwrap();
        let rhs = f.derivative().eval(&at).unwrap() * g.eval(&at).unwrap() + f.eval(&at).unwrap() * g.derivative().eval(&at).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
