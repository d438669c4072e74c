//! Seeded generators for group elements, pairs, points and rational
//! functions. Group elements are products of bounded generators so that
//! valuations stay small.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldParams, PadicScalar};
use crate::linalg::KMatrix;
use crate::poly::Poly;
use crate::rational::RationalFunction;
use crate::siegel::SiegelPoint;
use crate::symplectic::{symmetric_basis, PPair, SymplecticElement};

/// Integer in `[0, p^digits)`.
pub fn integer<R: Rng + ?Sized>(rng: &mut R, p: u64, digits: u32) -> i64 {
    rng.gen_range(0..p.pow(digits) as i64)
}

/// Integer prime to `p` in `(-p^digits, p^digits)`.
pub fn unit_integer<R: Rng + ?Sized>(rng: &mut R, p: u64, digits: u32) -> i64 {
    loop {
        let bound = p.pow(digits.max(1)) as i64;
        let x = rng.gen_range(-bound + 1..bound);
        if x.rem_euclid(p as i64) != 0 {
            return x;
        }
    }
}

/// Element of `𝔬_K` with `digits` random `π`-adic digits.
pub fn integral_scalar<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, digits: usize) -> PadicScalar {
    let ds: Vec<u64> = (0..digits.max(1)).map(|_| rng.gen_range(0..params.p())).collect();
    PadicScalar::from_digits(params, 0, &ds).expect("digits below p")
}

/// Symmetric matrix over `ℤ` with entries in `[0, p^digits)`.
pub fn symmetric_integral<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, n: usize, digits: u32) -> KMatrix {
    let mut z = KMatrix::zeros(params, n, n);
    for (i, j) in symmetric_basis(n) {
        let x = PadicScalar::from_i64(params, integer(rng, params.p(), digits));
        z.set(i, j, x);
        z.set(j, i, x);
    }
    z
}

/// Element of `GL(n, ℤ_(p))`: a lower unitriangular, a unit diagonal and an
/// upper unitriangular factor.
pub fn gl_integral<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, n: usize, digits: u32) -> KMatrix {
    let p = params.p();
    let lower = KMatrix::from_fn(params, n, n, |i, j| match i.cmp(&j) {
        core::cmp::Ordering::Equal => PadicScalar::one(params),
        core::cmp::Ordering::Greater => PadicScalar::from_i64(params, integer(rng, p, digits)),
        core::cmp::Ordering::Less => PadicScalar::zero(params),
    });
    let diag: Vec<PadicScalar> = (0..n).map(|_| PadicScalar::from_i64(params, unit_integer(rng, p, 1))).collect();
    let upper = KMatrix::from_fn(params, n, n, |i, j| {
        if i == j {
            PadicScalar::one(params)
        } else if i < j {
            PadicScalar::from_i64(params, integer(rng, p, digits))
        } else {
            PadicScalar::zero(params)
        }
    });
    lower.mul(&KMatrix::diag(params, &diag)).and_then(|m| m.mul(&upper)).expect("square factors")
}

/// Element of `Sp(2n, ℤ_(p))` built from `steps` random generators.
pub fn sp_integral<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, n: usize, steps: usize) -> SymplecticElement {
    let mut g = SymplecticElement::identity(params, n);
    for _ in 0..steps {
        let factor = match rng.gen_range(0..4) {
            0 => SymplecticElement::upper_unipotent(&symmetric_integral(rng, params, n, 1)),
            1 => SymplecticElement::lower_unipotent(&symmetric_integral(rng, params, n, 1)),
            2 => SymplecticElement::levi(&gl_integral(rng, params, n, 1)),
            _ => Ok(SymplecticElement::weyl(params, n)),
        };
        g = g.mul(&factor.expect("generators are symplectic")).expect("equal sizes");
    }
    g
}

/// Element of `Sp(2n, F)`: integral generators together with torus elements
/// `diag(p^(-k), p^k)` in one coordinate.
pub fn sp_element<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, n: usize, steps: usize) -> SymplecticElement {
    let mut g = sp_integral(rng, params, n, steps);
    for _ in 0..steps.div_ceil(2) {
        let k = rng.gen_range(-1i64..=1);
        let i = rng.gen_range(0..n);
        let d: Vec<PadicScalar> = (0..n)
            .map(|j| if i == j { PadicScalar::pi_pow(params, k * params.e() as i64) } else { PadicScalar::one(params) })
            .collect();
        let torus = SymplecticElement::levi(&KMatrix::diag(params, &d)).expect("diagonal levi");
        g = g.mul(&torus).and_then(|g| g.mul(&sp_integral(rng, params, n, 2))).expect("equal sizes");
    }
    g
}

/// Integral pair `(h, h z)` or its Weyl translate `(-h z, h)`.
pub fn integral_pair<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, n: usize) -> PPair {
    let h = gl_integral(rng, params, n, 1);
    let z = symmetric_integral(rng, params, n, 2);
    let hz = h.mul(&z).expect("square");
    let (x, y) = if rng.gen_bool(0.5) { (h, hz) } else { (hz.neg(), h) };
    PPair::new(x, y).expect("pairs built from a Lagrangian frame")
}

/// `n = 1` point `a + π^j u` of `Σ(1)` with `1 ≤ j < e`, moved by an
/// integral `SL(2)` element.
pub fn sigma_point_n1<R: Rng + ?Sized>(rng: &mut R, params: FieldParams) -> Result<SiegelPoint> {
    let e = params.e();
    if e < 2 {
        return Err(Error::RamificationInsufficient { needed: 2, e });
    }
    let a = PadicScalar::from_i64(params, integer(rng, params.p(), 2));
    let j = rng.gen_range(1..e) as i64;
    let u = PadicScalar::from_i64(params, unit_integer(rng, params.p(), 1));
    let z = SiegelPoint::scalar(a + PadicScalar::pi_pow(params, j) * u);
    let g = sp_integral(rng, params, 1, 3);
    SiegelPoint::new(crate::symplectic::mobius_action(&g, z.matrix())?)
}

/// `n = 2` point `ᵗh D h + A` with `D = diag(π^(e/3) u₁, π^(e/9) u₂)`,
/// `h ∈ GL(2, ℤ_(p))` and `A` integral symmetric; lies in `Σ(1)` when `9 | e`.
pub fn sigma_point_n2<R: Rng + ?Sized>(rng: &mut R, params: FieldParams) -> Result<SiegelPoint> {
    let e = params.e();
    if !e.is_multiple_of(9) {
        return Err(Error::RamificationInsufficient { needed: 9, e });
    }
    let p = params.p();
    let u1 = PadicScalar::from_i64(params, unit_integer(rng, p, 1));
    let u2 = PadicScalar::from_i64(params, unit_integer(rng, p, 1));
    let d = KMatrix::diag(
        params,
        &[PadicScalar::pi_pow(params, (e / 3) as i64) * u1, PadicScalar::pi_pow(params, (e / 9) as i64) * u2],
    );
    let h = gl_integral(rng, params, 2, 1);
    let z = h.transpose().mul(&d)?.mul(&h)?.add(&symmetric_integral(rng, params, 2, 1))?;
    SiegelPoint::new(z)
}

/// Rational function with linear poles at `poles` (each with a random order
/// up to `max_order`) and a random numerator of degree below `numerator_degree`.
pub fn rational_with_poles<R: Rng + ?Sized>(
    rng: &mut R,
    params: FieldParams,
    poles: &[PadicScalar],
    max_order: u32,
    numerator_degree: usize,
) -> RationalFunction {
    let coeffs: Vec<PadicScalar> = (0..numerator_degree.max(1))
        .map(|_| PadicScalar::from_i64(params, unit_integer(rng, params.p(), 1)))
        .collect();
    let mut f = RationalFunction::from_poly(Poly::new(params, coeffs));
    for r in poles {
        let k = rng.gen_range(1..=max_order.max(1)) as i64;
        f = f.mul(&RationalFunction::linear_power(*r, -k));
    }
    f
}

/// Random symmetric `E` with every entry of valuation at least `v`.
pub fn small_symmetric<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, n: usize, v: i64) -> KMatrix {
    let mut m = symmetric_integral(rng, params, n, 1);
    if m.is_zero() {
        m.set(0, 0, PadicScalar::one(params));
    }
    m.scale(&PadicScalar::pi_pow(params, v))
}

/// Vector of small integers.
pub fn int_vector<R: Rng + ?Sized>(rng: &mut R, params: FieldParams, d: usize) -> Vec<PadicScalar> {
    let mut v = vec![PadicScalar::zero(params); d];
    for x in &mut v {
        *x = PadicScalar::from_i64(params, rng.gen_range(-4..=4));
    }
    if v.iter().all(|x| x.is_zero()) {
        v[0] = PadicScalar::one(params);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::{enumerate_reps, in_sigma_m};
    use crate::symplectic::is_symplectic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let k = FieldParams::new(3, 2, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let reps = enumerate_reps(3, 1, 1).unwrap();
        for _ in 0..20 {
            let g = sp_element(&mut rng, k, 2, 4);
            assert!(is_symplectic(g.matrix()).unwrap().is_symplectic());
            assert!(sp_integral(&mut rng, k, 1, 5).is_integral());
            integral_pair(&mut rng, k, 2);
            let z = sigma_point_n1(&mut rng, k).unwrap();
            assert!(in_sigma_m(&z, 1, &reps).unwrap().member);
        }
    }

    #[test]
    fn deterministic() {
        let k = FieldParams::new(5, 1, 12).unwrap();
        let a = sp_element(&mut ChaCha8Rng::seed_from_u64(9), k, 2, 5);
        let b = sp_element(&mut ChaCha8Rng::seed_from_u64(9), k, 2, 5);
        assert_eq!(a, b);
    }
}
