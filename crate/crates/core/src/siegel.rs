//! The `p`-adic Siegel upper half-space and its affinoid pieces `Σ(m)`.
//!
//! `Z` lies in `Σ(m; X, Y)` when `|det(XZ + Y)| ≥ |Z|^n |p|^(nm)`; `Σ(m)` is the
//! intersection over a finite set of integral pairs taken modulo
//! `p^(nm + 1)` up to `GL(n, 𝔬)`. Determinants are evaluated through the
//! Cauchy–Binet expansion in the maximal minors of `(X Y)`, which are
//! precomputed as integers for every representative.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{AbsValue, FieldParams, PadicScalar};
use crate::linalg::KMatrix;
use crate::symplectic::{lex_subsets, mobius_action, symmetric_basis, PPair, SymplecticElement};

/// Largest number of chart candidates scanned by [`enumerate_reps`].
pub const MAX_REP_CANDIDATES: u64 = 400_000;

/// Symmetric `n x n` matrix over `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPoint {
    z: KMatrix,
}

impl SiegelPoint {
    pub fn new(z: KMatrix) -> Result<Self> {
        if !z.is_symmetric() {
            return Err(Error::DimensionMismatch("point must be a symmetric matrix".into()));
        }
        Ok(Self { z })
    }

    pub fn scalar(z: PadicScalar) -> Self {
        Self { z: KMatrix::diag(z.params(), &[z]) }
    }

    pub fn n(&self) -> usize {
        self.z.rows()
    }

    pub fn matrix(&self) -> &KMatrix {
        &self.z
    }

    pub fn params(&self) -> FieldParams {
        self.z.params()
    }
}

/// `|Z| = max(1, |Z_ij|)`.
pub fn norm_z(z: &SiegelPoint) -> AbsValue {
    let p = z.params().p();
    z.z.entries().iter().map(|x| x.abs()).fold(AbsValue::one(p), |a, b| a.max(b))
}

fn norm_valuation(z: &SiegelPoint) -> i64 {
    z.z.min_valuation().map_or(0, |v| v.min(0))
}

/// Integral pair stored by its entries and its maximal minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPair {
    pub n: usize,
    /// Row-major entries of `X`.
    pub x: Vec<i64>,
    /// Row-major entries of `Y`.
    pub y: Vec<i64>,
    /// Maximal minors of `(X Y)` over the lexicographic column subsets.
    pub plucker: Vec<i64>,
}

impl IntPair {
    fn new(n: usize, x: Vec<i64>, y: Vec<i64>) -> Self {
        let frame = |i: usize, j: usize| if j < n { x[i * n + j] } else { y[i * n + j - n] };
        let plucker = lex_subsets(2 * n, n)
            .iter()
            .map(|cols| int_det(n, |i, j| frame(i, cols[j])))
            .collect();
        Self { n, x, y, plucker }
    }

    pub fn to_pair(&self, params: FieldParams) -> Result<PPair> {
        PPair::from_i64(params, self.n, &self.x, &self.y)
    }
}

fn int_det(n: usize, f: impl Fn(usize, usize) -> i64) -> i64 {
    let mut m = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            m.push(f(i, j));
        }
    }
    int_det_flat(n, &m)
}

fn int_det_flat(n: usize, m: &[i64]) -> i64 {
    match n {
        0 => 1,
        1 => m[0],
        _ => {
            let mut total = 0;
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for j in 0..n {
                minor.clear();
                for i in 1..n {
                    minor.extend((0..n).filter(|&c| c != j).map(|c| m[i * n + c]));
                }
                let sign = if j % 2 == 0 { 1 } else { -1 };
                total += sign * m[j] * int_det_flat(n - 1, &minor);
            }
            total
        }
    }
}

/// Finite set of integral pairs, one per `GL(n, 𝔬)`-class modulo `p^level`.
#[derive(Clone, Debug)]
pub struct RepSet {
    pub n: usize,
    pub m: u32,
    pub p: u64,
    /// Exponent `nm + 1` of the modulus.
    pub level: u32,
    pub pairs: Vec<IntPair>,
}

/// Partial Weyl element exchanging the coordinates in `chart`:
/// `A = D = diag(i ∉ T)`, `B = diag(i ∈ T)`, `C = -B`.
fn chart_image(n: usize, chart: u32, s: &[i64]) -> (Vec<i64>, Vec<i64>) {
    // (S, I) · w_T = (S A - B, S B + A).
    let in_t = |i: usize| chart >> i & 1 == 1;
    let mut x = vec![0; n * n];
    let mut y = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let sij = s[i * n + j];
            x[i * n + j] = if in_t(j) { 0 } else { sij } - if i == j && in_t(i) { 1 } else { 0 };
            y[i * n + j] = if in_t(j) { sij } else { 0 } + if i == j && !in_t(i) { 1 } else { 0 };
        }
    }
    (x, y)
}

/// Whether `(X, Y) · w_T⁻¹` has a `Y`-block invertible modulo `p`.
fn in_chart(n: usize, chart: u32, x: &[i64], y: &[i64], p: i64) -> bool {
    // w_T⁻¹ = [[A, -B], [B, A]], so Y' = -X B + Y A.
    let in_t = |j: usize| chart >> j & 1 == 1;
    let yp = |i: usize, j: usize| if in_t(j) { -x[i * n + j] } else { y[i * n + j] };
    int_det(n, yp).rem_euclid(p) != 0
}

/// Representatives of `GL(n, 𝔬) \ 𝒫_𝔬` modulo `p^(nm + 1)`, listed chart by
/// chart with symmetric coordinates in lexicographic order. The first pair is
/// always `(0, I)`.
pub fn enumerate_reps(p: u64, n: usize, m: u32) -> Result<RepSet> {
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be positive".into()));
    }
    let level = n as u32 * m + 1;
    let dim = (n * (n + 1) / 2) as u32;
    let modulus = p.checked_pow(level).filter(|&q| q < i64::MAX as u64 / 4);
    let candidates = modulus.and_then(|q| q.checked_pow(dim)).and_then(|c| c.checked_mul(1 << n));
    let Some(q) = modulus.filter(|_| candidates.is_some_and(|c| c <= MAX_REP_CANDIDATES)) else {
        return Err(Error::Unsupported(format!(
            "representatives for n = {n}, m = {m}, p = {p} exceed {MAX_REP_CANDIDATES} candidates"
        )));
    };
    let q = q as i64;
    let basis = symmetric_basis(n);
    let mut pairs = Vec::new();
    for chart in 0..(1u32 << n) {
        let mut coords = vec![0i64; basis.len()];
        loop {
            let mut s = vec![0i64; n * n];
            for (&(i, j), &c) in basis.iter().zip(&coords) {
                s[i * n + j] = c;
                s[j * n + i] = c;
            }
            let (x, y) = chart_image(n, chart, &s);
            if (0..chart).all(|earlier| !in_chart(n, earlier, &x, &y, p as i64)) {
                pairs.push(IntPair::new(n, x, y));
            }
            // Odometer over the symmetric coordinates, last coordinate fastest.
            let mut idx = basis.len();
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                coords[idx] += 1;
                if coords[idx] < q {
                    break;
                }
                coords[idx] = 0;
                if idx == 0 {
                    idx = usize::MAX;
                    break;
                }
            }
            if idx == usize::MAX || basis.is_empty() {
                break;
            }
        }
    }
    Ok(RepSet { n, m, p, level, pairs })
}

/// Maximal minors of the `2n x n` matrix `(Z; I)` over lexicographic row subsets.
fn point_minors(z: &SiegelPoint) -> Result<Vec<PadicScalar>> {
    let n = z.n();
    let params = z.params();
    let stacked = KMatrix::vstack(&z.z, &KMatrix::identity(params, n))?;
    lex_subsets(2 * n, n)
        .iter()
        .map(|rows| KMatrix::from_fn(params, n, n, |i, j| stacked.get(rows[i], j)).det())
        .collect()
}

fn det_from_minors(pair: &IntPair, minors: &[PadicScalar]) -> PadicScalar {
    let params = minors[0].params();
    pair.plucker
        .iter()
        .zip(minors)
        .filter(|(c, _)| **c != 0)
        .fold(PadicScalar::zero(params), |acc, (c, q)| acc + q.mul_int(*c))
}

/// `v(det(XZ + Y))` bound: membership holds iff the valuation is at most this.
pub fn membership_threshold(z: &SiegelPoint, m: u32) -> i64 {
    let n = z.n() as i64;
    n * norm_valuation(z) + n * m as i64 * z.params().e() as i64
}

/// Decides `v(det) ≤ threshold`, refusing when a vanishing determinant is
/// not known to enough digits.
fn passes(det: &PadicScalar, threshold: i64) -> Result<bool> {
    match det.valuation() {
        Some(v) => Ok(v <= threshold),
        None => match det.absolute_precision() {
            Some(a) if a <= threshold => Err(Error::PrecisionLoss(format!(
                "determinant vanishes only modulo π^{a}, threshold {threshold}"
            ))),
            _ => Ok(false),
        },
    }
}

/// `Z ∈ Σ(m; X, Y)`.
pub fn in_sigma_m_pair(z: &SiegelPoint, m: u32, pair: &PPair) -> Result<bool> {
    let det = pair.apply_to(&z.z)?.det()?;
    passes(&det, membership_threshold(z, m))
}

/// Outcome of a `Σ(m)` membership test.
#[derive(Clone, Debug)]
pub struct MembershipCertificate {
    pub member: bool,
    pub level: u32,
    /// Largest valuation `v(det(XZ + Y))` permitted.
    pub threshold: i64,
    /// Representative with the smallest `|det(XZ + Y)|`.
    pub witness: IntPair,
    /// `det(XZ + Y)` at the witness.
    pub witness_det: PadicScalar,
}

/// Tests `Z ∈ Σ(m)` against every representative in `reps`.
pub fn in_sigma_m(z: &SiegelPoint, m: u32, reps: &RepSet) -> Result<MembershipCertificate> {
    if reps.n != z.n() {
        return Err(Error::DimensionMismatch(format!("{}x{} point against pairs of size {}", z.n(), z.n(), reps.n)));
    }
    if reps.m < m || reps.p != z.params().p() {
        return Err(Error::InvalidParams(format!(
            "representatives of level m = {} for p = {} cannot decide Σ({m}) over p = {}",
            reps.m,
            reps.p,
            z.params().p()
        )));
    }
    let threshold = membership_threshold(z, m);
    let minors = point_minors(z)?;
    let mut worst: Option<(usize, PadicScalar, i64)> = None;
    let mut member = true;
    for (idx, pair) in reps.pairs.iter().enumerate() {
        let det = det_from_minors(pair, &minors);
        let ok = passes(&det, threshold)?;
        member &= ok;
        let v = det.valuation().unwrap_or(i64::MAX);
        if worst.as_ref().is_none_or(|(_, _, w)| v > *w) {
            worst = Some((idx, det, v));
        }
    }
    let (idx, witness_det, _) = worst.ok_or(Error::Unsupported("empty representative set".into()))?;
    Ok(MembershipCertificate { member, level: m, threshold, witness: reps.pairs[idx].clone(), witness_det })
}

/// `diag(π^(e / (n+1)^k_1), …, π^(e / (n+1)^k_n))`.
pub fn make_diagonal_point(params: FieldParams, ks: &[u32]) -> Result<SiegelPoint> {
    let n = ks.len();
    if n == 0 || ks.contains(&0) {
        return Err(Error::InvalidParams("exponents must be positive".into()));
    }
    for (i, a) in ks.iter().enumerate() {
        if ks[..i].contains(a) {
            return Err(Error::InvalidParams("exponents must be distinct".into()));
        }
    }
    let e = params.e() as u64;
    let mut diag = Vec::with_capacity(n);
    let mut needed = 1u64;
    for &k in ks {
        let d = (n as u64 + 1).pow(k);
        needed = lcm(needed, d);
        if e.is_multiple_of(d) {
            diag.push(PadicScalar::pi_pow(params, (e / d) as i64));
        }
    }
    if diag.len() < n {
        return Err(Error::RamificationInsufficient { needed, e: params.e() });
    }
    Ok(SiegelPoint { z: KMatrix::diag(params, &diag) })
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Agreement of `Σ(m; X, Y)` and `Σ(m; X', Y')` on a family of sample points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceOutcome {
    pub agree: bool,
    pub samples: usize,
    /// Samples lying in `Σ(m; X, Y)`.
    pub inside: usize,
}

/// Compares the two membership predicates for pairs congruent modulo
/// `p^(nm+1)` up to `h`. Samples are placed at `Z₀ + π^j E` for a point `Z₀`
/// on the vanishing locus of `det(XZ + Y)` (or at `π^j E` when `X` is
/// singular), so that both sides of the threshold are visited.
pub fn lemma_equivalence_check(
    m: u32,
    pair: &PPair,
    other: &PPair,
    h: &KMatrix,
) -> Result<EquivalenceOutcome> {
    let n = pair.n();
    let params = pair.x().params();
    let level = n as u32 * m + 1;
    let modulus = PadicScalar::from_i64(params, params.p() as i64).pow(level as i64)?;
    let moved = other.left_mul(h)?;
    for (a, b) in [(pair.x(), moved.x()), (pair.y(), moved.y())] {
        for d in a.sub(b)?.entries() {
            if d.valuation().is_some_and(|v| v < modulus.valuation().unwrap_or(0)) {
                return Err(Error::InvalidParams(format!("pairs are not congruent modulo p^{level}")));
            }
        }
    }
    let base = match pair.x().inverse() {
        Ok(xi) => xi.mul(pair.y())?.neg(),
        Err(_) => KMatrix::zeros(params, n, n),
    };
    let directions: Vec<KMatrix> = symmetric_basis(n)
        .into_iter()
        .map(|(i, j)| {
            let mut e = KMatrix::zeros(params, n, n);
            e.set(i, j, PadicScalar::one(params));
            e.set(j, i, PadicScalar::one(params));
            e
        })
        .chain(core::iter::once(KMatrix::identity(params, n)))
        .collect();
    let top = ((n as i64 * m as i64 + 2) * params.e() as i64).min(params.precision() as i64 / 2);
    let mut outcome = EquivalenceOutcome { agree: true, samples: 0, inside: 0 };
    for j in -(params.e() as i64)..=top {
        for (t, dir) in directions.iter().enumerate() {
            let unit = PadicScalar::from_i64(params, 1 + t as i64 * params.p() as i64 + t as i64);
            let step = dir.scale(&(PadicScalar::pi_pow(params, j) * unit));
            let z = SiegelPoint::new(base.add(&step)?)?;
            let a = in_sigma_m_pair(&z, m, pair);
            let b = in_sigma_m_pair(&z, m, other);
            let (Ok(a), Ok(b)) = (a, b) else { continue };
            outcome.samples += 1;
            outcome.inside += a as usize;
            outcome.agree &= a == b;
        }
    }
    Ok(outcome)
}

/// Premise and conclusion of `g Σ(m) ⊂ Σ(nm)` at one point.
#[derive(Clone, Debug)]
pub struct TranslationOutcome {
    pub premise: MembershipCertificate,
    pub image: SiegelPoint,
    pub conclusion: MembershipCertificate,
}

impl TranslationOutcome {
    pub fn holds(&self) -> bool {
        !self.premise.member || self.conclusion.member
    }
}

/// Certifies `gZ ∈ Σ(nm)` for integral `g` and `Z ∈ Σ(m)`.
pub fn translation_lemma_check(
    g: &SymplecticElement,
    z: &SiegelPoint,
    m: u32,
    reps_m: &RepSet,
    reps_nm: &RepSet,
) -> Result<TranslationOutcome> {
    if !g.is_integral() {
        return Err(Error::InvalidParams("translation requires an integral symplectic element".into()));
    }
    let premise = in_sigma_m(z, m, reps_m)?;
    let image = SiegelPoint::new(mobius_action(g, z.matrix())?)?;
    let conclusion = in_sigma_m(&image, g.n() as u32 * m, reps_nm)?;
    Ok(TranslationOutcome { premise, image, conclusion })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        let k = FieldParams::new(3, 2, 12).unwrap();
        assert_eq!(norm_z(&SiegelPoint::scalar(PadicScalar::from_i64(k, 4))), AbsValue::one(3));
        let big = PadicScalar::from_i64(k, 9).inv().unwrap();
        assert_eq!(norm_z(&SiegelPoint::scalar(big)).exponent(), Some((2, 1)));
        assert_eq!(norm_z(&SiegelPoint::scalar(PadicScalar::pi(k))), AbsValue::one(3));
    }

    #[test]
    fn projective_line_counts() {
        let r = enumerate_reps(2, 1, 0).unwrap();
        let mut got: Vec<(i64, i64)> = r.pairs.iter().map(|p| (p.x[0], p.y[0])).collect();
        got.sort();
        assert_eq!(got, vec![(-1, 0), (0, 1), (1, 1)]);
        assert_eq!(enumerate_reps(3, 1, 0).unwrap().pairs.len(), 4);
        assert_eq!(enumerate_reps(2, 1, 1).unwrap().pairs.len(), 6);
        assert_eq!(enumerate_reps(2, 2, 0).unwrap().pairs.len(), 15);
        assert_eq!(enumerate_reps(3, 2, 0).unwrap().pairs.len(), 40);
        assert!(matches!(enumerate_reps(7, 2, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn pi_membership() {
        let k = FieldParams::new(2, 2, 16).unwrap();
        let z = make_diagonal_point(k, &[1]).unwrap();
        assert_eq!(z.matrix().get(0, 0), PadicScalar::pi(k));
        let c0 = in_sigma_m(&z, 0, &enumerate_reps(2, 1, 0).unwrap()).unwrap();
        assert!(!c0.member);
        assert_eq!((c0.witness.x[0].abs(), c0.witness.y[0]), (1, 0));
        assert!(in_sigma_m(&z, 1, &enumerate_reps(2, 1, 1).unwrap()).unwrap().member);
    }

    #[test]
    fn base_field_points_excluded() {
        let k = FieldParams::new(3, 2, 16).unwrap();
        for m in 0..=3 {
            let reps = enumerate_reps(3, 1, m).unwrap();
            for x in [0, 1, -4, 7] {
                let z = SiegelPoint::scalar(PadicScalar::from_i64(k, x));
                assert!(!in_sigma_m(&z, m, &reps).unwrap().member);
            }
        }
    }

    #[test]
    fn diagonal_point_ramification() {
        let k = FieldParams::new(2, 9, 36).unwrap();
        let z = make_diagonal_point(k, &[1, 2]).unwrap();
        assert_eq!(z.matrix().get(0, 0).valuation(), Some(3));
        assert_eq!(z.matrix().get(1, 1).valuation(), Some(1));
        let k4 = FieldParams::new(2, 4, 16).unwrap();
        assert_eq!(make_diagonal_point(k4, &[2]).unwrap().matrix().get(0, 0), PadicScalar::pi(k4));
        let k2 = FieldParams::new(2, 2, 16).unwrap();
        assert_eq!(
            make_diagonal_point(k2, &[1, 2]).unwrap_err(),
            Error::RamificationInsufficient { needed: 9, e: 2 }
        );
    }

    #[test]
    fn weyl_translate_of_pi() {
        let k = FieldParams::new(3, 2, 16).unwrap();
        let z = SiegelPoint::scalar(PadicScalar::pi(k));
        let reps = enumerate_reps(3, 1, 1).unwrap();
        let out = translation_lemma_check(&SymplecticElement::weyl(k, 1), &z, 1, &reps, &reps).unwrap();
        assert!(out.premise.member && out.conclusion.member);
        assert_eq!(out.image.matrix().get(0, 0), -PadicScalar::pi(k).inv().unwrap());
    }

    #[test]
    fn congruent_pairs_agree() {
        let k = FieldParams::new(5, 2, 20).unwrap();
        let a = PPair::from_i64(k, 1, &[1], &[0]).unwrap();
        let b = PPair::from_i64(k, 1, &[1], &[5]).unwrap();
        let one = KMatrix::identity(k, 1);
        let out = lemma_equivalence_check(0, &a, &b, &one).unwrap();
        assert!(out.agree && out.inside > 0 && out.inside < out.samples);
    }
}
