//! The symplectic group `Sp(2n, F)`, Lagrangian pairs and the action on
//! symmetric matrices.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldParams, PadicScalar};
use crate::linalg::KMatrix;

/// `[[0, I], [-I, 0]]`.
pub fn j_matrix(params: FieldParams, n: usize) -> KMatrix {
    let i = KMatrix::identity(params, n);
    let z = KMatrix::zeros(params, n, n);
    KMatrix::from_blocks(&z, &i, &i.neg(), &z).expect("blocks of equal size")
}

/// Outcome of the defining relation and of both block-relation sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationReport {
    /// `ᵗg J g = J`.
    pub defining: bool,
    /// `ᵗA D - ᵗC B = I`, `ᵗA C = ᵗC A`, `ᵗB D = ᵗD B`.
    pub transpose_left: [bool; 3],
    /// `D ᵗA - C ᵗB = I`, `D ᵗC = C ᵗD`, `B ᵗA = A ᵗB`.
    pub transpose_right: [bool; 3],
}

impl RelationReport {
    pub fn is_symplectic(&self) -> bool {
        self.defining
    }

    pub fn left_holds(&self) -> bool {
        self.transpose_left.iter().all(|&b| b)
    }

    pub fn right_holds(&self) -> bool {
        self.transpose_right.iter().all(|&b| b)
    }

    /// Names of the block relations that fail.
    pub fn failures(&self) -> Vec<&'static str> {
        const LEFT: [&str; 3] = ["tA·D - tC·B = I", "tA·C = tC·A", "tB·D = tD·B"];
        const RIGHT: [&str; 3] = ["D·tA - C·tB = I", "D·tC = C·tD", "B·tA = A·tB"];
        let mut out = Vec::new();
        for (ok, name) in self.transpose_left.iter().zip(LEFT) {
            if !ok {
                out.push(name);
            }
        }
        for (ok, name) in self.transpose_right.iter().zip(RIGHT) {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

fn blocks(g: &KMatrix) -> Result<(usize, [KMatrix; 4])> {
    if !g.is_square() || !g.rows().is_multiple_of(2) || g.rows() == 0 {
        return Err(Error::DimensionMismatch(format!("{}x{} is not 2n x 2n", g.rows(), g.cols())));
    }
    let n = g.rows() / 2;
    Ok((n, [g.block(0, 0, n, n), g.block(0, n, n, n), g.block(n, 0, n, n), g.block(n, n, n, n)]))
}

/// Size of the summands of each entry of `x · y`.
fn term_sizes(x: &KMatrix, y: &KMatrix) -> Vec<Option<i64>> {
    let mut out = Vec::with_capacity(x.rows() * y.cols());
    for i in 0..x.rows() {
        for j in 0..y.cols() {
            out.push((0..x.cols()).filter_map(|k| Some(x.get(i, k).valuation()? + y.get(k, j).valuation()?)).min());
        }
    }
    out
}

/// Entrywise minimum of summand sizes; `unit` adds the identity.
fn merge_sizes(parts: &[Vec<Option<i64>>], n: usize, unit: bool) -> Vec<Option<i64>> {
    (0..n * n)
        .map(|k| {
            let diag = (unit && k % (n + 1) == 0).then_some(0);
            parts.iter().filter_map(|p| p[k]).chain(diag).min()
        })
        .collect()
}

/// Whether `diff` vanishes. A vanishing entry must be known to `floor`
/// digits below the size of the summands that cancelled in it.
fn vanishes(diff: &KMatrix, sizes: &[Option<i64>]) -> Result<bool> {
    if diff.entries().iter().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    let floor = diff.params().floor() as i64;
    for (x, s) in diff.entries().iter().zip(sizes) {
        if let (Some(a), Some(s)) = (x.absolute_precision(), s) {
            if a - s < floor {
                return Err(Error::PrecisionLoss(format!("relation known modulo π^{a}, terms of size π^{s}")));
            }
        }
    }
    Ok(true)
}

/// Evaluates the defining relation and the six block relations.
pub fn is_symplectic(g: &KMatrix) -> Result<RelationReport> {
    let (n, [a, b, c, d]) = blocks(g)?;
    let params = g.params();
    let id = KMatrix::identity(params, n);
    let j = j_matrix(params, n);
    let t = |m: &KMatrix| m.transpose();
    // ᵗA D - ᵗC B = I and its companions: each is `x·y - u·w (- I)`.
    let check = |x: &KMatrix, y: &KMatrix, u: &KMatrix, w: &KMatrix, unit: bool| -> Result<bool> {
        let mut diff = x.mul(y)?.sub(&u.mul(w)?)?;
        if unit {
            diff = diff.sub(&id)?;
        }
        vanishes(&diff, &merge_sizes(&[term_sizes(x, y), term_sizes(u, w)], n, unit))
    };
    let tgj = g.transpose().mul(&j)?;
    let defining = vanishes(&tgj.mul(g)?.sub(&j)?, &term_sizes(&tgj, g))?;
    let transpose_left = [
        check(&t(&a), &d, &t(&c), &b, true)?,
        check(&t(&a), &c, &t(&c), &a, false)?,
        check(&t(&b), &d, &t(&d), &b, false)?,
    ];
    let transpose_right = [
        check(&d, &t(&a), &c, &t(&b), true)?,
        check(&d, &t(&c), &c, &t(&d), false)?,
        check(&b, &t(&a), &a, &t(&b), false)?,
    ];
    Ok(RelationReport { defining, transpose_left, transpose_right })
}

/// Validated element of `Sp(2n, F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticElement {
    n: usize,
    g: KMatrix,
}

impl SymplecticElement {
    pub fn new(g: KMatrix) -> Result<Self> {
        if !g.is_over_base() {
            return Err(Error::NotOverBase);
        }
        if !is_symplectic(&g)?.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(Self { n: g.rows() / 2, g })
    }

    pub fn identity(params: FieldParams, n: usize) -> Self {
        Self { n, g: KMatrix::identity(params, 2 * n) }
    }

    /// The Weyl element `J_n`.
    pub fn weyl(params: FieldParams, n: usize) -> Self {
        Self { n, g: j_matrix(params, n) }
    }

    /// `[[I, z], [0, I]]` for symmetric `z`.
    pub fn upper_unipotent(z: &KMatrix) -> Result<Self> {
        let n = z.rows();
        let params = z.params();
        let (i, o) = (KMatrix::identity(params, n), KMatrix::zeros(params, n, n));
        Self::structural(KMatrix::from_blocks(&i, z, &o, &i)?, z.is_symmetric())
    }

    /// `[[I, 0], [z, I]]` for symmetric `z`.
    pub fn lower_unipotent(z: &KMatrix) -> Result<Self> {
        let n = z.rows();
        let params = z.params();
        let (i, o) = (KMatrix::identity(params, n), KMatrix::zeros(params, n, n));
        Self::structural(KMatrix::from_blocks(&i, &o, z, &i)?, z.is_symmetric())
    }

    /// `diag(ᵗh⁻¹, h)`.
    pub fn levi(h: &KMatrix) -> Result<Self> {
        let n = h.rows();
        let o = KMatrix::zeros(h.params(), n, n);
        Self::structural(KMatrix::from_blocks(&h.inverse()?.transpose(), &o, &o, h)?, true)
    }

    /// Generator whose shape makes it symplectic once `shape_ok` holds.
    fn structural(g: KMatrix, shape_ok: bool) -> Result<Self> {
        if !g.is_over_base() {
            return Err(Error::NotOverBase);
        }
        if !shape_ok {
            return Err(Error::NotSymplectic);
        }
        Ok(Self { n: g.rows() / 2, g })
    }

    /// `[[a, b], [c, d]]` in `SL(2, F) = Sp(2, F)`.
    pub fn sl2(a: PadicScalar, b: PadicScalar, c: PadicScalar, d: PadicScalar) -> Result<Self> {
        Self::new(KMatrix::from_vec(a.params(), 2, 2, alloc::vec![a, b, c, d])?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> FieldParams {
        self.g.params()
    }

    pub fn matrix(&self) -> &KMatrix {
        &self.g
    }

    pub fn a(&self) -> KMatrix {
        self.g.block(0, 0, self.n, self.n)
    }

    pub fn b(&self) -> KMatrix {
        self.g.block(0, self.n, self.n, self.n)
    }

    pub fn c(&self) -> KMatrix {
        self.g.block(self.n, 0, self.n, self.n)
    }

    pub fn d(&self) -> KMatrix {
        self.g.block(self.n, self.n, self.n, self.n)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self { n: self.n, g: self.g.mul(&other.g)? })
    }

    /// `[[ᵗD, -ᵗB], [-ᵗC, ᵗA]]`.
    pub fn inverse(&self) -> Self {
        let g = KMatrix::from_blocks(
            &self.d().transpose(),
            &self.b().transpose().neg(),
            &self.c().transpose().neg(),
            &self.a().transpose(),
        )
        .expect("blocks of equal size");
        Self { n: self.n, g }
    }

    /// Whether every entry is integral, i.e. `g ∈ Sp(2n, 𝔬)`.
    pub fn is_integral(&self) -> bool {
        self.g.entries().iter().all(|x| x.valuation().is_none_or(|v| v >= 0))
    }
}

/// Pair `(X, Y)` with `X ᵗY = Y ᵗX` and `rank (X Y) = n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PPair {
    x: KMatrix,
    y: KMatrix,
}

impl PPair {
    pub fn new(x: KMatrix, y: KMatrix) -> Result<Self> {
        let n = x.rows();
        if !x.is_square() || y.rows() != n || y.cols() != n {
            return Err(Error::NotAPair("blocks must both be n x n".into()));
        }
        if x.mul(&y.transpose())? != y.mul(&x.transpose())? {
            return Err(Error::NotAPair("X·tY is not symmetric".into()));
        }
        if KMatrix::hstack(&x, &y)?.rank_over_base()? != n {
            return Err(Error::NotAPair("(X Y) does not have full rank".into()));
        }
        Ok(Self { x, y })
    }

    pub fn from_i64(params: FieldParams, n: usize, x: &[i64], y: &[i64]) -> Result<Self> {
        Self::new(KMatrix::from_i64(params, n, n, x)?, KMatrix::from_i64(params, n, n, y)?)
    }

    /// `(0, I)`.
    pub fn origin(params: FieldParams, n: usize) -> Self {
        Self { x: KMatrix::zeros(params, n, n), y: KMatrix::identity(params, n) }
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn x(&self) -> &KMatrix {
        &self.x
    }

    pub fn y(&self) -> &KMatrix {
        &self.y
    }

    /// The `n x 2n` block `(X Y)`.
    pub fn frame(&self) -> KMatrix {
        KMatrix::hstack(&self.x, &self.y).expect("blocks of equal height")
    }

    /// `(hX, hY)`.
    pub fn left_mul(&self, h: &KMatrix) -> Result<Self> {
        if h.det()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self { x: h.mul(&self.x)?, y: h.mul(&self.y)? })
    }

    /// `X Z + Y`.
    pub fn apply_to(&self, z: &KMatrix) -> Result<KMatrix> {
        self.x.mul(z)?.add(&self.y)
    }
}

/// `(X, Y) g = (XA + YC, XB + YD)`.
pub fn right_action(pair: &PPair, g: &SymplecticElement) -> Result<PPair> {
    if pair.n() != g.n() {
        return Err(Error::DimensionMismatch(format!("pair of size {} against Sp({})", pair.n(), 2 * g.n())));
    }
    let x = pair.x.mul(&g.a())?.add(&pair.y.mul(&g.c())?)?;
    let y = pair.x.mul(&g.b())?.add(&pair.y.mul(&g.d())?)?;
    Ok(PPair { x, y })
}

fn subsets(total: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(start: usize, total: usize, r: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == r {
            out.push(current.clone());
            return;
        }
        for i in start..total {
            current.push(i);
            go(i + 1, total, r, current, out);
            current.pop();
        }
    }
    go(0, total, r, &mut current, &mut out);
    out
}

/// Lexicographically ordered `r`-subsets of `0..total`.
pub fn lex_subsets(total: usize, r: usize) -> Vec<Vec<usize>> {
    subsets(total, r)
}

/// Completes `(X, Y)` to a symplectic matrix with bottom block row `(X Y)`.
///
/// With `M = (X Y)` and `N = J ᵗM`, pick `n` rows of `N` forming the best
/// conditioned square block, take `T₀` with `T₀ N = I`, then correct by
/// `T = T₀ + K M` where `K` is the strictly upper part of `T₀ J ᵗT₀`.
pub fn gram_schmidt_complete(pair: &PPair) -> Result<SymplecticElement> {
    let n = pair.n();
    let params = pair.x.params();
    let m = pair.frame();
    let j = j_matrix(params, n);
    let big_n = j.mul(&m.transpose())?;
    let mut best: Option<(i64, Vec<usize>, KMatrix)> = None;
    for rows in subsets(2 * n, n) {
        let sub = KMatrix::from_fn(params, n, n, |i, k| big_n.get(rows[i], k));
        let d = sub.det()?;
        if let Some(v) = d.valuation() {
            if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                best = Some((v, rows, sub));
            }
        }
    }
    let (_, rows, sub) = best.ok_or(Error::NotAPair("(X Y) does not have full rank".into()))?;
    let sub_inv = sub.inverse()?;
    let mut t0 = KMatrix::zeros(params, n, 2 * n);
    for i in 0..n {
        for (c, &r) in rows.iter().enumerate() {
            t0.set(i, r, sub_inv.get(i, c));
        }
    }
    let s0 = t0.mul(&j)?.mul(&t0.transpose())?;
    let k = KMatrix::from_fn(params, n, n, |i, c| if c > i { s0.get(i, c) } else { PadicScalar::zero(params) });
    let t = t0.add(&k.mul(&m)?)?;
    SymplecticElement::new(KMatrix::vstack(&t, &m)?)
}

/// Factors `z₁ = AC⁻¹`, `h = ᵗC⁻¹`, `z₂ = C⁻¹D` of an element with `det C ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct U0Decomposition {
    pub z1: KMatrix,
    pub h: KMatrix,
    pub z2: KMatrix,
}

impl U0Decomposition {
    /// `[[I, z₁], [0, I]] · diag(h, ᵗh⁻¹) · [[0, -I], [I, z₂]]`.
    pub fn reassemble(&self) -> Result<KMatrix> {
        let params = self.h.params();
        let n = self.h.rows();
        let (i, o) = (KMatrix::identity(params, n), KMatrix::zeros(params, n, n));
        let left = KMatrix::from_blocks(&i, &self.z1, &o, &i)?;
        let middle = KMatrix::from_blocks(&self.h, &o, &o, &self.h.inverse()?.transpose())?;
        let right = KMatrix::from_blocks(&o, &i.neg(), &i, &self.z2)?;
        left.mul(&middle)?.mul(&right)
    }
}

pub fn u0_decompose(g: &SymplecticElement) -> Result<U0Decomposition> {
    let c = g.c();
    if c.det()?.is_zero() {
        return Err(Error::NotInU0);
    }
    let c_inv = c.inverse().map_err(|e| if e == Error::Singular { Error::NotInU0 } else { e })?;
    Ok(U0Decomposition { z1: g.a().mul(&c_inv)?, h: c_inv.transpose(), z2: c_inv.mul(&g.d())? })
}

/// `j(g, Z) = CZ + D`.
pub fn automorphy_factor(g: &SymplecticElement, z: &KMatrix) -> Result<KMatrix> {
    g.c().mul(z)?.add(&g.d())
}

/// `gZ = (AZ + B)(CZ + D)⁻¹`.
pub fn mobius_action(g: &SymplecticElement, z: &KMatrix) -> Result<KMatrix> {
    let j = automorphy_factor(g, z)?;
    g.a().mul(z)?.add(&g.b())?.mul(&j.inverse()?)
}

/// Index pairs `(i, j)`, `i ≤ j`, in lexicographic order.
pub fn symmetric_basis(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Matrix of `dZ ↦ h · dZ · ᵗh` in the coordinates `dZ_ij`, `i ≤ j`.
pub fn sigma1_matrix(h: &KMatrix) -> Result<KMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("sigma_1 of a non-square matrix".into()));
    }
    let basis = symmetric_basis(h.rows());
    let params = h.params();
    Ok(KMatrix::from_fn(params, basis.len(), basis.len(), |row, col| {
        let (i, j) = basis[row];
        let (k, l) = basis[col];
        if k == l {
            h.get(i, k) * h.get(j, k)
        } else {
            h.get(i, k) * h.get(j, l) + h.get(i, l) * h.get(j, k)
        }
    }))
}

/// `r`-th exterior power of [`sigma1_matrix`] in the lexicographic basis of
/// `r`-subsets.
pub fn sigma_r_matrix(h: &KMatrix, r: usize) -> Result<KMatrix> {
    let s1 = sigma1_matrix(h)?;
    let dim = s1.rows();
    if r > dim {
        return Err(Error::DimensionMismatch(format!("wedge power {r} of a {dim}-dimensional space")));
    }
    if r == 1 {
        return Ok(s1);
    }
    let sets = subsets(dim, r);
    let params = h.params();
    let mut out = KMatrix::zeros(params, sets.len(), sets.len());
    for (a, rows) in sets.iter().enumerate() {
        for (b, cols) in sets.iter().enumerate() {
            let minor = KMatrix::from_fn(params, r, r, |i, j| s1.get(rows[i], cols[j]));
            out.set(a, b, if r == 0 { PadicScalar::one(params) } else { minor.det()? });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> FieldParams {
        FieldParams::new(5, 1, 16).unwrap()
    }

    fn int(params: FieldParams, x: i64) -> PadicScalar {
        PadicScalar::from_i64(params, x)
    }

    #[test]
    fn basic_membership() {
        let k = k();
        for n in 1..=2 {
            assert!(is_symplectic(&KMatrix::identity(k, 2 * n)).unwrap().is_symplectic());
            assert!(is_symplectic(&j_matrix(k, n)).unwrap().is_symplectic());
        }
        let two = int(k, 2);
        let half = two.inv().unwrap();
        let one = int(k, 1);
        let g = KMatrix::diag(k, &[two, one, half, one]);
        let report = is_symplectic(&g).unwrap();
        assert!(report.is_symplectic() && report.left_holds() && report.right_holds());
        let bad = KMatrix::diag(k, &[two, one, two, one]);
        let report = is_symplectic(&bad).unwrap();
        assert!(!report.is_symplectic());
        assert!(!report.failures().is_empty());
    }

    #[test]
    fn weyl_moves_origin() {
        let k = k();
        let moved = right_action(&PPair::origin(k, 2), &SymplecticElement::weyl(k, 2)).unwrap();
        assert_eq!(moved.x(), &KMatrix::identity(k, 2).neg());
        assert!(moved.y().is_zero());
    }

    #[test]
    fn completion_examples() {
        let k = k();
        let g = gram_schmidt_complete(&PPair::origin(k, 2)).unwrap();
        assert_eq!(g.matrix(), &KMatrix::identity(k, 4));
        let pair = PPair::new(KMatrix::identity(k, 2), KMatrix::zeros(k, 2, 2)).unwrap();
        let g = gram_schmidt_complete(&pair).unwrap();
        assert_eq!(g.matrix(), &j_matrix(k, 2).neg());
    }

    #[test]
    fn u0_of_weyl() {
        let k = k();
        let d = u0_decompose(&SymplecticElement::weyl(k, 1)).unwrap();
        assert!(d.z1.is_zero() && d.z2.is_zero());
        assert_eq!(d.h.get(0, 0), int(k, -1));
        assert_eq!(d.reassemble().unwrap(), j_matrix(k, 1));
        assert_eq!(u0_decompose(&SymplecticElement::identity(k, 1)).unwrap_err(), Error::NotInU0);
    }

    #[test]
    fn weyl_inverts() {
        let k = k();
        let z = KMatrix::from_i64(k, 2, 2, &[2, 1, 1, 3]).unwrap();
        let w = SymplecticElement::weyl(k, 2);
        assert_eq!(mobius_action(&w, &z).unwrap(), z.inverse().unwrap().neg());
        assert_eq!(automorphy_factor(&w, &z).unwrap(), z.neg());
    }

    #[test]
    fn sigma_examples() {
        let k = k();
        assert_eq!(sigma1_matrix(&KMatrix::identity(k, 2)).unwrap(), KMatrix::identity(k, 3));
        let h = KMatrix::from_i64(k, 1, 1, &[7]).unwrap();
        assert_eq!(sigma1_matrix(&h).unwrap().get(0, 0), int(k, 49));
        let h2 = KMatrix::from_i64(k, 2, 2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(sigma_r_matrix(&h2, 0).unwrap(), KMatrix::identity(k, 1));
        assert_eq!(sigma_r_matrix(&h2, 1).unwrap(), sigma1_matrix(&h2).unwrap());
        // det σ_1(h) = det(h)^(n+1) for n = 2.
        let top = sigma_r_matrix(&h2, 3).unwrap();
        assert_eq!(top.get(0, 0), int(k, -8));
    }
}
