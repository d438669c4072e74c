//! Univariate polynomials over `K` and root finding by `π`-adic digit search.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldParams, PadicScalar};

/// Polynomial with coefficients listed from the constant term up.
///
/// Trailing exact zeros are dropped. Coefficients that vanish only at the
/// tracked precision are kept, so their precision still bounds later
/// arithmetic; [`Poly::degree`] skips them.
#[derive(Clone)]
pub struct Poly {
    params: FieldParams,
    coeffs: Vec<PadicScalar>,
}

impl Poly {
    pub fn zero(params: FieldParams) -> Self {
        Self { params, coeffs: Vec::new() }
    }

    pub fn constant(c: PadicScalar) -> Self {
        Self::new(c.params(), vec![c])
    }

    pub fn one(params: FieldParams) -> Self {
        Self::constant(PadicScalar::one(params))
    }

    /// The polynomial `z`.
    pub fn z(params: FieldParams) -> Self {
        Self::monomial(PadicScalar::one(params), 1)
    }

    pub fn monomial(c: PadicScalar, k: usize) -> Self {
        let mut coeffs = vec![PadicScalar::zero(c.params()); k + 1];
        coeffs[k] = c;
        Self::new(c.params(), coeffs)
    }

    /// `z - r`.
    pub fn linear(r: PadicScalar) -> Self {
        Self::new(r.params(), vec![-r, PadicScalar::one(r.params())])
    }

    pub fn new(params: FieldParams, mut coeffs: Vec<PadicScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        Self { params, coeffs }
    }

    pub fn from_i64s(params: FieldParams, coeffs: &[i64]) -> Self {
        Self::new(params, coeffs.iter().map(|&c| PadicScalar::from_i64(params, c)).collect())
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicScalar {
        self.coeffs.get(i).copied().unwrap_or_else(|| PadicScalar::zero(self.params))
    }

    /// Index of the last coefficient that is nonzero at its precision.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Number of stored coefficients minus one, counting trailing
    /// coefficients that vanish only at the tracked precision.
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    pub fn leading(&self) -> Option<PadicScalar> {
        self.degree().map(|d| self.coeffs[d])
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.params, (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { params: self.params, coeffs: self.coeffs.iter().map(|c| -*c).collect() }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        Self::new(self.params, self.coeffs.iter().map(|x| *x * *c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(self.params);
        }
        let mut out = vec![PadicScalar::zero(self.params); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += *a * *b;
            }
        }
        Self::new(self.params, out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.params);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, z: &PadicScalar) -> PadicScalar {
        let mut acc = PadicScalar::zero(self.params);
        for c in self.coeffs.iter().rev() {
            acc = acc * *z + *c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.params,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i64)).collect(),
        )
    }

    /// Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.degree().ok_or(Error::ZeroDivision)?;
        let lead_inv = divisor.coeffs[d].inv()?;
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= d) else {
            return Ok((Self::zero(self.params), self.clone()));
        };
        let mut quot = vec![PadicScalar::zero(self.params); n - d + 1];
        for k in (0..=n - d).rev() {
            let q = rem[k + d] * lead_inv;
            quot[k] = q;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= q * *c;
            }
        }
        rem.truncate(d);
        Ok((Self::new(self.params, quot), Self::new(self.params, rem)))
    }

    /// Quotient and remainder of division by `z - r`.
    pub fn deflate(&self, r: &PadicScalar) -> (Self, PadicScalar) {
        let Some(n) = self.degree() else {
            return (Self::zero(self.params), PadicScalar::zero(self.params));
        };
        if n == 0 {
            return (Self::zero(self.params), self.coeffs[0]);
        }
        let mut quot = vec![PadicScalar::zero(self.params); n];
        let mut acc = self.coeffs[n];
        for k in (0..n).rev() {
            quot[k] = acc;
            acc = acc * *r + self.coeffs[k];
        }
        (Self::new(self.params, quot), acc)
    }

    /// `f(a + b t)` as a polynomial in `t`.
    pub fn substitute_affine(&self, a: &PadicScalar, b: &PadicScalar) -> Self {
        let lin = Self::new(self.params, vec![*a, *b]);
        let mut acc = Self::zero(self.params);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(*c));
        }
        acc
    }

    /// `z^n f(1/z)` for `n = deg f`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs[..self.degree().map_or(0, |d| d + 1)].to_vec();
        c.reverse();
        Self::new(self.params, c)
    }

    /// Leading coefficient and the monic associate.
    pub fn monic(&self) -> Result<(PadicScalar, Self)> {
        let lead = self.leading().ok_or(Error::ZeroDivision)?;
        Ok((lead, self.scale(&lead.inv()?)))
    }

    pub fn min_valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        self.params == other.params && (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return match self.coeffs.first() {
                Some(c) => write!(f, "{c}"),
                None => write!(f, "0"),
            };
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        Ok(())
    }
}

/// Roots of `f` in `K` with multiplicities.
///
/// Roots are located digit by digit: a residue `a` survives when
/// `f(a) ≡ 0 mod π`, and the search continues on `f(a + π y)`. Roots of
/// negative valuation come from the reversed polynomial. Candidates that do
/// not divide `f` at the tracked precision are discarded.
pub fn roots(f: &Poly) -> Result<Vec<(PadicScalar, u32)>> {
    let params = f.params();
    if f.is_zero() {
        return Err(Error::Unsupported("roots of the zero polynomial".into()));
    }
    let mut candidates = Vec::new();
    let depth = params.precision() as usize;
    search(f, PadicScalar::zero(params), 0, depth, true, &mut candidates);
    let mut small = Vec::new();
    search(&f.reversed(), PadicScalar::zero(params), 0, depth, false, &mut small);
    for y in small {
        if let Ok(x) = y.inv() {
            if x.valuation().is_some_and(|v| v < 0) {
                candidates.push(x);
            }
        }
    }

    let mut out: Vec<(PadicScalar, u32)> = Vec::new();
    let mut rest = f.clone();
    for r in candidates {
        if out.iter().any(|(s, _)| *s == r) {
            continue;
        }
        let mut mult = 0;
        loop {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            let (q, rem) = rest.deflate(&r);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    Ok(out)
}

fn search(
    g: &Poly,
    prefix: PadicScalar,
    level: usize,
    depth: usize,
    all_digits: bool,
    out: &mut Vec<PadicScalar>,
) {
    let params = g.params();
    let Some(shift) = g.min_valuation() else {
        out.push(prefix);
        return;
    };
    let g = g.scale(&PadicScalar::pi_pow(params, -shift));
    if g.degree() == Some(0) {
        return;
    }
    // Digits are undecidable once a coefficient is not known modulo π.
    let blurred = g.coeffs.iter().any(|c| c.absolute_precision().is_some_and(|a| a <= 0));
    if level >= depth || blurred {
        out.push(prefix + PadicScalar::zero_mod(params, level as i64));
        return;
    }
    let pi = PadicScalar::pi(params);
    let top = if all_digits || level > 0 { params.p() } else { 1 };
    for a in 0..top {
        let a = PadicScalar::from_i64(params, a as i64);
        let value = g.eval(&a);
        if value.valuation().is_none_or(|v| v >= 1) {
            let next = g.substitute_affine(&a, &pi);
            let digit = a * PadicScalar::pi_pow(params, level as i64);
            search(&next, prefix + digit, level + 1, depth, all_digits, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64, e: u32) -> FieldParams {
        FieldParams::new(p, e, 12).unwrap()
    }

    #[test]
    fn division_round_trip() {
        let k = k(5, 2);
        let f = Poly::from_i64s(k, &[3, -1, 4, 1, 5]);
        let g = Poly::from_i64s(k, &[2, 0, 1]);
        let (q, r) = f.div_rem(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let k = k(3, 1);
        let f = Poly::linear(PadicScalar::from_i64(k, 2))
            .pow(2)
            .mul(&Poly::linear(PadicScalar::from_i64(k, -7)))
            .mul(&Poly::linear(PadicScalar::from_ratio(k, 1, 3).unwrap()));
        let mut r = roots(&f).unwrap();
        r.sort_by_key(|(_, m)| *m);
        assert_eq!(r.len(), 3);
        assert_eq!(r[2].1, 2);
        assert_eq!(r[2].0, PadicScalar::from_i64(k, 2));
        let total: u32 = r.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn ramified_roots() {
        let k = k(2, 2);
        let pi = PadicScalar::pi(k);
        let f = Poly::linear(pi).mul(&Poly::linear(-pi));
        let r = roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|(x, m)| *m == 1 && x.valuation() == Some(1)));
    }

    #[test]
    fn irreducible_has_no_roots() {
        // z^2 - 2 has no root in Q_5.
        let k = k(5, 1);
        assert!(roots(&Poly::from_i64s(k, &[-2, 0, 1])).unwrap().is_empty());
        // z^2 - 5 is irreducible over Q_5 but splits once π^2 = 5.
        assert!(roots(&Poly::from_i64s(k, &[-5, 0, 1])).unwrap().is_empty());
        let k2 = FieldParams::new(5, 2, 12).unwrap();
        assert_eq!(roots(&Poly::from_i64s(k2, &[-5, 0, 1])).unwrap().len(), 2);
    }
}
