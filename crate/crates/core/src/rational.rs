//! Rational functions of one variable over `K`.
//!
//! The denominator is kept monic and factored: linear factors `z - r` with
//! `r ∈ K`, plus at most a few factors with no root in `K`. Poles can then be
//! classified, moved by Möbius transformations and expanded without computing
//! inexact greatest common divisors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldParams, PadicScalar};
use crate::poly::{roots, Poly};

/// Monic irreducible-over-the-tracked-roots factor of a denominator.
#[derive(Clone, Debug)]
pub struct Factor {
    poly: Poly,
    root: Option<PadicScalar>,
}

impl Factor {
    pub fn linear(r: PadicScalar) -> Self {
        Self { poly: Poly::linear(r), root: Some(r) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// The root when the factor is `z - r`.
    pub fn root(&self) -> Option<PadicScalar> {
        self.root
    }

    fn same(&self, other: &Self) -> bool {
        match (&self.root, &other.root) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.poly == other.poly,
            _ => false,
        }
    }
}

/// A point of the projective line over `K`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Place {
    Finite(PadicScalar),
    Infinity,
}

#[derive(Clone)]
pub struct RationalFunction {
    numer: Poly,
    denom: Vec<(Factor, u32)>,
}

/// Whether `rem = f(r)` certifies a root of `f` at `r`. Writing
/// `f(r + x) = rem + Σ t_j x^j`, the Newton polygon puts a root within
/// `(v(rem) - v(t_j)) / j` of `r` for every `t_j` of known valuation. The root
/// counts when that distance covers `floor` digits of `r`; otherwise the
/// factor is kept, which leaves the function unchanged.
fn vanishes_at(f: &Poly, r: &PadicScalar, rem: &PadicScalar) -> bool {
    if !rem.is_zero() {
        return false;
    }
    let Some(known) = rem.absolute_precision() else {
        return true;
    };
    let taylor = f.substitute_affine(r, &PadicScalar::one(f.params()));
    let Some(near) = taylor
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(j, t)| t.valuation().map(|v| (known - v).div_euclid(j as i64)))
        .max()
    else {
        return false;
    };
    near - r.valuation().unwrap_or(0) >= f.params().floor() as i64
}

impl RationalFunction {
    pub fn zero(params: FieldParams) -> Self {
        Self::from_poly(Poly::zero(params))
    }

    pub fn one(params: FieldParams) -> Self {
        Self::from_poly(Poly::one(params))
    }

    pub fn constant(c: PadicScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The coordinate function `z`.
    pub fn z(params: FieldParams) -> Self {
        Self::from_poly(Poly::z(params))
    }

    pub fn from_poly(numer: Poly) -> Self {
        Self { numer, denom: Vec::new() }
    }

    /// `(z - r)^k` for any integer `k`.
    pub fn linear_power(r: PadicScalar, k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::linear(r).pow(k as u32))
        } else {
            Self { numer: Poly::one(r.params()), denom: vec![(Factor::linear(r), (-k) as u32)] }
        }
    }

    /// `numer / denom`, factoring the denominator over `K`.
    pub fn new(numer: Poly, denom: Poly) -> Result<Self> {
        let (lead, monic) = denom.monic()?;
        let mut factors = Vec::new();
        let mut rest = monic;
        for (r, k) in roots(&rest)? {
            for _ in 0..k {
                rest = rest.deflate(&r).0;
            }
            factors.push((Factor::linear(r), k));
        }
        if rest.degree().unwrap_or(0) > 0 {
            let (_, rest) = rest.monic()?;
            factors.push((Factor { poly: rest, root: None }, 1));
        }
        let numer = numer.scale(&lead.inv()?);
        Ok(Self { numer, denom: factors }.reduce())
    }

    pub fn params(&self) -> FieldParams {
        self.numer.params()
    }

    pub fn numerator(&self) -> &Poly {
        &self.numer
    }

    pub fn factors(&self) -> &[(Factor, u32)] {
        &self.denom
    }

    pub fn denominator(&self) -> Poly {
        self.denom
            .iter()
            .fold(Poly::one(self.params()), |acc, (f, k)| acc.mul(&f.poly.pow(*k)))
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_empty()
    }

    /// Finite poles lying in `K`, with their orders.
    pub fn linear_poles(&self) -> impl Iterator<Item = (PadicScalar, u32)> + '_ {
        self.denom.iter().filter_map(|(f, k)| f.root.map(|r| (r, *k)))
    }

    /// Whether some denominator factor has no root in `K`.
    pub fn has_unsplit_factor(&self) -> bool {
        self.denom.iter().any(|(f, _)| f.root.is_none())
    }

    /// Collects equal denominator factors.
    fn merge(mut self) -> Self {
        let mut merged: Vec<(Factor, u32)> = Vec::new();
        for (f, k) in self.denom.drain(..) {
            match merged.iter_mut().find(|(g, _)| g.same(&f)) {
                Some((_, m)) => *m += k,
                None => merged.push((f, k)),
            }
        }
        // A numerator that is zero only modulo the precision keeps its poles,
        // which record where that precision came from.
        if self.numer.is_exact_zero() {
            return Self::from_poly(self.numer);
        }
        self.denom = merged;
        self
    }

    /// Merges factors and cancels those that certifiably divide the numerator.
    fn reduce(self) -> Self {
        let mut this = self.merge();
        let mut merged = core::mem::take(&mut this.denom);
        let mut numer = this.numer;
        if numer.is_zero() {
            return Self { numer, denom: merged };
        }
        for (f, k) in merged.iter_mut() {
            while *k > 0 {
                let (q, rem) = match &f.root {
                    Some(r) => {
                        let (q, rem) = numer.deflate(r);
                        (q, vanishes_at(&numer, r, &rem))
                    }
                    None => match numer.div_rem(&f.poly) {
                        Ok((q, rem)) => (q, rem.is_zero()),
                        Err(_) => break,
                    },
                };
                if !rem || q.is_zero() {
                    break;
                }
                numer = q;
                *k -= 1;
            }
        }
        merged.retain(|(_, k)| *k > 0);
        Self { numer, denom: merged }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut lcm: Vec<(Factor, u32)> = self.denom.clone();
        for (f, k) in &other.denom {
            match lcm.iter_mut().find(|(g, _)| g.same(f)) {
                Some((_, m)) => *m = (*m).max(*k),
                None => lcm.push((f.clone(), *k)),
            }
        }
        let cofactor = |own: &[(Factor, u32)]| {
            lcm.iter().fold(Poly::one(self.params()), |acc, (f, k)| {
                let have = own.iter().find(|(g, _)| g.same(f)).map_or(0, |(_, m)| *m);
                acc.mul(&f.poly.pow(k - have))
            })
        };
        let numer = self
            .numer
            .mul(&cofactor(&self.denom))
            .add(&other.numer.mul(&cofactor(&other.denom)));
        Self { numer, denom: lcm }.reduce()
    }

    pub fn neg(&self) -> Self {
        Self { numer: self.numer.neg(), denom: self.denom.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        Self { numer: self.numer.scale(c), denom: self.denom.clone() }.reduce()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut denom = self.denom.clone();
        denom.extend(other.denom.iter().cloned());
        Self { numer: self.numer.mul(&other.numer), denom }.reduce()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        Self::new(self.denominator(), self.numer.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one(self.params());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let params = self.params();
        let full = self.denom.iter().fold(Poly::one(params), |acc, (f, _)| acc.mul(&f.poly));
        let mut numer = self.numer.derivative().mul(&full);
        for (i, (f, k)) in self.denom.iter().enumerate() {
            let others = self
                .denom
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(Poly::one(params), |acc, (_, (g, _))| acc.mul(&g.poly));
            let term = self.numer.mul(&f.poly.derivative()).mul(&others);
            numer = numer.sub(&term.scale(&PadicScalar::from_i64(params, *k as i64)));
        }
        let denom = self.denom.iter().map(|(f, k)| (f.clone(), k + 1)).collect();
        Self { numer, denom }.reduce()
    }

    /// `k`-fold derivative.
    pub fn nth_derivative(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn eval(&self, z: &PadicScalar) -> Result<PadicScalar> {
        let mut value = self.numer.eval(z);
        for (f, k) in &self.denom {
            let d = f.poly.eval(z);
            if d.is_zero() {
                return Err(Error::Singular);
            }
            value *= d.pow(-(*k as i64))?;
        }
        Ok(value)
    }

    /// `f((α z + β) / (γ z + δ))` for `αδ - βγ ≠ 0`.
    pub fn compose_mobius(
        &self,
        alpha: &PadicScalar,
        beta: &PadicScalar,
        gamma: &PadicScalar,
        delta: &PadicScalar,
    ) -> Result<Self> {
        self.compose_mobius_twisted(alpha, beta, gamma, delta, 0)
    }

    /// `(γ z + δ)^k f((α z + β) / (γ z + δ))`. The power of `γ z + δ` is
    /// combined with the one produced by the substitution, so no factor is
    /// created only to be cancelled.
    pub fn compose_mobius_twisted(
        &self,
        alpha: &PadicScalar,
        beta: &PadicScalar,
        gamma: &PadicScalar,
        delta: &PadicScalar,
        k: i64,
    ) -> Result<Self> {
        let params = self.params();
        if (*alpha * *delta - *beta * *gamma).is_zero() {
            return Err(Error::Singular);
        }
        let num_lin = Poly::new(params, vec![*beta, *alpha]);
        let den_lin = Poly::new(params, vec![*delta, *gamma]);
        let homogenize = |p: &Poly| {
            let d = p.nominal_degree();
            p.coeffs().iter().enumerate().fold(Poly::zero(params), |acc, (k, c)| {
                acc.add(&num_lin.pow(k as u32).mul(&den_lin.pow((d - k) as u32)).scale(c))
            })
        };
        let mut excess: i64 = -(self.numer.nominal_degree() as i64);
        let mut numer = homogenize(&self.numer);
        let mut denom = Vec::new();
        for (f, k) in &self.denom {
            excess += f.poly.degree().unwrap_or(0) as i64 * *k as i64;
            match f.root {
                Some(r) => {
                    let lead = *alpha - r * *gamma;
                    let tail = *beta - r * *delta;
                    // The pole moves to infinity exactly when `α = r γ`.
                    if alpha.certified_eq(&(r * *gamma))? {
                        numer = numer.scale(&tail.pow(-(*k as i64))?);
                    } else {
                        numer = numer.scale(&lead.pow(-(*k as i64))?);
                        denom.push((Factor::linear(-tail * lead.inv()?), *k));
                    }
                }
                None => {
                    let (lead, monic) = homogenize(&f.poly).monic()?;
                    numer = numer.scale(&lead.pow(-(*k as i64))?);
                    denom.push((Factor { poly: monic, root: None }, *k));
                }
            }
        }
        excess += k;
        if excess >= 0 {
            numer = numer.mul(&den_lin.pow(excess as u32));
        } else if gamma.is_zero() {
            numer = numer.scale(&delta.pow(excess)?);
        } else {
            numer = numer.scale(&gamma.pow(excess)?);
            denom.push((Factor::linear(-*delta * gamma.inv()?), (-excess) as u32));
        }
        // The numerator vanishes at a moved pole only if it vanished at the
        // original one, so a reduced input gives a reduced result.
        Ok(Self { numer, denom }.merge())
    }

    /// `deg(numerator) - deg(denominator)`, `None` for the zero function.
    pub fn laurent_degree_at_infinity(&self) -> Option<i64> {
        let dn = self.numer.degree()? as i64;
        let dd: i64 = self
            .denom
            .iter()
            .map(|(f, k)| f.poly.degree().unwrap_or(0) as i64 * *k as i64)
            .sum();
        Some(dn - dd)
    }

    /// Order of the pole at `a` and the first `count` coefficients of
    /// `f = Σ c_i (z - a)^(i - order)`.
    pub fn laurent_at(&self, a: &PadicScalar, count: usize) -> Result<(u32, Vec<PadicScalar>)> {
        let params = self.params();
        let one = PadicScalar::one(params);
        let mut order = 0;
        // Shifting factor by factor keeps the relative precision of values
        // that are small at `a`.
        let mut bottom = Poly::one(params);
        for (f, k) in &self.denom {
            match &f.root {
                Some(r) if r == a => order = *k,
                _ => bottom = bottom.mul(&f.poly.substitute_affine(a, &one).pow(*k)),
            }
        }
        let top = self.numer.substitute_affine(a, &one);
        Ok((order, series_quotient(&top, &bottom, count)?))
    }

    pub fn residue_at(&self, place: &Place) -> Result<PadicScalar> {
        let params = self.params();
        match place {
            Place::Finite(a) => {
                let (order, c) = self.laurent_at(a, self.pole_order(a) as usize)?;
                Ok(if order == 0 { PadicScalar::zero(params) } else { c[order as usize - 1] })
            }
            Place::Infinity => {
                // z = 1/w, dz = -dw/w^2.
                let Some(dn) = self.numer.degree() else {
                    return Ok(PadicScalar::zero(params));
                };
                let dd = self.denominator().degree().unwrap_or(0);
                let idx = 1 + dn as i64 - dd as i64;
                if idx < 0 {
                    return Ok(PadicScalar::zero(params));
                }
                let c = series_quotient(
                    &self.numer.reversed(),
                    &self.denominator().reversed(),
                    idx as usize + 1,
                )?;
                Ok(-c[idx as usize])
            }
        }
    }

    fn pole_order(&self, a: &PadicScalar) -> u32 {
        self.linear_poles().find(|(r, _)| r == a).map_or(0, |(_, k)| k)
    }

    /// Sum of the residues of `f(z) dz` at every pole, including infinity.
    /// Requires the denominator to split over `K`.
    pub fn residue_sum(&self) -> Result<PadicScalar> {
        if self.has_unsplit_factor() {
            return Err(Error::IrreduciblePole);
        }
        let mut acc = self.residue_at(&Place::Infinity)?;
        for (r, _) in self.linear_poles() {
            acc += self.residue_at(&Place::Finite(r))?;
        }
        Ok(acc)
    }
}

/// First `count` coefficients of the power series `a(t) / b(t)`.
pub fn series_quotient(a: &Poly, b: &Poly, count: usize) -> Result<Vec<PadicScalar>> {
    let b0 = b.coeff(0).inv()?;
    let mut out: Vec<PadicScalar> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = a.coeff(k);
        for i in 1..=k {
            acc -= b.coeff(i) * out[k - i];
        }
        out.push(acc * b0);
    }
    Ok(out)
}

impl PartialEq for RationalFunction {
    /// Cross-multiplied congruence of numerators and denominators.
    fn eq(&self, other: &Self) -> bool {
        self.params() == other.params()
            && self.numer.mul(&other.denominator()) == other.numer.mul(&self.denominator())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.numer)?;
        if self.denom.is_empty() {
            return Ok(());
        }
        write!(f, " / ")?;
        for (i, (g, k)) in self.denom.iter().enumerate() {
            if i > 0 {
                write!(f, " · ")?;
            }
            let base = match &g.root {
                Some(r) => format!("(z - ({r}))"),
                None => format!("({})", g.poly),
            };
            if *k == 1 {
                write!(f, "{base}")?;
            } else {
                write!(f, "{base}^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomial part plus principal parts at poles in `F`.
#[derive(Clone, Debug)]
pub struct PartialFractionForm {
    pub polynomial: Poly,
    /// Each pole with its coefficients `a_{-1}, a_{-2}, …, a_{-k}`.
    pub poles: Vec<(PadicScalar, Vec<PadicScalar>)>,
}

impl PartialFractionForm {
    pub fn reassemble(&self) -> RationalFunction {
        let mut acc = RationalFunction::from_poly(self.polynomial.clone());
        for (r, coeffs) in &self.poles {
            for (j, a) in coeffs.iter().enumerate() {
                acc = acc.add(&RationalFunction::linear_power(*r, -(j as i64 + 1)).scale(a));
            }
        }
        acc
    }

    /// Whether every principal part avoids the powers `(z - r)^i`, `-s < i ≤ -1`.
    pub fn in_n0_s(&self, s: u32) -> bool {
        self.poles
            .iter()
            .all(|(_, c)| c.iter().take(s.saturating_sub(1) as usize).all(|a| a.is_zero()))
    }
}

/// Splits `f` into a polynomial and principal parts; every pole must lie in `F`.
pub fn partial_fractions(f: &RationalFunction) -> Result<PartialFractionForm> {
    let mut poles = Vec::new();
    for (g, k) in f.factors() {
        let r = g.root().ok_or(Error::IrreduciblePole)?;
        if !r.certify_in_base()? {
            return Err(Error::IrreduciblePole);
        }
        let (_, c) = f.laurent_at(&r, *k as usize)?;
        let coeffs = (1..=*k as usize).map(|j| c[*k as usize - j]).collect();
        poles.push((r, coeffs));
    }
    let (polynomial, _) = f.numerator().div_rem(&f.denominator())?;
    Ok(PartialFractionForm { polynomial, poles })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> FieldParams {
        FieldParams::new(5, 2, 16).unwrap()
    }

    fn s(params: FieldParams, n: i64) -> PadicScalar {
        PadicScalar::from_i64(params, n)
    }

    #[test]
    fn construction_factors_and_reduces() {
        let k = k();
        // (z^2 - 1) / (z^2 - 3z + 2) = (z + 1) / (z - 2)
        let f = RationalFunction::new(Poly::from_i64s(k, &[-1, 0, 1]), Poly::from_i64s(k, &[2, -3, 1]))
            .unwrap();
        assert_eq!(f.factors().len(), 1);
        assert_eq!(f.factors()[0].0.root(), Some(s(k, 2)));
        assert_eq!(f.numerator(), &Poly::from_i64s(k, &[1, 1]));
    }

    #[test]
    fn partial_fraction_example() {
        let k = k();
        let f = RationalFunction::new(Poly::one(k), Poly::from_i64s(k, &[0, -1, 1])).unwrap();
        let pf = partial_fractions(&f).unwrap();
        assert!(pf.polynomial.is_zero());
        let expected = RationalFunction::linear_power(s(k, 1), -1)
            .sub(&RationalFunction::linear_power(s(k, 0), -1));
        assert_eq!(pf.reassemble(), f);
        assert_eq!(expected, f);
        for (r, c) in &pf.poles {
            let sign = if *r == s(k, 0) { -1 } else { 1 };
            assert_eq!(c, &vec![s(k, sign)]);
        }
    }

    #[test]
    fn poles_outside_base_field_rejected() {
        let k = k();
        let pi = PadicScalar::pi(k);
        let f = RationalFunction::new(Poly::one(k), Poly::linear(pi).mul(&Poly::linear(-pi))).unwrap();
        assert_eq!(partial_fractions(&f).unwrap_err(), Error::IrreduciblePole);
        let poly = RationalFunction::from_poly(Poly::from_i64s(k, &[1, 2, 3]));
        assert!(partial_fractions(&poly).unwrap().poles.is_empty());
    }

    #[test]
    fn residues() {
        let k = k();
        let zero = s(k, 0);
        let inv_z = RationalFunction::linear_power(zero, -1);
        assert_eq!(inv_z.residue_at(&Place::Finite(zero)).unwrap(), s(k, 1));
        let a = s(k, 3);
        let sq = RationalFunction::linear_power(a, -2);
        assert!(sq.residue_at(&Place::Finite(a)).unwrap().is_zero());
        // (Z - z)^{-1} as a function of z, for Z = π.
        let big_z = PadicScalar::pi(k);
        let kernel = RationalFunction::linear_power(big_z, -1).scale(&s(k, -1));
        assert_eq!(kernel.residue_at(&Place::Infinity).unwrap(), s(k, 1));
        assert!(kernel.residue_sum().unwrap().is_zero());
    }

    #[test]
    fn derivative_of_pole() {
        let k = k();
        let r = s(k, 7);
        let f = RationalFunction::linear_power(r, -1);
        let d2 = f.nth_derivative(2);
        assert_eq!(d2, RationalFunction::linear_power(r, -3).scale(&s(k, 2)));
        let poly = RationalFunction::from_poly(Poly::from_i64s(k, &[1, 1, 1]));
        assert!(poly.nth_derivative(3).is_zero());
    }

    #[test]
    fn mobius_inversion() {
        let k = k();
        let one = s(k, 1);
        let zero = s(k, 0);
        // f(z) = 1/(z - 2); f(-1/z) = 1/(-1/z - 2) = -z/(2z + 1)
        let f = RationalFunction::linear_power(s(k, 2), -1);
        let g = f.compose_mobius(&zero, &(-one), &one, &zero).unwrap();
        let expected = RationalFunction::new(Poly::from_i64s(k, &[0, -1]), Poly::from_i64s(k, &[1, 2])).unwrap();
        assert_eq!(g, expected);
    }
}
