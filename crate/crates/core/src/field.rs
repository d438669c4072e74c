//! Arithmetic in the totally ramified extension `K = Q_p(π)` with `π^e = p`.
//!
//! A nonzero element is stored as `π^v · u` where the unit `u = Σ_{j<e} c_j π^j`
//! has integer coefficients `c_j`. At relative precision `r` the coefficient
//! `c_j` is known modulo `p^ceil((r - j) / e)`; this carries the same
//! information as the first `r` base-`π` digits of `u`.
//!
//! A zero keeps the absolute precision it is known to, so that a difference
//! that cancels completely still says how many digits were compared.

use alloc::{format, string::String, vec::Vec};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Largest supported ramification index.
pub const MAX_RAMIFICATION: usize = 24;

const MODULUS_LIMIT: u64 = 1 << 62;
const EXACT: i64 = i64::MAX;

type Coeffs = [u64; MAX_RAMIFICATION];

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

fn powmod(mut b: u64, mut k: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        k >>= 1;
    }
    acc
}

fn val_p(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Prime, ramification index and working precision (in `π`-digits).
///
/// The precision floor is the least relative precision an operand may carry
/// before inversion or a certified comparison refuses with
/// [`Error::PrecisionLoss`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u64,
    e: u32,
    precision: u32,
    floor: u32,
}

impl FieldParams {
    pub fn new(p: u64, e: u32, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        if e == 0 || e as usize > MAX_RAMIFICATION {
            return Err(Error::InvalidParams(format!(
                "ramification index must lie in 1..={MAX_RAMIFICATION}, got {e}"
            )));
        }
        if precision <= e {
            return Err(Error::InvalidParams(format!(
                "precision must exceed the ramification index {e}, or p vanishes"
            )));
        }
        let digits = precision.div_ceil(e);
        match p.checked_pow(digits) {
            Some(m) if m < MODULUS_LIMIT => {}
            _ => {
                return Err(Error::InvalidParams(format!(
                    "{p}^{digits} does not fit the 62-bit coefficient modulus; lower the precision"
                )))
            }
        }
        Ok(Self { p, e, precision, floor: (precision / 2).max(1) })
    }

    pub fn with_floor(mut self, floor: u32) -> Result<Self> {
        if floor == 0 || floor > self.precision {
            return Err(Error::InvalidParams(format!(
                "precision floor must lie in 1..={}, got {floor}",
                self.precision
            )));
        }
        self.floor = floor;
        Ok(self)
    }

    /// Same prime and the same `p`-adic precision over the extension of
    /// ramification index `e * factor`.
    pub fn ramify(self, factor: u32) -> Result<Self> {
        FieldParams::new(self.p, self.e * factor, self.precision * factor)?
            .with_floor(self.floor * factor)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn floor(&self) -> u32 {
        self.floor
    }

    fn modulus(&self, digits: u32) -> u64 {
        self.p.pow(digits)
    }

    /// Base-`p` digits carried by coefficient `j` at relative precision `prec`.
    fn digits_at(&self, j: usize, prec: u32) -> u32 {
        let j = j as u32;
        if prec <= j {
            0
        } else {
            (prec - j).div_ceil(self.e)
        }
    }

    fn e_usize(&self) -> usize {
        self.e as usize
    }
}

/// Multiply `Σ c_j π^j` by `π^d`, working modulo `m`.
fn shift_coeffs(params: &FieldParams, c: &Coeffs, d: u32, m: u64) -> Coeffs {
    let e = params.e_usize();
    let q = (d / params.e) as u64;
    let t = (d % params.e) as usize;
    let pq = powmod(params.p, q, m);
    let pq1 = mulmod(pq, params.p, m);
    let mut out = [0; MAX_RAMIFICATION];
    for j in 0..e {
        let idx = j + t;
        if idx < e {
            out[idx] = mulmod(c[j], pq, m);
        } else {
            out[idx - e] = mulmod(c[j], pq1, m);
        }
    }
    out
}

fn mul_coeffs(params: &FieldParams, a: &Coeffs, b: &Coeffs, m: u64) -> Coeffs {
    let e = params.e_usize();
    let mut out = [0; MAX_RAMIFICATION];
    let scalar = |c: &Coeffs| c[1..e].iter().all(|&x| x == 0);
    if scalar(b) {
        for j in 0..e {
            out[j] = mulmod(a[j], b[0], m);
        }
        return out;
    }
    if scalar(a) {
        for j in 0..e {
            out[j] = mulmod(b[j], a[0], m);
        }
        return out;
    }
    let mut lo = [0u64; MAX_RAMIFICATION];
    let mut hi = [0u64; MAX_RAMIFICATION];
    for j in 0..e {
        if a[j] == 0 {
            continue;
        }
        for k in 0..e {
            let t = mulmod(a[j], b[k], m);
            if j + k < e {
                lo[j + k] = addmod(lo[j + k], t, m);
            } else {
                hi[j + k - e] = addmod(hi[j + k - e], t, m);
            }
        }
    }
    for j in 0..e {
        out[j] = addmod(lo[j], mulmod(hi[j], params.p, m), m);
    }
    out
}

/// Element of `K`, see the module documentation for the representation.
#[derive(Clone, Copy)]
pub struct PadicScalar {
    params: FieldParams,
    /// Valuation when nonzero; absolute precision (or `EXACT`) when zero.
    order: i64,
    /// Relative precision in `π`-digits, `0` for zero.
    prec: u32,
    unit: Coeffs,
}

impl PadicScalar {
    pub fn zero(params: FieldParams) -> Self {
        Self::zero_mod(params, EXACT)
    }

    /// Zero known only modulo `π^abs`.
    pub fn zero_mod(params: FieldParams, abs: i64) -> Self {
        Self { params, order: abs, prec: 0, unit: [0; MAX_RAMIFICATION] }
    }

    pub fn one(params: FieldParams) -> Self {
        Self::from_i64(params, 1)
    }

    pub fn from_i64(params: FieldParams, n: i64) -> Self {
        if n == 0 {
            return Self::zero(params);
        }
        let mut u = n.unsigned_abs();
        let v = val_p(u, params.p);
        u /= params.p.pow(v);
        let m = params.modulus(params.precision.div_ceil(params.e));
        let mut c0 = u % m;
        if n < 0 {
            c0 = (m - c0) % m;
        }
        let mut raw = [0; MAX_RAMIFICATION];
        raw[0] = c0;
        normalize(params, raw, (v * params.e) as i64, params.precision)
    }

    /// The rational `a / b`.
    pub fn from_ratio(params: FieldParams, a: i64, b: i64) -> Result<Self> {
        Self::from_i64(params, a).div(&Self::from_i64(params, b))
    }

    /// The uniformizer `π`.
    pub fn pi(params: FieldParams) -> Self {
        Self::pi_pow(params, 1)
    }

    pub fn pi_pow(params: FieldParams, k: i64) -> Self {
        let mut unit = [0; MAX_RAMIFICATION];
        unit[0] = 1;
        Self { params, order: k, prec: params.precision, unit }
    }

    /// `Σ digits[i] π^(valuation + i)`, known to `digits.len()` digits.
    pub fn from_digits(params: FieldParams, valuation: i64, digits: &[u64]) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d >= params.p) {
            return Err(Error::InvalidParams(format!("digit {d} is not below p = {}", params.p)));
        }
        let rel = (digits.len() as u32).min(params.precision);
        if rel == 0 {
            return Ok(Self::zero_mod(params, valuation));
        }
        let e = params.e_usize();
        let mut raw = [0; MAX_RAMIFICATION];
        for (i, &d) in digits.iter().take(rel as usize).enumerate() {
            raw[i % e] += d * params.p.pow((i / e) as u32);
        }
        Ok(normalize(params, raw, valuation, rel))
    }

    /// `Σ_j components[j] π^j`; the inverse of [`PadicScalar::components`].
    pub fn from_components(params: FieldParams, components: &[PadicScalar]) -> Self {
        let mut acc = Self::zero(params);
        for (j, c) in components.iter().enumerate() {
            acc += *c * Self::pi_pow(params, j as i64);
        }
        acc
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == 0 && self.order == EXACT
    }

    /// `π`-adic valuation, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.order)
    }

    /// Number of significant `π`-digits; `0` for zero.
    pub fn relative_precision(&self) -> u32 {
        self.prec
    }

    /// The power of `π` modulo which the element is known, `None` when exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        let a = self.abs_order();
        (a != EXACT).then_some(a)
    }

    fn abs_order(&self) -> i64 {
        if self.is_zero() {
            self.order
        } else {
            self.order + self.prec as i64
        }
    }

    /// `π`-adic digits of the unit part, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let e = self.params.e_usize();
        (0..self.prec as usize)
            .map(|i| (self.unit[i % e] / self.params.p.pow((i / e) as u32)) % self.params.p)
            .collect()
    }

    pub fn abs(&self) -> AbsValue {
        match self.valuation() {
            None => AbsValue::Zero,
            Some(v) => AbsValue::from_valuation(self.params.p, v, self.params.e),
        }
    }

    fn truncate_abs(&self, abs: i64) -> Self {
        if self.is_zero() {
            return Self::zero_mod(self.params, self.order.min(abs));
        }
        if abs <= self.order {
            return Self::zero_mod(self.params, abs);
        }
        let prec = (abs - self.order).min(self.prec as i64) as u32;
        let mut out = *self;
        out.prec = prec;
        for j in 0..self.params.e_usize() {
            out.unit[j] %= self.params.modulus(self.params.digits_at(j, prec));
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.params == other.params {
            Ok(())
        } else {
            Err(Error::ParamMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_impl(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Self) -> Self {
        let params = self.params;
        let abs = self.abs_order().min(other.abs_order());
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Self::zero_mod(params, abs),
            (false, true) => self.truncate_abs(abs),
            (true, false) => other.truncate_abs(abs),
            (false, false) => {
                let (lo, hi) = if self.order <= other.order { (self, other) } else { (other, self) };
                let base = lo.order;
                let rel = (abs - base) as u32;
                let m = params.modulus(rel.div_ceil(params.e));
                let mut raw = lo.unit;
                for c in raw.iter_mut() {
                    *c %= m;
                }
                let d = hi.order - base;
                if d < rel as i64 {
                    let shifted = shift_coeffs(&params, &hi.unit, d as u32, m);
                    for j in 0..params.e_usize() {
                        raw[j] = addmod(raw[j], shifted[j], m);
                    }
                }
                normalize(params, raw, base, rel)
            }
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let params = self.params;
        let zero_times = |z: &Self, x: &Self| {
            if z.order == EXACT {
                EXACT
            } else if x.is_zero() {
                if x.order == EXACT {
                    EXACT
                } else {
                    z.order + x.order
                }
            } else {
                z.order + x.order
            }
        };
        match (self.is_zero(), other.is_zero()) {
            (true, _) => Self::zero_mod(params, zero_times(self, other)),
            (false, true) => Self::zero_mod(params, zero_times(other, self)),
            (false, false) => {
                let prec = self.prec.min(other.prec);
                let m = params.modulus(prec.div_ceil(params.e));
                let raw = mul_coeffs(&params, &self.unit, &other.unit, m);
                normalize(params, raw, self.order + other.order, prec)
            }
        }
    }

    /// Multiplicative inverse by Newton iteration on the unit part.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        if self.prec < self.params.floor {
            return Err(Error::PrecisionLoss(format!(
                "inverting an element with {} significant digits (floor {})",
                self.prec, self.params.floor
            )));
        }
        let params = self.params;
        let e = params.e_usize();
        let p = params.p;
        let m = params.modulus(self.prec.div_ceil(params.e));
        let mut y = [0; MAX_RAMIFICATION];
        y[0] = powmod(self.unit[0] % p, p - 2, p);
        let mut known = 1u32;
        while known < self.prec {
            let uy = mul_coeffs(&params, &self.unit, &y, m);
            let mut corr = [0; MAX_RAMIFICATION];
            for j in 0..e {
                corr[j] = (m - uy[j] % m) % m;
            }
            corr[0] = addmod(corr[0], 2 % m, m);
            y = mul_coeffs(&params, &y, &corr, m);
            known = known.saturating_mul(2);
        }
        Ok(normalize(params, y, -self.order, self.prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_impl(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { *self };
        let mut acc = Self::one(self.params);
        let mut b = base;
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc *= b;
            }
            b = b * b;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        *self * Self::from_i64(self.params, n)
    }

    /// Coordinates in the basis `1, π, …, π^(e-1)` over `F = Q_p`.
    pub fn components(&self) -> Vec<PadicScalar> {
        let params = self.params;
        let ei = params.e as i64;
        // An element of F known modulo π^a is known modulo the next multiple of e.
        let round_up = |a: i64| if a == EXACT { EXACT } else { a.div_euclid(ei) * ei + if a.rem_euclid(ei) > 0 { ei } else { 0 } };
        if self.is_zero() {
            return (0..ei)
                .map(|t| Self::zero_mod(params, if self.order == EXACT { EXACT } else { round_up(self.order - t) }))
                .collect();
        }
        let mut out = alloc::vec![Self::zero(params); params.e_usize()];
        for i in 0..params.e_usize() {
            let exp = self.order + i as i64;
            let t = exp.rem_euclid(ei);
            let base = exp - t;
            let rel = self.prec as i64 - i as i64;
            out[t as usize] = if rel <= 0 {
                Self::zero_mod(params, round_up(base + rel))
            } else {
                let mut raw = [0; MAX_RAMIFICATION];
                raw[0] = self.unit[i];
                normalize(params, raw, base, (rel as u32).div_ceil(params.e) * params.e)
            };
        }
        out
    }

    /// Whether every coordinate outside `F` vanishes at the tracked precision.
    pub fn is_in_base(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let ei = self.params.e as i64;
        (0..self.params.e_usize())
            .all(|i| self.unit[i] == 0 || (self.order + i as i64).rem_euclid(ei) == 0)
    }

    /// As [`PadicScalar::is_in_base`], refusing when too few digits are known.
    pub fn certify_in_base(&self) -> Result<bool> {
        if !self.is_zero() && self.prec < self.params.floor {
            return Err(Error::PrecisionLoss(format!(
                "classifying an element with {} significant digits",
                self.prec
            )));
        }
        Ok(self.is_in_base())
    }

    /// Equality that refuses to answer when the agreement covers fewer than
    /// `floor` digits of the larger operand.
    pub fn certified_eq(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        let d = *self - *other;
        if !d.is_zero() {
            return Ok(false);
        }
        if d.order == EXACT {
            return Ok(true);
        }
        let reference = match (self.valuation(), other.valuation()) {
            (None, None) => return Ok(true),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        if d.order - reference < self.params.floor as i64 {
            return Err(Error::PrecisionLoss(format!(
                "only {} digits agree",
                d.order - reference
            )));
        }
        Ok(true)
    }
}

/// Canonical form of `π^base · Σ raw_j π^j` known modulo `π^(base + rel)`.
fn normalize(params: FieldParams, mut raw: Coeffs, base: i64, rel: u32) -> PadicScalar {
    let e = params.e_usize();
    let p = params.p;
    for (j, c) in raw.iter_mut().enumerate().take(e) {
        *c %= params.modulus(params.digits_at(j, rel));
    }
    let w = (0..e)
        .filter(|&j| raw[j] != 0)
        .map(|j| params.e * val_p(raw[j], p) + j as u32)
        .min();
    let Some(w) = w else {
        return PadicScalar::zero_mod(params, base + rel as i64);
    };
    let q = w / params.e;
    let t = (w % params.e) as usize;
    let pq = p.pow(q);
    let mut out = [0; MAX_RAMIFICATION];
    for j in 0..e {
        if j >= t {
            out[j - t] = raw[j] / pq;
        } else {
            out[j + e - t] = raw[j] / (pq * p);
        }
    }
    let prec = (rel - w).min(params.precision);
    for (j, c) in out.iter_mut().enumerate().take(e) {
        *c %= params.modulus(params.digits_at(j, prec));
    }
    PadicScalar { params, order: base + w as i64, prec, unit: out }
}

impl PartialEq for PadicScalar {
    /// Congruence modulo the tracked precision.
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && (*self - *other).is_zero()
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(mut self) -> Self {
        if self.is_zero() {
            return self;
        }
        for j in 0..self.params.e_usize() {
            let m = self.params.modulus(self.params.digits_at(j, self.prec));
            self.unit[j] = (m - self.unit[j] % m) % m;
        }
        self
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        -*self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl:ident, $assign:ident, $assign_method:ident) => {
        impl $trait for PadicScalar {
            type Output = PadicScalar;
            /// Panics when the operands carry different field parameters.
            fn $method(self, rhs: Self) -> Self {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a PadicScalar> for &'a PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: Self) -> PadicScalar {
                assert!(self.params == rhs.params, "operands carry different field parameters");
                self.$impl(rhs)
            }
        }
        impl $assign for PadicScalar {
            fn $assign_method(&mut self, rhs: Self) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

trait SubImpl {
    fn sub_impl(&self, other: &Self) -> Self;
}

impl SubImpl for PadicScalar {
    fn sub_impl(&self, other: &Self) -> Self {
        self.add_impl(&-*other)
    }
}

binop!(Add, add, add_impl, AddAssign, add_assign);
binop!(Sub, sub, sub_impl, SubAssign, sub_assign);
binop!(Mul, mul, mul_impl, MulAssign, mul_assign);

fn write_power(f: &mut fmt::Formatter<'_>, k: i64) -> fmt::Result {
    match k {
        0 => Ok(()),
        1 => write!(f, "π"),
        _ => write!(f, "π^{k}"),
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return match self.absolute_precision() {
                None => write!(f, "0"),
                Some(a) => {
                    write!(f, "O(")?;
                    if a == 0 {
                        write!(f, "1")?;
                    } else {
                        write!(f, "π^{a}")?;
                    }
                    write!(f, ")")
                }
            };
        }
        let mut first = true;
        for (i, d) in self.digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.order + i as i64;
            if d != 1 || k == 0 {
                write!(f, "{d}")?;
            }
            write_power(f, k)?;
        }
        let a = self.order + self.prec as i64;
        if a == 0 {
            write!(f, " + O(1)")
        } else {
            write!(f, " + O(π^{a})")
        }
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [p={}, e={}]", self.params.p, self.params.e)
    }
}

/// Exact absolute value `p^(num/den)`, or zero.
#[derive(Clone, Copy, Debug)]
pub enum AbsValue {
    Zero,
    Power { p: u64, num: i64, den: u32 },
}

impl AbsValue {
    pub fn one(p: u64) -> Self {
        AbsValue::Power { p, num: 0, den: 1 }
    }

    /// `|x| = p^(-v/e)` for `x` of valuation `v`.
    pub fn from_valuation(p: u64, v: i64, e: u32) -> Self {
        AbsValue::Power { p, num: -v, den: e }
    }

    /// The exponent of `p` as a reduced fraction.
    pub fn exponent(&self) -> Option<(i64, u32)> {
        match *self {
            AbsValue::Zero => None,
            AbsValue::Power { num, den, .. } => {
                let g = gcd(num.unsigned_abs(), den as u64).max(1);
                Some((num / g as i64, (den as u64 / g) as u32))
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (*self, *other) {
            (AbsValue::Power { p, num: a, den: b }, AbsValue::Power { num: c, den: d, .. }) => {
                let den = b as i64 * d as i64;
                let num = a * d as i64 + c * b as i64;
                let g = gcd(num.unsigned_abs(), den as u64).max(1) as i64;
                AbsValue::Power { p, num: num / g, den: (den / g) as u32 }
            }
            _ => AbsValue::Zero,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = match self {
            AbsValue::Zero if k > 0 => return AbsValue::Zero,
            AbsValue::Zero => return AbsValue::one(0),
            AbsValue::Power { p, .. } => AbsValue::one(*p),
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl PartialEq for AbsValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for AbsValue {}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AbsValue::Zero, AbsValue::Zero) => Ordering::Equal,
            (AbsValue::Zero, _) => Ordering::Less,
            (_, AbsValue::Zero) => Ordering::Greater,
            (AbsValue::Power { num: a, den: b, .. }, AbsValue::Power { num: c, den: d, .. }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
        }
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, self.exponent()) {
            (AbsValue::Power { p, .. }, Some((n, 1))) => write!(f, "{p}^{n}"),
            (AbsValue::Power { p, .. }, Some((n, d))) => write!(f, "{p}^({n}/{d})"),
            _ => write!(f, "0"),
        }
    }
}

/// Human-readable rendering used in reports.
pub fn describe(x: &PadicScalar) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, e: u32, n: u32) -> FieldParams {
        FieldParams::new(p, e, n).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(FieldParams::new(4, 1, 10).is_err());
        assert!(FieldParams::new(5, 0, 10).is_err());
        assert!(FieldParams::new(5, 1, 0).is_err());
        assert!(FieldParams::new(5, 1, 40).is_err());
        assert!(FieldParams::new(5, 2, 40).is_ok());
    }

    #[test]
    fn add_zero_is_identity() {
        let k = params(5, 2, 12);
        let x = PadicScalar::from_i64(k, 17) + PadicScalar::pi(k);
        assert_eq!(x + PadicScalar::zero(k), x);
    }

    #[test]
    fn carry_into_next_digit() {
        let k = params(5, 1, 10);
        let s = PadicScalar::from_i64(k, 2) + PadicScalar::from_i64(k, 3);
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s, PadicScalar::from_i64(k, 5));
    }

    #[test]
    fn pi_plus_pi() {
        let k = params(2, 2, 12);
        let pi = PadicScalar::pi(k);
        let s = pi + pi;
        assert_eq!(s.valuation(), Some(3));
        assert_eq!(s, pi * pi * pi);
        assert_eq!(s.digits()[0], 1);
    }

    #[test]
    fn pi_to_the_e_is_p() {
        for (p, e) in [(2, 3), (3, 2), (5, 4)] {
            let k = params(p, e, 16);
            assert_eq!(PadicScalar::pi(k).pow(e as i64).unwrap(), PadicScalar::from_i64(k, p as i64));
        }
    }

    #[test]
    fn inverse_examples() {
        let k = params(5, 1, 20);
        let one = PadicScalar::one(k);
        assert_eq!(one.inv().unwrap(), one);
        let two = PadicScalar::from_i64(k, 2);
        assert_eq!(two * two.inv().unwrap(), one);
        let k2 = params(3, 3, 18);
        let pi = PadicScalar::pi(k2);
        let ip = pi.inv().unwrap();
        assert_eq!(ip.valuation(), Some(-1));
        assert_eq!(pi * ip, PadicScalar::one(k2));
        assert_eq!(PadicScalar::zero(k).inv(), Err(Error::ZeroDivision));
    }

    #[test]
    fn absolute_values() {
        let k = params(7, 2, 10);
        assert_eq!(PadicScalar::zero(k).abs(), AbsValue::Zero);
        assert_eq!(PadicScalar::from_i64(k, 7).abs().exponent(), Some((-1, 1)));
        assert_eq!(PadicScalar::pi(k).abs().exponent(), Some((-1, 2)));
        assert!(PadicScalar::pi(k).abs() < AbsValue::one(7));
    }

    #[test]
    fn cancellation_keeps_absolute_precision() {
        let k = params(3, 2, 10);
        let x = PadicScalar::from_i64(k, 4) * PadicScalar::pi(k);
        let d = x - x;
        assert!(d.is_zero());
        assert_eq!(d.absolute_precision(), Some(11));
        assert!(x.certified_eq(&x).unwrap());
        let sloppy = PadicScalar::from_digits(k, 1, &[1, 0]).unwrap();
        assert!(sloppy.certified_eq(&x).is_err());
    }

    #[test]
    fn digits_round_trip() {
        let k = params(3, 2, 9);
        let digits = [2, 0, 1, 2, 2, 0, 1, 1, 2];
        let x = PadicScalar::from_digits(k, -3, &digits).unwrap();
        assert_eq!(x.digits(), digits);
        assert_eq!(x.valuation(), Some(-3));
    }

    #[test]
    fn components_and_base_membership() {
        let k = params(5, 3, 15);
        let a = PadicScalar::from_i64(k, 7);
        let b = PadicScalar::from_i64(k, -3);
        let x = a + b * PadicScalar::pi(k).pow(2).unwrap();
        let c = x.components();
        assert_eq!(c[0], a);
        assert_eq!(c[1], PadicScalar::zero(k));
        assert_eq!(c[2], b);
        assert!(a.is_in_base());
        assert!(!x.is_in_base());
        assert_eq!(PadicScalar::from_components(k, &c), x);
    }

    #[test]
    fn negative_and_ratio() {
        let k = params(2, 1, 30);
        let third = PadicScalar::from_ratio(k, 1, 3).unwrap();
        assert_eq!(third.mul_int(3), PadicScalar::one(k));
        let m = PadicScalar::from_i64(k, -12);
        assert_eq!(m.valuation(), Some(2));
        assert_eq!(m + PadicScalar::from_i64(k, 12), PadicScalar::zero(k));
    }

    #[test]
    fn display_form() {
        let k = params(5, 2, 4);
        let x = PadicScalar::from_i64(k, 3) + PadicScalar::pi(k);
        assert_eq!(format!("{x}"), "3 + π + O(π^4)");
        assert_eq!(format!("{}", PadicScalar::zero(k)), "0");
    }
}
