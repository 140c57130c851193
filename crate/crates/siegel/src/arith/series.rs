use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::fp::Fp;
use super::fp2::Fp2;
use crate::error::{Error, Result};

/// Coefficient rings usable in a [`TruncatedSeries`].
pub trait Coeff: Copy + PartialEq + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero_like(self) -> Self;
    fn one_like(self) -> Self;
    fn is_zero(self) -> bool;
    fn try_inv(self) -> Option<Self>;
    /// x ↦ x^{p^s}.
    fn frob(self, s: u32) -> Self;
    fn int_like(self, x: i64) -> Self;
    fn characteristic(self) -> u64;
}

impl Coeff for Fp {
    fn zero_like(self) -> Self {
        Fp::new(0, self.modulus())
    }
    fn one_like(self) -> Self {
        Fp::new(1, self.modulus())
    }
    fn is_zero(self) -> bool {
        Fp::is_zero(self)
    }
    fn try_inv(self) -> Option<Self> {
        self.inv()
    }
    fn frob(self, _s: u32) -> Self {
        self
    }
    fn int_like(self, x: i64) -> Self {
        Fp::new(x, self.modulus())
    }
    fn characteristic(self) -> u64 {
        self.modulus()
    }
}

impl Coeff for Fp2 {
    fn zero_like(self) -> Self {
        self.field().zero()
    }
    fn one_like(self) -> Self {
        self.field().one()
    }
    fn is_zero(self) -> bool {
        Fp2::is_zero(self)
    }
    fn try_inv(self) -> Option<Self> {
        self.inv()
    }
    fn frob(self, s: u32) -> Self {
        Fp2::frob(self, s)
    }
    fn int_like(self, x: i64) -> Self {
        self.field().elem(x, 0)
    }
    fn characteristic(self) -> u64 {
        self.modulus()
    }
}

/// Exponent vector; unused slots stay zero.
pub type Mono = [u32; 3];

fn deg(m: &Mono) -> u32 {
    m[0] + m[1] + m[2]
}

/// Power series in one variable `t` or three variables `t11, t12, t22`,
/// exact modulo total degree `cutoff`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    nvars: usize,
    cutoff: u32,
    one: C,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn zero(nvars: usize, cutoff: u32, one: C) -> Self {
        assert!(nvars == 1 || nvars == 3, "series have one or three variables");
        TruncatedSeries { nvars, cutoff, one: one.one_like(), terms: BTreeMap::new() }
    }

    pub fn constant(c: C, nvars: usize, cutoff: u32) -> Self {
        Self::monomial([0, 0, 0], c, nvars, cutoff)
    }

    pub fn monomial(e: Mono, c: C, nvars: usize, cutoff: u32) -> Self {
        let mut s = Self::zero(nvars, cutoff, c);
        s.insert(e, c);
        s
    }

    /// The i-th variable as a series.
    pub fn var(i: usize, nvars: usize, cutoff: u32, one: C) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, one.one_like(), nvars, cutoff)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, C)>, nvars: usize, cutoff: u32, one: C) -> Self {
        let mut s = Self::zero(nvars, cutoff, one);
        for (e, c) in terms {
            s.insert(e, c);
        }
        s
    }

    fn insert(&mut self, e: Mono, c: C) {
        debug_assert!(self.nvars == 3 || (e[1] == 0 && e[2] == 0));
        if deg(&e) >= self.cutoff {
            return;
        }
        let zero = self.one.zero_like();
        let entry = self.terms.entry(e).or_insert(zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn one_elem(&self) -> C {
        self.one
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Mono) -> C {
        self.terms.get(&e).copied().unwrap_or(self.one.zero_like())
    }

    pub fn constant_term(&self) -> C {
        self.coeff([0, 0, 0])
    }

    /// Lowest total degree present; `None` for the zero series.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(deg).min()
    }

    /// Drops terms of degree ≥ k and lowers the cutoff to k.
    pub fn truncate(&self, k: u32) -> Self {
        let k = k.min(self.cutoff);
        TruncatedSeries {
            nvars: self.nvars,
            cutoff: k,
            one: self.one,
            terms: self.terms.iter().filter(|(e, _)| deg(e) < k).map(|(e, c)| (*e, *c)).collect(),
        }
    }

    pub fn scale(&self, c: C) -> Self {
        let mut out = Self::zero(self.nvars, self.cutoff, self.one);
        for (e, x) in &self.terms {
            out.insert(*e, *x * c);
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.truncate(o.cutoff);
        for (e, c) in &o.terms {
            out.insert(*e, *c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-self.one)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.cutoff.min(o.cutoff);
        let mut acc: BTreeMap<Mono, C> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            let d1 = deg(e1);
            if d1 >= k {
                continue;
            }
            for (e2, c2) in &o.terms {
                if d1 + deg(e2) >= k {
                    continue;
                }
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let v = *c1 * *c2;
                acc.entry(e).and_modify(|x| *x = *x + v).or_insert(v);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncatedSeries { nvars: self.nvars, cutoff: k, one: self.one, terms: acc }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.one, self.nvars, self.cutoff);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// ∂/∂(variable i). Precision drops by one degree.
    pub fn derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Self::zero(self.nvars, self.cutoff.saturating_sub(1), self.one);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.insert(f, *c * self.one.int_like(e[i] as i64));
        }
        out
    }

    /// t^e ↦ t^{p^s e}, a ↦ a^{p^s}. The flag reports terms lost past the cutoff.
    pub fn frobenius_substitute(&self, s: u32) -> (Self, bool) {
        let q = self.one.characteristic().pow(s) as u32;
        let mut out = Self::zero(self.nvars, self.cutoff, self.one);
        let mut lost = false;
        for (e, c) in &self.terms {
            let f = [e[0] * q, e[1] * q, e[2] * q];
            if deg(&f) >= self.cutoff {
                lost = true;
                continue;
            }
            out.insert(f, c.frob(s));
        }
        (out, lost)
    }

    /// Inverse of a series with invertible constant term (Newton iteration).
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term().try_inv().ok_or_else(|| Error::domain("series is not a unit"))?;
        let mut g = Self::constant(c0, self.nvars, self.cutoff.min(1));
        let two = Self::constant(self.one.int_like(2), self.nvars, self.cutoff);
        let mut prec = 1u32;
        while prec < self.cutoff {
            prec = (2 * prec).min(self.cutoff);
            let f = self.truncate(prec);
            let g_ext = TruncatedSeries { cutoff: prec, ..g.clone() };
            let fg = f.mul(&g_ext);
            g = g_ext.mul(&two.truncate(prec).sub(&fg));
        }
        Ok(g)
    }

    /// Division by a series whose order is zero.
    pub fn div_unit(&self, u: &Self) -> Result<Self> {
        Ok(self.mul(&u.inverse()?))
    }

    /// Univariate only: f = t^e · u with u(0) ≠ 0; u is exact below `cutoff − e`.
    pub fn split_order(&self) -> Option<(u32, Self)> {
        assert_eq!(self.nvars, 1, "split_order is univariate");
        let e = self.order()?;
        let mut u = Self::zero(1, self.cutoff - e, self.one);
        for (m, c) in &self.terms {
            u.insert([m[0] - e, 0, 0], *c);
        }
        Some((e, u))
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(C) -> C) -> Self {
        let mut out = Self::zero(self.nvars, self.cutoff, self.one);
        for (e, c) in &self.terms {
            out.insert(*e, f(*c));
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.cutoff);
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(e, c)| if self.nvars == 1 { format!("{c:?}·t^{}", e[0]) } else { format!("{c:?}·{e:?}") }).collect();
        write!(f, "{} + O({})", parts.join(" + "), self.cutoff)
    }
}

/// A univariate Laurent element t^val · unit, the unit exact below its cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<C: Coeff> {
    pub val: i64,
    pub unit: TruncatedSeries<C>,
}

impl<C: Coeff> Laurent<C> {
    pub fn one(one: C, cutoff: u32) -> Self {
        Laurent { val: 0, unit: TruncatedSeries::constant(one, 1, cutoff) }
    }

    pub fn from_series(f: &TruncatedSeries<C>) -> Option<Self> {
        f.split_order().map(|(e, unit)| Laurent { val: e as i64, unit })
    }

    pub fn mul(&self, o: &Self) -> Self {
        Laurent { val: self.val + o.val, unit: self.unit.mul(&o.unit) }
    }

    pub fn inverse(&self) -> Self {
        Laurent { val: -self.val, unit: self.unit.inverse().expect("unit part is invertible") }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inverse())
    }

    pub fn leading(&self) -> C {
        self.unit.constant_term()
    }

    /// The series t^val · unit when val ≥ 0, truncated at `cutoff`.
    pub fn to_series(&self, cutoff: u32) -> Option<TruncatedSeries<C>> {
        if self.val < 0 {
            return None;
        }
        let v = self.val as u32;
        let mut out = TruncatedSeries::zero(1, cutoff.min(self.unit.cutoff + v), self.unit.one);
        for (e, c) in self.unit.terms() {
            out.insert([e[0] + v, 0, 0], *c);
        }
        Some(out)
    }
}

/// Falling factorial m(m−1)⋯(m−i+1) in F_p, the normalizer of the lowering-operator basis.
pub fn pochhammer(m: i64, i: i64, p: u64) -> Result<Fp> {
    if i < 0 || i > m {
        return Err(Error::domain(format!("pochhammer needs 0 ≤ i ≤ m, got m={m}, i={i}")));
    }
    let mut acc = Fp::new(1, p);
    for j in 0..i {
        acc *= Fp::new(m - j, p);
    }
    if acc.is_zero() {
        return Err(Error::domain("pochhammer vanishes"));
    }
    Ok(acc)
}
