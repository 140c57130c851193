use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Trial-division primality test; moduli here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Requires an odd prime p ≥ 5.
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::domain(format!("p = {p} is not a prime ≥ 5")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn elem(self, x: i64) -> Fp {
        Fp::new(x, self.p)
    }

    pub fn zero(self) -> Fp {
        Fp::new(0, self.p)
    }

    pub fn one(self) -> Fp {
        Fp::new(1, self.p)
    }

    /// All elements 0..p.
    pub fn elements(self) -> impl Iterator<Item = Fp> {
        let p = self.p;
        (0..p).map(move |v| Fp::from_u64(v, p))
    }

    /// Smallest generator of F_p^×.
    pub fn generator(self) -> Fp {
        let factors = prime_factors(self.p - 1);
        (2..self.p)
            .map(|g| Fp::from_u64(g, self.p))
            .find(|g| factors.iter().all(|q| g.pow((self.p - 1) / q) != self.one()))
            .expect("F_p^× is cyclic")
    }
}

/// An element of F_p carrying its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(x: i64, p: u64) -> Self {
        Fp { v: x.rem_euclid(p as i64) as u64, p }
    }

    pub fn from_u64(x: u64, p: u64) -> Self {
        Fp { v: x % p, p }
    }

    pub fn value(self) -> u64 {
        self.v
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp { v: 1 % self.p, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Signed exponent; negative powers need a unit.
    pub fn pow_signed(self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }

    pub fn inv(self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { v: (self.v + o.v) % self.p, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        debug_assert_eq!(self.p, o.p);
        Fp { v: (self.v * o.v) % self.p, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }
}

/// Panics on division by zero; use [`Fp::inv`] when the divisor may vanish.
impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fp) -> Fp {
        self * o.inv().expect("division by zero in F_p")
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, o: Fp) {
        *self = *self + o;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, o: Fp) {
        *self = *self - o;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, o: Fp) {
        *self = *self * o;
    }
}
