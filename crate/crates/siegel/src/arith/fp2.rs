use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::fp::{prime_factors, Fp, PrimeField};
use crate::error::Result;

/// F_{p²} = F_p[s]/(s² − r) with r the least quadratic non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    p: u64,
    r: u64,
}

impl QuadExt {
    pub fn new(p: u64) -> Result<Self> {
        let f = PrimeField::new(p)?;
        let r = (2..p).find(|&x| f.elem(x as i64).pow((p - 1) / 2).value() == p - 1).expect("odd p has a non-residue");
        Ok(QuadExt { p, r })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    /// The constant r of the modulus s² − r.
    pub fn nonresidue(self) -> u64 {
        self.r
    }

    pub fn elem(self, a: i64, b: i64) -> Fp2 {
        let p = self.p as i64;
        Fp2 { a: a.rem_euclid(p) as u64, b: b.rem_euclid(p) as u64, p: self.p, r: self.r }
    }

    pub fn embed(self, x: Fp) -> Fp2 {
        Fp2 { a: x.value(), b: 0, p: self.p, r: self.r }
    }

    pub fn zero(self) -> Fp2 {
        self.elem(0, 0)
    }

    pub fn one(self) -> Fp2 {
        self.elem(1, 0)
    }

    /// Elements in the fixed order a + b·p.
    pub fn elements(self) -> impl Iterator<Item = Fp2> {
        let q = self;
        (0..self.p * self.p).map(move |i| q.elem((i % q.p) as i64, (i / q.p) as i64))
    }

    /// Least generator of F_{p²}^× under the order a + b·p.
    pub fn generator(self) -> Fp2 {
        let n = self.p * self.p - 1;
        let factors = prime_factors(n);
        self.elements().skip(1).find(|g| factors.iter().all(|q| g.pow(n / q) != self.one())).expect("F_{p²}^× is cyclic")
    }

    /// All ζ with ζ^{p+1} = −1.
    pub fn roots_of_minus_one(self) -> Vec<Fp2> {
        let g = self.generator();
        let z = find_zeta_in(self);
        let w = g.pow(self.p - 1);
        (0..=self.p).map(|j| z * w.pow(j)).collect()
    }
}

fn find_zeta_in(q: QuadExt) -> Fp2 {
    let p = q.p;
    q.generator().pow((p * p - 1) / (2 * (p + 1)))
}

/// Deterministic (p+1)-th root of −1: ζ = g^{(p²−1)/(2(p+1))} for the least generator g.
pub fn find_zeta(p: u64) -> Result<Fp2> {
    Ok(find_zeta_in(QuadExt::new(p)?))
}

/// An element a + b·s of F_{p²}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    a: u64,
    b: u64,
    p: u64,
    r: u64,
}

impl Fp2 {
    pub fn field(self) -> QuadExt {
        QuadExt { p: self.p, r: self.r }
    }

    pub fn parts(self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// The element as an F_p value when it lies in the prime field.
    pub fn to_base(self) -> Option<Fp> {
        (self.b == 0).then(|| Fp::from_u64(self.a, self.p))
    }

    pub fn conj(self) -> Self {
        Fp2 { b: (self.p - self.b) % self.p, ..self }
    }

    /// x ↦ x^{p^s}.
    pub fn frob(self, s: u32) -> Self {
        if s % 2 == 1 {
            self.conj()
        } else {
            self
        }
    }

    pub fn norm(self) -> Fp {
        let p = self.p;
        let a = Fp::from_u64(self.a, p);
        let b = Fp::from_u64(self.b, p);
        a * a - Fp::from_u64(self.r, p) * b * b
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Self> {
        let n = self.norm().inv()?;
        let c = self.conj();
        let q = self.field();
        Some(c * q.embed(n))
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}:{}", self.a, self.b)
        }
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, o: Fp2) -> Fp2 {
        Fp2 { a: (self.a + o.a) % self.p, b: (self.b + o.b) % self.p, ..self }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, o: Fp2) -> Fp2 {
        let p = self.p;
        Fp2 { a: (self.a + p - o.a) % p, b: (self.b + p - o.b) % p, ..self }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, o: Fp2) -> Fp2 {
        let p = self.p;
        let a = (self.a * o.a + (self.b * o.b) % p * self.r) % p;
        let b = (self.a * o.b + self.b * o.a) % p;
        Fp2 { a, b, ..self }
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        let p = self.p;
        Fp2 { a: (p - self.a) % p, b: (p - self.b) % p, ..self }
    }
}

impl Div for Fp2 {
    type Output = Fp2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fp2) -> Fp2 {
        self * o.inv().expect("division by zero in F_p²")
    }
}
