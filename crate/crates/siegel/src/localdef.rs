//! Local formulas for theta operators on F_p[[t11, t12, t22]] truncated by total degree:
//! leading terms at superspecial points and the closed form of Θ through unit Hasse models.

use crate::arith::{is_prime, Fp, TruncatedSeries};
use crate::error::{Error, Result};

pub type Local = TruncatedSeries<Fp>;

pub const T11: usize = 0;
pub const T12: usize = 1;
pub const T22: usize = 2;

/// F_p[[t11, t12, t22]] modulo total degree `cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalRing {
    pub p: u64,
    pub cutoff: u32,
}

impl LocalRing {
    pub fn new(p: u64, cutoff: u32) -> Result<Self> {
        if !is_prime(p) || p < 5 {
            return Err(Error::domain(format!("p must be a prime ≥ 5, got {p}")));
        }
        Ok(LocalRing { p, cutoff })
    }

    pub fn one(&self) -> Fp {
        Fp::new(1, self.p)
    }

    pub fn fp(&self, x: i64) -> Fp {
        Fp::new(x, self.p)
    }

    pub fn zero(&self) -> Local {
        Local::zero(3, self.cutoff, self.one())
    }

    pub fn constant(&self, c: Fp) -> Local {
        Local::constant(c, 3, self.cutoff)
    }

    pub fn var(&self, i: usize) -> Local {
        Local::var(i, 3, self.cutoff, self.one())
    }

    pub fn monomial(&self, e: [u32; 3], c: i64) -> Local {
        Local::monomial(e, self.fp(c), 3, self.cutoff)
    }

    /// t11·t22 − t12².
    pub fn superspecial_det(&self) -> Local {
        self.var(T11).mul(&self.var(T22)).sub(&self.var(T12).pow(2))
    }

    /// det(α − b·T) for T = [[t11, t12], [t12, t22]].
    pub fn hasse_det(&self, alpha: [[i64; 2]; 2], b: i64) -> Local {
        let a11 = self.constant(self.fp(alpha[0][0])).sub(&self.var(T11).scale(self.fp(b)));
        let a12 = self.constant(self.fp(alpha[0][1])).sub(&self.var(T12).scale(self.fp(b)));
        let a22 = self.constant(self.fp(alpha[1][1])).sub(&self.var(T22).scale(self.fp(b)));
        a11.mul(&a22).sub(&a12.pow(2))
    }
}

/// The Hasse matrices A, B of a local model; c = B·A⁻¹ where A is invertible.
#[derive(Clone, Debug)]
pub struct HasseModel {
    pub a: [[Local; 2]; 2],
    pub b: [[Local; 2]; 2],
}

impl HasseModel {
    /// A = [[t11, t12], [t12, t22]], B = sign·I.
    pub fn superspecial(ring: LocalRing, sign: i64) -> Self {
        let (z, s) = (ring.zero(), ring.constant(ring.fp(sign)));
        HasseModel { a: [[ring.var(T11), ring.var(T12)], [ring.var(T12), ring.var(T22)]], b: [[s.clone(), z.clone()], [z, s]] }
    }

    pub fn det_a(&self) -> Local {
        self.a[0][0].mul(&self.a[1][1]).sub(&self.a[0][1].mul(&self.a[1][0]))
    }

    /// c = B·A⁻¹; fails when det A is not a unit.
    pub fn c(&self) -> Result<[[Local; 2]; 2]> {
        let dinv = self.det_a().inverse().map_err(|_| Error::domain("det A is not a unit"))?;
        let adj = [[self.a[1][1].clone(), self.a[0][1].neg()], [self.a[1][0].neg(), self.a[0][0].clone()]];
        let entry = |i: usize, j: usize| self.b[i][0].mul(&adj[0][j]).add(&self.b[i][1].mul(&adj[1][j])).mul(&dinv);
        Ok([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }
}

/// det A · (∂11F − k c11 F, ∂12F − k(c12 + c21)F, ∂22F − k c22 F) at the superspecial model
/// with B = sign·I.
pub fn theta_local(f: &Local, k: i64, sign: i64) -> [Local; 3] {
    let ring = LocalRing { p: f.one_elem().modulus(), cutoff: f.cutoff() };
    let d = ring.superspecial_det();
    let ks = ring.fp(k * sign);
    [
        d.mul(&f.derivative(T11)).add(&ring.var(T22).mul(f).scale(ks)),
        d.mul(&f.derivative(T12)).add(&ring.var(T12).mul(f).scale(ks + ks)),
        d.mul(&f.derivative(T22)).add(&ring.var(T11).mul(f).scale(ks)),
    ]
}

/// (∂11F − k c11 F, ∂12F − k(c12 + c21)F, ∂22F − k c22 F) for symmetric c.
pub fn theta_local_general(f: &Local, k: i64, c: &[[Local; 2]; 2]) -> [Local; 3] {
    let kf = f.scale(Fp::new(k, f.one_elem().modulus()));
    [
        f.derivative(T11).sub(&c[0][0].mul(&kf)),
        f.derivative(T12).sub(&c[0][1].add(&c[1][0]).mul(&kf)),
        f.derivative(T22).sub(&c[1][1].mul(&kf)),
    ]
}

/// c recovered from det A: c11 = −∂11d/d, c12 = c21 = −∂12d/(2d), c22 = −∂22d/d.
pub fn c_from_det(d: &Local) -> Result<[[Local; 2]; 2]> {
    let dinv = d.inverse().map_err(|_| Error::domain("det A is not a unit"))?;
    let p = d.one_elem().modulus();
    let half = Fp::new(2, p).inv().expect("p odd");
    let c11 = d.derivative(T11).mul(&dinv).neg();
    let c12 = d.derivative(T12).mul(&dinv).scale(-half);
    let c22 = d.derivative(T22).mul(&dinv).neg();
    Ok([[c11, c12.clone()], [c12, c22]])
}

fn frac(a: i64, b: i64, p: u64) -> Fp {
    Fp::new(a, p) * Fp::new(b, p).inv().expect("denominator prime to p")
}

/// d · p₁(∇(∇F)): the two-step composite, projected to the scalar component.
pub fn big_theta_composite(f: &Local, d: &Local, k: i64) -> Result<Local> {
    let p = f.one_elem().modulus();
    let c = c_from_det(d)?;
    let [f11, f12, f22] = theta_local_general(f, k, &c);
    let (c11, c12, c21, c22) = (&c[0][0], &c[0][1], &c[1][0], &c[1][1]);
    let kp = |x: i64| Fp::new(x, p);
    let a20 = f11.derivative(T22).sub(&c22.mul(&f11).scale(kp(k))).sub(&c21.mul(&f12));
    let a11 =
        f12.derivative(T12).sub(&c12.add(c21).mul(&f12).scale(kp(k + 1))).sub(&c22.mul(&f11).scale(kp(2))).sub(&c11.mul(&f22).scale(kp(2)));
    let a02 = f22.derivative(T11).sub(&c11.mul(&f22).scale(kp(k))).sub(&c12.mul(&f12));
    let inner = a20.scale(frac(1, 3, p)).sub(&a11.scale(frac(1, 6, p))).add(&a02.scale(frac(1, 3, p)));
    Ok(d.mul(&inner))
}

/// D = ∂11∂22 − ¼∂12².
pub fn d_operator(f: &Local) -> Local {
    let p = f.one_elem().modulus();
    f.derivative(T11).derivative(T22).sub(&f.derivative(T12).derivative(T12).scale(frac(1, 4, p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Exact,
    /// Omits the (2k−1)/3 cross term.
    WithoutCrossTerm,
}

/// (2/3)d·D(F) + (2k(2k−1)/9)F·D(d) + ((2k−1)/3)(∂11F∂22d − ½∂12F∂12d + ∂22F∂11d).
pub fn big_theta_closed_form(f: &Local, d: &Local, k: i64, form: ClosedForm) -> Local {
    let p = f.one_elem().modulus();
    let main = d.mul(&d_operator(f)).scale(frac(2, 3, p)).add(&f.mul(&d_operator(d)).scale(frac(2 * k * (2 * k - 1), 9, p)));
    if form == ClosedForm::WithoutCrossTerm {
        return main;
    }
    let cross = f
        .derivative(T11)
        .mul(&d.derivative(T22))
        .sub(&f.derivative(T12).mul(&d.derivative(T12)).scale(frac(1, 2, p)))
        .add(&f.derivative(T22).mul(&d.derivative(T11)));
    main.add(&cross.scale(frac(2 * k - 1, 3, p)))
}

/// Compares the composite and the closed form of Θ(F) modulo total degree `cutoff`.
pub fn step3_identity_check(f: &Local, det_a: &Local, k: i64, cutoff: u32) -> Result<bool> {
    step3_check_with(f, det_a, k, cutoff, ClosedForm::Exact)
}

pub fn step3_check_with(f: &Local, det_a: &Local, k: i64, cutoff: u32, form: ClosedForm) -> Result<bool> {
    if det_a.constant_term().is_zero() {
        return Err(Error::domain("det A is not a unit"));
    }
    let (f, d) = (f.truncate(cutoff), det_a.truncate(cutoff));
    let lhs = big_theta_composite(&f, &d, k)?;
    let rhs = big_theta_closed_form(&f, &d, k, form);
    // Each side loses two degrees to the second derivatives.
    let keep = cutoff.saturating_sub(2);
    Ok(lhs.truncate(keep) == rhs.truncate(keep))
}

/// Constant term of Θ(F) at a superspecial point for F(0) = α, read off the closed form.
pub fn big_theta_local_value(alpha: Fp, k: i64) -> Result<Fp> {
    let p = alpha.modulus();
    if p == 3 {
        return Err(Error::domain("p = 3 is excluded"));
    }
    let ring = LocalRing::new(p, 4)?;
    let value = big_theta_closed_form(&ring.constant(alpha), &ring.superspecial_det(), k, ClosedForm::Exact);
    Ok(value.constant_term())
}

/// −((k1−3k2)/2)t11F0 − ((k1−3k2)/2)t12F1 − (k1−3)t22F2.
pub fn theta1_local_leading(ring: LocalRing, f: [Fp; 3], k1: i64, k2: i64) -> Local {
    let p = ring.p;
    let h = -frac(k1 - 3 * k2, 2, p);
    ring.var(T11).scale(h * f[0]).add(&ring.var(T12).scale(h * f[1])).add(&ring.var(T22).scale(-ring.fp(k1 - 3) * f[2]))
}

/// ((2k−1)/3)(t22F1 − t12F0), ((2k−1)/3)(t12F1 − t11F0).
pub fn theta2_local_n1_leading(ring: LocalRing, f: [Fp; 2], k: i64) -> [Local; 2] {
    let c = frac(2 * k - 1, 3, ring.p);
    [ring.var(T22).scale(c * f[1]).sub(&ring.var(T12).scale(c * f[0])), ring.var(T12).scale(c * f[1]).sub(&ring.var(T11).scale(c * f[0]))]
}

/// Random element with terms of total degree below the cutoff.
pub fn random_local(ring: LocalRing, rng: &mut impl rand::Rng) -> Local {
    let k = ring.cutoff;
    let mut terms = Vec::new();
    for a in 0..k {
        for b in 0..k - a {
            for c in 0..k - a - b {
                terms.push(([a, b, c], ring.fp(rng.gen_range(0..ring.p as i64))));
            }
        }
    }
    Local::from_terms(terms, 3, k, ring.one())
}

/// Random det(α − bT) with α symmetric invertible.
pub fn random_hasse_det(ring: LocalRing, rng: &mut impl rand::Rng) -> Local {
    let p = ring.p as i64;
    loop {
        let (x, y, z) = (rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p));
        if (x * z - y * y).rem_euclid(p) != 0 {
            return ring.hasse_det([[x, y], [y, z]], rng.gen_range(0..p));
        }
    }
}
