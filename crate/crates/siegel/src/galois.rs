//! Frobenius characteristic polynomials from Hecke eigenvalues, cyclotomic twists, inertia
//! types at p and the bookkeeping of the weight-reduction argument.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{is_prime, Fp};
use crate::error::{Error, Result};
use crate::rep::Weight;

/// Eigenvalues at one prime ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeData {
    #[serde(serialize_with = "ser_fp")]
    pub lam1: Fp,
    #[serde(serialize_with = "ser_fp")]
    pub lam2: Fp,
    #[serde(serialize_with = "ser_fp")]
    pub chi2: Fp,
}

fn ser_fp<S: serde::Serializer>(x: &Fp, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(x.value())
}

fn ser_fps<S: serde::Serializer>(x: &[Fp], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(x.len()))?;
    for v in x {
        seq.serialize_element(&v.value())?;
    }
    seq.end()
}

/// Hecke eigenvalues λ(ℓ), λ(ℓ²) and χ₂(ℓ) for primes ℓ ∤ pN.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeSystem {
    pub p: u64,
    pub level: u64,
    pub weight: Weight,
    pub data: BTreeMap<u64, HeckeData>,
}

impl HeckeSystem {
    pub fn new(p: u64, level: u64, weight: Weight) -> Result<Self> {
        if !is_prime(p) || p < 5 {
            return Err(Error::domain(format!("p must be a prime ≥ 5, got {p}")));
        }
        if level == 0 || level.is_multiple_of(p) {
            return Err(Error::domain(format!("level {level} must be positive and prime to p")));
        }
        Ok(HeckeSystem { p, level, weight, data: BTreeMap::new() })
    }

    pub fn insert(&mut self, ell: u64, d: HeckeData) -> Result<()> {
        if !is_prime(ell) || ell == self.p || self.level.is_multiple_of(ell) {
            return Err(Error::domain(format!("ℓ = {ell} must be a prime not dividing pN")));
        }
        if d.chi2.is_zero() {
            return Err(Error::domain(format!("χ₂({ell}) must be nonzero")));
        }
        self.data.insert(ell, d);
        Ok(())
    }

    pub fn charpolys(&self) -> Result<BTreeMap<u64, FrobPoly>> {
        self.data.iter().map(|(&ell, d)| Ok((ell, frob_charpoly(d.lam1, d.lam2, d.chi2, ell, self.weight, self.p)?))).collect()
    }
}

/// det(1 − ρ(Frob_ℓ)X) = Σ a_j X^j with similitude ν = χ₂(ℓ)ℓ^{k1+k2−3}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobPoly {
    pub ell: u64,
    pub p: u64,
    #[serde(serialize_with = "ser_fps")]
    pub coeffs: [Fp; 5],
    #[serde(serialize_with = "ser_fp")]
    pub nu: Fp,
    /// ν(ρ(c)) = −1 is assumed, not checked.
    pub odd: bool,
}

impl FrobPoly {
    /// a₃ = ν·a₁ and a₄ = ν².
    pub fn is_symplectic(&self) -> bool {
        self.coeffs[0] == Fp::new(1, self.p) && self.coeffs[3] == self.nu * self.coeffs[1] && self.coeffs[4] == self.nu * self.nu
    }
}

fn ell_pow(ell: u64, e: i64, p: u64) -> Result<Fp> {
    Fp::from_u64(ell, p).pow_signed(e).ok_or_else(|| Error::domain(format!("ℓ = {ell} is divisible by p = {p}")))
}

pub fn frob_charpoly(lam1: Fp, lam2: Fp, chi2: Fp, ell: u64, weight: Weight, p: u64) -> Result<FrobPoly> {
    if ell.is_multiple_of(p) {
        return Err(Error::domain(format!("ℓ = {ell} is divisible by p = {p}")));
    }
    let w = weight.k1 + weight.k2;
    let nu = chi2 * ell_pow(ell, w - 3, p)?;
    let coeffs = [Fp::new(1, p), -lam1, lam1 * lam1 - lam2 - ell_pow(ell, w - 4, p)? * chi2, -nu * lam1, nu * nu];
    Ok(FrobPoly { ell, p, coeffs, nu, odd: true })
}

/// λ(ℓ^i) ↦ ℓ^{iα}λ(ℓ^i) and χ₂(ℓ) ↦ ℓ^{2α}χ₂(ℓ).
pub fn twist_system(system: &HeckeSystem, alpha: i64) -> Result<HeckeSystem> {
    let p = system.p;
    let mut out = system.clone();
    for (&ell, d) in out.data.iter_mut() {
        let a = ell_pow(ell, alpha, p)?;
        *d = HeckeData { lam1: a * d.lam1, lam2: a * a * d.lam2, chi2: a * a * d.chi2 };
    }
    Ok(out)
}

/// Substitutes X ↦ cX.
pub fn scale_roots(f: &FrobPoly, c: Fp) -> FrobPoly {
    let mut coeffs = f.coeffs;
    let mut m = Fp::new(1, f.p);
    for a in coeffs.iter_mut() {
        *a *= m;
        m *= c;
    }
    FrobPoly { coeffs, nu: f.nu * c * c, ..f.clone() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InertiaType {
    Borel { a: i64, b: i64, c: i64, d: i64 },
    Klingen { a: i64, b: i64, c: i64, d: i64 },
    Siegel { a: i64, b: i64, k: i64 },
    Endoscopic { a: i64, b: i64, c: i64, d: i64 },
    Level4 { a: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaVerdict {
    pub p: u64,
    pub descriptor: InertiaType,
    pub ranges_ok: bool,
    /// The congruence read modulo p, as printed.
    pub congruence_mod_p: bool,
    /// The congruence read modulo p − 1.
    pub congruence_mod_p_minus_1: bool,
    pub violations: Vec<String>,
}

impl InertiaVerdict {
    pub fn valid_mod_p(&self) -> bool {
        self.ranges_ok && self.congruence_mod_p
    }

    pub fn valid_mod_p_minus_1(&self) -> bool {
        self.ranges_ok && self.congruence_mod_p_minus_1
    }
}

/// Checks exponent ranges and congruences of an inertia type, reporting both congruence
/// readings.
pub fn classify_inertia(t: InertiaType, p: u64) -> Result<InertiaVerdict> {
    if !is_prime(p) || p < 5 {
        return Err(Error::domain(format!("p must be a prime ≥ 5, got {p}")));
    }
    let q = p as i64;
    let mut violations = Vec::new();
    let mut range = |ok: bool, what: &str| {
        if !ok {
            violations.push(format!("range: {what}"));
        }
    };
    let within = |x: i64, hi: i64| (0..=hi).contains(&x);
    let cong = |x: i64, y: i64| ((x - y).rem_euclid(q) == 0, (x - y).rem_euclid(q - 1) == 0);
    let (mp, mp1) = match t {
        InertiaType::Borel { a, b, c, d } => {
            range([a, b, c, d].iter().all(|&x| within(x, q - 2)), "0 ≤ a,b,c,d ≤ p−2");
            cong(a + d, b + c)
        }
        InertiaType::Klingen { a, b, c, d } => {
            range(within(a, q - 2) && within(d, q - 2), "0 ≤ a,d ≤ p−2");
            range(0 <= b && b < c && c < q, "0 ≤ b < c ≤ p−1");
            cong(a + d, b + c)
        }
        InertiaType::Siegel { a, b, k } => {
            range(0 <= a && a < b && b < q, "0 ≤ a < b ≤ p−1");
            range(within(k, q - 2), "0 ≤ k ≤ p−2");
            (true, true)
        }
        InertiaType::Endoscopic { a, b, c, d } => {
            range(0 <= a && a < b && b < q, "0 ≤ a < b ≤ p−1");
            range(0 <= c && c < d && d < q, "0 ≤ c < d ≤ p−1");
            cong(a + b, c + d)
        }
        InertiaType::Level4 { a } => {
            range((0..q.pow(4) - 1).contains(&a), "0 ≤ a < p⁴−1");
            let ok = a.rem_euclid(q + 1) == 0 && a.rem_euclid(q * q + 1) != 0;
            (ok, ok)
        }
    };
    if !mp {
        violations.push("congruence fails mod p".into());
    }
    if !mp1 {
        violations.push("congruence fails mod p−1".into());
    }
    let ranges_ok = !violations.iter().any(|v| v.starts_with("range"));
    Ok(InertiaVerdict { p, descriptor: t, ranges_ok, congruence_mod_p: mp, congruence_mod_p_minus_1: mp1, violations })
}

/// Counts of the operators used to bring a weight into the reduced range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionPlan {
    pub p: u64,
    pub input: Weight,
    /// Parity of k1 − k2.
    pub epsilon: i64,
    pub theta1_steps: i64,
    pub after_theta1: Weight,
    /// l1 reduced into 1 ≤ l1 ≤ p+1.
    pub l1: i64,
    /// Ladder count as printed: p³−p²+2p, plus one when l1 = 1.
    pub ladder_printed: i64,
    /// Smallest i with i(p+1) + l1 > p⁴+p²+p.
    pub ladder_minimal: i64,
    pub target: Weight,
    /// p⁴+p²+2p+1.
    pub bound: i64,
    pub bound_ok: bool,
    pub printed_bound_ok: bool,
    pub difference_ok: bool,
    /// Net cyclotomic twist mod p−1.
    pub alpha: i64,
}

pub fn reduction_plan(weight: Weight, p: u64) -> Result<ReductionPlan> {
    if !is_prime(p) || p < 5 {
        return Err(Error::domain(format!("p must be a prime ≥ 5, got {p}")));
    }
    if weight.k2 < 1 || weight.k1 < weight.k2 {
        return Err(Error::domain(format!("weight must satisfy k1 ≥ k2 ≥ 1, got ({},{})", weight.k1, weight.k2)));
    }
    let q = p as i64;
    let diff = weight.k1 - weight.k2;
    let epsilon = diff.rem_euclid(2);
    let steps = (diff - epsilon) / 2;
    let after = Weight::new(weight.k1 + steps * (q - 1), weight.k2 + steps * (q + 1));
    let l1 = (after.k1 - 1).rem_euclid(q + 1) + 1;
    let ladder_printed = q.pow(3) - q * q + 2 * q + (l1 == 1) as i64;
    let floor = q.pow(4) + q * q + q;
    let ladder_minimal = (floor - l1).div_euclid(q + 1) + 1;
    let bound = q.pow(4) + q * q + 2 * q + 1;
    let top = ladder_minimal * (q + 1) + l1;
    let target = Weight::new(top, top - epsilon);
    Ok(ReductionPlan {
        p,
        input: weight,
        epsilon,
        theta1_steps: steps,
        after_theta1: after,
        l1,
        ladder_printed,
        ladder_minimal,
        target,
        bound,
        bound_ok: top <= bound && target.k2 <= bound,
        printed_bound_ok: ladder_printed * (q + 1) + l1 <= bound,
        difference_ok: q > epsilon + 3,
        alpha: (steps + 2 * ladder_minimal).rem_euclid(q - 1),
    })
}
