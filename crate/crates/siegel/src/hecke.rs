//! Hecke operators T(ℓⁱ), ℓ ∤ pN, evaluated through the Fourier-coefficient formula
//!
//! A_{T(ℓⁱ)F}(T) = Σ_{α+β+γ=i} χ₁(ℓ^β)χ₂(ℓ^γ) ℓ^{β(k₁−2)+γ(k₁+k₂−3)}
//!     Σ_{U ∈ R(ℓ^β)} ρ((diag(1,ℓ^β)U)⁻¹) A_F(ℓ^α M_U)
//!
//! where M_U is UTUᵗ rescaled by diag(ℓ^{−β−γ}, ℓ^{−γ}, ℓ^{β−γ}) on (a, b, c) and
//! only U passing the divisibility filter contribute.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, Fp};
use crate::error::{Error, Result};
use crate::qexp::{QExpansion, QIndex};
use crate::rep::{adjugate, sym_matrix, Mat2, RepVector, TensorVector};

/// A determinant-one lift of a class of P¹(Z/ℓ^β) that is ≡ 1 mod N.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct P1Rep {
    pub matrix: Mat2,
    pub beta: u32,
}

/// How class representatives are lifted to SL₂(Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lifting {
    Crt,
    Randomized(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct HeckeOptions {
    /// Absent indices are genuinely zero.
    pub assume_complete: bool,
    pub lifting: Lifting,
}

impl Default for HeckeOptions {
    fn default() -> Self {
        HeckeOptions { assume_complete: false, lifting: Lifting::Crt }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeRequest {
    pub ell: u64,
    pub power: u32,
    pub targets: BTreeSet<QIndex>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

/// x ≡ r₁ mod m₁, x ≡ r₂ mod m₂ for coprime moduli, reduced into [0, m₁m₂).
fn crt(r1: i64, m1: i64, r2: i64, m2: i64) -> i64 {
    let (_, s, _) = ext_gcd(m1, m2);
    let m = m1 * m2;
    (r1 + m1 * ((r2 - r1) * s).rem_euclid(m2)).rem_euclid(m)
}

/// Second row (v₁, v₂) with u₁v₂ − u₂v₁ = 1 and (v₁, v₂) ≡ (0, 1) mod N.
fn complete_row(u1: i64, u2: i64, level: i64, shift: i64) -> Mat2 {
    let (g, s, t) = ext_gcd(u1, u2);
    debug_assert_eq!(g, 1);
    let k = t.rem_euclid(level) + shift * level;
    [[u1, u2], [-t + k * u1, s + k * u2]]
}

fn check_level(ell: u64, level: u64) -> Result<()> {
    if !is_prime(ell) {
        return Err(Error::domain(format!("ell = {ell} is not prime")));
    }
    if level == 0 || gcd(ell as i64, level as i64) != 1 {
        return Err(Error::domain("gcd(ell, N) must be 1"));
    }
    Ok(())
}

/// Class representatives in P¹(Z/ℓ^β), one per class: (1, x) then (ℓy, 1).
fn classes(ell: i64, beta: u32) -> Vec<(i64, i64)> {
    if beta == 0 {
        return vec![(1, 0)];
    }
    let q = ell.pow(beta);
    let mut out: Vec<(i64, i64)> = (0..q).map(|x| (1, x)).collect();
    out.extend((0..q / ell).map(|y| (ell * y, 1)));
    out
}

/// R(ℓ^β) with CRT-minimal lifts.
pub fn p1_representatives(ell: u64, beta: u32, level: u64) -> Result<Vec<P1Rep>> {
    lift_classes(ell, beta, level, None::<&mut rand_chacha::ChaCha8Rng>)
}

/// R(ℓ^β) with lifts perturbed by random multiples of ℓ^βN.
pub fn p1_representatives_random<R: Rng>(ell: u64, beta: u32, level: u64, rng: &mut R) -> Result<Vec<P1Rep>> {
    lift_classes(ell, beta, level, Some(rng))
}

fn lift_classes<R: Rng>(ell: u64, beta: u32, level: u64, mut rng: Option<&mut R>) -> Result<Vec<P1Rep>> {
    check_level(ell, level)?;
    let (l, n) = (ell as i64, level as i64);
    let q = l.pow(beta);
    let mut out = Vec::new();
    for (c1, c2) in classes(l, beta) {
        let mut u1 = crt(c1, q, 1, n);
        let mut u2 = crt(c2, q, 0, n);
        while gcd(u1, u2) != 1 {
            u1 += q * n;
        }
        let mut shift = 0;
        if let Some(r) = rng.as_mut() {
            loop {
                let (a, b) = (u1 + r.gen_range(-3i64..=3) * q * n, u2 + r.gen_range(-3i64..=3) * q * n);
                if gcd(a, b) == 1 {
                    u1 = a;
                    u2 = b;
                    break;
                }
            }
            shift = r.gen_range(-2i64..=2);
        }
        out.push(P1Rep { matrix: complete_row(u1, u2, n, shift), beta });
    }
    Ok(out)
}

/// (a_U, b_U, c_U) of UTUᵗ over Z with b_U the doubled off-diagonal entry.
pub fn conjugate_index(u: &Mat2, t: QIndex) -> (i64, i64, i64) {
    let q = |x: i64, y: i64| t.a * x * x + t.b * x * y + t.c * y * y;
    let [[u1, u2], [v1, v2]] = *u;
    let b = 2 * t.a * u1 * v1 + t.b * (u1 * v2 + u2 * v1) + 2 * t.c * u2 * v2;
    (q(u1, u2), b, q(v1, v2))
}

/// One surviving summand of the formula.
#[derive(Clone, Debug)]
struct Branch {
    beta: u32,
    gamma: u32,
    matrix: Mat2,
    index: QIndex,
}

fn branches(ell: u64, power: u32, t: QIndex, level: u64, lifting: Lifting) -> Result<Vec<Branch>> {
    let l = ell as i64;
    let mut out = Vec::new();
    let mut rng = match lifting {
        Lifting::Randomized(seed) => Some(<rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed)),
        Lifting::Crt => None,
    };
    for alpha in 0..=power {
        for beta in 0..=power - alpha {
            let gamma = power - alpha - beta;
            let reps = match rng.as_mut() {
                Some(r) => p1_representatives_random(ell, beta, level, r)?,
                None => p1_representatives(ell, beta, level)?,
            };
            let (lb, lg) = (l.pow(beta), l.pow(gamma));
            for rep in reps {
                let (a, b, c) = conjugate_index(&rep.matrix, t);
                if a % (lb * lg) != 0 || b % lg != 0 || c % lg != 0 {
                    continue;
                }
                let la = l.pow(alpha);
                let index = QIndex::new(la * a / (lb * lg), la * b / lg, la * c * lb / lg);
                out.push(Branch { beta, gamma, matrix: rep.matrix, index });
            }
        }
    }
    Ok(out)
}

fn check_ell(f: &QExpansion, ell: u64) -> Result<()> {
    if ell.is_multiple_of(f.p) || f.level.is_multiple_of(ell) {
        return Err(Error::domain("ell must not divide pN"));
    }
    check_level(ell, f.level)
}

/// Indices ℓ^α M_U read by the formula at T.
pub fn required_indices(ell: u64, power: u32, t: QIndex, level: u64) -> Result<BTreeSet<QIndex>> {
    required_indices_with(ell, power, t, level, Lifting::Crt)
}

pub fn required_indices_with(ell: u64, power: u32, t: QIndex, level: u64, lifting: Lifting) -> Result<BTreeSet<QIndex>> {
    Ok(branches(ell, power, t, level, lifting)?.into_iter().map(|b| b.index).collect())
}

fn branch_scalar(f: &QExpansion, ell: u64, br: &Branch, extra: (i64, i64)) -> Result<Fp> {
    let p = f.p;
    let field = f.field();
    let l = Fp::new(ell as i64, p);
    let (b, g) = (br.beta as i64, br.gamma as i64);
    let c1 = f.chi1.eval_base((ell as i64).pow(br.beta), f.level, field)?;
    let c2 = f.chi2.eval_base((ell as i64).pow(br.gamma), f.level, field)?;
    let (k1, k2) = (f.weight.k1 + extra.0, f.weight.k2 + extra.1);
    let e = b * (k1 - 2) + g * (k1 + k2 - 3);
    Ok(c1 * c2 * l.pow_signed(e).expect("ell is a unit mod p"))
}

fn adj_of(br: &Branch, ell: u64) -> Mat2 {
    let lb = (ell as i64).pow(br.beta);
    let [[u1, u2], [v1, v2]] = br.matrix;
    adjugate(&[[u1, u2], [lb * v1, lb * v2]])
}

fn lookup(f: &QExpansion, idx: &QIndex, complete: bool, missing: &mut BTreeSet<QIndex>) -> Option<RepVector> {
    match f.get(idx) {
        Some(v) => Some(v.clone()),
        None if complete => None,
        None => {
            missing.insert(*idx);
            None
        }
    }
}

fn missing_error(missing: &BTreeSet<QIndex>) -> Error {
    let list: Vec<String> = missing.iter().map(|t| format!("({}, {}, {})", t.a, t.b, t.c)).collect();
    Error::domain(format!("missing required indices: {}", list.join(", ")))
}

/// A_{T(ℓⁱ)F}(T).
pub fn hecke_coefficient(f: &QExpansion, ell: u64, power: u32, t: QIndex, opts: HeckeOptions) -> Result<RepVector> {
    check_ell(f, ell)?;
    let p = f.p;
    let n = f.degree();
    let linv = Fp::new(ell as i64, p).inv().expect("ell is a unit mod p");
    let mut acc = RepVector::zero(n, f.weight.k2, p);
    let mut missing = BTreeSet::new();
    for br in branches(ell, power, t, f.level, opts.lifting)? {
        let Some(v) = lookup(f, &br.index, opts.assume_complete, &mut missing) else { continue };
        let s = branch_scalar(f, ell, &br, (0, 0))? * linv.pow(n as u64 * br.beta as u64);
        let m = sym_matrix(n, &adj_of(&br, ell), p);
        for (r, row) in m.iter().enumerate() {
            let dot = row.iter().zip(&v.coords).fold(Fp::new(0, p), |a, (&x, &y)| a + x * y);
            acc.coords[r] += s * dot;
        }
    }
    if !missing.is_empty() {
        return Err(missing_error(&missing));
    }
    Ok(acc)
}

/// T(ℓⁱ) on the tensor-valued expansion S ↦ A_F(S) ⊗ S / N of weight
/// (k₁+p+1, k₂+p−1) and representation ρ_{k₁−k₂} ⊗ ρ₂.
pub fn hecke_tensor_coefficient(f: &QExpansion, ell: u64, power: u32, t: QIndex, opts: HeckeOptions) -> Result<TensorVector> {
    check_ell(f, ell)?;
    let p = f.p;
    let n = f.degree();
    let pi = p as i64;
    let linv = Fp::new(ell as i64, p).inv().expect("ell is a unit mod p");
    let ninv = f.level_inv();
    let mut acc = TensorVector::zero(n, f.weight.k2, p);
    let mut missing = BTreeSet::new();
    for br in branches(ell, power, t, f.level, opts.lifting)? {
        let Some(v) = lookup(f, &br.index, opts.assume_complete, &mut missing) else { continue };
        let s = branch_scalar(f, ell, &br, (pi + 1, pi - 1))? * linv.pow((n as u64 + 2) * br.beta as u64) * ninv;
        let s2 = crate::rep::sym2_of_index(br.index.a, br.index.b, br.index.c, p);
        let x = TensorVector::outer(&v, &s2);
        let adj = adj_of(&br, ell);
        let a = sym_matrix(n, &adj, p);
        let b = sym_matrix(2, &adj, p);
        for r in 0..=n {
            for q in 0..3 {
                let mut sum = Fp::new(0, p);
                for i in 0..=n {
                    for j in 0..3 {
                        sum += a[r][i] * b[q][j] * x.get(i, j);
                    }
                }
                let cur = acc.get(r, q);
                acc.set(r, q, cur + s * sum);
            }
        }
    }
    if !missing.is_empty() {
        return Err(missing_error(&missing));
    }
    Ok(acc)
}

/// T(ℓⁱ)F restricted to the requested targets.
pub fn hecke_apply(f: &QExpansion, req: &HeckeRequest, opts: HeckeOptions) -> Result<QExpansion> {
    let coeffs: Vec<(QIndex, RepVector)> =
        req.targets.par_iter().map(|t| hecke_coefficient(f, req.ell, req.power, *t, opts).map(|v| (*t, v))).collect::<Result<_>>()?;
    let mut out = f.empty_like(f.weight);
    for (t, v) in coeffs {
        out.insert(t, v.coords)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenCheck {
    pub index: QIndex,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub eigenvalue: u64,
    pub base_index: QIndex,
    pub checks: Vec<EigenCheck>,
}

impl EigenReport {
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.matches)
    }
}

/// λ with T(ℓⁱ)F = λF, read off at the least checkable index and verified at every
/// other checkable one.
pub fn eigenvalue(f: &QExpansion, ell: u64, power: u32, opts: HeckeOptions) -> Result<EigenReport> {
    if f.is_empty() {
        return Err(Error::domain("zero expansion has no eigenvalue"));
    }
    check_ell(f, ell)?;
    let indices: Vec<QIndex> = f.indices().collect();
    let images: Vec<Option<RepVector>> = indices.par_iter().map(|t| hecke_coefficient(f, ell, power, *t, opts).ok()).collect();
    let checkable: Vec<(QIndex, RepVector)> = indices.into_iter().zip(images).filter_map(|(t, v)| v.map(|v| (t, v))).collect();
    let (t0, img0) = checkable.first().ok_or_else(|| Error::domain("no checkable index"))?;
    let a0 = f.get(t0).expect("supported");
    let i0 = a0.coords.iter().position(|c| !c.is_zero()).expect("support is nonzero");
    let lambda = img0.coords[i0] / a0.coords[i0];
    let checks =
        checkable.iter().map(|(t, img)| EigenCheck { index: *t, matches: *img == f.get(t).expect("supported").scale(lambda) }).collect();
    Ok(EigenReport { eigenvalue: lambda.value(), base_index: *t0, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::Weight;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar(p: u64, level: u64, k: i64) -> QExpansion {
        QExpansion::new(p, level, Weight::new(k, k)).unwrap()
    }

    #[test]
    fn representatives() {
        let r0 = p1_representatives(2, 0, 3).unwrap();
        assert_eq!(r0, vec![P1Rep { matrix: [[1, 0], [0, 1]], beta: 0 }]);
        let r1 = p1_representatives(2, 1, 3).unwrap();
        assert_eq!(r1.len(), 3);
        let mut firsts: Vec<(i64, i64)> = r1.iter().map(|r| (r.matrix[0][0].rem_euclid(2), r.matrix[0][1].rem_euclid(2))).collect();
        firsts.sort();
        assert_eq!(firsts, vec![(0, 1), (1, 0), (1, 1)]);
        assert_eq!(p1_representatives(3, 2, 4).unwrap().len(), 12);
        assert!(p1_representatives(2, 1, 4).is_err());
    }

    // normal form (1 : x) or (y : 1) of a class in P¹(Z/q)
    fn p1_class(u1: i64, u2: i64, q: i64) -> (i64, i64) {
        let inv = |x: i64| (1..q).find(|y| (x * y).rem_euclid(q) == 1);
        match inv(u1.rem_euclid(q)) {
            Some(s) => (1, (u2 * s).rem_euclid(q)),
            None => ((u1 * inv(u2.rem_euclid(q)).expect("primitive row")).rem_euclid(q), 1),
        }
    }

    #[test]
    fn representatives_are_distinct_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (ell, level) in [(2u64, 3u64), (3, 4), (2, 5), (5, 3)] {
            for beta in 1..=2u32 {
                let q = (ell as i64).pow(beta);
                for reps in [p1_representatives(ell, beta, level).unwrap(), p1_representatives_random(ell, beta, level, &mut rng).unwrap()]
                {
                    assert_eq!(reps.len() as i64, q + q / ell as i64);
                    let mut seen = BTreeSet::new();
                    for r in &reps {
                        let [[u1, u2], [v1, v2]] = r.matrix;
                        assert_eq!(u1 * v2 - u2 * v1, 1);
                        let n = level as i64;
                        assert_eq!(((u1 - 1).rem_euclid(n), u2.rem_euclid(n), v1.rem_euclid(n), (v2 - 1).rem_euclid(n)), (0, 0, 0, 0));
                        assert!(seen.insert(p1_class(u1, u2, q)));
                    }
                }
            }
        }
    }

    #[test]
    fn required_index_examples() {
        let t = QIndex::new(1, 0, 0);
        assert_eq!(required_indices(2, 0, t, 3).unwrap(), BTreeSet::from([t]));
        assert_eq!(required_indices(2, 1, QIndex::new(0, 0, 0), 3).unwrap(), BTreeSet::from([QIndex::new(0, 0, 0)]));
        // oracle: filter every det-one U ≡ 1 mod 3 with |entries| ≤ 9 whose first row
        // lies in the class (0 : 1) of P¹(Z/2); all such U give indices equivalent to the lift
        let got = required_indices(2, 1, t, 3).unwrap();
        assert_eq!(got, BTreeSet::from([QIndex::new(2, 0, 0), QIndex::new(8, 72, 162)]));
        let mut classes_hit = 0;
        for u1 in -9i64..=9 {
            for u2 in -9i64..=9 {
                if u1.rem_euclid(2) != 0 || u2.rem_euclid(2) != 1 || (u1 - 1).rem_euclid(3) != 0 || u2.rem_euclid(3) != 0 {
                    continue;
                }
                let (a, b, c) = conjugate_index(&[[u1, u2], [0, 0]], t);
                assert_eq!((a % 2, b, c), (0, 0, 0));
                classes_hit += 1;
            }
        }
        assert!(classes_hit > 0);
        for s in &got {
            assert!(s.is_semi_positive() && s.disc() == 0 && s.divisible_by(2));
        }
    }

    fn closed_form(ell: i64, k: i64, p: u64) -> Fp {
        let l = Fp::new(ell, p);
        Fp::new(1, p) + Fp::new(ell + 1, p) * l.pow_signed(k - 2).unwrap() + l.pow_signed(2 * k - 3).unwrap()
    }

    #[test]
    fn constant_term_multiplier() {
        for p in [5u64, 7, 11] {
            for ell in [2u64, 3] {
                for k in 2..=8 {
                    let mut f = scalar(p, 1, k);
                    f.insert_ints(QIndex::new(0, 0, 0), &[1]).unwrap();
                    let v = hecke_coefficient(&f, ell, 1, QIndex::new(0, 0, 0), HeckeOptions::default()).unwrap();
                    assert_eq!(v.coords[0], closed_form(ell as i64, k, p));
                }
            }
        }
        let mut f = scalar(7, 1, 4);
        f.insert_ints(QIndex::new(0, 0, 0), &[1]).unwrap();
        let v = hecke_coefficient(&f, 2, 1, QIndex::new(0, 0, 0), HeckeOptions::default()).unwrap();
        assert_eq!(v.values(), vec![3]);
        let r = eigenvalue(&f.scale(Fp::new(4, 7)), 2, 1, HeckeOptions::default()).unwrap();
        assert_eq!(r.eigenvalue, 3);
        assert!(r.consistent());
    }

    fn random_form(p: u64, level: u64, w: Weight, radius: i64, rng: &mut ChaCha8Rng) -> QExpansion {
        let mut f = QExpansion::new(p, level, w).unwrap();
        for a in 0..=radius {
            for c in 0..=radius {
                for b in -radius..=radius {
                    let t = QIndex::new(a, b, c);
                    if t.is_semi_positive() && rng.gen_bool(0.5) {
                        let cs: Vec<i64> = (0..=w.n()).map(|_| rng.gen_range(0..p as i64)).collect();
                        f.insert_ints(t, &cs).unwrap();
                    }
                }
            }
        }
        f
    }

    #[test]
    fn identity_and_lifting_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let opts = HeckeOptions { assume_complete: true, lifting: Lifting::Crt };
        for (ell, p, level) in [(2u64, 7u64, 3u64), (3, 5, 4), (2, 11, 5), (3, 7, 5)] {
            for w in [Weight::new(4, 4), Weight::new(5, 3)] {
                for t in [QIndex::new(1, 1, 1), QIndex::new(2, 1, 1), QIndex::new(1, 0, 2), QIndex::new(2, 0, 0)] {
                    for power in 0..=2 {
                        let seed: u64 = rng.gen();
                        let mut need = required_indices(ell, power, t, level).unwrap();
                        need.extend(required_indices_with(ell, power, t, level, Lifting::Randomized(seed)).unwrap());
                        need.insert(t);
                        let f = crate::fixtures::invariant_form(p, level, w, &need, rng.gen_range(0..100));
                        let a = hecke_coefficient(&f, ell, power, t, opts).unwrap();
                        if power == 0 {
                            assert_eq!(a, f.coeff_or_zero(&t));
                        }
                        let b = hecke_coefficient(&f, ell, power, t, HeckeOptions { lifting: Lifting::Randomized(seed), ..opts }).unwrap();
                        assert_eq!(a, b, "ell={ell} p={p} T={t:?} i={power} w={w:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn linearity_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let opts = HeckeOptions { assume_complete: true, lifting: Lifting::Crt };
        let w = Weight::new(4, 2);
        let f = random_form(7, 3, w, 4, &mut rng);
        let g = random_form(7, 3, w, 4, &mut rng);
        let (a, b) = (Fp::new(3, 7), Fp::new(5, 7));
        let h = QExpansion::linear_combine(&[(a, &f), (b, &g)]).unwrap();
        let t = QIndex::new(1, 1, 2);
        let lhs = hecke_coefficient(&h, 2, 1, t, opts).unwrap();
        let rhs = hecke_coefficient(&f, 2, 1, t, opts).unwrap().scale(a).add(&hecke_coefficient(&g, 2, 1, t, opts).unwrap().scale(b));
        assert_eq!(lhs, rhs);
        let mut sparse = QExpansion::new(7, 3, w).unwrap();
        sparse.insert_ints(t, &[1, 0, 0]).unwrap();
        let err = hecke_coefficient(&sparse, 2, 1, t, HeckeOptions::default()).unwrap_err();
        assert!(err.to_string().starts_with("missing required indices"));
        assert!(hecke_coefficient(&sparse, 7, 1, t, opts).is_err());
        assert!(hecke_coefficient(&sparse, 3, 1, t, opts).is_err());
    }

    #[test]
    fn eigen_mismatch_detected() {
        let mut f = scalar(7, 1, 4);
        f.insert_ints(QIndex::new(0, 0, 0), &[1]).unwrap();
        f.insert_ints(QIndex::new(1, 0, 1), &[1]).unwrap();
        let r = eigenvalue(&f, 2, 1, HeckeOptions { assume_complete: true, lifting: Lifting::Crt }).unwrap();
        assert_eq!(r.checks.len(), 2);
        assert!(!r.consistent());
        assert!(eigenvalue(&scalar(7, 1, 4), 2, 1, HeckeOptions::default()).is_err());
    }
}
