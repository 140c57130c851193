//! Theta operators on q-expansions.
//!
//! On q-expansions the Hasse invariant is 1 and the connection terms vanish at the
//! cusp, so each operator is a coefficientwise map T ↦ A_F(T) ⊗ T / N followed by a
//! Pieri projection; the Hasse factor only shows up in the weight.

use serde::Serialize;

use crate::arith::Fp;
use crate::error::{Error, Result};
use crate::qexp::{QExpansion, QIndex};
use crate::rep::{pieri_split, sym2_of_index, TensorVector, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaKind {
    ScalarTheta,
    BigTheta,
    T1,
    T2,
    T3,
}

impl ThetaKind {
    /// Weight after one application.
    pub fn shift(self, w: Weight, p: u64) -> Weight {
        let p = p as i64;
        let (a, b) = match self {
            ThetaKind::ScalarTheta | ThetaKind::T3 => (p + 1, p - 1),
            ThetaKind::BigTheta => (p + 1, p + 1),
            ThetaKind::T1 => (p - 1, p + 1),
            ThetaKind::T2 => (p, p),
        };
        Weight::new(w.k1 + a, w.k2 + b)
    }

    /// Pieri component index of θ_j: θ₁ ↦ 2, θ₂ ↦ 1, θ₃ ↦ 0.
    fn component(j: u8) -> usize {
        2 - (j as usize - 1)
    }
}

fn require_scalar(f: &QExpansion) -> Result<i64> {
    if f.weight.k1 != f.weight.k2 {
        return Err(Error::domain("operator requires scalar weight (k, k)"));
    }
    Ok(f.weight.k1)
}

/// θ(F): A_F(T) ↦ A_F(T)·T/N in V(2).
pub fn theta_scalar(f: &QExpansion) -> Result<QExpansion> {
    require_scalar(f)?;
    let p = f.p;
    let ninv = f.level_inv();
    let mut out = f.empty_like(ThetaKind::ScalarTheta.shift(f.weight, p));
    for (t, v) in f.support() {
        let s = sym2_of_index(t.a, t.b, t.c, p).scale(v.coords[0] * ninv);
        out.insert(*t, s.coords)?;
    }
    Ok(out)
}

/// (2/3)·det(T)/N² in F_p.
pub fn big_theta_multiplier(t: QIndex, level: u64, p: u64) -> Fp {
    let f = |x: i64| Fp::new(x, p);
    let n2 = f(level as i64).pow(2);
    f(2) / f(3) * t.det_mod(p) / n2
}

/// Θ^m(F).
pub fn big_theta(f: &QExpansion, m: u32) -> Result<QExpansion> {
    let k = require_scalar(f)?;
    if m == 0 {
        return Err(Error::domain("iterate count must be at least 1"));
    }
    let p = f.p;
    let k_new = k + m as i64 * (p as i64 + 1);
    let mut out = f.empty_like(Weight::new(k_new, k_new));
    for (t, v) in f.support() {
        let c = big_theta_multiplier(*t, f.level, p).pow(m as u64);
        out.insert(*t, vec![v.coords[0] * c])?;
    }
    Ok(out)
}

fn check_theta_j(n: usize, j: u8, p: u64) -> Result<()> {
    let p = p as usize;
    match j {
        1 => {
            if n < 2 {
                return Err(Error::domain("theta_1 requires k1 - k2 >= 2"));
            }
            if n + 2 > p + 1 {
                return Err(Error::domain("theta_1 requires k1 - k2 <= p - 1"));
            }
        }
        2 | 3 => {
            if j == 2 && n < 1 {
                return Err(Error::domain("theta_2 requires k1 - k2 >= 1"));
            }
            if p <= n + 2 {
                return Err(Error::domain(format!("theta_{j} requires p > k1 - k2 + 2")));
            }
        }
        _ => return Err(Error::domain("j must be 1, 2 or 3")),
    }
    Ok(())
}

/// θ_j(F): coefficient at T is the Pieri component of A_F(T) ⊗ T / N.
pub fn theta_j(f: &QExpansion, j: u8) -> Result<QExpansion> {
    let n = f.degree();
    let p = f.p;
    check_theta_j(n, j, p)?;
    let kind = [ThetaKind::T1, ThetaKind::T2, ThetaKind::T3][j as usize - 1];
    let comp = ThetaKind::component(j);
    let ninv = f.level_inv();
    let mut out = f.empty_like(kind.shift(f.weight, p));
    for (t, v) in f.support() {
        let x = TensorVector::outer(v, &sym2_of_index(t.a, t.b, t.c, p)).scale(ninv);
        let split = pieri_split(n, p, &x)?;
        let c = split.component(comp).ok_or_else(|| Error::domain("Pieri component unavailable"))?;
        out.insert(*t, c.coords.clone())?;
    }
    Ok(out)
}

/// Outcome of comparing an iterate against a closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Proportionality {
    /// iterate = mu · closed form.
    Proportional {
        mu: u64,
    },
    /// Both sides vanish.
    Arbitrary,
    NotProportional,
}

/// Constant μ with a = μ·b coordinatewise, if one exists.
pub fn proportionality(a: &QExpansion, b: &QExpansion) -> Proportionality {
    let mut mu: Option<Fp> = None;
    let idx: std::collections::BTreeSet<QIndex> = a.indices().chain(b.indices()).collect();
    for t in idx {
        let (x, y) = (a.coeff_or_zero(&t), b.coeff_or_zero(&t));
        if x.coords.len() != y.coords.len() {
            return Proportionality::NotProportional;
        }
        for (&u, &v) in x.coords.iter().zip(&y.coords) {
            match (v.is_zero(), mu) {
                (true, _) if !u.is_zero() => return Proportionality::NotProportional,
                (true, _) => {}
                (false, None) => mu = Some(u / v),
                (false, Some(m)) if u != m * v => return Proportionality::NotProportional,
                _ => {}
            }
        }
    }
    match mu {
        Some(m) => Proportionality::Proportional { mu: m.value() },
        None => Proportionality::Arbitrary,
    }
}

/// Closed form (det T / 18N²)^{2m}·A_F(T) for θ₂^{4m} on weight (k+1, k), and its
/// comparison with the actual 4m-fold iterate.
pub fn theta2_iterate_closed(f: &QExpansion, m: u32) -> Result<(QExpansion, Proportionality)> {
    if f.degree() != 1 {
        return Err(Error::domain("closed form requires k1 - k2 = 1"));
    }
    if m == 0 {
        return Err(Error::domain("iterate count must be at least 1"));
    }
    let p = f.p;
    let shift = 4 * m as i64 * p as i64;
    let mut closed = f.empty_like(Weight::new(f.weight.k1 + shift, f.weight.k2 + shift));
    let n2 = Fp::new(f.level as i64, p).pow(2);
    for (t, v) in f.support() {
        let c = (t.det_mod(p) / (Fp::new(18, p) * n2)).pow(2 * m as u64);
        closed.insert(*t, v.scale(c).coords)?;
    }
    let mut it = f.clone();
    for _ in 0..4 * m {
        it = theta_j(&it, 2)?;
    }
    let report = proportionality(&it, &closed);
    Ok((closed, report))
}
