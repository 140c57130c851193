//! Synthetic expansions for tests and self-checks.

use std::collections::BTreeSet;

use rand::Rng;

use crate::qexp::{QExpansion, QIndex};
use crate::rep::Weight;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A value depending only on invariants of T under T ↦ UTUᵗ, U ∈ SL₂(Z), U ≡ 1 mod N.
pub fn class_value(t: QIndex, level: i64, salt: i64) -> i64 {
    let content = gcd(gcd(t.a, t.b), t.c);
    let r = |x: i64| x.rem_euclid(level);
    (t.disc() * 7 + content * 3 + r(t.a) * 11 + r(t.b) * 13 + r(t.c) * 17 + salt).rem_euclid(1 << 20)
}

/// Expansion on `indices` obeying the transformation law: a class function in scalar
/// weight, or a class function times the index vector a·e₁² + b·e₁e₂ + c·e₂² when
/// k₁ − k₂ = 2.
pub fn invariant_form(p: u64, level: u64, w: Weight, indices: &BTreeSet<QIndex>, salt: i64) -> QExpansion {
    let mut f = QExpansion::new(p, level, w).expect("valid parameters");
    for t in indices {
        let h = class_value(*t, level as i64, salt);
        let cs = match w.n() {
            0 => vec![h],
            2 => vec![h * t.a, h * t.b, h * t.c],
            n => panic!("no invariant model in degree {n}"),
        };
        f.insert_ints(*t, &cs).expect("semi-positive index");
    }
    f
}

/// Uniform random coefficients on `indices`.
pub fn random_form<R: Rng>(p: u64, level: u64, w: Weight, indices: &BTreeSet<QIndex>, rng: &mut R) -> QExpansion {
    let mut f = QExpansion::new(p, level, w).expect("valid parameters");
    for t in indices {
        let cs: Vec<i64> = (0..=w.n()).map(|_| rng.gen_range(0..p as i64)).collect();
        f.insert_ints(*t, &cs).expect("semi-positive index");
    }
    f
}

/// All semi-positive indices with 0 ≤ a, c ≤ r and |b| ≤ 2r.
pub fn index_box(r: i64) -> BTreeSet<QIndex> {
    let mut out = BTreeSet::new();
    for a in 0..=r {
        for c in 0..=r {
            for b in -2 * r..=2 * r {
                let t = QIndex::new(a, b, c);
                if t.is_semi_positive() {
                    out.insert(t);
                }
            }
        }
    }
    out
}
