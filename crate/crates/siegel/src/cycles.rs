//! Theta cycles: predicted filtration sequences and their low-point decomposition.
//!
//! A scalar cycle climbs by p+1 and a vector cycle by p; every other transition is a
//! drop whose jumping number b satisfies b(p−1) = w_t + step − w_{t+1}.

use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    Scalar,
    Vector,
}

impl CycleKind {
    pub fn step(self, p: i64) -> i64 {
        match self {
            CycleKind::Scalar => p + 1,
            CycleKind::Vector => p,
        }
    }

    pub fn length(self, p: i64) -> usize {
        match self {
            CycleKind::Scalar => (p as usize - 1) / 2,
            CycleKind::Vector => p as usize - 1,
        }
    }

    fn sum_b(self, p: i64) -> i64 {
        match self {
            CycleKind::Scalar => (p + 1) / 2,
            CycleKind::Vector => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowPoint {
    /// Index of the low entry in the cycle.
    pub position: usize,
    pub weight: i64,
    /// 1 if w_prev ≡ 0, 2 if 2w_prev − 1 ≡ 0 mod p, where w_prev precedes the drop.
    pub kind: Option<u8>,
    /// Steps since the previous low point.
    pub c: i64,
    /// Jumping number of the drop into this point.
    pub b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleAnalysis {
    pub low_points: Vec<LowPoint>,
    pub sum_b: i64,
    pub sum_c: i64,
    pub violations: Vec<String>,
}

impl CycleAnalysis {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub p: i64,
    pub start_weight: i64,
    pub kind: CycleKind,
    pub semi_ordinary: bool,
    pub row: String,
    /// Entries are offsets from a symbolic base k′ rather than weights.
    pub symbolic_base: bool,
    pub entries: Vec<i64>,
    pub analysis: CycleAnalysis,
}

fn check_p(p: i64) -> Result<()> {
    if p < 5 || !is_prime(p as u64) {
        return Err(Error::domain(format!("p = {p} must be a prime at least 5")));
    }
    Ok(())
}

/// k mod p taken in [1, p].
pub fn residue(k: i64, p: i64) -> i64 {
    (k - 1).rem_euclid(p) + 1
}

fn ladder(base: i64, step: i64, js: std::ops::RangeInclusive<i64>) -> impl Iterator<Item = i64> {
    js.map(move |j| base + j * step)
}

/// Predicted cycle of a scalar form of filtration k.
///
/// `theta_weight` selects w(Θ(F)) in the k = p and k = (p+1)/2 rows; it defaults
/// to k + p + 1.
pub fn predict_scalar_cycle(p: i64, k: i64, semi_ordinary: bool, theta_weight: Option<i64>) -> Result<CycleReport> {
    check_p(p)?;
    if k < 2 && !(semi_ordinary && k == 1) {
        return Err(Error::domain("weight must be at least 2"));
    }
    let s = p + 1;
    let k0 = residue(k, p);
    let half = (p + 1) / 2;
    let (row, entries): (String, Vec<i64>) = if !semi_ordinary {
        let generic = || ladder(k, s, 1..=(p - 3) / 2).chain([k]).collect::<Vec<_>>();
        if k0 == 2 {
            ("k0 = 2".into(), generic())
        } else if k0 == (p + 3) / 2 {
            ("k0 = (p+3)/2".into(), generic())
        } else if (3..=half).contains(&k0) {
            let k1 = k + p + 3 - 2 * k0;
            let e = ladder(k, s, 1..=half - k0).chain(ladder(k1, s, 0..=k0 - 3)).chain([k]).collect();
            ("3 <= k0 <= (p+1)/2".into(), e)
        } else {
            ("otherwise".into(), generic())
        }
    } else if k == p {
        let w = theta_weight.unwrap_or(k + p + 1);
        let e = if w == 2 * p + 1 || w == p + 2 {
            ladder(w, s, 0..=(p - 3) / 2).collect()
        } else if w == 3 {
            ladder(3, s, 0..=(p - 5) / 2).chain([p]).collect()
        } else {
            return Err(Error::domain(format!("w(Theta F) = {w} is not among 2p+1, p+2, 3")));
        };
        (format!("k = p, w(Theta F) = {w}"), e)
    } else if k == half {
        let w = theta_weight.unwrap_or(k + p + 1);
        if !(w == (3 * p + 3) / 2 || w == (p + 5) / 2 || (p == 5 && w == 1)) {
            return Err(Error::domain(format!("w(Theta F) = {w} is not an allowed value")));
        }
        (format!("k = (p+1)/2, w(Theta F) = {w}"), ladder(w, s, 0..=(p - 3) / 2).collect())
    } else if k0 == p {
        return Err(Error::domain("case not covered by paper"));
    } else {
        if theta_weight.is_some_and(|w| w != k + p + 1) {
            return Err(Error::domain("w(Theta F) = k+p+1 in this case"));
        }
        let generic = || ladder(k, s, 1..=(p - 1) / 2).collect::<Vec<_>>();
        if k0 == 1 {
            ("k0 = 1".into(), generic())
        } else if k0 == half {
            ("k0 = (p+1)/2".into(), generic())
        } else if (2..=(p - 1) / 2).contains(&k0) {
            let k1 = k + p + 1 - 2 * k0;
            ("2 <= k0 <= (p-1)/2".into(), ladder(k, s, 1..=half - k0).chain(ladder(k1, s, 1..=k0 - 1)).collect())
        } else {
            ("otherwise".into(), generic())
        }
    };
    // semi-ordinary rows are the cycle of Θ(F), which closes at w(Θ(F))
    let anchor = if semi_ordinary { 0 } else { entries.len() - 1 };
    let analysis = analyze_anchored(&entries, p, CycleKind::Scalar, false, anchor)?;
    Ok(CycleReport { p, start_weight: k, kind: CycleKind::Scalar, semi_ordinary, row, symbolic_base: false, entries, analysis })
}

/// Predicted cycle of a vector-valued form with k₁ − k₂ = 1.
pub fn predict_vector_cycle(p: i64, k: i64, semi_ordinary: bool) -> Result<CycleReport> {
    check_p(p)?;
    let (row, symbolic, entries): (&str, bool, Vec<i64>) = if !semi_ordinary {
        ("non semi-ordinary", false, ladder(k, p, 1..=p - 2).chain([k]).collect())
    } else if (2 * k - 1) % p != 0 {
        ("semi-ordinary, k' = k+p", false, ladder(k + p, p, 1..=p - 1).collect())
    } else {
        ("semi-ordinary, k' symbolic", true, ladder(0, p, 1..=p - 1).collect())
    };
    let analysis = analyze_cycle(&entries, p, CycleKind::Vector, symbolic)?;
    Ok(CycleReport {
        p,
        start_weight: k,
        kind: CycleKind::Vector,
        semi_ordinary,
        row: row.into(),
        symbolic_base: symbolic,
        entries,
        analysis,
    })
}

/// Low points, jumping numbers and the constraint checks of a cyclic sequence whose
/// last entry closes the cycle.
///
/// With `symbolic` set the entries are offsets and no types are assigned.
pub fn analyze_cycle(entries: &[i64], p: i64, kind: CycleKind, symbolic: bool) -> Result<CycleAnalysis> {
    analyze_anchored(entries, p, kind, symbolic, entries.len().saturating_sub(1))
}

/// As [`analyze_cycle`], with the cycle closing at `entries[anchor]`.
pub fn analyze_anchored(entries: &[i64], p: i64, kind: CycleKind, symbolic: bool, anchor: usize) -> Result<CycleAnalysis> {
    if entries.is_empty() {
        return Err(Error::domain("empty cycle"));
    }
    check_p(p)?;
    let len = entries.len();
    let step = kind.step(p);
    let mut drops = Vec::new();
    for t in 0..len {
        let (cur, next) = (entries[t], entries[(t + 1) % len]);
        if next == cur + step {
            continue;
        }
        let fall = cur + step - next;
        if fall % (p - 1) != 0 {
            return Err(Error::domain(format!("not a valid cycle: non-integral jumping number at position {}", (t + 1) % len)));
        }
        let b = fall / (p - 1);
        let ty = if symbolic || kind == CycleKind::Vector {
            None
        } else if cur.rem_euclid(p) == 0 {
            Some(1)
        } else if (2 * cur - 1).rem_euclid(p) == 0 {
            Some(2)
        } else {
            None
        };
        drops.push(((t + 1) % len, b, ty));
    }
    drops.sort_by_key(|d| (d.0 + len - anchor - 1) % len);
    let r = drops.len();
    let mut low_points = Vec::with_capacity(r);
    for (i, &(pos, b, ty)) in drops.iter().enumerate() {
        let prev = drops[(i + r - 1) % r.max(1)].0;
        let c = if r == 1 { len as i64 } else { ((pos + len - prev) % len) as i64 };
        low_points.push(LowPoint { position: pos, weight: entries[pos], kind: ty, c, b });
    }
    let sum_b: i64 = low_points.iter().map(|l| l.b).sum();
    let sum_c: i64 = low_points.iter().map(|l| l.c).sum();
    let mut violations = Vec::new();
    if r == 0 {
        violations.push("no low point".to_string());
    }
    for l in &low_points {
        if l.b <= 0 {
            violations.push(format!("position {}: non-positive jumping number {}", l.position, l.b));
        }
    }
    if r > 0 && sum_c != len as i64 {
        violations.push(format!("sum of c is {sum_c}, expected {len}"));
    }
    if sum_b != kind.sum_b(p) {
        violations.push(format!("sum of b is {sum_b}, expected {}", kind.sum_b(p)));
    }
    match kind {
        CycleKind::Vector => {
            for l in &low_points {
                if l.b % p != 0 {
                    violations.push(format!("position {}: b = {} is not divisible by p", l.position, l.b));
                }
            }
        }
        CycleKind::Scalar => {
            let pairs: Vec<(usize, usize)> = if r == 1 { vec![(0, 0)] } else { (0..r.saturating_sub(1)).map(|i| (i, i + 1)).collect() };
            for (i, j) in pairs {
                let (a, b) = (&low_points[i], &low_points[j]);
                let (Some(ta), Some(tb)) = (a.kind, b.kind) else { continue };
                let v = (a.b + b.c).rem_euclid(p);
                let (case, want) = match (ta, tb) {
                    (1, 1) => (1, 0),
                    (1, 2) => {
                        violations.push(format!("positions {} and {}: case 2 does not occur", a.position, b.position));
                        continue;
                    }
                    (2, 1) => (3, (p - 1) / 2),
                    _ => (4, 0),
                };
                if v != want.rem_euclid(p) {
                    violations
                        .push(format!("positions {} and {}: case {case} needs b + c = {want} mod p, got {v}", a.position, b.position));
                }
            }
        }
    }
    Ok(CycleAnalysis { low_points, sum_b, sum_c, violations })
}
