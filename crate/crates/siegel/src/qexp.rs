//! Finite-support Fourier expansions of mod p Siegel modular forms and the SMF1 text
//! format.
//!
//! An expansion stores A_F(T) for finitely many half-integral indices
//! T = [[a, b/2], [b/2, c]]; the Fourier variable is q_N^T with the 1/N normalization
//! kept inside the operators. Only one cusp component is modelled.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, Fp, Fp2, QuadExt};
use crate::error::{Error, Result};
use crate::rep::{RepVector, Weight};

/// Half-integral index (a, b, c) for T = [[a, b/2], [b/2, c]].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QIndex {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QIndex {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QIndex { a, b, c }
    }

    /// 4·det T = 4ac − b².
    pub fn disc(self) -> i64 {
        4 * self.a * self.c - self.b * self.b
    }

    pub fn is_semi_positive(self) -> bool {
        self.a >= 0 && self.c >= 0 && self.disc() >= 0
    }

    /// det T = ac − b²/4 in F_p.
    pub fn det_mod(self, p: u64) -> Fp {
        Fp::new(self.disc(), p) / Fp::new(4, p)
    }

    pub fn scaled(self, s: i64) -> Self {
        QIndex::new(self.a * s, self.b * s, self.c * s)
    }

    pub fn divisible_by(self, d: i64) -> bool {
        self.a % d == 0 && self.b % d == 0 && self.c % d == 0
    }

    fn key(self) -> (i64, i64, i64) {
        (self.a, self.c, self.b)
    }
}

impl PartialOrd for QIndex {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QIndex {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key().cmp(&o.key())
    }
}

/// A Dirichlet character mod N as a value table in F_{p²}; `None` is trivial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Character {
    pub table: Option<Vec<Fp2>>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Character {
    pub fn trivial() -> Self {
        Character { table: None }
    }

    pub fn from_table(table: Vec<Fp2>) -> Self {
        Character { table: Some(table) }
    }

    pub fn is_trivial(&self) -> bool {
        self.table.is_none()
    }

    pub fn eval(&self, x: i64, level: u64, field: QuadExt) -> Fp2 {
        let r = x.rem_euclid(level as i64);
        match &self.table {
            Some(t) => t[r as usize],
            None if gcd(r, level as i64) == 1 || level == 1 => field.one(),
            None => field.zero(),
        }
    }

    /// The value χ(x) when it lies in F_p.
    pub fn eval_base(&self, x: i64, level: u64, field: QuadExt) -> Result<Fp> {
        self.eval(x, level, field).to_base().ok_or_else(|| Error::domain("character value does not lie in F_p"))
    }
}

/// A truncated q-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub p: u64,
    pub level: u64,
    pub weight: Weight,
    pub chi1: Character,
    pub chi2: Character,
    support: BTreeMap<QIndex, RepVector>,
}

impl QExpansion {
    pub fn new(p: u64, level: u64, weight: Weight) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::domain(format!("p = {p} must be a prime at least 5")));
        }
        if level == 0 || level.is_multiple_of(p) {
            return Err(Error::domain("level must be positive and prime to p"));
        }
        if weight.k1 < weight.k2 {
            return Err(Error::domain("weight must satisfy k1 >= k2"));
        }
        Ok(QExpansion { p, level, weight, chi1: Character::trivial(), chi2: Character::trivial(), support: BTreeMap::new() })
    }

    pub fn with_characters(mut self, chi1: Character, chi2: Character) -> Result<Self> {
        for t in [&chi1.table, &chi2.table].into_iter().flatten() {
            if t.len() != self.level as usize {
                return Err(Error::domain("character table must have N entries"));
            }
        }
        self.chi1 = chi1;
        self.chi2 = chi2;
        self.check_parity()?;
        Ok(self)
    }

    fn check_parity(&self) -> Result<()> {
        if self.chi1.is_trivial() || self.chi2.is_trivial() {
            return Ok(());
        }
        let f = self.field();
        let v = self.chi2.eval(-1, self.level, f);
        let want = if (self.weight.k1 + self.weight.k2) % 2 == 0 { f.one() } else { -f.one() };
        if v != want {
            return Err(Error::domain("parity violated: chi2(-1) != (-1)^(k1+k2)"));
        }
        Ok(())
    }

    /// Empty expansion with the same level, characters and prime.
    pub fn empty_like(&self, weight: Weight) -> Self {
        QExpansion { weight, support: BTreeMap::new(), ..self.clone() }
    }

    pub fn field(&self) -> QuadExt {
        QuadExt::new(self.p).expect("p is validated at construction")
    }

    pub fn degree(&self) -> usize {
        self.weight.n()
    }

    pub fn level_inv(&self) -> Fp {
        Fp::new(self.level as i64, self.p).inv().expect("level is prime to p")
    }

    /// Stores A_F(T); zero coefficients are removed.
    pub fn insert(&mut self, t: QIndex, coords: Vec<Fp>) -> Result<()> {
        if !t.is_semi_positive() {
            return Err(Error::domain(format!("index ({}, {}, {}) is not semi-positive", t.a, t.b, t.c)));
        }
        if coords.len() != self.degree() + 1 {
            return Err(Error::domain(format!("coefficient length {} != {}", coords.len(), self.degree() + 1)));
        }
        if coords.iter().all(|c| c.is_zero()) {
            self.support.remove(&t);
        } else {
            self.support.insert(t, RepVector { n: self.degree(), m: self.weight.k2, coords });
        }
        Ok(())
    }

    pub fn insert_ints(&mut self, t: QIndex, coords: &[i64]) -> Result<()> {
        let p = self.p;
        self.insert(t, coords.iter().map(|&x| Fp::new(x, p)).collect())
    }

    pub fn get(&self, t: &QIndex) -> Option<&RepVector> {
        self.support.get(t)
    }

    /// A_F(T), zero when T is outside the support.
    pub fn coeff_or_zero(&self, t: &QIndex) -> RepVector {
        self.support.get(t).cloned().unwrap_or_else(|| RepVector::zero(self.degree(), self.weight.k2, self.p))
    }

    pub fn support(&self) -> impl Iterator<Item = (&QIndex, &RepVector)> {
        self.support.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = QIndex> + '_ {
        self.support.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Same coefficients, weight raised by m(p−1) in both entries.
    pub fn hasse_scale(&self, m: i64) -> Self {
        let s = m * (self.p as i64 - 1);
        let weight = Weight::new(self.weight.k1 + s, self.weight.k2 + s);
        let support = self.support.iter().map(|(t, v)| (*t, RepVector { m: v.m + s, ..v.clone() })).collect();
        QExpansion { weight, support, ..self.clone() }
    }

    pub fn scale(&self, c: Fp) -> Self {
        let mut out = self.empty_like(self.weight);
        for (t, v) in &self.support {
            out.insert(*t, v.scale(c).coords).expect("shape preserved");
        }
        out
    }

    /// Every supported T has p | a, b, c.
    pub fn is_p_singular(&self) -> bool {
        self.support.keys().all(|t| t.divisible_by(self.p as i64))
    }

    /// Every supported T has p | 4ac − b².
    pub fn is_weak_p_singular(&self) -> bool {
        self.support.keys().all(|t| t.disc() % self.p as i64 == 0)
    }

    /// G with F = G^p, when F is p-singular of weight (k, k) with p | k.
    pub fn pth_root(&self) -> Result<Option<Self>> {
        let Weight { k1, k2 } = self.weight;
        if k1 != k2 {
            return Err(Error::domain("pth_root requires scalar weight"));
        }
        let p = self.p as i64;
        if k1 % p != 0 {
            return Err(Error::domain("weight not p-divisible"));
        }
        if !self.is_p_singular() {
            return Ok(None);
        }
        let w = Weight::new(k1 / p, k1 / p);
        let mut out = self.empty_like(w);
        for (t, v) in &self.support {
            out.insert(QIndex::new(t.a / p, t.b / p, t.c / p), v.coords.clone())?;
        }
        Ok(Some(out))
    }

    /// G ↦ G^p on q-expansions: indices scaled by p, weight multiplied by p.
    pub fn frobenius_power(&self) -> Result<Self> {
        let Weight { k1, k2 } = self.weight;
        if k1 != k2 {
            return Err(Error::domain("frobenius_power requires scalar weight"));
        }
        let p = self.p as i64;
        let mut out = self.empty_like(Weight::new(k1 * p, k1 * p));
        for (t, v) in &self.support {
            out.insert(t.scaled(p), v.coords.clone())?;
        }
        Ok(out)
    }

    fn same_space(&self, o: &Self) -> bool {
        self.p == o.p && self.level == o.level && self.weight == o.weight && self.chi1 == o.chi1 && self.chi2 == o.chi2
    }

    /// Σ cᵢ·Fᵢ over expansions sharing p, N, weight and characters.
    pub fn linear_combine(terms: &[(Fp, &QExpansion)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::domain("empty combination"))?.1;
        let mut acc: BTreeMap<QIndex, RepVector> = BTreeMap::new();
        for (c, f) in terms {
            if !first.same_space(f) {
                return Err(Error::domain("metadata mismatch in linear combination"));
            }
            for (t, v) in &f.support {
                let s = v.scale(*c);
                acc.entry(*t).and_modify(|e| *e = e.add(&s)).or_insert(s);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(QExpansion { support: acc, ..first.empty_like(first.weight) })
    }

    /// Canonical SMF1 text.
    pub fn to_smf(&self) -> String {
        let mut s = String::from("%SMF v1\n");
        let _ = writeln!(s, "p {}", self.p);
        let _ = writeln!(s, "N {}", self.level);
        let _ = writeln!(s, "weight {} {}", self.weight.k1, self.weight.k2);
        for (name, chi) in [("chi1", &self.chi1), ("chi2", &self.chi2)] {
            match &chi.table {
                None => {
                    let _ = writeln!(s, "{name} trivial");
                }
                Some(t) => {
                    let vals: Vec<String> = t.iter().map(|v| fmt_fp2(*v)).collect();
                    let _ = writeln!(s, "{name} table:{}", vals.join(" "));
                }
            }
        }
        for (t, v) in &self.support {
            let cs: Vec<String> = v.coords.iter().map(|c| c.value().to_string()).collect();
            let _ = writeln!(s, "coeff {} {} {} : {}", t.a, t.b, t.c, cs.join(" "));
        }
        s
    }

    /// Parses SMF1 text.
    pub fn from_smf(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut header: Option<usize> = None;
        let (mut p, mut level, mut weight) = (None, None, None);
        let mut chis: [Option<(usize, String)>; 2] = [None, None];
        let mut body = Vec::new();
        for (no, line) in lines.by_ref() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if header.is_none() {
                if line != "%SMF v1" {
                    return Err(Error::parse(no, "expected %SMF v1"));
                }
                header = Some(no);
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "p" => p = Some(parse_int::<u64>(rest, no)?),
                "N" => level = Some(parse_int::<u64>(rest, no)?),
                "weight" => {
                    let ks = parse_ints(rest, no)?;
                    if ks.len() != 2 {
                        return Err(Error::parse(no, "weight needs two integers"));
                    }
                    weight = Some(Weight::new(ks[0], ks[1]));
                }
                "chi1" => chis[0] = Some((no, rest.to_string())),
                "chi2" => chis[1] = Some((no, rest.to_string())),
                "coeff" => body.push((no, rest.to_string())),
                _ => return Err(Error::parse(no, format!("unknown line kind '{key}'"))),
            }
        }
        let hdr = header.ok_or_else(|| Error::parse(1, "missing %SMF v1 header"))?;
        let p = p.ok_or_else(|| Error::parse(hdr, "missing p"))?;
        let level = level.ok_or_else(|| Error::parse(hdr, "missing N"))?;
        let weight = weight.ok_or_else(|| Error::parse(hdr, "missing weight"))?;
        let mut f = QExpansion::new(p, level, weight).map_err(|e| Error::parse(hdr, e.to_string()))?;
        let field = f.field();
        let mut parsed = [Character::trivial(), Character::trivial()];
        let mut last_chi = hdr;
        for (slot, c) in chis.iter().enumerate() {
            if let Some((no, text)) = c {
                parsed[slot] = parse_character(text, level, field, *no)?;
                last_chi = last_chi.max(*no);
            }
        }
        let [c1, c2] = parsed;
        f = f.with_characters(c1, c2).map_err(|e| Error::parse(last_chi, e.to_string()))?;
        for (no, rest) in body {
            let (idx, coeffs) = rest.split_once(':').ok_or_else(|| Error::parse(no, "missing ':'"))?;
            let ix = parse_ints(idx, no)?;
            if ix.len() != 3 {
                return Err(Error::parse(no, "index needs three integers"));
            }
            let t = QIndex::new(ix[0], ix[1], ix[2]);
            if !t.is_semi_positive() {
                return Err(Error::parse(
                    no,
                    format!("index ({}, {}, {}) violates semi-positivity: 4ac - b^2 = {}", t.a, t.b, t.c, t.disc()),
                ));
            }
            let cs = parse_ints(coeffs, no)?;
            if cs.len() != f.degree() + 1 {
                return Err(Error::parse(no, format!("expected {} coefficients, found {}", f.degree() + 1, cs.len())));
            }
            if cs.iter().any(|&c| c < 0 || c >= p as i64) {
                return Err(Error::parse(no, "coefficient outside [0, p)"));
            }
            if f.support.contains_key(&t) {
                return Err(Error::parse(no, "duplicate index"));
            }
            f.insert_ints(t, &cs).map_err(|e| Error::parse(no, e.to_string()))?;
        }
        Ok(f)
    }
}

fn fmt_fp2(v: Fp2) -> String {
    match v.parts() {
        (a, 0) => a.to_string(),
        (a, b) => format!("{a}:{b}"),
    }
}

fn parse_int<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::parse(line, format!("bad integer '{}'", s.trim())))
}

fn parse_ints(s: &str, line: usize) -> Result<Vec<i64>> {
    s.split_whitespace().map(|x| parse_int(x, line)).collect()
}

/// `trivial` or `table:v0 v1 ...`; a value is `a` or `a:b` for a + b·s, s² the
/// fixed nonresidue of F_{p²}.
fn parse_character(text: &str, level: u64, field: QuadExt, line: usize) -> Result<Character> {
    if text == "trivial" {
        return Ok(Character::trivial());
    }
    let body = text.strip_prefix("table:").ok_or_else(|| Error::parse(line, "character must be 'trivial' or 'table:...'"))?;
    let mut vals = Vec::new();
    for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (a, b) = match tok.split_once(':') {
            Some((a, b)) => (parse_int::<i64>(a, line)?, parse_int::<i64>(b, line)?),
            None => (parse_int::<i64>(tok, line)?, 0),
        };
        vals.push(field.elem(a, b));
    }
    if vals.len() != level as usize {
        return Err(Error::parse(line, format!("character table has {} values, expected {level}", vals.len())));
    }
    Ok(Character::from_table(vals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(p: u64, w: Weight) -> QExpansion {
        QExpansion::new(p, 3, w).unwrap()
    }

    #[test]
    fn codec_examples() {
        let f = sample(7, Weight::new(4, 2));
        let text = f.to_smf();
        assert_eq!(text.lines().count(), 6);
        assert_eq!(QExpansion::from_smf(&text).unwrap(), f);

        let g = QExpansion::from_smf("%SMF v1\np 7\nN 3\nweight 4 2\nchi1 trivial\nchi2 trivial\ncoeff 1 1 1 : 3 2 5\n").unwrap();
        assert_eq!(g.get(&QIndex::new(1, 1, 1)).unwrap().values(), vec![3, 2, 5]);

        let err = QExpansion::from_smf("%SMF v1\np 7\nN 3\nweight 2 2\n# c\ncoeff 1 3 1 : 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 6, .. }), "{err:?}");
        let err = QExpansion::from_smf("%SMF v1\np 7\nN 3\nweight 4 2\ncoeff 1 1 1 : 3 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, .. }));
        assert!(QExpansion::from_smf("p 7\n").is_err());
    }

    #[test]
    fn character_tables() {
        // quadratic character mod 3 is odd
        let odd = "%SMF v1\np 7\nN 3\nweight 3 2\nchi1 table:0 1 6\nchi2 table:0 1 6\n";
        let f = QExpansion::from_smf(odd).unwrap();
        assert_eq!(QExpansion::from_smf(&f.to_smf()).unwrap(), f);
        let even = odd.replace("weight 3 2", "weight 4 2");
        assert!(matches!(QExpansion::from_smf(&even), Err(Error::Parse { line: 6, .. })));
        let fq = "%SMF v1\np 7\nN 3\nweight 4 2\nchi1 table:0 1 0:1\n";
        let f = QExpansion::from_smf(fq).unwrap();
        assert_eq!(f.chi1.table.as_ref().unwrap()[2].parts(), (0, 1));
        assert!(f.chi1.eval_base(2, 3, f.field()).is_err());
    }

    #[test]
    fn singularity_examples() {
        let mut f = sample(5, Weight::new(2, 2));
        f.insert_ints(QIndex::new(5, 0, 5), &[1]).unwrap();
        assert!(f.is_p_singular());
        let mut g = sample(5, Weight::new(2, 2));
        g.insert_ints(QIndex::new(1, 0, 0), &[1]).unwrap();
        assert!(!g.is_p_singular() && g.is_weak_p_singular());
        let mut h = sample(5, Weight::new(2, 2));
        h.insert_ints(QIndex::new(1, 1, 1), &[1]).unwrap();
        assert!(!h.is_weak_p_singular());
    }

    #[test]
    fn pth_root_examples() {
        let mut f = sample(5, Weight::new(25, 25));
        f.insert_ints(QIndex::new(5, 5, 5), &[2]).unwrap();
        let g = f.pth_root().unwrap().unwrap();
        assert_eq!(g.weight, Weight::new(5, 5));
        assert_eq!(g.get(&QIndex::new(1, 1, 1)).unwrap().values(), vec![2]);
        assert_eq!(g.frobenius_power().unwrap(), f);
        let mut h = sample(5, Weight::new(5, 5));
        h.insert_ints(QIndex::new(1, 0, 0), &[1]).unwrap();
        assert_eq!(h.pth_root().unwrap(), None);
        assert_eq!(sample(5, Weight::new(4, 4)).pth_root().unwrap_err(), Error::domain("weight not p-divisible"));
    }

    #[test]
    fn hasse_examples() {
        let mut f = sample(7, Weight::new(4, 2));
        f.insert_ints(QIndex::new(1, 1, 1), &[1, 2, 3]).unwrap();
        assert_eq!(f.hasse_scale(0), f);
        let g = f.hasse_scale(1);
        assert_eq!(g.weight, Weight::new(10, 8));
        assert_eq!(g.get(&QIndex::new(1, 1, 1)).unwrap().values(), vec![1, 2, 3]);
        assert_eq!(g.hasse_scale(1), f.hasse_scale(2));
    }

    #[test]
    fn combine_examples() {
        let p = 5;
        let mut f = sample(p, Weight::new(3, 2));
        f.insert_ints(QIndex::new(1, 0, 1), &[1, 2]).unwrap();
        let one = Fp::new(1, p);
        assert!(QExpansion::linear_combine(&[(one, &f), (-one, &f)]).unwrap().is_empty());
        let two = Fp::new(2, p);
        let twice = QExpansion::linear_combine(&[(two, &QExpansion::linear_combine(&[(two, &f)]).unwrap())]).unwrap();
        assert_eq!(twice, f.scale(Fp::new(4, p)));
        let mut g = sample(p, Weight::new(3, 2));
        g.insert_ints(QIndex::new(2, 0, 1), &[1, 1]).unwrap();
        assert_eq!(QExpansion::linear_combine(&[(one, &f), (one, &g)]).unwrap().len(), 2);
        assert!(QExpansion::linear_combine(&[(one, &f), (one, &f.hasse_scale(1))]).is_err());
    }

    fn arb_expansion() -> impl Strategy<Value = QExpansion> {
        (
            prop::sample::select(vec![5u64, 7, 11]),
            0i64..3,
            1i64..4,
            prop::collection::vec((0i64..12, -12i64..12, 0i64..12, any::<u64>()), 0..8),
        )
            .prop_map(|(p, n, k2, raw)| {
                let mut f = QExpansion::new(p, 4, Weight::new(k2 + n, k2)).unwrap();
                for (a, b, c, seed) in raw {
                    let t = QIndex::new(a, b, c);
                    if t.is_semi_positive() {
                        let cs: Vec<i64> = (0..=n).map(|i| ((seed >> (8 * i)) % p) as i64).collect();
                        f.insert_ints(t, &cs).unwrap();
                    }
                }
                f
            })
    }

    proptest! {
        #[test]
        fn codec_round_trip(f in arb_expansion()) {
            prop_assert_eq!(QExpansion::from_smf(&f.to_smf()).unwrap(), f);
        }

        #[test]
        fn singular_implies_weak(f in arb_expansion()) {
            let g = f.hasse_scale(0);
            if f.is_p_singular() {
                prop_assert!(f.is_weak_p_singular());
            }
            let s = f.scale(Fp::new(1, f.p));
            prop_assert!(s.is_p_singular() || !f.is_p_singular());
            prop_assert_eq!(g.hasse_scale(2).is_p_singular(), f.is_p_singular());
            prop_assert_eq!(g.hasse_scale(3).is_weak_p_singular(), f.is_weak_p_singular());
        }

        #[test]
        fn scaled_up_is_singular(f in arb_expansion()) {
            if f.weight.k1 == f.weight.k2 {
                let up = f.frobenius_power().unwrap();
                prop_assert!(up.is_p_singular());
                let root = up.pth_root().unwrap().unwrap();
                let ps: Vec<QIndex> = root.indices().map(|t| t.scaled(f.p as i64)).collect();
                prop_assert_eq!(ps, up.indices().collect::<Vec<_>>());
                prop_assert_eq!(root, f);
            }
        }
    }
}
