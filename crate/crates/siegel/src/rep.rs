//! Symmetric powers of the standard representation of GL₂ over F_p and the Pieri
//! decomposition of V(n) ⊗ V(2).
//!
//! `V(n, m)` is Sym^n ⊗ det^m in the basis u_i = e₁^{n−i}·e₂^i, i = 0..n, i.e. weight
//! (n+m, m). A tensor in V(n) ⊗ V(2) is stored with coordinate `3i + j` on u_i ⊗ v_j,
//! v_j = e₁^{2−j}e₂^j.
//!
//! The three summands are W_j ≅ V(n+2−2j, m+j), spanned by L^i w_j / (N)_i where w_j
//! are the highest-weight vectors, L is the lowering operator and (N)_i the falling
//! factorial.

use serde::{Deserialize, Serialize};

use crate::arith::linalg::solve;
use crate::arith::{pochhammer, Fp};
use crate::error::{Error, Result};

/// Integer 2×2 matrix `[[a, b], [c, d]]`.
pub type Mat2 = [[i64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub k1: i64,
    pub k2: i64,
}

impl Weight {
    pub fn new(k1: i64, k2: i64) -> Self {
        Weight { k1, k2 }
    }

    /// Symmetric degree k1 − k2.
    pub fn n(self) -> usize {
        (self.k1 - self.k2) as usize
    }
}

/// Element of V(n, m).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepVector {
    pub n: usize,
    pub m: i64,
    pub coords: Vec<Fp>,
}

impl RepVector {
    pub fn zero(n: usize, m: i64, p: u64) -> Self {
        RepVector { n, m, coords: vec![Fp::new(0, p); n + 1] }
    }

    pub fn from_ints(n: usize, m: i64, xs: &[i64], p: u64) -> Self {
        assert_eq!(xs.len(), n + 1);
        RepVector { n, m, coords: xs.iter().map(|&x| Fp::new(x, p)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: Fp) -> Self {
        RepVector { coords: self.coords.iter().map(|&x| x * c).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        RepVector { coords: self.coords.iter().zip(&o.coords).map(|(&a, &b)| a + b).collect(), ..self.clone() }
    }

    pub fn values(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.value()).collect()
    }
}

/// Element of V(n, m) ⊗ V(2, 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    pub n: usize,
    pub m: i64,
    pub coords: Vec<Fp>,
}

impl TensorVector {
    pub fn zero(n: usize, m: i64, p: u64) -> Self {
        TensorVector { n, m, coords: vec![Fp::new(0, p); 3 * (n + 1)] }
    }

    pub fn get(&self, i: usize, j: usize) -> Fp {
        self.coords[3 * i + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fp) {
        self.coords[3 * i + j] = v;
    }

    /// a ⊗ s for a ∈ V(n, m), s ∈ V(2, 0).
    pub fn outer(a: &RepVector, s: &RepVector) -> Self {
        assert_eq!(s.n, 2);
        let mut coords = Vec::with_capacity(3 * (a.n + 1));
        for &x in &a.coords {
            for &y in &s.coords {
                coords.push(x * y);
            }
        }
        TensorVector { n: a.n, m: a.m + s.m, coords }
    }

    pub fn scale(&self, c: Fp) -> Self {
        TensorVector { coords: self.coords.iter().map(|&x| x * c).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        TensorVector { coords: self.coords.iter().zip(&o.coords).map(|(&a, &b)| a + b).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// The three Pieri components; absent summands are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieriSplit {
    /// In V(n+2, m).
    pub x0: Option<RepVector>,
    /// In V(n, m+1).
    pub x1: Option<RepVector>,
    /// In V(n−2, m+2).
    pub x2: Option<RepVector>,
}

impl PieriSplit {
    pub fn component(&self, j: usize) -> Option<&RepVector> {
        match j {
            0 => self.x0.as_ref(),
            1 => self.x1.as_ref(),
            2 => self.x2.as_ref(),
            _ => None,
        }
    }
}

pub fn det2(g: &Mat2) -> i64 {
    g[0][0] * g[1][1] - g[0][1] * g[1][0]
}

pub fn adjugate(g: &Mat2) -> Mat2 {
    [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]]
}

fn poly_mul(a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    let zero = Fp::new(0, a[0].modulus());
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Matrix of Sym^n(g) without determinant twist: column i is the image of u_i.
pub fn sym_matrix(n: usize, g: &Mat2, p: u64) -> Vec<Vec<Fp>> {
    let f = |x: i64| Fp::new(x, p);
    let (a, b, c, d) = (f(g[0][0]), f(g[0][1]), f(g[1][0]), f(g[1][1]));
    let mut m = vec![vec![f(0); n + 1]; n + 1];
    for i in 0..=n {
        let mut poly = vec![f(1)];
        for _ in 0..n - i {
            poly = poly_mul(&poly, &[a, c]);
        }
        for _ in 0..i {
            poly = poly_mul(&poly, &[b, d]);
        }
        for (r, &v) in poly.iter().enumerate() {
            m[r][i] = v;
        }
    }
    m
}

fn check_invertible(g: &Mat2, p: u64) -> Result<Fp> {
    let d = Fp::new(det2(g), p);
    if d.is_zero() {
        return Err(Error::domain("matrix is singular mod p"));
    }
    Ok(d)
}

/// λ_{(k1,k2)}(g)·v = det(g)^{k2} · Sym^{k1−k2}(g)·v.
pub fn rep_apply(weight: Weight, g: &Mat2, v: &RepVector) -> Result<RepVector> {
    let p = v.coords[0].modulus();
    if weight.k1 < weight.k2 || weight.n() != v.n {
        return Err(Error::domain("weight does not match vector degree"));
    }
    let d = check_invertible(g, p)?.pow_signed(weight.k2).expect("det is a unit");
    let m = sym_matrix(v.n, g, p);
    let coords = m.iter().map(|row| row.iter().zip(&v.coords).fold(Fp::new(0, p), |s, (&a, &x)| s + a * x) * d).collect();
    Ok(RepVector { n: v.n, m: v.m, coords })
}

/// Diagonal action on V(n, m) ⊗ V(2, 0).
pub fn tensor_apply(g: &Mat2, x: &TensorVector) -> Result<TensorVector> {
    let p = x.coords[0].modulus();
    let d = check_invertible(g, p)?.pow_signed(x.m).expect("det is a unit");
    let a = sym_matrix(x.n, g, p);
    let b = sym_matrix(2, g, p);
    let mut out = TensorVector::zero(x.n, x.m, p);
    for r in 0..=x.n {
        for s in 0..3 {
            let mut acc = Fp::new(0, p);
            for i in 0..=x.n {
                if a[r][i].is_zero() {
                    continue;
                }
                for j in 0..3 {
                    acc += a[r][i] * b[s][j] * x.get(i, j);
                }
            }
            out.set(r, s, acc * d);
        }
    }
    Ok(out)
}

/// Lowering operator L = x₂∂/∂x₁ + y₂∂/∂y₁ on V(n) ⊗ V(2).
pub fn lower(x: &TensorVector) -> TensorVector {
    let p = x.coords[0].modulus();
    let mut out = TensorVector::zero(x.n, x.m, p);
    for i in 0..=x.n {
        for j in 0..3 {
            let c = x.get(i, j);
            if c.is_zero() {
                continue;
            }
            if i < x.n {
                let v = out.get(i + 1, j) + c * Fp::new((x.n - i) as i64, p);
                out.set(i + 1, j, v);
            }
            if j < 2 {
                let v = out.get(i, j + 1) + c * Fp::new((2 - j) as i64, p);
                out.set(i, j + 1, v);
            }
        }
    }
    out
}

/// Highest-weight vector w_j of V(n) ⊗ V(2); requires j ≤ n and j ≤ 2.
pub fn highest_weight(j: usize, n: usize, m: i64, p: u64) -> TensorVector {
    assert!(j <= 2 && j <= n);
    let mut w = TensorVector::zero(n, m, p);
    let f = |x: i64| Fp::new(x, p);
    match j {
        0 => w.set(0, 0, f(1)),
        1 => {
            w.set(0, 1, f(1));
            w.set(1, 0, f(-1));
        }
        _ => {
            w.set(0, 2, f(1));
            w.set(1, 1, f(-2));
            w.set(2, 0, f(1));
        }
    }
    w
}

fn component_present(j: usize, n: usize) -> bool {
    j <= n && j <= 2
}

/// Basis vectors L^i w_j / (N)_i of W_j, N = n+2−2j.
pub fn component_basis(j: usize, n: usize, m: i64, p: u64) -> Result<Vec<TensorVector>> {
    let big_n = n + 2 - 2 * j;
    let mut cur = highest_weight(j, n, m, p);
    let mut out = Vec::with_capacity(big_n + 1);
    for i in 0..=big_n {
        let c = pochhammer(big_n as i64, i as i64, p)?;
        out.push(cur.scale(c.inv().expect("pochhammer is nonzero")));
        cur = lower(&cur);
    }
    Ok(out)
}

/// Contraction V(n) ⊗ V(2) → V(n−2) ⊗ det²: P₁₁Q₂₂ − 2P₁₂Q₁₂ + P₂₂Q₁₁.
pub fn contraction(x: &TensorVector) -> RepVector {
    let p = x.coords[0].modulus();
    let n = x.n;
    assert!(n >= 2);
    let mut out = RepVector::zero(n - 2, x.m + 2, p);
    let f = |v: i64| Fp::new(v, p);
    for i in 0..=n {
        let (ni, ii) = ((n - i) as i64, i as i64);
        let a2 = x.get(i, 2);
        if i + 2 <= n {
            out.coords[i] += f(2 * ni * (ni - 1)) * a2;
        }
        let a1 = x.get(i, 1);
        if i >= 1 && i < n {
            out.coords[i - 1] += f(-2 * ni * ii) * a1;
        }
        let a0 = x.get(i, 0);
        if i >= 2 {
            out.coords[i - 2] += f(2 * ii * (ii - 1)) * a0;
        }
    }
    out
}

/// Splits x ∈ V(n, m) ⊗ V(2) into its W₀ ⊕ W₁ ⊕ W₂ coordinates.
///
/// For n ≤ p−3 all present components are returned; for n = p−2 only x2, obtained
/// from the contraction. n = p−1 has no invertible normalization and is rejected.
pub fn pieri_split(n: usize, p: u64, x: &TensorVector) -> Result<PieriSplit> {
    if x.n != n || x.coords.len() != 3 * (n + 1) {
        return Err(Error::domain("tensor shape does not match n"));
    }
    let pn = p as usize;
    if n + 1 >= pn {
        return Err(Error::domain("split undefined at this degree"));
    }
    let m = x.m;
    if n + 2 == pn {
        let c = Fp::new((2 * n * (n + 1)) as i64, p);
        let x2 = contraction(x).scale(c.inv().expect("2n(n+1) is a unit at n = p-2"));
        return Ok(PieriSplit { x0: None, x1: None, x2: Some(x2) });
    }
    let mut cols = Vec::new();
    let mut spans = Vec::new();
    for j in 0..3 {
        if component_present(j, n) {
            let b = component_basis(j, n, m, p)?;
            spans.push((j, b.len()));
            cols.extend(b);
        }
    }
    let dim = 3 * (n + 1);
    debug_assert_eq!(cols.len(), dim);
    let a: Vec<Vec<Fp>> = (0..dim).map(|r| cols.iter().map(|c| c.coords[r]).collect()).collect();
    let sol = solve(&a, &x.coords).ok_or_else(|| Error::domain("Pieri basis is singular"))?;
    let mut out = PieriSplit { x0: None, x1: None, x2: None };
    let mut off = 0;
    for (j, len) in spans {
        let v = RepVector { n: n + 2 - 2 * j, m: m + j as i64, coords: sol[off..off + len].to_vec() };
        off += len;
        match j {
            0 => out.x0 = Some(v),
            1 => out.x1 = Some(v),
            _ => out.x2 = Some(v),
        }
    }
    Ok(out)
}

/// Inverse of [`pieri_split`] on the components that are present.
pub fn pieri_assemble(n: usize, m: i64, p: u64, split: &PieriSplit) -> Result<TensorVector> {
    let mut acc = TensorVector::zero(n, m, p);
    for j in 0..3 {
        if let Some(v) = split.component(j) {
            let basis = component_basis(j, n, m, p)?;
            for (c, b) in v.coords.iter().zip(basis) {
                acc = acc.add(&b.scale(*c));
            }
        }
    }
    Ok(acc)
}

/// The j-th Pieri component, or an error naming why it is unavailable.
pub fn pieri_project(j: usize, x: &TensorVector, p: u64) -> Result<RepVector> {
    let split = pieri_split(x.n, p, x)?;
    split.component(j).cloned().ok_or_else(|| Error::domain(format!("component {j} is absent at n = {}", x.n)))
}

/// Summands of λ_k ⊗ λ_k'.
pub fn clebsch_weights(w: Weight, w2: Weight) -> Vec<Weight> {
    let mu = (w.k1 - w.k2).min(w2.k1 - w2.k2);
    (0..=mu).map(|j| Weight::new(w.k1 + w2.k1 - j, w.k2 + w2.k2 + j)).collect()
}

/// a·e₁² + b·e₁e₂ + c·e₂² in V(2, 0).
pub fn sym2_of_index(a: i64, b: i64, c: i64, p: u64) -> RepVector {
    RepVector::from_ints(2, 0, &[a, b, c], p)
}
