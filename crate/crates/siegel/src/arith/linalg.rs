//! Dense linear algebra over a coefficient field. Matrices are row-major `Vec<Vec<C>>`.

use super::series::Coeff;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<C: Coeff>(m: &mut [Vec<C>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].try_inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = *x * inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] = m[i][j] - f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank<C: Coeff>(m: &[Vec<C>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Solves `a·x = b` for square invertible `a`.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let n = a.len();
    let mut aug: Vec<Vec<C>> = a.iter().zip(b).map(|(row, &bi)| row.iter().copied().chain([bi]).collect()).collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.iter().map(|row| row[n]).collect())
}

/// Basis of the null space of `a` (vectors x with a·x = 0).
pub fn kernel<C: Coeff>(a: &[Vec<C>], cols: usize, one: C) -> Vec<Vec<C>> {
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![one.zero_like(); cols];
            v[f] = one;
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = -m[r][f];
            }
            v
        })
        .collect()
}

pub fn mat_vec<C: Coeff>(a: &[Vec<C>], x: &[C]) -> Vec<C> {
    a.iter().map(|row| row.iter().zip(x).fold(x[0].zero_like(), |acc, (&r, &v)| acc + r * v)).collect()
}
