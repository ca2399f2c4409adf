//! Dense exact linear algebra over a coefficient field.

use crate::coeff::Coeff;

/// Row-reduce in place to reduced echelon form; returns the pivot columns.
pub fn rref<C: Coeff>(m: &mut [Vec<C>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = C::one() / m[r][c].clone();
        for x in m[r].iter_mut().skip(c) {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<C: Coeff>(m: &[Vec<C>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Basis of the null space of `m` (columns = unknowns).
pub fn kernel<C: Coeff>(m: &[Vec<C>], cols: usize) -> Vec<Vec<C>> {
    let mut w: Vec<Vec<C>> = m.to_vec();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![C::zero(); cols];
            v[f] = C::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -w[r][f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<C: Coeff>(a: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = a.len();
    let mut w: Vec<Vec<C>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { C::one() } else { C::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut w);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(w.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `a x = b`; `None` if inconsistent. Free variables are set to zero.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut w: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let piv = rref(&mut w);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![C::zero(); cols];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = w[r][cols].clone();
    }
    Some(x)
}
