//! Structure constants from a faithful matrix (super)representation.


use super::{Generator, Parity, SuperAlgebra};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::ParamPoly;
use crate::spmat::SpMat;

/// Collects basis supermatrices and decomposes their supercommutators.
pub struct MatrixAlgebraBuilder<C> {
    size: usize,
    /// Parity of each row/column of the supermatrix.
    row_parity: Vec<Parity>,
    basis: Vec<(Generator, SpMat<C>)>,
}

impl<C: Coeff> MatrixAlgebraBuilder<C> {
    pub fn new(size: usize) -> Self {
        Self { size, row_parity: vec![Parity::Even; size], basis: Vec::new() }
    }

    pub fn with_row_parity(row_parity: Vec<Parity>) -> Self {
        Self { size: row_parity.len(), row_parity, basis: Vec::new() }
    }

    pub fn push(&mut self, g: Generator, m: SpMat<C>) -> Result<()> {
        if m.size() != self.size {
            return Err(Error::Structural(format!("matrix for {} has the wrong size", g.label())));
        }
        for (i, j, _) in m.entries() {
            if Parity::from_bit(self.row_parity[i].bit() + self.row_parity[j].bit()) != g.parity {
                return Err(Error::Structural(format!("matrix for {} does not match its parity", g.label())));
            }
        }
        self.basis.push((g, m));
        Ok(())
    }

    pub fn build(self, name: &str) -> Result<SuperAlgebra<C>> {
        let n = self.size;
        let k = self.basis.len();
        // choose k matrix positions on which the basis is independent
        let mut positions: Vec<usize> = self.basis.iter().flat_map(|(_, m)| m.entries().map(|(i, j, _)| i * n + j)).collect();
        positions.sort_unstable();
        positions.dedup();
        let mut bt: Vec<Vec<C>> = self
            .basis
            .iter()
            .map(|(_, m)| positions.iter().map(|&p| m.get(p / n, p % n)).collect())
            .collect();
        let piv = linalg::rref(&mut bt);
        if piv.len() != k {
            return Err(Error::Structural(format!("{name}: basis matrices are linearly dependent")));
        }
        let pick: Vec<usize> = piv.iter().map(|&c| positions[c]).collect();
        let s: Vec<Vec<C>> = pick.iter().map(|&p| self.basis.iter().map(|(_, m)| m.get(p / n, p % n)).collect()).collect();
        let s_inv = linalg::inverse(&s).ok_or_else(|| Error::Structural(format!("{name}: singular pivot block")))?;

        let mut raw = Vec::new();
        for b in 0..k {
            for c in b..k {
                let (gb, mb) = &self.basis[b];
                let (gc, mc) = &self.basis[c];
                let both_odd = gb.parity == Parity::Odd && gc.parity == Parity::Odd;
                let x = mb.mul(mc);
                let y = mc.mul(mb);
                let br = if both_odd { x.add(&y) } else { x.sub(&y) };
                if br.is_zero() {
                    continue;
                }
                let v: Vec<C> = pick.iter().map(|&p| br.get(p / n, p % n)).collect();
                let coeffs: Vec<C> = s_inv
                    .iter()
                    .map(|row| row.iter().zip(&v).fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
                    .collect();
                let mut check = SpMat::zeros(n);
                for (a, x) in coeffs.iter().enumerate() {
                    if !x.is_zero() {
                        check = check.add(&self.basis[a].1.scale(x));
                    }
                }
                if check != br {
                    return Err(Error::Structural(format!(
                        "{name}: bracket of {} and {} leaves the span",
                        gb.label(),
                        gc.label()
                    )));
                }
                for (a, x) in coeffs.into_iter().enumerate() {
                    if !x.is_zero() {
                        raw.push((a, b, c, ParamPoly::constant(x)));
                    }
                }
            }
        }
        let gens = self.basis.into_iter().map(|(g, _)| g).collect();
        SuperAlgebra::new(name, gens, &raw)
    }
}
