//! Gamma matrices, charge conjugation and bilinear symmetry.
//!
//! Signature `(r, s)` means `r` timelike directions with `η = -1` followed by
//! `s` spacelike ones with `η = +1`. `gammas[a]` is `Γ^a` with
//! `{Γ^a, Γ^b} = 2 η^{ab}`.

mod fierz;

pub use fierz::{fierz_residual, named_identity, BilinearFactor, FactorKind, FierzResidual, FierzSpec, FierzTerm, Slot, VecIdx};

use std::collections::VecDeque;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::linalg;
use crate::spmat::SpMat;

#[derive(Clone, Debug)]
pub struct GammaRep<C> {
    pub dim: usize,
    pub signature: (usize, usize),
    pub gammas: Vec<SpMat<C>>,
    /// Charge conjugation, `C Γ^a C⁻¹ = c_sign (Γ^a)ᵀ`.
    pub c: SpMat<C>,
    pub c_inv: SpMat<C>,
    pub c_sign: i8,
    pub spinor_size: usize,
}

/// Sign of `(CΓ^{a1..ak})ᵀ = s_k CΓ^{a1..ak}` per rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearTable {
    pub signs: Vec<i8>,
}

impl BilinearTable {
    pub fn is_symmetric(&self, rank: usize) -> bool {
        self.signs.get(rank) == Some(&1)
    }

    pub fn symmetric_ranks(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&k| self.signs[k] == 1).collect()
    }
}

fn pauli<C: Coeff>() -> (SpMat<C>, SpMat<C>) {
    let i = C::imag_unit();
    let s1 = SpMat::from_entries(2, [(0, 1, C::one()), (1, 0, C::one())]);
    let s2 = SpMat::from_entries(2, [(0, 1, -i.clone()), (1, 0, i)]);
    (s1, s2)
}

fn euclidean_even<C: Coeff>(k: usize) -> Vec<SpMat<C>> {
    let (s1, s2) = pauli::<C>();
    let mut g = vec![s1.clone(), s2.clone()];
    for level in 1..k {
        let chir = chirality(&g, level);
        let n = g[0].size();
        let mut next: Vec<SpMat<C>> = g.iter().map(|x| x.kron(&s1)).collect();
        next.push(chir.kron(&s1));
        next.push(SpMat::identity(n).kron(&s2));
        g = next;
    }
    g
}

/// `i^k γ_1 ... γ_2k`, squares to one for Euclidean gammas.
fn chirality<C: Coeff>(g: &[SpMat<C>], k: usize) -> SpMat<C> {
    let mut p = SpMat::identity(g[0].size());
    for x in g {
        p = p.mul(x);
    }
    let mut ph = C::one();
    for _ in 0..k {
        ph = ph * C::imag_unit();
    }
    p.scale(&ph)
}

/// Build `Γ^a` for dimension `dim` and signature `(r, s)`.
pub fn build_gamma<C: Coeff>(dim: usize, signature: (usize, usize)) -> Result<GammaRep<C>> {
    if !(2..=12).contains(&dim) {
        return Err(Error::Representation(format!("unsupported dimension {dim}")));
    }
    if signature.0 + signature.1 != dim {
        return Err(Error::Representation(format!("signature {signature:?} does not add up to {dim}")));
    }
    let k = dim / 2;
    let mut g = euclidean_even::<C>(k);
    if dim % 2 == 1 {
        let chir = chirality(&g, k);
        g.push(chir);
    }
    for x in g.iter_mut().take(signature.0) {
        *x = x.scale(&C::imag_unit());
    }
    let n = g[0].size();
    let mut found = None;
    for sigma in [-1i8, 1] {
        if let Some(c) = solve_conjugation(&g, sigma) {
            found = Some((c, sigma));
            break;
        }
    }
    let (c, c_sign) = found.ok_or_else(|| Error::Representation("no charge conjugation matrix".into()))?;
    let c_inv = linalg::inverse(&c.to_dense())
        .map(|d| SpMat::from_dense(&d))
        .ok_or_else(|| Error::Representation("charge conjugation matrix is singular".into()))?;
    Ok(GammaRep { dim, signature, gammas: g, c, c_inv, c_sign, spinor_size: n })
}

/// Solve `C Γ^a = σ (Γ^a)ᵀ C` for monomial gammas. Every equation links two
/// entries of C, so the solution is found by propagating ratios.
fn solve_conjugation<C: Coeff>(g: &[SpMat<C>], sigma: i8) -> Option<SpMat<C>> {
    let n = g[0].size();
    let sig = C::from_int(sigma as i64);
    // column j of a monomial matrix holds exactly one entry
    let cols: Vec<Vec<(usize, C)>> = g
        .iter()
        .map(|m| {
            let mut c = vec![(usize::MAX, C::zero()); n];
            for (i, j, v) in m.entries() {
                c[j] = (i, v.clone());
            }
            c
        })
        .collect();
    // edges: value(u) * g1 = σ g2 value(v)
    let mut adj: Vec<Vec<(usize, C)>> = vec![Vec::new(); n * n];
    for col in &cols {
        for i in 0..n {
            for j in 0..n {
                let (k1, g1) = &col[j];
                let (k2, g2) = &col[i];
                let u = i * n + k1;
                let v = k2 * n + j;
                // value(v) = value(u) g1 / (σ g2)
                let r = g1.clone() / (sig.clone() * g2.clone());
                adj[u].push((v, r.clone()));
                adj[v].push((u, C::one() / r));
            }
        }
    }
    let mut val: Vec<Option<C>> = vec![None; n * n];
    let mut dead = vec![false; n * n];
    for seed in 0..n * n {
        if val[seed].is_some() || dead[seed] {
            continue;
        }
        let mut comp = vec![seed];
        val[seed] = Some(C::one());
        let mut q = VecDeque::from([seed]);
        let mut ok = true;
        while let Some(u) = q.pop_front() {
            let vu = val[u].clone().unwrap();
            for (v, r) in &adj[u] {
                let want = vu.clone() * r.clone();
                match &val[*v] {
                    Some(x) => {
                        if *x != want {
                            ok = false;
                        }
                    }
                    None => {
                        val[*v] = Some(want);
                        comp.push(*v);
                        q.push_back(*v);
                    }
                }
            }
        }
        if ok {
            let m = SpMat::from_entries(n, comp.iter().map(|&u| (u / n, u % n, val[u].clone().unwrap())));
            if linalg::inverse(&m.to_dense()).is_some() {
                return Some(m);
            }
        }
        for u in comp {
            val[u] = None;
            dead[u] = true;
        }
    }
    None
}

impl<C: Coeff> GammaRep<C> {
    pub fn eta(&self, a: usize) -> i64 {
        if a < self.signature.0 {
            -1
        } else {
            1
        }
    }

    /// `Γ^{a1..ak}`; zero if an index repeats.
    pub fn gamma_upper(&self, idx: &[usize]) -> SpMat<C> {
        for (p, a) in idx.iter().enumerate() {
            if idx[..p].contains(a) {
                return SpMat::zeros(self.spinor_size);
            }
        }
        let mut m = SpMat::identity(self.spinor_size);
        for &a in idx {
            m = m.mul(&self.gammas[a]);
        }
        m
    }

    /// Product with the listed positions lowered by `η`.
    pub fn gamma(&self, idx: &[usize], lowered: &[bool]) -> SpMat<C> {
        let mut sign = 1i64;
        for (a, l) in idx.iter().zip(lowered) {
            if *l {
                sign *= self.eta(*a);
            }
        }
        self.gamma_upper(idx).scale(&C::from_int(sign))
    }

    pub fn gamma_lower(&self, idx: &[usize]) -> SpMat<C> {
        self.gamma(idx, &vec![true; idx.len()])
    }

    /// `C Γ^{a1..ak}` with optional lowering.
    pub fn cgamma(&self, idx: &[usize], lowered: &[bool]) -> SpMat<C> {
        self.c.mul(&self.gamma(idx, lowered))
    }

    /// Exhaustive check of `{Γ^a, Γ^b} = 2 η^{ab}`.
    pub fn check_clifford(&self) -> bool {
        let id = SpMat::identity(self.spinor_size);
        for a in 0..self.dim {
            for b in 0..self.dim {
                let ac = self.gammas[a].mul(&self.gammas[b]).add(&self.gammas[b].mul(&self.gammas[a]));
                let want = if a == b { id.scale(&C::from_int(2 * self.eta(a))) } else { SpMat::zeros(self.spinor_size) };
                if ac != want {
                    return false;
                }
            }
        }
        true
    }

    /// Check `C Γ^a C⁻¹ = σ (Γ^a)ᵀ` for all `a` and `C C⁻¹ = 1`.
    pub fn check_conjugation(&self) -> bool {
        let sig = C::from_int(self.c_sign as i64);
        self.c.mul(&self.c_inv) == SpMat::identity(self.spinor_size)
            && self.gammas.iter().all(|g| self.c.mul(g).mul(&self.c_inv) == g.transpose().scale(&sig))
    }

    pub fn entries_are_units(&self) -> bool {
        let units = [C::one(), -C::one(), C::imag_unit(), -C::imag_unit()];
        self.gammas.iter().all(|g| g.entries().all(|(_, _, v)| units.contains(v)))
    }
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn bilinear_table<C: Coeff>(rep: &GammaRep<C>) -> Result<BilinearTable> {
    let mut signs = Vec::with_capacity(rep.dim + 1);
    for k in 0..=rep.dim {
        let mut rank_sign: Option<i8> = None;
        for idx in combinations(rep.dim, k) {
            let m = rep.cgamma(&idx, &vec![false; k]);
            let t = m.transpose();
            let s = if t == m {
                1
            } else if t == m.scale(&-C::one()) {
                -1
            } else {
                return Err(Error::Representation(format!("C Gamma^{idx:?} has no transpose symmetry")));
            };
            match rank_sign {
                None => rank_sign = Some(s),
                Some(r) if r != s => {
                    return Err(Error::Representation(format!("inconsistent transpose sign at rank {k}")))
                }
                _ => {}
            }
        }
        signs.push(rank_sign.unwrap_or(1));
    }
    Ok(BilinearTable { signs })
}
