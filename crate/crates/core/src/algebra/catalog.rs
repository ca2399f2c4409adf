//! Built-in algebras.
//!
//! Conventions:
//! - metric `η = diag(-1 (r times), +1 (s times))`;
//! - `M[a b]` (a < b) acts on vectors as `(M_ab)^c_d = δ^c_a η_bd − δ^c_b η_ad`;
//! - `P[a]` are translations with `[M_ab, P_c] = η_bc P_a − η_ac P_b`;
//! - conformal algebras use the light-cone basis `P[a] = M_{a+}`, `K[a] = M_{a−}`,
//!   `D = M_{+−}` of `so(r+1, s+1)` with `η_{+−} = 1`;
//! - super-Poincaré: `[M_ab, Q_β] = ½ (Γ_a Γ_b)^α_β Q_α` and
//!   `{Q_α, Q_β} = −i (CΓ^a)_{αβ} P_a`;
//! - `osp(1|4)` is realized by 5×5 supermatrices: even part `½Γ_a`, `½Γ_aΓ_b`,
//!   odd part `Q_α` with column `e_α` and row `e_αᵀ C`.

use super::{Generator, MatrixAlgebraBuilder, Parity, SuperAlgebra};
use crate::clifford::{bilinear_table, build_gamma, GammaRep};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::scalar::ParamPoly;
use crate::spmat::SpMat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogEntry {
    So { r: usize, s: usize },
    Iso { r: usize, s: usize },
    /// `so(r+1, s+1)` graded as `P ⊕ (M, D) ⊕ K`.
    Conformal { r: usize, s: usize },
    SuperPoincare { dim: usize, n: usize },
    Osp14,
    Abelian { n: usize },
}

impl CatalogEntry {
    pub fn parse(name: &str, params: &[i64]) -> Result<Self> {
        let want = |k: usize| -> Result<Vec<usize>> {
            if params.len() != k {
                return Err(Error::Catalog(format!("{name} takes {k} parameters, got {}", params.len())));
            }
            params
                .iter()
                .map(|&p| usize::try_from(p).map_err(|_| Error::Catalog(format!("negative parameter {p}"))))
                .collect()
        };
        match name {
            "so" => want(2).map(|p| CatalogEntry::So { r: p[0], s: p[1] }),
            "iso" => want(2).map(|p| CatalogEntry::Iso { r: p[0], s: p[1] }),
            "co" | "conformal" => want(2).map(|p| CatalogEntry::Conformal { r: p[0], s: p[1] }),
            "super-poincare" => want(2).map(|p| CatalogEntry::SuperPoincare { dim: p[0], n: p[1] }),
            "osp" => {
                let p = want(2)?;
                if p == [1, 4] {
                    Ok(CatalogEntry::Osp14)
                } else {
                    Err(Error::Catalog(format!("osp({}|{}) is not supported", p[0], p[1])))
                }
            }
            "abelian" => want(1).map(|p| CatalogEntry::Abelian { n: p[0] }),
            other => Err(Error::Catalog(format!("unknown algebra {other}"))),
        }
    }

    pub fn build<C: Coeff>(&self) -> Result<SuperAlgebra<C>> {
        match *self {
            CatalogEntry::So { r, s } => so(r, s),
            CatalogEntry::Iso { r, s } => iso(r, s),
            CatalogEntry::Conformal { r, s } => conformal(r, s),
            CatalogEntry::SuperPoincare { dim, n } => super_poincare(dim, n),
            CatalogEntry::Osp14 => osp14(),
            CatalogEntry::Abelian { n } => abelian(n),
        }
    }
}

/// The algebras of the standard check suite, as `(name, parameters)`.
pub const CATALOG_SUITE: &[(&str, &[i64])] = &[
    ("iso", &[1, 3]),
    ("so", &[1, 4]),
    ("so", &[2, 3]),
    ("co", &[1, 3]),
    ("osp", &[1, 4]),
    ("super-poincare", &[4, 1]),
    ("super-poincare", &[11, 1]),
];

/// Single-entry perturbation: the first canonical structure constant
/// `C^A_{BC}` with `B < C` is doubled.
pub fn jacobi_mutation<C: Coeff>(alg: &SuperAlgebra<C>) -> Result<SuperAlgebra<C>> {
    let (a, b, c, v) = alg
        .constants()
        .entries()
        .filter(|(_, b, c, _)| b < c)
        .min_by_key(|(a, b, c, _)| (*b, *c, *a))
        .map(|(a, b, c, v)| (a, b, c, v.clone()))
        .ok_or_else(|| Error::Catalog(format!("{} has no bracket to perturb", alg.name)))?;
    alg.mutate(a, b, c, v)
}

pub fn catalog_algebra<C: Coeff>(name: &str, params: &[i64]) -> Result<SuperAlgebra<C>> {
    CatalogEntry::parse(name, params)?.build()
}

fn diag_metric(r: usize, s: usize) -> Vec<Vec<i64>> {
    let n = r + s;
    (0..n).map(|i| (0..n).map(|j| if i != j { 0 } else if i < r { -1 } else { 1 }).collect()).collect()
}

/// `(M_AB)^C_D = δ^C_A η_BD − δ^C_B η_AD` inside a matrix of size `size`.
fn rotation<C: Coeff>(eta: &[Vec<i64>], size: usize, a: usize, b: usize) -> SpMat<C> {
    let mut m = SpMat::zeros(size);
    for d in 0..eta.len() {
        if eta[b][d] != 0 {
            m.add_at(a, d, C::from_int(eta[b][d]));
        }
        if eta[a][d] != 0 {
            m.add_at(b, d, C::from_int(-eta[a][d]));
        }
    }
    m
}

fn check_dims(r: usize, s: usize) -> Result<()> {
    if r + s < 2 || r + s > 12 {
        return Err(Error::Catalog(format!("unsupported signature ({r},{s})")));
    }
    Ok(())
}

fn so<C: Coeff>(r: usize, s: usize) -> Result<SuperAlgebra<C>> {
    check_dims(r, s)?;
    let n = r + s;
    let eta = diag_metric(r, s);
    let mut b = MatrixAlgebraBuilder::new(n);
    for i in 0..n {
        for j in i + 1..n {
            b.push(Generator::new("M", &[i as u16, j as u16], Parity::Even), rotation(&eta, n, i, j))?;
        }
    }
    let mut alg = b.build(&format!("so({r},{s})"))?;
    alg.dimension = Some(n);
    alg.signature = Some((r, s));
    alg.notes = "vector representation, (M_ab)^c_d = δ^c_a η_bd − δ^c_b η_ad".into();
    Ok(alg)
}

fn iso_builder<C: Coeff>(r: usize, s: usize) -> Result<MatrixAlgebraBuilder<C>> {
    let n = r + s;
    let eta = diag_metric(r, s);
    let mut b = MatrixAlgebraBuilder::new(n + 1);
    for i in 0..n {
        for j in i + 1..n {
            b.push(Generator::new("M", &[i as u16, j as u16], Parity::Even), rotation(&eta, n + 1, i, j))?;
        }
    }
    for i in 0..n {
        b.push(Generator::new("P", &[i as u16], Parity::Even), SpMat::from_entries(n + 1, [(i, n, C::one())]))?;
    }
    Ok(b)
}

fn iso<C: Coeff>(r: usize, s: usize) -> Result<SuperAlgebra<C>> {
    check_dims(r, s)?;
    let mut alg = iso_builder(r, s)?.build(&format!("iso({r},{s})"))?;
    alg.dimension = Some(r + s);
    alg.signature = Some((r, s));
    alg.notes = "affine matrices, P_a = E_{a,n}".into();
    Ok(alg)
}

fn conformal<C: Coeff>(r: usize, s: usize) -> Result<SuperAlgebra<C>> {
    check_dims(r, s)?;
    let m = r + s;
    let size = m + 2;
    let mut eta = vec![vec![0i64; size]; size];
    for (i, row) in diag_metric(r, s).into_iter().enumerate() {
        eta[i][..m].copy_from_slice(&row);
    }
    let (plus, minus) = (m, m + 1);
    eta[plus][minus] = 1;
    eta[minus][plus] = 1;
    let mut b = MatrixAlgebraBuilder::new(size);
    for i in 0..m {
        b.push(Generator::new("P", &[i as u16], Parity::Even), rotation(&eta, size, i, plus))?;
    }
    for i in 0..m {
        for j in i + 1..m {
            b.push(Generator::new("M", &[i as u16, j as u16], Parity::Even), rotation(&eta, size, i, j))?;
        }
    }
    b.push(Generator::scalar("D", Parity::Even), rotation(&eta, size, plus, minus))?;
    for i in 0..m {
        b.push(Generator::new("K", &[i as u16], Parity::Even), rotation(&eta, size, i, minus))?;
    }
    let mut alg = b.build(&format!("so({},{})", r + 1, s + 1))?;
    alg.dimension = Some(m);
    alg.signature = Some((r, s));
    alg.notes = "light-cone basis P = M_{a+}, K = M_{a-}, D = M_{+-}".into();
    Ok(alg)
}

/// Grading −1 on translations, 0 on `co(r,s)`, +1 on special conformal generators.
pub fn conformal_grading<C: Coeff>(alg: &SuperAlgebra<C>) -> Vec<i32> {
    alg.generators()
        .iter()
        .map(|g| match g.name.as_str() {
            "P" => -1,
            "K" => 1,
            _ => 0,
        })
        .collect()
}

fn super_poincare<C: Coeff>(dim: usize, n: usize) -> Result<SuperAlgebra<C>> {
    if n != 1 {
        return Err(Error::Catalog(format!("super-poincare with N = {n} is not supported")));
    }
    if !(3..=12).contains(&dim) {
        return Err(Error::Catalog(format!("super-poincare in D = {dim} is not supported")));
    }
    let rep: GammaRep<C> = build_gamma(dim, (1, dim - 1))?;
    let table = bilinear_table(&rep)?;
    if !table.is_symmetric(1) {
        return Err(Error::Catalog(format!("D = {dim}: C Gamma^a is not symmetric")));
    }
    let bos = iso(1, dim - 1)?;
    let mut gens: Vec<Generator> = bos.generators().to_vec();
    let nb = gens.len();
    let ns = rep.spinor_size;
    for a in 0..ns {
        gens.push(Generator::new("Q", &[a as u16], Parity::Odd));
    }
    let mut raw: Vec<(usize, usize, usize, ParamPoly<C>)> = bos.constants().entries().map(|(a, b, c, v)| (a, b, c, v.clone())).collect();
    let p_index = |a: usize| bos.index_of("P", &[a as u16]).unwrap();
    let mi = -C::imag_unit();
    for a in 0..dim {
        let cg = rep.cgamma(&[a], &[false]);
        for (al, be, v) in cg.entries() {
            if al <= be {
                raw.push((p_index(a), nb + al, nb + be, ParamPoly::constant(v.clone() * mi.clone())));
            }
        }
    }
    let half = C::from_ratio(1, 2);
    for a in 0..dim {
        for b in a + 1..dim {
            let m = bos.index_of("M", &[a as u16, b as u16]).unwrap();
            let g = rep.gamma_lower(&[a, b]);
            for (al, be, v) in g.entries() {
                raw.push((nb + al, m, nb + be, ParamPoly::constant(v.clone() * half.clone())));
            }
        }
    }
    let mut alg = SuperAlgebra::new(&format!("super-poincare({dim},1)"), gens, &raw)?;
    alg.dimension = Some(dim);
    alg.signature = Some((1, dim - 1));
    alg.notes = "[M_ab,Q] = ½Γ_aΓ_b Q, {Q_α,Q_β} = −i (CΓ^a)_{αβ} P_a".into();
    Ok(alg)
}

fn osp14<C: Coeff>() -> Result<SuperAlgebra<C>> {
    let rep: GammaRep<C> = build_gamma(4, (1, 3))?;
    let size = 5;
    let mut rows = vec![Parity::Even; 4];
    rows.push(Parity::Odd);
    let mut b = MatrixAlgebraBuilder::with_row_parity(rows);
    let half = C::from_ratio(1, 2);
    for i in 0..4 {
        for j in i + 1..4 {
            let m = rep.gamma_lower(&[i, j]).scale(&half).embed(size, 0);
            b.push(Generator::new("M", &[i as u16, j as u16], Parity::Even), m)?;
        }
    }
    for i in 0..4 {
        let m = rep.gamma_lower(&[i]).scale(&half).embed(size, 0);
        b.push(Generator::new("P", &[i as u16], Parity::Even), m)?;
    }
    for al in 0..4 {
        let mut m = SpMat::zeros(size);
        m.add_at(al, 4, C::one());
        for (be, v) in rep.c.row(al) {
            m.add_at(4, *be, v.clone());
        }
        b.push(Generator::new("Q", &[al as u16], Parity::Odd), m)?;
    }
    let mut alg = b.build("osp(1|4)")?;
    alg.dimension = Some(4);
    alg.signature = Some((1, 3));
    alg.notes = "5x5 supermatrices over the D=4 Clifford module".into();
    Ok(alg)
}

fn abelian<C: Coeff>(n: usize) -> Result<SuperAlgebra<C>> {
    if n == 0 {
        return Err(Error::Catalog("abelian algebra needs at least one generator".into()));
    }
    let gens = (0..n).map(|i| Generator::new("T", &[i as u16], Parity::Even)).collect();
    SuperAlgebra::new(&format!("abelian({n})"), gens, &[])
}
