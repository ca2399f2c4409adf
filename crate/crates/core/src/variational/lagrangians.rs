use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cartan::ConnectionModel;
use crate::clifford::GammaRep;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::{bar, FormPoly, FormSpace};
use crate::scalar::ParamPoly;
use crate::spmat::SpMat;

/// Invariant tensor contracted against form indices.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantPairing<C> {
    pub name: String,
    pub arity: usize,
    pub entries: BTreeMap<Vec<u16>, ParamPoly<C>>,
}

fn permutation_sign(p: &[u16]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] == p[j] {
                return None;
            }
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    Some(sign)
}

impl<C: Coeff> InvariantPairing<C> {
    /// `ε_{a1..an}` with `ε_{01..n-1} = +1`.
    pub fn levi_civita(n: usize) -> Self {
        let mut entries = BTreeMap::new();
        let mut idx: Vec<u16> = (0..n as u16).collect();
        permute(&mut idx, 0, &mut |p| {
            entries.insert(p.to_vec(), ParamPoly::from_int(permutation_sign(p).unwrap()));
        });
        Self { name: format!("epsilon{n}"), arity: n, entries }
    }

    pub fn get(&self, idx: &[u16]) -> ParamPoly<C> {
        self.entries.get(idx).cloned().unwrap_or_else(ParamPoly::zero)
    }

    pub fn is_totally_antisymmetric(&self) -> bool {
        self.entries.iter().all(|(k, v)| {
            let mut sorted = k.clone();
            sorted.sort_unstable();
            match permutation_sign(k) {
                None => v.is_zero(),
                Some(s) => *v == &self.get(&sorted) * &ParamPoly::from_int(s),
            }
        })
    }
}

fn permute(v: &mut Vec<u16>, k: usize, f: &mut impl FnMut(&[u16])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

#[derive(Clone, Debug)]
pub struct LagrangianForm<C> {
    pub name: String,
    pub poly: FormPoly<C>,
    pub degree: u32,
    pub fields: Vec<u32>,
}

impl<C: Coeff> LagrangianForm<C> {
    pub fn new(name: &str, poly: FormPoly<C>, degree: u32, fields: Vec<u32>, space: &FormSpace) -> Result<Self> {
        for (m, _) in poly.terms() {
            if space.monomial_degree(m) != degree {
                return Err(Error::Structural(format!(
                    "{name}: term {} has degree {}",
                    space.render_monomial(m),
                    space.monomial_degree(m)
                )));
            }
        }
        Ok(Self { name: name.to_string(), poly, degree, fields })
    }
}

/// `R^{ab}` as a signed curvature symbol; zero on the diagonal.
pub fn lorentz_curvature<C: Coeff>(model: &ConnectionModel<C>, a: u16, b: u16) -> Result<FormPoly<C>> {
    if a == b {
        return Ok(FormPoly::zero());
    }
    let (lo, hi, neg) = if a < b { (a, b, false) } else { (b, a, true) };
    let id = model
        .curvature_of(&crate::algebra::label("M", &[lo, hi]))
        .ok_or_else(|| Error::Structural(format!("model has no curvature for M[{lo} {hi}]")))?;
    let p = FormPoly::generator(id);
    Ok(if neg { p.neg() } else { p })
}

fn vielbein<C: Coeff>(model: &ConnectionModel<C>, a: u16) -> Result<FormPoly<C>> {
    model
        .connection_of(&crate::algebra::label("P", &[a]))
        .map(FormPoly::generator)
        .ok_or_else(|| Error::Structural(format!("model has no vielbein P[{a}]")))
}

fn quartic<C: Coeff>(
    mut term: impl FnMut(u16, u16, u16, u16) -> Result<FormPoly<C>>,
) -> Result<FormPoly<C>> {
    let eps = InvariantPairing::<C>::levi_civita(4);
    let mut out = FormPoly::zero();
    for (idx, v) in &eps.entries {
        out.add_assign(&term(idx[0], idx[1], idx[2], idx[3])?.scale(v));
    }
    Ok(out)
}

/// `ε_{abcd}(R^{ab} e^c e^d - Λ/6 e^a e^b e^c e^d)`.
pub fn einstein_cartan<C: Coeff>(model: &ConnectionModel<C>, lambda: &ParamPoly<C>) -> Result<LagrangianForm<C>> {
    let s = &model.space;
    let k = lambda * &ParamPoly::from_ratio(-1, 6);
    let poly = quartic(|a, b, c, d| {
        let ee = vielbein(model, c)?.wedge(&vielbein(model, d)?, s);
        let r = lorentz_curvature(model, a, b)?.wedge(&ee, s);
        let e4 = vielbein(model, a)?.wedge(&vielbein(model, b)?, s).wedge(&ee, s);
        Ok(r.add(&e4.scale(&k)))
    })?;
    LagrangianForm::new("einstein-cartan", poly, 4, model.connection.clone(), s)
}

/// `½ ε_{abcd} R^{ab} R^{cd}`.
pub fn euler_density<C: Coeff>(model: &ConnectionModel<C>) -> Result<LagrangianForm<C>> {
    let s = &model.space;
    let poly = quartic(|a, b, c, d| {
        Ok(lorentz_curvature(model, a, b)?.wedge(&lorentz_curvature(model, c, d)?, s))
    })?
    .scale(&ParamPoly::from_ratio(1, 2));
    LagrangianForm::new("euler", poly, 4, model.connection.clone(), s)
}

/// `½ ε_{abcd} F^{ab} F^{cd}` with `F^{ab} = R^{ab} - ε λ² e^a e^b`.
pub fn macdowell_mansouri<C: Coeff>(
    model: &ConnectionModel<C>,
    epsilon: &ParamPoly<C>,
    lambda: &ParamPoly<C>,
) -> Result<LagrangianForm<C>> {
    let s = &model.space;
    let k = -(&(epsilon * lambda) * lambda);
    let f = |a: u16, b: u16| -> Result<FormPoly<C>> {
        let ee = vielbein(model, a)?.wedge(&vielbein(model, b)?, s);
        Ok(lorentz_curvature(model, a, b)?.add(&ee.scale(&k)))
    };
    let poly = quartic(|a, b, c, d| Ok(f(a, b)?.wedge(&f(c, d)?, s)))?.scale(&ParamPoly::from_ratio(1, 2));
    LagrangianForm::new("macdowell-mansouri", poly, 4, model.connection.clone(), s)
}

/// `γ5 = ζ γ_0 γ_1 γ_2 γ_3`.
pub fn gamma5<C: Coeff>(rep: &GammaRep<C>, zeta: &C) -> SpMat<C> {
    rep.gamma_lower(&[0, 1, 2, 3]).scale(zeta)
}

/// `ε_{abcd} R^{ab} V^c V^d + 4 ψ̄ γ5 γ_a ρ V^a` on the softened D=4 super-Poincaré model.
pub fn sugra4<C: Coeff>(model: &ConnectionModel<C>, rep: &GammaRep<C>, zeta: &C) -> Result<LagrangianForm<C>> {
    if rep.dim != 4 {
        return Err(Error::Representation("sugra4 needs the D=4 representation".into()));
    }
    let s = &model.space;
    let eh = einstein_cartan(model, &ParamPoly::zero())?.poly;
    let n = rep.spinor_size;
    let find = |name: &str, a: usize, curv: bool| -> Result<FormPoly<C>> {
        let l = crate::algebra::label(name, &[a as u16]);
        let id = if curv { model.curvature_of(&l) } else { model.connection_of(&l) };
        id.map(FormPoly::generator).ok_or_else(|| Error::Structural(format!("model has no {l}")))
    };
    let psi: Vec<FormPoly<C>> = (0..n).map(|a| find("Q", a, false)).collect::<Result<_>>()?;
    let rho: Vec<FormPoly<C>> = (0..n).map(|a| find("Q", a, true)).collect::<Result<_>>()?;
    let g5 = gamma5(rep, zeta);
    let mut rs = FormPoly::zero();
    for a in 0..4u16 {
        let cm = rep.c.mul(&g5).mul(&rep.gamma_lower(&[a as usize]));
        rs.add_assign(&bar(&psi, &cm, &rho, s).wedge(&vielbein(model, a)?, s));
    }
    let poly = eh.add(&rs.scale(&ParamPoly::from_int(4)));
    LagrangianForm::new("sugra4", poly, 4, model.connection.clone(), s)
}

fn abelian_pieces<C: Coeff>(model: &ConnectionModel<C>) -> Result<(FormPoly<C>, FormPoly<C>)> {
    if model.algebra.len() != 1 || model.curvature.is_empty() {
        return Err(Error::Structural("abelian Lagrangians need a softened one-generator model".into()));
    }
    Ok((FormPoly::generator(model.connection[0]), FormPoly::generator(model.curvature[0])))
}

/// `dA ∧ dA`.
pub fn abelian_topological<C: Coeff>(model: &ConnectionModel<C>) -> Result<LagrangianForm<C>> {
    let (_, f) = abelian_pieces(model)?;
    let poly = f.wedge(&f, &model.space);
    LagrangianForm::new("abelian-topological", poly, 4, model.connection.clone(), &model.space)
}

/// `A ∧ dA`.
pub fn abelian_chern_simons<C: Coeff>(model: &ConnectionModel<C>) -> Result<LagrangianForm<C>> {
    let (a, f) = abelian_pieces(model)?;
    let poly = a.wedge(&f, &model.space);
    LagrangianForm::new("abelian-chern-simons", poly, 3, model.connection.clone(), &model.space)
}

