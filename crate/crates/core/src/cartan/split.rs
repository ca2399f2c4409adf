use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{maurer_cartan_rhs, ConnectionModel};
use crate::algebra::{analyze_split, SplitReport, SuperAlgebra};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::{FormClass, FormPoly, FormSpace};
use crate::scalar::ParamPoly;

/// Rescaling `ρ^f = sign_f * λ * x^f` of complement generators, plus optional
/// renaming of any generator in the split space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Contraction {
    pub parameter: String,
    pub signs: BTreeMap<usize, i64>,
    pub rename: BTreeMap<usize, (String, Vec<u16>)>,
}

#[derive(Clone, Debug)]
pub struct CurvatureSplit<C> {
    pub space: FormSpace,
    /// Split-space 1-form per algebra generator.
    pub connection: Vec<u32>,
    /// Independent symbol for `d` of each 1-form.
    pub connection_d: Vec<u32>,
    /// Components along the subalgebra.
    pub proper: Vec<(usize, FormPoly<C>)>,
    /// Components along the complement, divided by the rescaling factor.
    pub torsion: Vec<(usize, FormPoly<C>)>,
    /// Sign of the λ² term when it is fixed by the split.
    pub epsilon: Option<i64>,
    scale: Vec<ParamPoly<C>>,
    unsplit: Vec<FormPoly<C>>,
}

impl<C: Coeff> CurvatureSplit<C> {
    /// Curvature components reassembled from the two blocks.
    pub fn recombine(&self) -> Vec<FormPoly<C>> {
        let mut out = vec![FormPoly::zero(); self.scale.len()];
        for (a, p) in &self.proper {
            out[*a] = p.clone();
        }
        for (a, p) in &self.torsion {
            out[*a] = p.scale(&self.scale[*a]);
        }
        out
    }

    /// `F^A = dρ^A + ½[ρ,ρ]^A` expressed in the split generators.
    pub fn unsplit(&self) -> &[FormPoly<C>] {
        &self.unsplit
    }

    pub fn block(&self, a: usize) -> Option<&FormPoly<C>> {
        self.proper.iter().chain(self.torsion.iter()).find(|(x, _)| *x == a).map(|(_, p)| p)
    }

    pub fn find(&self, name: &str, index: &[u16]) -> Option<u32> {
        self.space.find(FormClass::Connection, name, index)
    }

    pub fn find_d(&self, name: &str, index: &[u16]) -> Option<u32> {
        self.space.find(FormClass::ConnectionD, &format!("d{name}"), index)
    }
}

fn divide<C: Coeff>(p: &FormPoly<C>, sign: i64, param: &str) -> Result<FormPoly<C>> {
    let mut out = FormPoly::zero();
    let inv = ParamPoly::from_int(sign);
    for (m, c) in p.terms() {
        let q = c
            .divide_by_param(param)
            .ok_or_else(|| Error::Structural(format!("complement curvature term {c} is not divisible by {param}")))?;
        out.add_term(m.clone(), &q * &inv);
    }
    Ok(out)
}

/// Split the curvature of `model` along a reductive split.
pub fn split_curvature<C: Coeff>(
    model: &ConnectionModel<C>,
    split: &SplitReport,
    contraction: Option<&Contraction>,
) -> Result<CurvatureSplit<C>> {
    let alg = &model.algebra;
    if !split.is_reductive {
        return Err(Error::Refused("curvature split needs a reductive split".into()));
    }
    if split.subalgebra.len() + split.complement.len() != alg.len() {
        return Err(Error::Structural("split does not cover the algebra".into()));
    }
    let n = alg.len();
    let mut space = FormSpace::new();
    let mut conn = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    for (a, g) in alg.generators().iter().enumerate() {
        let (name, index) = contraction
            .and_then(|c| c.rename.get(&a).cloned())
            .unwrap_or_else(|| (g.name.clone(), g.index.clone()));
        conn.push(space.add_simple(&name, &index, 1, g.parity, FormClass::Connection)?);
        names.push((name, index));
    }
    let mut conn_d = Vec::with_capacity(n);
    for (a, (name, index)) in names.iter().enumerate() {
        conn_d.push(space.add_simple(&format!("d{name}"), index, 2, alg.parity(a), FormClass::ConnectionD)?);
    }
    let mut scale = vec![ParamPoly::one(); n];
    let mut signs = vec![1i64; n];
    if let Some(c) = contraction {
        for &f in &split.complement {
            let s = c.signs.get(&f).copied().unwrap_or(1);
            signs[f] = s;
            scale[f] = ParamPoly::param(&c.parameter) * ParamPoly::from_int(s);
        }
        if let Some(bad) = c.signs.keys().find(|k| split.subalgebra.contains(k)) {
            return Err(Error::Structural(format!("rescaling assigned to subalgebra generator {bad}")));
        }
    }
    let mc = maurer_cartan_rhs(alg, &space, &conn, &scale);
    let unsplit: Vec<FormPoly<C>> = (0..n)
        .map(|a| FormPoly::generator(conn_d[a]).scale(&scale[a]).sub(&mc[a]))
        .collect();
    let proper = split.subalgebra.iter().map(|&a| (a, unsplit[a].clone())).collect();
    let torsion = split
        .complement
        .iter()
        .map(|&f| match contraction {
            Some(c) => divide(&unsplit[f], signs[f], &c.parameter).map(|p| (f, p)),
            None => Ok((f, unsplit[f].clone())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurvatureSplit { space, connection: conn, connection_d: conn_d, proper, torsion, epsilon: None, scale, unsplit })
}

#[derive(Clone, Debug)]
pub struct DeSitterSplit {
    pub split: SplitReport,
    pub contraction: Contraction,
    /// `η_kk` of the distinguished axis: +1 de Sitter, -1 anti de Sitter.
    pub epsilon: i64,
}

/// Lorentz split of so(r,s) along axis `k`: `M[a k]` becomes `P[a']` and the
/// remaining indices are renumbered to skip `k`.
pub fn de_sitter_split<C: Coeff>(alg: &SuperAlgebra<C>, k: u16, parameter: &str) -> Result<DeSitterSplit> {
    let (r, s) = alg
        .signature
        .ok_or_else(|| Error::Structural(format!("{} carries no signature", alg.name)))?;
    let n = (r + s) as u16;
    if k >= n {
        return Err(Error::Structural(format!("axis {k} out of range")));
    }
    let prime = |a: u16| if a < k { a } else { a - 1 };
    let mut sub = Vec::new();
    let mut contraction = Contraction { parameter: parameter.to_string(), ..Default::default() };
    for (i, g) in alg.generators().iter().enumerate() {
        if g.name != "M" || g.index.len() != 2 {
            return Err(Error::Structural(format!("{} is not a rotation generator", g.label())));
        }
        let (a, b) = (g.index[0], g.index[1]);
        if a == k || b == k {
            let (other, sign) = if b == k { (a, 1) } else { (b, -1) };
            contraction.signs.insert(i, sign);
            contraction.rename.insert(i, ("P".to_string(), vec![prime(other)]));
        } else {
            sub.push(i);
            contraction.rename.insert(i, ("M".to_string(), vec![prime(a), prime(b)]));
        }
    }
    let split = analyze_split(alg, &sub, None)?;
    let epsilon = if (k as usize) < r { -1 } else { 1 };
    Ok(DeSitterSplit { split, contraction, epsilon })
}

impl DeSitterSplit {
    pub fn apply<C: Coeff>(&self, model: &ConnectionModel<C>) -> Result<CurvatureSplit<C>> {
        let mut out = split_curvature(model, &self.split, Some(&self.contraction))?;
        out.epsilon = Some(self.epsilon);
        Ok(out)
    }
}

/// Block residuals of a de Sitter split against the Poincaré split of the
/// same Lorentz signature.
#[derive(Clone, Debug)]
pub struct DeSitterComparison<C> {
    /// `F^{ab} - (R^{ab} - ε λ² e^a e^b)` and `T^a - T^a_Poincaré`.
    pub curvature: Vec<(String, FormPoly<C>)>,
    /// Blocks at `λ = 0` minus the Poincaré blocks.
    pub contraction: Vec<(String, FormPoly<C>)>,
}

impl<C: Coeff> DeSitterComparison<C> {
    pub fn passed(&self) -> bool {
        self.curvature.iter().chain(&self.contraction).all(|(_, r)| r.is_zero())
    }
}

pub fn compare_with_poincare<C: Coeff>(sp: &CurvatureSplit<C>, parameter: &str) -> Result<DeSitterComparison<C>> {
    let eps = sp.epsilon.ok_or_else(|| Error::Structural("split carries no ε".into()))?;
    let n = sp.proper.iter().chain(&sp.torsion).filter(|(a, _)| sp.space.get(sp.connection[*a]).name == "P").count();
    if n < 2 {
        return Err(Error::Structural("split has no translation block".into()));
    }
    let iso = crate::algebra::catalog_algebra::<C>("iso", &[1, n as i64 - 1])?;
    let model = super::soften_unchecked(&iso, super::Mode::Flat)?;
    let sub: Vec<usize> = (0..iso.len()).filter(|&i| iso.generators()[i].name == "M").collect();
    let flat = split_curvature(&model, &analyze_split(&iso, &sub, None)?, None)?;
    let lambda_sq = ParamPoly::param(parameter) * ParamPoly::param(parameter) * ParamPoly::from_int(eps);
    let zero = ParamPoly::zero();
    let mut curvature = Vec::new();
    let mut contraction = Vec::new();
    for (a, block) in sp.proper.iter().chain(&sp.torsion) {
        let g = sp.space.get(sp.connection[*a]);
        let id = flat.find(&g.name, &g.index).ok_or_else(|| Error::Structural(format!("{} has no Poincaré block", g.label())))?;
        let b = flat.connection.iter().position(|&x| x == id).unwrap();
        let reference = flat.block(b).unwrap().translate(&flat.space, &sp.space)?;
        let mut want = reference.clone();
        if g.name == "M" {
            let e = |i: u16| sp.find("P", &[i]).map(FormPoly::generator).ok_or_else(|| Error::Structural("missing vielbein".into()));
            want = want.sub(&e(g.index[0])?.wedge(&e(g.index[1])?, &sp.space).scale(&lambda_sq));
        }
        curvature.push((g.label(), block.sub(&want)));
        contraction.push((g.label(), block.substitute_param(parameter, &zero).sub(&reference)));
    }
    Ok(DeSitterComparison { curvature, contraction })
}
