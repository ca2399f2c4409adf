//! Formal variation, gauge checks and Noether currents on a jet space.
//!
//! Each field `φ` gets an independent symbol `dφ`, a variation `δφ` of the
//! same degree and parity, and `dδφ`. The variation is an even derivation
//! commuting with `d`.

mod gauge;
mod lagrangians;

pub use gauge::{gauge_check, noether_current, onshell_reduce, GaugeCheck, GaugeRule, NoetherCurrent, OnShellRuleSet};
pub use lagrangians::{
    abelian_chern_simons, abelian_topological, einstein_cartan, euler_density, gamma5, lorentz_curvature,
    macdowell_mansouri, sugra4, InvariantPairing, LagrangianForm,
};

use std::collections::HashMap;


use crate::cartan::{ConnectionModel, Mode};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::{apply_derivation, differential, DifferentialRuleSet, FormClass, FormPoly, FormSpace, Monomial};
use crate::scalar::ParamPoly;

#[derive(Clone, Debug)]
pub struct JetSpace<C> {
    pub space: FormSpace,
    pub model: ConnectionModel<C>,
    pub fields: Vec<u32>,
    pub d: Vec<u32>,
    pub var: Vec<u32>,
    pub dvar: Vec<u32>,
    /// `R^A = dφ^A - flat^A` in jet variables.
    pub definitions: HashMap<u32, FormPoly<C>>,
    /// Pairs `(x, dx)` generating the free differential.
    pub pairs: Vec<(u32, u32)>,
    pub d_rules: DifferentialRuleSet<C>,
}

impl<C: Coeff> JetSpace<C> {
    pub fn new(model: &ConnectionModel<C>) -> Result<Self> {
        if model.mode != Mode::Softened {
            return Err(Error::Refused("variations need curvature symbols; soften the model first".into()));
        }
        let mut space = model.space.clone();
        let fields = model.connection.clone();
        let mut d = Vec::new();
        let mut var = Vec::new();
        let mut dvar = Vec::new();
        for &f in &fields {
            let g = space.get(f).clone();
            d.push(space.add_simple(&format!("d{}", g.name), &g.index, g.degree + 1, g.parity, FormClass::ConnectionD)?);
            var.push(space.add_simple(&format!("δ{}", g.name), &g.index, g.degree, g.parity, FormClass::Variation)?);
            dvar.push(space.add_simple(&format!("dδ{}", g.name), &g.index, g.degree + 1, g.parity, FormClass::VariationD)?);
        }
        let mut d_rules = DifferentialRuleSet::new();
        let mut pairs = Vec::new();
        for i in 0..fields.len() {
            pairs.push((fields[i], d[i]));
            pairs.push((var[i], dvar[i]));
        }
        for &(x, dx) in &pairs {
            d_rules.set(x, FormPoly::generator(dx));
            d_rules.set(dx, FormPoly::zero());
        }
        let mut jet = Self { space, model: model.clone(), fields, d, var, dvar, definitions: HashMap::new(), pairs, d_rules };
        for a in 0..model.algebra.len() {
            let def = FormPoly::generator(jet.d[a]).sub(&model.flat_part(a));
            jet.definitions.insert(model.curvature[a], def);
        }
        Ok(jet)
    }

    pub fn field_index(&self, id: u32) -> Option<usize> {
        self.fields.iter().position(|&f| f == id)
    }

    pub fn field(&self, label: &str) -> Option<u32> {
        self.model.connection_of(label)
    }

    pub fn curvature(&self, label: &str) -> Option<u32> {
        self.model.curvature_of(label)
    }

    /// Register a new `(x, dx)` pair.
    pub fn add_pair(&mut self, x: u32, dx: u32) {
        self.pairs.push((x, dx));
        self.d_rules.set(x, FormPoly::generator(dx));
        self.d_rules.set(dx, FormPoly::zero());
    }

    /// Free differential of the jet space.
    pub fn d(&self, p: &FormPoly<C>) -> Result<FormPoly<C>> {
        differential(&self.d_rules, p, &self.space).map_err(|e| match e {
            Error::RuleCoverage(m) => Error::Structural(format!("cannot differentiate: {m}")),
            other => other,
        })
    }

    pub fn expand_curvatures(&self, p: &FormPoly<C>) -> FormPoly<C> {
        p.substitute(&self.definitions, &self.space)
    }

    /// Replace `dφ^A` by `R^A + flat^A`.
    pub fn to_curvature_vars(&self, p: &FormPoly<C>) -> FormPoly<C> {
        let map: HashMap<u32, FormPoly<C>> = (0..self.fields.len())
            .map(|a| {
                let r = FormPoly::generator(self.model.curvature[a]).add(&self.model.flat_part(a));
                (self.d[a], r)
            })
            .collect();
        p.substitute(&map, &self.space)
    }

    /// Koszul homotopy `dx -> x`, an odd derivation with `dK + Kd` counting factors.
    pub fn homotopy(&self, p: &FormPoly<C>) -> Result<FormPoly<C>> {
        let map: HashMap<u32, u32> = self.pairs.iter().map(|&(x, dx)| (dx, x)).collect();
        apply_derivation(p, &self.space, &|y| Some(map.get(&y).map_or_else(FormPoly::zero, |&x| FormPoly::generator(x))), true, false)
    }

    /// A primitive of a closed polynomial without constant term.
    pub fn primitive(&self, p: &FormPoly<C>) -> Result<Option<FormPoly<C>>> {
        if !self.d(p)?.is_zero() {
            return Ok(None);
        }
        let mut by_weight: HashMap<usize, FormPoly<C>> = HashMap::new();
        for (m, c) in p.terms() {
            if m.is_empty() {
                return Ok(None);
            }
            by_weight.entry(m.len()).or_default().add_term(m.clone(), c.clone());
        }
        let mut alpha = FormPoly::zero();
        for (w, part) in by_weight {
            let k = self.homotopy(&part)?;
            alpha.add_assign(&k.scale(&ParamPoly::from_ratio(1, w as i64)));
        }
        Ok(Some(alpha))
    }
}

#[derive(Clone, Debug)]
pub struct VariationResult<C> {
    pub jet: JetSpace<C>,
    pub lagrangian: FormPoly<C>,
    /// `δL` before integration by parts.
    pub direct: FormPoly<C>,
    /// Coefficient of `δφ_i`, jet variables.
    pub field_equations: Vec<(u32, FormPoly<C>)>,
    /// Boundary potential, linear in `δφ`.
    pub theta: FormPoly<C>,
}

impl<C: Coeff> VariationResult<C> {
    pub fn equation(&self, field: u32) -> FormPoly<C> {
        self.field_equations.iter().find(|(f, _)| *f == field).map_or_else(FormPoly::zero, |(_, e)| e.clone())
    }

    pub fn equation_of(&self, label: &str) -> Option<FormPoly<C>> {
        self.jet.field(label).map(|f| self.equation(f))
    }

    /// Field equation rewritten with curvature symbols.
    pub fn covariant_equation(&self, field: u32) -> FormPoly<C> {
        self.jet.to_curvature_vars(&self.equation(field))
    }

    pub fn covariant_theta(&self) -> FormPoly<C> {
        self.jet.to_curvature_vars(&self.theta)
    }

    /// `δL - Σ δφ ∧ E - dθ`.
    pub fn round_trip_residual(&self) -> Result<FormPoly<C>> {
        let mut rebuilt = self.jet.d(&self.theta)?;
        for (f, e) in &self.field_equations {
            let i = self.jet.field_index(*f).unwrap();
            rebuilt.add_assign(&FormPoly::generator(self.jet.var[i]).wedge(e, &self.jet.space));
        }
        Ok(self.direct.sub(&rebuilt))
    }
}

/// `δL = Σ δφ ∧ E + dθ` with a single integration-by-parts pass.
pub fn vary<C: Coeff>(l: &LagrangianForm<C>, model: &ConnectionModel<C>) -> Result<VariationResult<C>> {
    let jet = JetSpace::new(model)?;
    vary_in(l, &jet)
}

pub fn vary_in<C: Coeff>(l: &LagrangianForm<C>, jet: &JetSpace<C>) -> Result<VariationResult<C>> {
    let expanded = jet.expand_curvatures(&l.poly);
    for id in expanded.generators() {
        let g = jet.space.get(id);
        if g.class == FormClass::Curvature || matches!(g.class, FormClass::Variation | FormClass::VariationD) {
            return Err(Error::Structural(format!("{} cannot be varied", g.label())));
        }
    }
    let n = jet.fields.len();
    let mut image: HashMap<u32, FormPoly<C>> = HashMap::new();
    for i in 0..n {
        image.insert(jet.fields[i], FormPoly::generator(jet.var[i]));
        image.insert(jet.d[i], FormPoly::generator(jet.dvar[i]));
    }
    let direct = apply_derivation(&expanded, &jet.space, &|x| image.get(&x).cloned(), false, false)?;
    let var_of: HashMap<u32, usize> = jet.var.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let dvar_of: HashMap<u32, usize> = jet.dvar.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut eqs: Vec<FormPoly<C>> = vec![FormPoly::zero(); n];
    let mut theta = FormPoly::zero();
    for (m, c) in direct.terms() {
        let lead = m[0];
        let rest: Monomial = m[1..].iter().copied().collect();
        if rest.iter().any(|x| var_of.contains_key(x) || dvar_of.contains_key(x)) {
            return Err(Error::Structural("variation is not linear".into()));
        }
        if let Some(&i) = var_of.get(&lead) {
            eqs[i].add_term(rest, c.clone());
        } else if let Some(&i) = dvar_of.get(&lead) {
            // dδφ Z = d(δφ Z) - (-1)^t δφ dZ
            let z = FormPoly::term(rest.clone(), c.clone());
            theta.add_assign(&FormPoly::generator(jet.var[i]).wedge(&z, &jet.space));
            let dz = jet.d(&z)?;
            if jet.space.is_odd(jet.var[i]) {
                eqs[i].add_assign(&dz);
            } else {
                eqs[i].add_assign(&dz.neg());
            }
        } else {
            return Err(Error::Structural(format!("term {} carries no variation", jet.space.render_monomial(m))));
        }
    }
    Ok(VariationResult {
        jet: jet.clone(),
        lagrangian: expanded,
        direct,
        field_equations: jet.fields.iter().copied().zip(eqs).collect(),
        theta,
    })
}

/// Coefficients of the leading generator when every term starts with one from `ids`.
pub fn strip_leading<C: Coeff>(p: &FormPoly<C>, ids: &[u32]) -> Result<HashMap<u32, FormPoly<C>>> {
    let mut out: HashMap<u32, FormPoly<C>> = HashMap::new();
    for (m, c) in p.terms() {
        match m.first() {
            Some(x) if ids.contains(x) => {
                out.entry(*x).or_default().add_term(m[1..].iter().copied().collect(), c.clone());
            }
            _ => return Err(Error::Structural("term without the expected leading factor".into())),
        }
    }
    Ok(out)
}
