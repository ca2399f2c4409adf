use std::collections::{BTreeSet, HashMap};


use super::{JetSpace, LagrangianForm, VariationResult};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::{apply_derivation, FormClass, FormPoly, FormSpace};

/// Infinitesimal gauge action on fields, linear in the parameters.
#[derive(Clone, Debug)]
pub struct GaugeRule<C> {
    /// (algebra generator, χ, dχ)
    pub params: Vec<(usize, u32, u32)>,
    pub images: HashMap<u32, FormPoly<C>>,
}

impl<C: Coeff> JetSpace<C> {
    /// `δ_χ ρ^A = dχ^A + C^A_{BC} ρ^B χ^C` for χ along an even subalgebra.
    pub fn add_gauge(&mut self, subset: &[usize]) -> Result<GaugeRule<C>> {
        let alg = self.model.algebra.clone();
        let mut params = Vec::new();
        for &i in subset {
            let g = alg
                .generators()
                .get(i)
                .ok_or_else(|| Error::Structural(format!("gauge generator {i} out of range")))?;
            if g.parity.bit() == 1 {
                return Err(Error::Structural(format!("odd gauge parameter {} not supported", g.label())));
            }
            let x = self.space.add_simple(&format!("χ{}", g.name), &g.index, 0, g.parity, FormClass::Gauge)?;
            let dx = self.space.add_simple(&format!("dχ{}", g.name), &g.index, 1, g.parity, FormClass::GaugeD)?;
            self.add_pair(x, dx);
            params.push((i, x, dx));
        }
        let mut images: HashMap<u32, FormPoly<C>> = HashMap::new();
        for &(i, _, dx) in &params {
            images.entry(self.fields[i]).or_default().add_assign(&FormPoly::generator(dx));
        }
        for b in 0..alg.len() {
            for &(c, x, _) in &params {
                let word = FormPoly::word(&self.space, &[self.fields[b], x]);
                for (a, v) in alg.bracket(b, c) {
                    images.entry(self.fields[*a]).or_default().add_assign(&word.scale(v));
                }
            }
        }
        Ok(GaugeRule { params, images })
    }

    /// Image of a polynomial under the gauge derivation.
    pub fn gauge_variation(&self, p: &FormPoly<C>, rule: &GaugeRule<C>) -> Result<FormPoly<C>> {
        let mut full = rule.images.clone();
        for i in 0..self.fields.len() {
            let img = full.get(&self.fields[i]).cloned().unwrap_or_default();
            full.insert(self.d[i], self.d(&img)?);
        }
        for id in p.generators() {
            let g = self.space.get(id);
            if !full.contains_key(&id) && matches!(g.class, FormClass::Connection | FormClass::ConnectionD | FormClass::Curvature) {
                return Err(Error::RuleCoverage(format!("no gauge rule for {}", g.label())));
            }
        }
        apply_derivation(p, &self.space, &|x| full.get(&x).cloned(), false, false)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GaugeCheck<C> {
    Zero,
    /// `δ_χ L = dα`.
    Exact { residual: FormPoly<C>, alpha: FormPoly<C> },
    NonInvariant { residual: FormPoly<C> },
}

impl<C: Coeff> GaugeCheck<C> {
    pub fn is_invariant(&self) -> bool {
        !matches!(self, GaugeCheck::NonInvariant { .. })
    }

    pub fn alpha(&self) -> FormPoly<C> {
        match self {
            GaugeCheck::Exact { alpha, .. } => alpha.clone(),
            _ => FormPoly::zero(),
        }
    }
}

pub fn gauge_check<C: Coeff>(l: &LagrangianForm<C>, jet: &JetSpace<C>, rule: &GaugeRule<C>) -> Result<GaugeCheck<C>> {
    let expanded = jet.expand_curvatures(&l.poly);
    let residual = jet.gauge_variation(&expanded, rule)?;
    if residual.is_zero() {
        return Ok(GaugeCheck::Zero);
    }
    match jet.primitive(&residual)? {
        Some(alpha) => {
            debug_assert_eq!(jet.d(&alpha)?, residual);
            Ok(GaugeCheck::Exact { residual, alpha })
        }
        None => Ok(GaugeCheck::NonInvariant { residual }),
    }
}

/// Rewrite rules on curvature or field-equation symbols.
#[derive(Clone, Debug, Default)]
pub struct OnShellRuleSet<C> {
    rules: HashMap<u32, FormPoly<C>>,
}

impl<C: Coeff> OnShellRuleSet<C> {
    pub fn new() -> Self {
        Self { rules: HashMap::new() }
    }

    pub fn insert(&mut self, id: u32, replacement: FormPoly<C>, space: &FormSpace) -> Result<()> {
        let g = space.get(id);
        for (m, _) in replacement.terms() {
            if space.monomial_degree(m) != g.degree as u32 || space.monomial_parity(m) != g.parity.bit() {
                return Err(Error::Structural(format!("on-shell rule for {} changes degree or parity", g.label())));
            }
        }
        self.rules.insert(id, replacement);
        Ok(())
    }

    /// `id -> 0`.
    pub fn vanish(&mut self, id: u32) {
        self.rules.insert(id, FormPoly::zero());
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    fn check_acyclic(&self) -> Result<()> {
        fn visit<C: Coeff>(
            id: u32,
            rules: &HashMap<u32, FormPoly<C>>,
            stack: &mut Vec<u32>,
            done: &mut BTreeSet<u32>,
        ) -> Result<()> {
            if done.contains(&id) {
                return Ok(());
            }
            if stack.contains(&id) {
                return Err(Error::CyclicRules(format!("rule cycle through generator {id}")));
            }
            stack.push(id);
            if let Some(r) = rules.get(&id) {
                for dep in r.generators() {
                    if rules.contains_key(&dep) {
                        visit(dep, rules, stack, done)?;
                    }
                }
            }
            stack.pop();
            done.insert(id);
            Ok(())
        }
        let mut done = BTreeSet::new();
        for &id in self.rules.keys() {
            visit(id, &self.rules, &mut Vec::new(), &mut done)?;
        }
        Ok(())
    }
}

/// Apply the rules to a fixpoint.
pub fn onshell_reduce<C: Coeff>(f: &FormPoly<C>, rules: &OnShellRuleSet<C>, space: &FormSpace) -> Result<FormPoly<C>> {
    rules.check_acyclic()?;
    let mut cur = f.clone();
    loop {
        if !cur.generators().iter().any(|g| rules.rules.contains_key(g)) {
            return Ok(cur);
        }
        cur = cur.substitute(&rules.rules, space);
    }
}

#[derive(Clone, Debug)]
pub struct NoetherCurrent<C> {
    /// `θ(δ_χ) - α`, jet variables.
    pub current: FormPoly<C>,
    pub alpha: FormPoly<C>,
    /// Candidate charge density: `dχ` replaced by `χ`.
    pub q: FormPoly<C>,
    /// `J - dq` in curvature variables.
    pub remainder: FormPoly<C>,
    /// Remainder after on-shell reduction.
    pub onshell_remainder: FormPoly<C>,
    /// `dJ + Σ δ_χφ ∧ E`, zero when the current is conserved on-shell.
    pub conservation_residual: FormPoly<C>,
}

impl<C: Coeff> NoetherCurrent<C> {
    /// `J ≐ dq` under the supplied rules.
    pub fn is_exact_onshell(&self) -> bool {
        self.onshell_remainder.is_zero()
    }
}

pub fn noether_current<C: Coeff>(
    l: &LagrangianForm<C>,
    variation: &VariationResult<C>,
    jet: &JetSpace<C>,
    rule: &GaugeRule<C>,
    onshell: &OnShellRuleSet<C>,
) -> Result<NoetherCurrent<C>> {
    let check = gauge_check(l, jet, rule)?;
    if !check.is_invariant() {
        return Err(Error::Refused("Lagrangian is not gauge invariant up to an exact form".into()));
    }
    let theta = variation.theta.translate(&variation.jet.space, &jet.space)?;
    let mut sub: HashMap<u32, FormPoly<C>> = HashMap::new();
    for i in 0..jet.fields.len() {
        sub.insert(jet.var[i], rule.images.get(&jet.fields[i]).cloned().unwrap_or_default());
    }
    let alpha = check.alpha();
    let current = theta.substitute(&sub, &jet.space).sub(&alpha);
    let to_chi: HashMap<u32, FormPoly<C>> = rule.params.iter().map(|&(_, x, dx)| (dx, FormPoly::generator(x))).collect();
    let mut q = FormPoly::zero();
    for (m, c) in current.terms() {
        if let Some(pos) = m.iter().position(|y| to_chi.contains_key(y)) {
            // dχ leads every such monomial (gauge classes sort before fields)
            debug_assert_eq!(pos, 0);
            let mut mm = m.clone();
            mm[pos] = rule.params.iter().find(|p| p.2 == m[pos]).unwrap().1;
            q.add_term(mm, c.clone());
        }
    }
    let remainder = jet.to_curvature_vars(&current.sub(&jet.d(&q)?));
    let onshell_remainder = onshell_reduce(&remainder, onshell, &jet.space)?;
    let mut conservation = jet.d(&current)?;
    for (f, e) in &variation.field_equations {
        let i = jet.field_index(*f).unwrap();
        let e = e.translate(&variation.jet.space, &jet.space)?;
        let img = rule.images.get(&jet.fields[i]).cloned().unwrap_or_default();
        conservation.add_assign(&img.wedge(&e, &jet.space));
    }
    Ok(NoetherCurrent { current, alpha, q, remainder, onshell_remainder, conservation_residual: conservation })
}
