use std::collections::HashMap;

use num_traits::One;
use rayon::prelude::*;

use super::{FormPoly, FormSpace, Monomial};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::scalar::ParamPoly;

/// Action of a differential on generators: `d x_i = rules[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialRuleSet<C> {
    rules: HashMap<u32, FormPoly<C>>,
}

impl<C: Coeff> Default for DifferentialRuleSet<C> {
    fn default() -> Self {
        Self { rules: HashMap::new() }
    }
}

impl<C: Coeff> DifferentialRuleSet<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, id: u32, image: FormPoly<C>) {
        self.rules.insert(id, image);
    }

    pub fn get(&self, id: u32) -> Option<&FormPoly<C>> {
        self.rules.get(&id)
    }

    pub fn contains(&self, id: u32) -> bool {
        self.rules.contains_key(&id)
    }

    pub fn remove(&mut self, id: u32) -> Option<FormPoly<C>> {
        self.rules.remove(&id)
    }

    pub fn ids(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.rules.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Each image must have degree one higher and the same Grassmann parity.
    pub fn check_degrees(&self, space: &FormSpace) -> Result<()> {
        for (&id, img) in &self.rules {
            let g = space.get(id);
            for (m, _) in img.terms() {
                if space.monomial_degree(m) != g.degree as u32 + 1 || space.monomial_parity(m) != g.parity.bit() {
                    return Err(Error::Structural(format!(
                        "d {} contains {} of wrong degree or parity",
                        g.label(),
                        space.render_monomial(m)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, poly: &FormPoly<C>, space: &FormSpace) -> Result<FormPoly<C>> {
        differential(self, poly, space)
    }
}

/// Graded derivation extended from generator images by the Leibniz rule.
/// An odd derivation picks up `(-1)^t` for each factor it moves past.
/// Generators without an image are an error when `strict`, else map to zero.
pub fn apply_derivation<C: Coeff>(
    poly: &FormPoly<C>,
    space: &FormSpace,
    image: &(dyn Fn(u32) -> Option<FormPoly<C>> + Sync),
    odd: bool,
    strict: bool,
) -> Result<FormPoly<C>> {
    let one_term = |m: &Monomial, c: &ParamPoly<C>| -> Result<FormPoly<C>> {
        let mut acc = FormPoly::zero();
        let mut flip = false;
        for i in 0..m.len() {
            let x = m[i];
            if let Some(img) = image(x) {
                if !img.is_zero() {
                    let prefix = FormPoly::term(Monomial::from_slice(&m[..i]), if flip { -c.clone() } else { c.clone() });
                    let suffix = FormPoly::term(Monomial::from_slice(&m[i + 1..]), ParamPoly::one());
                    acc.add_assign(&prefix.wedge(&img, space).wedge(&suffix, space));
                }
            } else if strict {
                return Err(Error::RuleCoverage(format!("no rule for {}", space.get(x).label())));
            }
            if odd && space.is_odd(x) {
                flip = !flip;
            }
        }
        Ok(acc)
    };
    let items: Vec<_> = poly.terms().collect();
    let parts: Result<Vec<FormPoly<C>>> = if items.len() > 64 {
        items.par_iter().map(|(m, c)| one_term(m, c)).collect()
    } else {
        items.iter().map(|(m, c)| one_term(m, c)).collect()
    };
    let mut out = FormPoly::zero();
    for p in parts? {
        out.add_assign(&p);
    }
    Ok(out)
}

/// Odd derivation of degree one given by the rule set; every generator met
/// must have a rule.
pub fn differential<C: Coeff>(rules: &DifferentialRuleSet<C>, poly: &FormPoly<C>, space: &FormSpace) -> Result<FormPoly<C>> {
    apply_derivation(poly, space, &|x| rules.get(x).cloned(), true, true)
}

#[derive(Clone, Debug)]
pub struct NilpotencyReport<C> {
    /// Generators whose image under `d²` is nonzero.
    pub residuals: Vec<(u32, FormPoly<C>)>,
    pub checked: usize,
}

impl<C: Coeff> NilpotencyReport<C> {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn render(&self, space: &FormSpace) -> String {
        self.residuals
            .iter()
            .map(|(id, r)| format!("d²{} = {}", space.get(*id).label(), r.render(space)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Evaluate `d²` on every generator carrying a rule.
pub fn check_nilpotency<C: Coeff>(rules: &DifferentialRuleSet<C>, space: &FormSpace) -> Result<NilpotencyReport<C>> {
    rules.check_degrees(space)?;
    let ids = rules.ids();
    let results: Result<Vec<(u32, FormPoly<C>)>> = ids
        .par_iter()
        .map(|&id| {
            let dd = differential(rules, rules.get(id).unwrap(), space)?;
            Ok((id, dd))
        })
        .collect();
    let residuals = results?.into_iter().filter(|(_, r)| !r.is_zero()).collect();
    Ok(NilpotencyReport { residuals, checked: ids.len() })
}
