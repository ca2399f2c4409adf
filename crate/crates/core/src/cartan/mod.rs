//! Flat and softened connection systems built from an algebra.

mod split;

pub use split::{compare_with_poincare, de_sitter_split, split_curvature, Contraction, CurvatureSplit, DeSitterComparison, DeSitterSplit};

use num_traits::One;

use crate::algebra::{validate_algebra, SuperAlgebra};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::{
    apply_derivation, check_nilpotency, DifferentialRuleSet, FormClass, FormPoly, FormSpace, NilpotencyReport,
};
use crate::scalar::ParamPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Flat,
    Softened,
}

#[derive(Clone, Debug)]
pub struct ConnectionModel<C> {
    pub algebra: SuperAlgebra<C>,
    pub mode: Mode,
    pub space: FormSpace,
    /// Connection 1-form per algebra generator.
    pub connection: Vec<u32>,
    /// Curvature 2-form per algebra generator; empty when flat.
    pub curvature: Vec<u32>,
    pub rules: DifferentialRuleSet<C>,
    /// Free-text conventions and gluing notes.
    pub notes: String,
}

pub fn curvature_name(name: &str) -> String {
    format!("R{name}")
}

/// `-1/2 Σ (-1)^{ε_B(1+ε_C)} C^A_{BC} x^B x^C` with `x^B = scale_B * gens[B]`.
pub fn maurer_cartan_rhs<C: Coeff>(
    alg: &SuperAlgebra<C>,
    space: &FormSpace,
    gens: &[u32],
    scale: &[ParamPoly<C>],
) -> Vec<FormPoly<C>> {
    let n = alg.len();
    let mut out = vec![FormPoly::zero(); n];
    let half = ParamPoly::from_ratio(-1, 2);
    for b in 0..n {
        for c in 0..n {
            let br = alg.bracket(b, c);
            if br.is_empty() {
                continue;
            }
            let word = FormPoly::word(space, &[gens[b], gens[c]]);
            if word.is_zero() {
                continue;
            }
            let eb = alg.parity(b).bit();
            let ec = alg.parity(c).bit();
            let sign = if eb * (1 + ec) % 2 == 1 { -half.clone() } else { half.clone() };
            let k = &(&sign * &scale[b]) * &scale[c];
            for (a, v) in br {
                out[*a].add_assign(&word.scale(&(&k * v)));
            }
        }
    }
    out
}

fn register<C: Coeff>(alg: &SuperAlgebra<C>, mode: Mode) -> Result<(FormSpace, Vec<u32>, Vec<u32>)> {
    let mut space = FormSpace::new();
    let mut conn = Vec::with_capacity(alg.len());
    for g in alg.generators() {
        conn.push(space.add_simple(&g.name, &g.index, 1, g.parity, FormClass::Connection)?);
    }
    let mut curv = Vec::new();
    if mode == Mode::Softened {
        for g in alg.generators() {
            curv.push(space.add_simple(&curvature_name(&g.name), &g.index, 2, g.parity, FormClass::Curvature)?);
        }
    }
    Ok((space, conn, curv))
}

/// Refuses algebras that fail validation.
pub fn soften<C: Coeff>(alg: &SuperAlgebra<C>, mode: Mode) -> Result<ConnectionModel<C>> {
    let report = validate_algebra(alg)?;
    if !report.passed() {
        return Err(Error::Refused(format!(
            "{} fails validation ({} Jacobi failures, {} antisymmetry defects, {} parity violations)",
            alg.name,
            report.jacobi.len(),
            report.antisymmetry.len(),
            report.parity.len()
        )));
    }
    soften_unchecked(alg, mode)
}

/// Same construction without validation, for perturbed fixtures.
pub fn soften_unchecked<C: Coeff>(alg: &SuperAlgebra<C>, mode: Mode) -> Result<ConnectionModel<C>> {
    let (space, conn, curv) = register(alg, mode)?;
    let ones = vec![ParamPoly::one(); alg.len()];
    let flat = maurer_cartan_rhs(alg, &space, &conn, &ones);
    let mut rules = DifferentialRuleSet::new();
    match mode {
        Mode::Flat => {
            for (a, f) in flat.into_iter().enumerate() {
                rules.set(conn[a], f);
            }
        }
        Mode::Softened => {
            // dR^A = -D_R(flat^A) with D_R the odd derivation ρ^B -> R^B
            let image = |x: u32| conn.iter().position(|&c| c == x).map(|b| FormPoly::generator(curv[b]));
            for (a, f) in flat.into_iter().enumerate() {
                let dr = apply_derivation(&f, &space, &image, true, false)?.neg();
                rules.set(curv[a], dr);
                rules.set(conn[a], f.add(&FormPoly::generator(curv[a])));
            }
        }
    }
    Ok(ConnectionModel {
        notes: format!("{} connection on {}", if mode == Mode::Flat { "flat" } else { "softened" }, alg.name),
        algebra: alg.clone(),
        mode,
        space,
        connection: conn,
        curvature: curv,
        rules,
    })
}

impl<C: Coeff> ConnectionModel<C> {
    pub fn connection_of(&self, label: &str) -> Option<u32> {
        self.algebra.find(label).map(|i| self.connection[i])
    }

    pub fn curvature_of(&self, label: &str) -> Option<u32> {
        self.algebra.find(label).and_then(|i| self.curvature.get(i).copied())
    }

    /// Maurer-Cartan part of `dρ^A`.
    pub fn flat_part(&self, a: usize) -> FormPoly<C> {
        let img = self.rules.get(self.connection[a]).cloned().unwrap_or_default();
        match self.mode {
            Mode::Flat => img,
            Mode::Softened => img.sub(&FormPoly::generator(self.curvature[a])),
        }
    }

    pub fn nilpotency(&self) -> Result<NilpotencyReport<C>> {
        check_nilpotency(&self.rules, &self.space)
    }
}

/// `d²` on connection and curvature generators of a softened model.
pub fn bianchi_check<C: Coeff>(model: &ConnectionModel<C>) -> Result<NilpotencyReport<C>> {
    if model.mode == Mode::Flat {
        return Err(Error::Refused("bianchi_check needs a softened model; use check_nilpotency for flat systems".into()));
    }
    model.nilpotency()
}
