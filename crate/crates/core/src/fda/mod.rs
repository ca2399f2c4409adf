//! Chevalley-Eilenberg cochains and free differential algebras over flat
//! connection systems.

use std::collections::HashMap;

use crate::algebra::{label, Parity};
use crate::cartan::{soften, ConnectionModel, Mode};
use crate::clifford::{combinations, GammaRep};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::forms::{bar, check_nilpotency, differential, DifferentialRuleSet, FormClass, FormPoly, FormSpace, Monomial, NilpotencyReport};
use crate::linalg::{kernel, rank, solve};
use crate::scalar::ParamPoly;

#[cfg(test)]
mod tests;

/// Homogeneous constant-coefficient polynomial in the generators of an FDA.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<C> {
    pub poly: FormPoly<C>,
    pub degree: u32,
}

impl<C: Coeff> Cochain<C> {
    pub fn new(poly: FormPoly<C>, space: &FormSpace) -> Result<Self> {
        if poly.terms().any(|(_, c)| !c.is_constant()) {
            return Err(Error::Structural("cochain coefficients must be constants".into()));
        }
        let degree = match poly.degree(space) {
            Some(d) => d,
            None if poly.is_zero() => 0,
            None => return Err(Error::Structural("cochain is not of homogeneous degree".into())),
        };
        Ok(Self { poly, degree })
    }
}

#[derive(Clone, Debug)]
pub struct FdaStep<C> {
    pub potential: u32,
    pub cocycle: FormPoly<C>,
    /// The cocycle is exact within the ansatz supplied at extension time.
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct FdaSpec<C> {
    pub base: ConnectionModel<C>,
    /// Algebra generators held at zero.
    pub relative: Vec<usize>,
    pub space: FormSpace,
    pub rules: DifferentialRuleSet<C>,
    pub steps: Vec<FdaStep<C>>,
}

impl<C: Coeff> FdaSpec<C> {
    /// Flat base system with the connection forms of `relative` set to zero.
    pub fn new(base: &ConnectionModel<C>, relative: &[usize]) -> Result<Self> {
        if base.mode != Mode::Flat {
            return Err(Error::Refused("FDA base must be a flat connection system".into()));
        }
        if let Some(&h) = relative.iter().find(|&&h| h >= base.algebra.len()) {
            return Err(Error::Structural(format!("generator {h} is out of range")));
        }
        let zero: HashMap<u32, FormPoly<C>> = relative.iter().map(|&h| (base.connection[h], FormPoly::zero())).collect();
        let mut rules = DifferentialRuleSet::new();
        for (a, &x) in base.connection.iter().enumerate() {
            if relative.contains(&a) {
                continue;
            }
            let img = base.rules.get(x).cloned().unwrap_or_default().substitute(&zero, &base.space);
            rules.set(x, img);
        }
        Ok(Self { base: base.clone(), relative: relative.to_vec(), space: base.space.clone(), rules, steps: Vec::new() })
    }

    /// Relative to the generators named `M` (the Lorentz subalgebra in the catalog).
    pub fn lorentz_relative(base: &ConnectionModel<C>) -> Result<Self> {
        let h: Vec<usize> = (0..base.algebra.len()).filter(|&i| base.algebra.generators()[i].name == "M").collect();
        Self::new(base, &h)
    }

    pub fn generator(&self, name: &str, index: &[u16]) -> Option<u32> {
        self.space
            .find(FormClass::Connection, name, index)
            .or_else(|| self.space.find(FormClass::Potential, name, index))
            .filter(|id| self.rules.contains(*id))
    }

    pub fn form(&self, name: &str, index: &[u16]) -> Result<FormPoly<C>> {
        self.generator(name, index)
            .map(FormPoly::generator)
            .ok_or_else(|| Error::Structural(format!("{} is not available in this FDA", label(name, index))))
    }

    fn check_available(&self, c: &FormPoly<C>) -> Result<()> {
        match c.generators().into_iter().find(|id| !self.rules.contains(*id)) {
            Some(id) => Err(Error::Structural(format!("{} is not available in this FDA", self.space.get(id).label()))),
            None => Ok(()),
        }
    }

    pub fn ce_differential(&self, c: &FormPoly<C>) -> Result<FormPoly<C>> {
        self.check_available(c)?;
        differential(&self.rules, c, &self.space)
    }

    /// Appends `dX = -cocycle` for a new potential `X`. The step is marked
    /// trivial when the cocycle lies in the span of `d` of the `exact_ansatz`.
    pub fn extend(&self, cocycle: &FormPoly<C>, name: &str, index: &[u16], exact_ansatz: &[FormPoly<C>]) -> Result<Self> {
        let c = Cochain::new(cocycle.clone(), &self.space)?;
        if c.degree < 2 {
            return Err(Error::Structural("cocycle degree must be at least 2".into()));
        }
        let residual = self.ce_differential(&c.poly)?;
        if !residual.is_zero() {
            return Err(Error::Refused(format!("cocycle is not closed: d = {}", residual.render(&self.space))));
        }
        let parity = Parity::from_bit(c.poly.terms().next().map_or(0, |(m, _)| self.space.monomial_parity(m)));
        let trivial = self.is_exact(&c.poly, exact_ansatz)?;
        let mut next = self.clone();
        let id = next.space.add_simple(name, index, (c.degree - 1) as u8, parity, FormClass::Potential)?;
        next.rules.set(id, c.poly.neg());
        next.steps.push(FdaStep { potential: id, cocycle: c.poly, trivial });
        Ok(next)
    }

    /// Whether `c` is a combination of `d` of the ansatz cochains.
    pub fn is_exact(&self, c: &FormPoly<C>, ansatz: &[FormPoly<C>]) -> Result<bool> {
        if c.is_zero() {
            return Ok(true);
        }
        let images: Vec<FormPoly<C>> = ansatz.iter().map(|a| self.ce_differential(a)).collect::<Result<_>>()?;
        let (cols, n) = coefficient_matrix(&images, Some(c))?;
        let a = transpose(&cols[..images.len()], n);
        Ok(solve(&a, &cols[images.len()]).is_some())
    }

    pub fn potential(&self, name: &str) -> Option<u32> {
        self.steps.iter().map(|s| s.potential).find(|&id| self.space.get(id).name == name)
    }

    /// Image of `dX` for a potential `X`.
    pub fn potential_differential(&self, name: &str) -> Option<FormPoly<C>> {
        self.potential(name).and_then(|id| self.rules.get(id).cloned())
    }

    pub fn vielbein(&self, a: usize) -> Result<FormPoly<C>> {
        self.form("P", &[a as u16])
    }

    pub fn gravitino(&self) -> Result<Vec<FormPoly<C>>> {
        let n = self.base.algebra.count_by_parity().1;
        (0..n).map(|a| self.form("Q", &[a as u16])).collect()
    }

    /// `Σ ψ̄ Γ_{a1..ak} ψ V^{a1} ... V^{ak}`, summed over all index values.
    pub fn bilinear_vielbein(&self, rep: &GammaRep<C>, rank: usize) -> Result<FormPoly<C>> {
        check_rep(self, rep)?;
        let psi = self.gravitino()?;
        let v: Vec<FormPoly<C>> = (0..rep.dim).map(|a| self.vielbein(a)).collect::<Result<_>>()?;
        let lowered = vec![true; rank];
        let mut acc = FormPoly::zero();
        for set in combinations(rep.dim, rank) {
            // Γ and the vielbein word are both antisymmetric: k! times the ordered term
            let b = bar(&psi, &rep.cgamma(&set, &lowered), &psi, &self.space);
            let mut w = b;
            for &a in &set {
                w = w.wedge(&v[a], &self.space);
            }
            acc.add_assign(&w);
        }
        let fact: i64 = (1..=rank as i64).product();
        Ok(acc.scale(&ParamPoly::from_int(fact)))
    }

    /// `ψ̄ Γ_I ψ` for fixed lowered indices.
    pub fn bilinear(&self, rep: &GammaRep<C>, idx: &[usize]) -> Result<FormPoly<C>> {
        check_rep(self, rep)?;
        let psi = self.gravitino()?;
        Ok(bar(&psi, &rep.cgamma(idx, &vec![true; idx.len()]), &psi, &self.space))
    }
}

fn check_rep<C: Coeff>(fda: &FdaSpec<C>, rep: &GammaRep<C>) -> Result<()> {
    let n_odd = fda.base.algebra.count_by_parity().1;
    if rep.spinor_size != n_odd || fda.base.algebra.dimension.is_some_and(|d| d != rep.dim) {
        return Err(Error::Representation(format!(
            "representation (D = {}, {} spinor components) does not match {}",
            rep.dim, rep.spinor_size, fda.base.algebra.name
        )));
    }
    Ok(())
}

/// Rows indexed by monomial, columns by polynomial; `extra` is appended as a
/// last column. Returned as columns for convenience.
fn coefficient_matrix<C: Coeff>(polys: &[FormPoly<C>], extra: Option<&FormPoly<C>>) -> Result<(Vec<Vec<C>>, usize)> {
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let all: Vec<&FormPoly<C>> = polys.iter().chain(extra).collect();
    for p in &all {
        for (m, _) in p.terms() {
            let n = index.len();
            index.entry(m.clone()).or_insert(n);
        }
    }
    let n = index.len();
    let mut cols = Vec::with_capacity(all.len());
    for p in &all {
        let mut col = vec![C::zero(); n];
        for (m, c) in p.terms() {
            col[index[m]] = c
                .constant_value()
                .ok_or_else(|| Error::Structural("cochain coefficients must be constants".into()))?;
        }
        cols.push(col);
    }
    Ok((cols, n))
}

fn transpose<C: Coeff>(cols: &[Vec<C>], nrows: usize) -> Vec<Vec<C>> {
    (0..nrows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

pub fn ce_differential<C: Coeff>(c: &Cochain<C>, fda: &FdaSpec<C>) -> Result<Cochain<C>> {
    Cochain::new(fda.ce_differential(&c.poly)?, &fda.space)
}

pub fn extend_fda<C: Coeff>(fda: &FdaSpec<C>, cocycle: &Cochain<C>, name: &str, exact_ansatz: &[FormPoly<C>]) -> Result<FdaSpec<C>> {
    fda.extend(&cocycle.poly, name, &[], exact_ansatz)
}

/// `d²` on every generator of the FDA.
pub fn check_fda_closure<C: Coeff>(fda: &FdaSpec<C>, rep: Option<&GammaRep<C>>) -> Result<NilpotencyReport<C>> {
    if let Some(rep) = rep {
        check_rep(fda, rep)?;
    }
    check_nilpotency(&fda.rules, &fda.space)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleBasis<C> {
    /// Coefficient vectors over the degree-`p` ansatz entries.
    pub vectors: Vec<Vec<C>>,
    /// Indices into the ansatz of the entries of degree `p`.
    pub columns: Vec<usize>,
    /// Set when no ansatz entry has degree `p`.
    pub empty_ansatz: bool,
}

impl<C: Coeff> CocycleBasis<C> {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn cochain(&self, k: usize, ansatz: &[FormPoly<C>]) -> FormPoly<C> {
        let mut acc = FormPoly::zero();
        for (&i, c) in self.columns.iter().zip(&self.vectors[k]) {
            if !c.is_zero() {
                acc.add_assign(&ansatz[i].scale_coeff(c));
            }
        }
        acc
    }
}

/// Closed combinations of the degree-`degree` ansatz entries modulo `d` of
/// the degree-`degree - 1` entries and modulo linear relations among the
/// entries; other degrees are ignored.
pub fn relative_cocycles<C: Coeff>(fda: &FdaSpec<C>, degree: u32, ansatz: &[FormPoly<C>]) -> Result<CocycleBasis<C>> {
    let mut top = Vec::new();
    let mut lower = Vec::new();
    for (i, a) in ansatz.iter().enumerate() {
        let c = Cochain::new(a.clone(), &fda.space)?;
        fda.check_available(a)?;
        if c.poly.is_zero() {
            continue;
        }
        if c.degree == degree {
            top.push(i);
        } else if c.degree + 1 == degree {
            lower.push(i);
        }
    }
    if top.is_empty() {
        return Ok(CocycleBasis { vectors: Vec::new(), columns: top, empty_ansatz: true });
    }
    let images: Vec<FormPoly<C>> = top.iter().map(|&i| fda.ce_differential(&ansatz[i])).collect::<Result<_>>()?;
    let (cols, n) = coefficient_matrix(&images, None)?;
    let d_matrix = transpose(&cols, n);
    let closed = if d_matrix.is_empty() {
        (0..top.len()).map(|k| (0..top.len()).map(|j| if j == k { C::one() } else { C::zero() }).collect()).collect()
    } else {
        kernel(&d_matrix, top.len())
    };

    // combinations that vanish identically, then coboundaries, in ansatz coordinates
    let top_polys: Vec<FormPoly<C>> = top.iter().map(|&i| ansatz[i].clone()).collect();
    let (cols, n) = coefficient_matrix(&top_polys, None)?;
    let mut exact: Vec<Vec<C>> = kernel(&transpose(&cols, n), top.len());
    for &j in &lower {
        let dl = fda.ce_differential(&ansatz[j])?;
        if dl.is_zero() {
            continue;
        }
        let (cols, n) = coefficient_matrix(&top_polys, Some(&dl))?;
        let a = transpose(&cols[..top.len()], n);
        if let Some(x) = solve(&a, &cols[top.len()]) {
            exact.push(x);
        }
    }
    let mut basis = exact;
    let mut r = rank(&basis);
    let mut vectors = Vec::new();
    for v in closed {
        basis.push(v.clone());
        let r2 = rank(&basis);
        if r2 > r {
            r = r2;
            vectors.push(v);
        } else {
            basis.pop();
        }
    }
    Ok(CocycleBasis { vectors, columns: top, empty_ansatz: false })
}

/// Flat super-Poincaré D=11 relative to the Lorentz subalgebra.
pub fn d11_base<C: Coeff>() -> Result<FdaSpec<C>> {
    let alg = crate::algebra::catalog_algebra("super-poincare", &[11, 1])?;
    FdaSpec::lorentz_relative(&soften(&alg, Mode::Flat)?)
}

/// Adds `dA = ½ ψ̄Γ_{ab}ψ V^a V^b`.
pub fn d11_add_three_form<C: Coeff>(base: &FdaSpec<C>, rep: &GammaRep<C>) -> Result<FdaSpec<C>> {
    let c = base.bilinear_vielbein(rep, 2)?.scale(&ParamPoly::from_ratio(-1, 2));
    base.extend(&c, "A", &[], &[])
}

/// Six-form cocycle `-(x A∧dA + y ψ̄Γ_{a1..a5}ψ V^{a1}..V^{a5})` with `dA`
/// replaced by its image.
pub fn d11_six_form_cocycle<C: Coeff>(fda: &FdaSpec<C>, rep: &GammaRep<C>, x: &C, y: &C) -> Result<FormPoly<C>> {
    let a = fda.form("A", &[])?;
    let da = fda.potential_differential("A").ok_or_else(|| Error::Structural("no A step".into()))?;
    let five = fda.bilinear_vielbein(rep, 5)?;
    Ok(a.wedge(&da, &fda.space).scale_coeff(x).add(&five.scale_coeff(y)).neg())
}

/// The D=11 system through `A`, and through `B` when `six_form` is set, with
/// `dB = 15 A∧dA + (i/2) ψ̄Γ_{a1..a5}ψ V^{a1}..V^{a5}`.
pub fn d11_fda<C: Coeff>(rep: &GammaRep<C>, six_form: bool) -> Result<FdaSpec<C>> {
    let fda = d11_add_three_form(&d11_base()?, rep)?;
    if !six_form {
        return Ok(fda);
    }
    let c = d11_six_form_cocycle(&fda, rep, &C::from_int(15), &(C::imag_unit() * C::from_ratio(1, 2)))?;
    fda.extend(&c, "B", &[], &[])
}
