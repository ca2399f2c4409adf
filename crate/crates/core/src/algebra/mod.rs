//! Lie superalgebras given by structure constants.

mod catalog;
mod matrix;

pub use catalog::{catalog_algebra, conformal_grading, jacobi_mutation, CatalogEntry, CATALOG_SUITE};
pub use matrix::MatrixAlgebraBuilder;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::scalar::ParamPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexSymmetry {
    Plain,
    /// Strictly increasing indices.
    Antisymmetric,
    /// Non-decreasing indices.
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub index: Vec<u16>,
    pub symmetry: IndexSymmetry,
    pub parity: Parity,
}

impl Generator {
    pub fn new(name: &str, index: &[u16], parity: Parity) -> Self {
        let symmetry = if index.len() >= 2 { IndexSymmetry::Antisymmetric } else { IndexSymmetry::Plain };
        Self { name: name.to_string(), index: index.to_vec(), symmetry, parity }
    }

    pub fn scalar(name: &str, parity: Parity) -> Self {
        Self::new(name, &[], parity)
    }

    pub fn label(&self) -> String {
        label(&self.name, &self.index)
    }

    fn index_is_canonical(&self) -> bool {
        match self.symmetry {
            IndexSymmetry::Plain => true,
            IndexSymmetry::Antisymmetric => self.index.windows(2).all(|w| w[0] < w[1]),
            IndexSymmetry::Symmetric => self.index.windows(2).all(|w| w[0] <= w[1]),
        }
    }
}

pub fn label(name: &str, index: &[u16]) -> String {
    if index.is_empty() {
        name.to_string()
    } else {
        let parts: Vec<String> = index.iter().map(|i| i.to_string()).collect();
        format!("{}[{}]", name, parts.join(" "))
    }
}

/// `C^A_{BC}` stored for `B <= C`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<C> {
    n: usize,
    table: BTreeMap<(usize, usize), BTreeMap<usize, ParamPoly<C>>>,
}

/// Conflicting entries met while normalizing raw constants.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymmetryDefect<C> {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub residual: ParamPoly<C>,
}

impl<C: Coeff> StructureConstants<C> {
    pub fn empty(n: usize) -> Self {
        Self { n, table: BTreeMap::new() }
    }

    fn swap_sign(parities: &[Parity], b: usize, c: usize) -> bool {
        // C^A_{CB} = -(-1)^{ε_B ε_C} C^A_{BC}; returns true when the factor is -1
        parities[b].bit() * parities[c].bit() == 0
    }

    /// Normalize a raw list `(A, B, C, value)` in which each ordered pair may
    /// appear in either order. Duplicate entries in the same order add up.
    pub fn normalize(
        parities: &[Parity],
        raw: &[(usize, usize, usize, ParamPoly<C>)],
    ) -> Result<(Self, Vec<AntisymmetryDefect<C>>)> {
        let n = parities.len();
        let mut lower: BTreeMap<(usize, usize, usize), ParamPoly<C>> = BTreeMap::new();
        let mut upper: BTreeMap<(usize, usize, usize), ParamPoly<C>> = BTreeMap::new();
        for (a, b, c, v) in raw {
            if *a >= n || *b >= n || *c >= n {
                return Err(Error::Structural(format!("constant ({a}, {b}, {c}) references an undeclared generator")));
            }
            if b <= c {
                *lower.entry((*a, *b, *c)).or_insert_with(ParamPoly::zero) += v;
            } else {
                let v = if Self::swap_sign(parities, *b, *c) { -v.clone() } else { v.clone() };
                *upper.entry((*a, *c, *b)).or_insert_with(ParamPoly::zero) += &v;
            }
        }
        let mut defects = Vec::new();
        let mut out = Self::empty(n);
        let keys: BTreeSet<(usize, usize, usize)> = lower.keys().chain(upper.keys()).cloned().collect();
        for k in keys {
            let (a, b, c) = k;
            let v = match (lower.get(&k), upper.get(&k)) {
                (Some(x), Some(y)) => {
                    let d = x - y;
                    if !d.is_zero() {
                        defects.push(AntisymmetryDefect { a, b, c, residual: d });
                    }
                    x.clone()
                }
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            };
            if b == c && !v.is_zero() && parities[b] == Parity::Even {
                defects.push(AntisymmetryDefect { a, b, c, residual: v.clone() });
            }
            out.set_canonical(a, b, c, v);
        }
        Ok((out, defects))
    }

    fn set_canonical(&mut self, a: usize, b: usize, c: usize, v: ParamPoly<C>) {
        debug_assert!(b <= c);
        let e = self.table.entry((b, c)).or_default();
        if v.is_zero() {
            e.remove(&a);
        } else {
            e.insert(a, v);
        }
        if e.is_empty() {
            self.table.remove(&(b, c));
        }
    }

    /// Both halves, as a raw list.
    pub fn to_raw(&self, parities: &[Parity]) -> Vec<(usize, usize, usize, ParamPoly<C>)> {
        let mut v = Vec::new();
        for ((b, c), m) in &self.table {
            for (a, x) in m {
                v.push((*a, *b, *c, x.clone()));
                if b != c {
                    let y = if Self::swap_sign(parities, *b, *c) { -x.clone() } else { x.clone() };
                    v.push((*a, *c, *b, y));
                }
            }
        }
        v
    }

    /// Canonical entries `(A, B, C, value)` with `B <= C`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &ParamPoly<C>)> {
        self.table.iter().flat_map(|((b, c), m)| m.iter().map(move |(a, v)| (*a, *b, *c, v)))
    }

    pub fn len(&self) -> usize {
        self.table.values().map(|m| m.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

#[derive(Clone, Debug)]
pub struct SuperAlgebra<C> {
    pub name: String,
    generators: Vec<Generator>,
    constants: StructureConstants<C>,
    defects: Vec<AntisymmetryDefect<C>>,
    pub dimension: Option<usize>,
    pub signature: Option<(usize, usize)>,
    /// Conventions used to fix the constants.
    pub notes: String,
    lookup: HashMap<(String, Vec<u16>), usize>,
    full: HashMap<(usize, usize), Vec<(usize, ParamPoly<C>)>>,
}

/// Jacobi failure on a sorted generator triple.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiFailure<C> {
    pub triple: (usize, usize, usize),
    pub residual: Vec<(usize, ParamPoly<C>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParityViolation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Clone, Debug)]
pub struct ValidationReport<C> {
    pub antisymmetry: Vec<AntisymmetryDefect<C>>,
    pub parity: Vec<ParityViolation>,
    pub jacobi: Vec<JacobiFailure<C>>,
    pub triples_checked: usize,
}

impl<C> ValidationReport<C> {
    pub fn passed(&self) -> bool {
        self.antisymmetry.is_empty() && self.parity.is_empty() && self.jacobi.is_empty()
    }
}

impl<C: Coeff> SuperAlgebra<C> {
    pub fn new(
        name: &str,
        generators: Vec<Generator>,
        raw: &[(usize, usize, usize, ParamPoly<C>)],
    ) -> Result<Self> {
        let mut lookup = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if !g.index_is_canonical() {
                return Err(Error::Structural(format!("generator {} has a non-canonical index", g.label())));
            }
            if lookup.insert((g.name.clone(), g.index.clone()), i).is_some() {
                return Err(Error::Structural(format!("duplicate generator {}", g.label())));
            }
        }
        let parities: Vec<Parity> = generators.iter().map(|g| g.parity).collect();
        let (constants, defects) = StructureConstants::normalize(&parities, raw)?;
        Ok(Self::assemble(name, generators, constants, defects, lookup))
    }

    fn assemble(
        name: &str,
        generators: Vec<Generator>,
        constants: StructureConstants<C>,
        defects: Vec<AntisymmetryDefect<C>>,
        lookup: HashMap<(String, Vec<u16>), usize>,
    ) -> Self {
        let parities: Vec<Parity> = generators.iter().map(|g| g.parity).collect();
        let mut full: HashMap<(usize, usize), Vec<(usize, ParamPoly<C>)>> = HashMap::new();
        for (a, b, c, v) in constants.to_raw(&parities) {
            full.entry((b, c)).or_default().push((a, v));
        }
        Self {
            name: name.to_string(),
            generators,
            constants,
            defects,
            dimension: None,
            signature: None,
            notes: String::new(),
            lookup,
            full,
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn constants(&self) -> &StructureConstants<C> {
        &self.constants
    }

    pub fn parity(&self, a: usize) -> Parity {
        self.generators[a].parity
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.generators.iter().map(|g| g.parity).collect()
    }

    pub fn count_by_parity(&self) -> (usize, usize) {
        let odd = self.generators.iter().filter(|g| g.parity == Parity::Odd).count();
        (self.generators.len() - odd, odd)
    }

    pub fn index_of(&self, name: &str, index: &[u16]) -> Option<usize> {
        self.lookup.get(&(name.to_string(), index.to_vec())).copied()
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label() == label)
    }

    /// `[T_B, T_C] = Σ_A C^A_{BC} T_A`.
    pub fn bracket(&self, b: usize, c: usize) -> &[(usize, ParamPoly<C>)] {
        self.full.get(&(b, c)).map_or(&[], |v| v.as_slice())
    }

    pub fn constant(&self, a: usize, b: usize, c: usize) -> ParamPoly<C> {
        self.bracket(b, c).iter().find(|(x, _)| *x == a).map_or_else(ParamPoly::zero, |(_, v)| v.clone())
    }

    /// Same algebra with `delta` added to `C^A_{BC}` (and its mirror).
    pub fn mutate(&self, a: usize, b: usize, c: usize, delta: ParamPoly<C>) -> Result<Self> {
        let mut raw = self.constants.to_raw(&self.parities());
        raw.retain(|(_, x, y, _)| x <= y);
        let parities = self.parities();
        let (b, c, delta) = if b > c {
            let flip = StructureConstants::<C>::swap_sign(&parities, b, c);
            (c, b, if flip { -delta } else { delta })
        } else {
            (b, c, delta)
        };
        raw.push((a, b, c, delta));
        let mut out = Self::new(&format!("{}~mutated", self.name), self.generators.clone(), &raw)?;
        out.dimension = self.dimension;
        out.signature = self.signature;
        Ok(out)
    }

    /// Jacobiator `(-1)^{ε_X ε_Z}[X,[Y,Z]] + cyclic`.
    pub fn jacobiator(&self, x: usize, y: usize, z: usize) -> Vec<(usize, ParamPoly<C>)> {
        let mut acc: BTreeMap<usize, ParamPoly<C>> = BTreeMap::new();
        let e = |i: usize| self.generators[i].parity.bit();
        for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
            let neg = e(p) * e(r) == 1;
            for (d, c1) in self.bracket(q, r) {
                for (out, c2) in self.bracket(p, *d) {
                    let v = c1 * c2;
                    let slot = acc.entry(*out).or_insert_with(ParamPoly::zero);
                    if neg {
                        *slot -= &v;
                    } else {
                        *slot += &v;
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

impl<C: Coeff> fmt::Display for SuperAlgebra<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (e, o) = self.count_by_parity();
        write!(f, "{} ({} even, {} odd)", self.name, e, o)
    }
}

pub fn validate_algebra<C: Coeff>(alg: &SuperAlgebra<C>) -> Result<ValidationReport<C>> {
    let n = alg.len();
    for (a, b, c, _) in alg.constants.entries() {
        if a >= n || b >= n || c >= n {
            return Err(Error::Structural(format!("constant ({a}, {b}, {c}) references an undeclared generator")));
        }
    }
    let parity: Vec<ParityViolation> = alg
        .constants
        .entries()
        .filter(|(a, b, c, _)| alg.parity(*a).bit() != (alg.parity(*b).bit() + alg.parity(*c).bit()) % 2)
        .map(|(a, b, c, _)| ParityViolation { a, b, c })
        .collect();
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|x| (x..n).flat_map(move |y| (y..n).map(move |z| (x, y, z)))).collect();
    let mut jacobi: Vec<JacobiFailure<C>> = triples
        .par_iter()
        .filter_map(|&(x, y, z)| {
            let r = alg.jacobiator(x, y, z);
            (!r.is_empty()).then(|| JacobiFailure { triple: (x, y, z), residual: r })
        })
        .collect();
    jacobi.sort_by_key(|f| f.triple);
    Ok(ValidationReport { antisymmetry: alg.defects.clone(), parity, jacobi, triples_checked: triples.len() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitReport {
    pub subalgebra: Vec<usize>,
    pub complement: Vec<usize>,
    pub is_subalgebra_closed: bool,
    pub is_reductive: bool,
    pub grading: Option<Vec<i32>>,
    pub grading_verified: bool,
}

pub fn analyze_split<C: Coeff>(
    alg: &SuperAlgebra<C>,
    subset: &[usize],
    grading_hint: Option<&[i32]>,
) -> Result<SplitReport> {
    let n = alg.len();
    if subset.is_empty() {
        return Err(Error::Structural("split subset is empty".into()));
    }
    let mut sub: Vec<usize> = subset.to_vec();
    sub.sort_unstable();
    sub.dedup();
    if let Some(&bad) = sub.iter().find(|&&i| i >= n) {
        return Err(Error::Structural(format!("split references undeclared generator {bad}")));
    }
    let in_sub: Vec<bool> = (0..n).map(|i| sub.binary_search(&i).is_ok()).collect();
    let complement: Vec<usize> = (0..n).filter(|&i| !in_sub[i]).collect();
    let closed = sub.iter().all(|&b| sub.iter().all(|&c| alg.bracket(b, c).iter().all(|(a, _)| in_sub[*a])));
    let reductive = closed
        && sub.iter().all(|&b| complement.iter().all(|&c| alg.bracket(b, c).iter().all(|(a, _)| !in_sub[*a])));
    let (grading, grading_verified) = match grading_hint {
        None => (None, false),
        Some(g) => {
            if g.len() != n {
                return Err(Error::Structural(format!("grading has {} entries for {} generators", g.len(), n)));
            }
            let ok = (0..n).all(|b| (0..n).all(|c| alg.bracket(b, c).iter().all(|(a, _)| g[*a] == g[b] + g[c])));
            (Some(g.to_vec()), ok)
        }
    };
    Ok(SplitReport {
        subalgebra: sub,
        complement,
        is_subalgebra_closed: closed,
        is_reductive: reductive,
        grading,
        grading_verified,
    })
}
