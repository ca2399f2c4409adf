//! Symmetrized products of spinor bilinears.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{combinations, GammaRep};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VecIdx {
    Up(String),
    Down(String),
    /// A fixed component value.
    Fixed { value: usize, lowered: bool },
}

impl VecIdx {
    fn label(&self) -> Option<&str> {
        match self {
            VecIdx::Up(l) | VecIdx::Down(l) => Some(l),
            VecIdx::Fixed { .. } => None,
        }
    }

    fn lowered(&self) -> bool {
        match self {
            VecIdx::Up(_) => false,
            VecIdx::Down(_) => true,
            VecIdx::Fixed { lowered, .. } => *lowered,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Takes part in the total symmetrization.
    Sym,
    Free(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// `(Γ^I)^α_β`
    Gamma,
    /// `(CΓ^I)_{αβ}`
    CGamma,
}

#[derive(Clone, Debug)]
pub struct BilinearFactor {
    pub kind: FactorKind,
    pub indices: Vec<VecIdx>,
    pub slots: [Slot; 2],
}

impl BilinearFactor {
    pub fn cgamma(indices: Vec<VecIdx>) -> Self {
        Self { kind: FactorKind::CGamma, indices, slots: [Slot::Sym, Slot::Sym] }
    }
}

#[derive(Clone, Debug)]
pub struct FierzTerm<C> {
    pub coeff: C,
    pub factors: Vec<BilinearFactor>,
}

#[derive(Clone, Debug)]
pub struct FierzSpec<C> {
    pub terms: Vec<FierzTerm<C>>,
    /// Free vector labels, in output order.
    pub free_vector: Vec<String>,
}

/// Residual entries keyed by (symmetrized spinor multi-index, free spinor
/// values, free vector values); entries are listed in colex order of the
/// symmetrized multi-index.
#[derive(Clone, Debug, PartialEq)]
pub struct FierzResidual<C> {
    pub entries: Vec<(Vec<u16>, Vec<u16>, Vec<u16>, C)>,
}

impl<C: Coeff> FierzResidual<C> {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, sym: &[u16], free_spinor: &[u16], free_vec: &[u16]) -> C {
        self.entries
            .iter()
            .find(|e| e.0 == sym && e.1 == free_spinor && e.2 == free_vec)
            .map_or(C::zero(), |e| e.3.clone())
    }
}

/// Nonzero entries of one factor, grouped by spinor position.
struct FactorTable<C> {
    labels: Vec<Option<String>>,
    by_pos: HashMap<(u16, u16), Vec<(Vec<u16>, C)>>,
}

fn factor_table<C: Coeff>(rep: &GammaRep<C>, f: &BilinearFactor) -> FactorTable<C> {
    let k = f.indices.len();
    let lowered: Vec<bool> = f.indices.iter().map(VecIdx::lowered).collect();
    let fixed: Vec<Option<usize>> =
        f.indices.iter().map(|i| if let VecIdx::Fixed { value, .. } = i { Some(*value) } else { None }).collect();
    let mut by_pos: HashMap<(u16, u16), Vec<(Vec<u16>, C)>> = HashMap::new();
    for set in combinations(rep.dim, k) {
        for perm in permutations(&set) {
            if perm.iter().zip(&fixed).any(|(a, f)| f.is_some_and(|v| v != *a)) {
                continue;
            }
            let m = match f.kind {
                FactorKind::Gamma => rep.gamma(&perm, &lowered),
                FactorKind::CGamma => rep.cgamma(&perm, &lowered),
            };
            let tuple: Vec<u16> = perm.iter().map(|&a| a as u16).collect();
            for (i, j, v) in m.entries() {
                by_pos.entry((i as u16, j as u16)).or_default().push((tuple.clone(), v.clone()));
            }
        }
    }
    FactorTable { labels: f.indices.iter().map(|i| i.label().map(str::to_string)).collect(), by_pos }
}

fn permutations(set: &[usize]) -> Vec<Vec<usize>> {
    if set.len() <= 1 {
        return vec![set.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..set.len() {
        let mut rest = set.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

struct PreparedTerm<C> {
    coeff: C,
    tables: Vec<FactorTable<C>>,
    /// per factor, per slot: either position in the symmetrized tuple or a free spinor label id
    slots: Vec<[SlotRef; 2]>,
}

#[derive(Clone, Copy)]
enum SlotRef {
    Sym(usize),
    Free(usize),
}

fn validate<C>(spec: &FierzSpec<C>) -> Result<(usize, Vec<String>)> {
    let mut sym_count = None;
    let mut free_spinors: Option<Vec<String>> = None;
    for (t, term) in spec.terms.iter().enumerate() {
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        let mut n_sym = 0;
        let mut fs = Vec::new();
        for f in &term.factors {
            for i in &f.indices {
                let Some(l) = i.label() else { continue };
                let e = counts.entry(l).or_default();
                if i.lowered() {
                    e.1 += 1;
                } else {
                    e.0 += 1;
                }
            }
            for s in &f.slots {
                match s {
                    Slot::Sym => n_sym += 1,
                    Slot::Free(l) => fs.push(l.clone()),
                }
            }
        }
        for (label, (up, down)) in &counts {
            let free = spec.free_vector.iter().any(|x| x == label);
            if free {
                if up + down != 1 {
                    return Err(Error::Pattern(format!("free index {label} appears {} times in term {t}", up + down)));
                }
            } else if (*up, *down) != (1, 1) {
                return Err(Error::Pattern(format!(
                    "index {label} in term {t} must appear once up and once down (found {up} up, {down} down)"
                )));
            }
        }
        for fl in &spec.free_vector {
            if !counts.contains_key(fl.as_str()) {
                return Err(Error::Pattern(format!("declared free index {fl} missing from term {t}")));
            }
        }
        let mut sorted = fs.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Pattern(format!("repeated free spinor index in term {t}")));
        }
        match (&sym_count, &free_spinors) {
            (None, _) => {
                sym_count = Some(n_sym);
                free_spinors = Some(sorted);
            }
            (Some(n), Some(f)) => {
                if *n != n_sym || *f != sorted {
                    return Err(Error::Pattern(format!("term {t} has a different spinor index structure")));
                }
            }
            _ => unreachable!(),
        }
    }
    Ok((sym_count.unwrap_or(0), free_spinors.unwrap_or_default()))
}

/// Identities known by name, with the spacetime dimension they live in:
/// `d4-triple` is `(γ^a)^δ_{(α} (Cγ_a)_{βγ)}`, `d11` is
/// `(CΓ_{ab})_{(αβ} (CΓ^a)_{γδ)}` with `b` free, and `d4-control` is the
/// unsymmetrized `(Cγ^a)_{αβ} (Cγ_a)_{γδ}`.
pub fn named_identity<C: Coeff>(name: &str) -> Option<(usize, FierzSpec<C>)> {
    let up = |l: &str| VecIdx::Up(l.into());
    let down = |l: &str| VecIdx::Down(l.into());
    let free = |l: &str| Slot::Free(l.into());
    let single = |factors: Vec<BilinearFactor>, free_vector: Vec<String>| FierzSpec {
        terms: vec![FierzTerm { coeff: C::one(), factors }],
        free_vector,
    };
    match name {
        "d4-triple" => Some((
            4,
            single(
                vec![
                    BilinearFactor { kind: FactorKind::Gamma, indices: vec![up("a")], slots: [free("d"), Slot::Sym] },
                    BilinearFactor::cgamma(vec![down("a")]),
                ],
                vec![],
            ),
        )),
        "d11" => Some((
            11,
            single(
                vec![BilinearFactor::cgamma(vec![down("a"), down("b")]), BilinearFactor::cgamma(vec![up("a")])],
                vec!["b".into()],
            ),
        )),
        "d4-control" => Some((
            4,
            single(
                vec![
                    BilinearFactor { kind: FactorKind::CGamma, indices: vec![up("a")], slots: [free("p"), free("q")] },
                    BilinearFactor { kind: FactorKind::CGamma, indices: vec![down("a")], slots: [free("r"), free("s")] },
                ],
                vec![],
            ),
        )),
        _ => None,
    }
}

/// Full symmetrization over all `Sym` spinor slots of the bilinear product;
/// the empty residual means the identity holds.
pub fn fierz_residual<C: Coeff>(rep: &GammaRep<C>, spec: &FierzSpec<C>) -> Result<FierzResidual<C>> {
    let (n_sym, free_spinors) = validate(spec)?;
    let terms: Vec<PreparedTerm<C>> = spec
        .terms
        .iter()
        .map(|t| {
            let mut pos = 0;
            let slots = t
                .factors
                .iter()
                .map(|f| {
                    let mut r = [SlotRef::Sym(0); 2];
                    for (k, s) in f.slots.iter().enumerate() {
                        r[k] = match s {
                            Slot::Sym => {
                                pos += 1;
                                SlotRef::Sym(pos - 1)
                            }
                            Slot::Free(l) => SlotRef::Free(free_spinors.iter().position(|x| x == l).unwrap()),
                        };
                    }
                    r
                })
                .collect();
            PreparedTerm { coeff: t.coeff.clone(), tables: t.factors.iter().map(|f| factor_table(rep, f)).collect(), slots }
        })
        .collect();

    let n = rep.spinor_size;
    let multis = colex_multisets(n, n_sym);
    let free_assignments = product_space(n, free_spinors.len());
    let free_vec = &spec.free_vector;

    let work: Vec<(usize, usize)> =
        (0..multis.len()).flat_map(|m| (0..free_assignments.len()).map(move |f| (m, f))).collect();
    let entries: Vec<(Vec<u16>, Vec<u16>, Vec<u16>, C)> = work
        .par_iter()
        .flat_map_iter(|&(mi, fi)| {
            let multi = &multis[mi];
            let fs = &free_assignments[fi];
            let arrangements = distinct_arrangements(multi);
            let weight = arrangement_weight::<C>(multi);
            let mut acc: BTreeMap<Vec<u16>, C> = BTreeMap::new();
            for arr in &arrangements {
                for term in &terms {
                    eval_term(term, arr, fs, free_vec, &mut acc);
                }
            }
            acc.into_iter()
                .filter_map(|(fv, v)| {
                    let v = v * weight.clone();
                    (!v.is_zero()).then(|| (multi.clone(), fs.clone(), fv, v))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(FierzResidual { entries })
}

fn eval_term<C: Coeff>(
    term: &PreparedTerm<C>,
    sym: &[u16],
    free: &[u16],
    free_vec: &[String],
    acc: &mut BTreeMap<Vec<u16>, C>,
) {
    let mut lists = Vec::with_capacity(term.tables.len());
    for (table, slots) in term.tables.iter().zip(&term.slots) {
        let pick = |s: SlotRef| match s {
            SlotRef::Sym(p) => sym[p],
            SlotRef::Free(p) => free[p],
        };
        match table.by_pos.get(&(pick(slots[0]), pick(slots[1]))) {
            Some(l) => lists.push(l),
            None => return,
        }
    }
    let mut assign: Vec<(&str, u16)> = Vec::new();
    join(term, &lists, 0, term.coeff.clone(), &mut assign, free_vec, acc);
}

fn join<'a, C: Coeff>(
    term: &'a PreparedTerm<C>,
    lists: &[&'a Vec<(Vec<u16>, C)>],
    k: usize,
    value: C,
    assign: &mut Vec<(&'a str, u16)>,
    free_vec: &[String],
    acc: &mut BTreeMap<Vec<u16>, C>,
) {
    if k == lists.len() {
        let key: Vec<u16> = free_vec
            .iter()
            .map(|l| assign.iter().find(|(x, _)| x == l).map(|(_, v)| *v).unwrap())
            .collect();
        let e = acc.entry(key).or_insert_with(C::zero);
        *e = e.clone() + value;
        return;
    }
    let labels = &term.tables[k].labels;
    'outer: for (tuple, v) in lists[k] {
        let mark = assign.len();
        for (l, x) in labels.iter().zip(tuple) {
            let Some(l) = l else { continue };
            match assign.iter().find(|(y, _)| *y == l.as_str()) {
                Some((_, y)) if y != x => {
                    assign.truncate(mark);
                    continue 'outer;
                }
                Some(_) => {}
                None => assign.push((l.as_str(), *x)),
            }
        }
        join(term, lists, k + 1, value.clone() * v.clone(), assign, free_vec, acc);
        assign.truncate(mark);
    }
}

/// Sorted multi-indices of length `k` over `0..n`, in colex order.
pub fn colex_multisets(n: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; k];
    fn rec(pos: usize, max: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        // fill from the last position down so the last entry varies slowest
        if pos == 0 {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max {
            cur[pos - 1] = v;
            rec(pos - 1, v, cur, out);
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    rec(k, (n - 1) as u16, &mut cur, &mut out);
    out
}

fn product_space(n: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n as u16).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Distinct orderings of a sorted multiset.
pub fn distinct_arrangements(multi: &[u16]) -> Vec<Vec<u16>> {
    let mut cur = multi.to_vec();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// `∏ mult! / n!`, the weight making symmetrization a projector.
fn arrangement_weight<C: Coeff>(multi: &[u16]) -> C {
    let fact = |k: usize| (1..=k as i64).product::<i64>();
    let mut w = 1i64;
    let mut i = 0;
    while i < multi.len() {
        let j = (i..multi.len()).find(|&j| multi[j] != multi[i]).unwrap_or(multi.len());
        w *= fact(j - i);
        i = j;
    }
    C::from_ratio(w, fact(multi.len()))
}
