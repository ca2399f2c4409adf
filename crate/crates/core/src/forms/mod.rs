//! Bigraded exterior algebra on a registry of generator forms.
//!
//! Two generators commute with sign `(-1)^{t1 t2}` where `t = p + ε mod 2` is
//! the total parity. A monomial is a canonically sorted list of generator ids;
//! the sort key is (class, registration order).

mod rules;
mod sector;
mod spinor;

pub use rules::{apply_derivation, check_nilpotency, differential, DifferentialRuleSet, NilpotencyReport};
pub use sector::{generic_expansion, sector_decompose};
pub use spinor::{bar, spinor_apply, SpinorForm};

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::algebra::{label, Parity};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::scalar::ParamPoly;

/// Generator classes in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormClass {
    Variation,
    VariationD,
    Gauge,
    GaugeD,
    Component,
    Connection,
    ConnectionD,
    Curvature,
    Potential,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorForm {
    pub name: String,
    pub index: Vec<u16>,
    pub degree: u8,
    pub parity: Parity,
    pub class: FormClass,
}

impl GeneratorForm {
    pub fn total_parity(&self) -> u8 {
        (self.degree + self.parity.bit()) % 2
    }

    pub fn label(&self) -> String {
        label(&self.name, &self.index)
    }
}

#[derive(Clone, Debug, Default)]
pub struct FormSpace {
    gens: Vec<GeneratorForm>,
    keys: Vec<u64>,
    odd: Vec<bool>,
    lookup: HashMap<(FormClass, String, Vec<u16>), u32>,
}

impl FormSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a generator; re-registering the same (class, name, index) with
    /// identical data returns the existing id.
    pub fn add(&mut self, g: GeneratorForm) -> Result<u32> {
        let key = (g.class, g.name.clone(), g.index.clone());
        if let Some(&id) = self.lookup.get(&key) {
            if self.gens[id as usize] != g {
                return Err(Error::Structural(format!("generator {} redeclared differently", g.label())));
            }
            return Ok(id);
        }
        let id = self.gens.len() as u32;
        self.keys.push(((g.class as u64) << 32) | id as u64);
        self.odd.push(g.total_parity() == 1);
        self.gens.push(g);
        self.lookup.insert(key, id);
        Ok(id)
    }

    pub fn add_simple(&mut self, name: &str, index: &[u16], degree: u8, parity: Parity, class: FormClass) -> Result<u32> {
        self.add(GeneratorForm { name: name.to_string(), index: index.to_vec(), degree, parity, class })
    }

    pub fn get(&self, id: u32) -> &GeneratorForm {
        &self.gens[id as usize]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> {
        0..self.gens.len() as u32
    }

    pub fn find(&self, class: FormClass, name: &str, index: &[u16]) -> Option<u32> {
        self.lookup.get(&(class, name.to_string(), index.to_vec())).copied()
    }

    /// Look up by label in any class; the first registered match wins.
    pub fn find_label(&self, label: &str) -> Option<u32> {
        self.gens.iter().position(|g| g.label() == label).map(|i| i as u32)
    }

    pub fn is_odd(&self, id: u32) -> bool {
        self.odd[id as usize]
    }

    pub fn key(&self, id: u32) -> u64 {
        self.keys[id as usize]
    }

    pub fn degree(&self, id: u32) -> u8 {
        self.gens[id as usize].degree
    }

    /// Sort a factor sequence; returns the sign flip flag or `None` if zero.
    pub fn canonicalize(&self, seq: &mut [u32]) -> Option<bool> {
        let mut flip = false;
        for i in 1..seq.len() {
            let mut j = i;
            while j > 0 && self.key(seq[j - 1]) > self.key(seq[j]) {
                if self.is_odd(seq[j - 1]) && self.is_odd(seq[j]) {
                    flip = !flip;
                }
                seq.swap(j - 1, j);
                j -= 1;
            }
        }
        for w in seq.windows(2) {
            if w[0] == w[1] && self.is_odd(w[0]) {
                return None;
            }
        }
        Some(flip)
    }

    /// Product of two canonical monomials.
    pub fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Option<(bool, Monomial)> {
        let mut out = Monomial::with_capacity(a.len() + b.len());
        // odd factors of `a` not yet emitted
        let mut odd_left = a.iter().filter(|&&x| self.is_odd(x)).count();
        let mut flip = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (ka, kb) = (self.key(a[i]), self.key(b[j]));
            if ka == kb && self.is_odd(a[i]) {
                return None;
            }
            if ka <= kb {
                if self.is_odd(a[i]) {
                    odd_left -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else {
                if self.is_odd(b[j]) && odd_left % 2 == 1 {
                    flip = !flip;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((flip, out))
    }

    pub fn monomial_degree(&self, m: &[u32]) -> u32 {
        m.iter().map(|&x| self.degree(x) as u32).sum()
    }

    pub fn monomial_parity(&self, m: &[u32]) -> u8 {
        m.iter().map(|&x| self.gens[x as usize].parity.bit()).sum::<u8>() % 2
    }

    pub fn monomial_total_parity(&self, m: &[u32]) -> bool {
        m.iter().filter(|&&x| self.is_odd(x)).count() % 2 == 1
    }

    pub fn render_monomial(&self, m: &[u32]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = m.iter().map(|&x| self.get(x).label()).collect();
        parts.join(" ^ ")
    }
}

pub type Monomial = SmallVec<[u32; 8]>;

/// Sparse sum of monomials with parameter-polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FormPoly<C> {
    terms: HashMap<Monomial, ParamPoly<C>>,
}

impl<C: Coeff> Default for FormPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

const PAR_THRESHOLD: usize = 512;

impl<C: Coeff> FormPoly<C> {
    pub fn zero() -> Self {
        Self { terms: HashMap::new() }
    }

    pub fn one() -> Self {
        Self::term(Monomial::new(), ParamPoly::one())
    }

    pub fn constant(c: ParamPoly<C>) -> Self {
        Self::term(Monomial::new(), c)
    }

    pub fn term(m: Monomial, c: ParamPoly<C>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(id: u32) -> Self {
        Self::term(Monomial::from_slice(&[id]), ParamPoly::one())
    }

    /// Product of generators in the given order, canonicalized.
    pub fn word(space: &FormSpace, ids: &[u32]) -> Self {
        let mut seq: Monomial = ids.iter().copied().collect();
        match space.canonicalize(&mut seq) {
            None => Self::zero(),
            Some(flip) => Self::term(seq, if flip { -ParamPoly::one() } else { ParamPoly::one() }),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: ParamPoly<C>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn add_signed(&mut self, m: Monomial, c: &ParamPoly<C>, negate: bool) {
        if negate {
            self.add_term(m, -c.clone());
        } else {
            self.add_term(m, c.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamPoly<C>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> ParamPoly<C> {
        self.terms.get(m).cloned().unwrap_or_else(ParamPoly::zero)
    }

    /// Terms sorted by canonical monomial order.
    pub fn sorted_terms(&self, space: &FormSpace) -> Vec<(&Monomial, &ParamPoly<C>)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let ka: Vec<u64> = a.0.iter().map(|&x| space.key(x)).collect();
            let kb: Vec<u64> = b.0.iter().map(|&x| space.key(x)).collect();
            ka.len().cmp(&kb.len()).then(ka.cmp(&kb))
        });
        v
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, c: &ParamPoly<C>) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn scale_coeff(&self, c: &C) -> Self {
        self.scale(&ParamPoly::constant(c.clone()))
    }

    pub fn wedge(&self, o: &Self, space: &FormSpace) -> Self {
        let pair = |(ma, ca): (&Monomial, &ParamPoly<C>), acc: &mut Self| {
            for (mb, cb) in &o.terms {
                if let Some((flip, m)) = space.mul_monomials(ma, mb) {
                    acc.add_signed(m, &(ca * cb), flip);
                }
            }
        };
        if self.terms.len() * o.terms.len() < PAR_THRESHOLD * 8 {
            let mut acc = Self::zero();
            for t in &self.terms {
                pair(t, &mut acc);
            }
            acc
        } else {
            let items: Vec<_> = self.terms.iter().collect();
            items
                .par_iter()
                .fold(Self::zero, |mut acc, t| {
                    pair(*t, &mut acc);
                    acc
                })
                .reduce(Self::zero, |mut a, b| {
                    a.add_assign(&b);
                    a
                })
        }
    }

    /// Homogeneous form degree, `None` if mixed or zero.
    pub fn degree(&self, space: &FormSpace) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| space.monomial_degree(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Total commutation parity if homogeneous.
    pub fn total_parity(&self, space: &FormSpace) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| space.monomial_total_parity(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn contains_generator(&self, id: u32) -> bool {
        self.terms.keys().any(|m| m.contains(&id))
    }

    pub fn generators(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().flat_map(|m| m.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn map_params(&self, f: impl Fn(&ParamPoly<C>) -> ParamPoly<C>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn substitute_param(&self, name: &str, value: &ParamPoly<C>) -> Self {
        self.map_params(|c| c.substitute(name, value))
    }

    /// Algebra homomorphism sending listed generators to polynomials.
    pub fn substitute(&self, map: &HashMap<u32, FormPoly<C>>, space: &FormSpace) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if !m.iter().any(|x| map.contains_key(x)) {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let mut acc = Self::constant(c.clone());
            for x in m {
                let f = match map.get(x) {
                    Some(p) => p.clone(),
                    None => Self::generator(*x),
                };
                acc = acc.wedge(&f, space);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Move generators between spaces by (class, name, index).
    pub fn translate(&self, from: &FormSpace, to: &FormSpace) -> Result<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut seq = Monomial::new();
            for &x in m {
                let g = from.get(x);
                let y = to
                    .find(g.class, &g.name, &g.index)
                    .ok_or_else(|| Error::Structural(format!("{} has no counterpart", g.label())))?;
                seq.push(y);
            }
            match to.canonicalize(&mut seq) {
                None => {}
                Some(flip) => out.add_signed(seq, c, flip),
            }
        }
        Ok(out)
    }

    /// `self = k * other` for a nonzero constant `k`.
    pub fn proportional(&self, other: &Self) -> Option<C> {
        let (m0, c0) = other.terms.iter().find_map(|(m, c)| Some((m, c.constant_value()?)))?;
        let k = self.terms.get(m0)?.constant_value()? / c0;
        if k.is_zero() {
            return None;
        }
        (self.sub(&other.scale_coeff(&k)).is_zero()).then_some(k)
    }

    pub fn render(&self, space: &FormSpace) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.sorted_terms(space).into_iter().enumerate() {
            let cs = format!("{c}");
            let cs = if c.terms().len() > 1 || cs[1..].contains(['+', '-']) { format!("({cs})") } else { cs };
            let body = space.render_monomial(m);
            let piece = if m.is_empty() {
                cs
            } else if cs == "1" {
                body
            } else if cs == "-1" {
                format!("-{body}")
            } else {
                format!("{cs} {body}")
            };
            if k == 0 {
                s.push_str(&piece);
            } else if let Some(rest) = piece.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(&piece);
            }
        }
        s
    }
}

/// Displays a polynomial against its space.
pub struct Rendered<'a, C>(pub &'a FormPoly<C>, pub &'a FormSpace);

impl<C: Coeff> fmt::Display for Rendered<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.render(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussianRational as Q;

    type P = FormPoly<Q>;

    fn space() -> (FormSpace, u32, u32, u32, u32) {
        let mut s = FormSpace::new();
        let v0 = s.add_simple("V", &[0], 1, Parity::Even, FormClass::Connection).unwrap();
        let v1 = s.add_simple("V", &[1], 1, Parity::Even, FormClass::Connection).unwrap();
        let p1 = s.add_simple("psi", &[1], 1, Parity::Odd, FormClass::Connection).unwrap();
        let p2 = s.add_simple("psi", &[2], 1, Parity::Odd, FormClass::Connection).unwrap();
        (s, v0, v1, p1, p2)
    }

    #[test]
    fn commutation_signs() {
        let (s, v0, v1, p1, p2) = space();
        let vv = P::word(&s, &[v0, v1]);
        assert!(vv.wedge(&P::generator(v0), &s).is_zero());
        assert_eq!(P::word(&s, &[p2, p1]), P::word(&s, &[p1, p2]));
        assert_eq!(P::word(&s, &[v1, v0]), P::word(&s, &[v0, v1]).neg());
        assert_eq!(P::word(&s, &[p1, v0]), P::word(&s, &[v0, p1]));
        // gravitinos may repeat
        assert!(!P::word(&s, &[p1, p1]).is_zero());
        assert_eq!(P::word(&s, &[v1, p1, v0]).render(&s), "-V[0] ^ V[1] ^ psi[1]");
    }

    #[test]
    fn translate_between_spaces() {
        let (s, v0, v1, ..) = space();
        let mut t = FormSpace::new();
        let w1 = t.add_simple("V", &[1], 1, Parity::Even, FormClass::Connection).unwrap();
        let w0 = t.add_simple("V", &[0], 1, Parity::Even, FormClass::Connection).unwrap();
        let p = P::word(&s, &[v0, v1]);
        assert_eq!(p.translate(&s, &t).unwrap(), P::word(&t, &[w0, w1]));
    }

    #[test]
    fn proportional_skips_parametric_terms() {
        let (s, v0, v1, p1, _) = space();
        let lam = crate::Scalar::param("Lambda");
        let q = P::word(&s, &[v0, v1]).scale(&lam).add(&P::word(&s, &[v0, p1]));
        let two = <Q as crate::Coeff>::from_int(2);
        for _ in 0..8 {
            assert_eq!(q.scale_coeff(&two).proportional(&q), Some(two.clone()));
        }
        assert_eq!(P::word(&s, &[v0, v1]).proportional(&q), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mixed_space() -> FormSpace {
            let mut s = FormSpace::new();
            s.add_simple("V", &[0], 1, Parity::Even, FormClass::Connection).unwrap();
            s.add_simple("V", &[1], 1, Parity::Even, FormClass::Connection).unwrap();
            s.add_simple("psi", &[0], 1, Parity::Odd, FormClass::Connection).unwrap();
            s.add_simple("F", &[], 2, Parity::Even, FormClass::Curvature).unwrap();
            s.add_simple("phi", &[], 0, Parity::Even, FormClass::Component).unwrap();
            s.add_simple("eta", &[], 0, Parity::Odd, FormClass::Component).unwrap();
            s
        }

        fn word() -> impl Strategy<Value = (i64, Vec<u32>)> {
            (-3i64..=3, prop::collection::vec(0u32..6, 0..4))
        }

        fn poly(s: &FormSpace, ws: &[(i64, Vec<u32>)]) -> P {
            let mut p = P::zero();
            for (c, w) in ws {
                p.add_assign(&P::word(s, w).scale(&ParamPoly::from_int(*c)));
            }
            p
        }

        fn poly_of_parity(s: &FormSpace, ws: &[(i64, Vec<u32>)], odd: bool) -> P {
            let keep: Vec<(i64, Vec<u32>)> = ws.iter().filter(|(_, w)| odd_word(s, w) == odd).cloned().collect();
            poly(s, &keep)
        }

        fn odd_word(s: &FormSpace, w: &[u32]) -> bool {
            w.iter().filter(|&&x| s.is_odd(x)).count() % 2 == 1
        }

        proptest! {
            #[test]
            fn wedge_is_associative(a in prop::collection::vec(word(), 0..4),
                                    b in prop::collection::vec(word(), 0..4),
                                    c in prop::collection::vec(word(), 0..4)) {
                let s = mixed_space();
                let (a, b, c) = (poly(&s, &a), poly(&s, &b), poly(&s, &c));
                prop_assert_eq!(a.wedge(&b, &s).wedge(&c, &s), a.wedge(&b.wedge(&c, &s), &s));
            }

            #[test]
            fn wedge_is_graded_commutative(x in word(), y in word()) {
                let s = mixed_space();
                let (a, b) = (P::word(&s, &x.1), P::word(&s, &y.1));
                let sign = odd_word(&s, &x.1) && odd_word(&s, &y.1);
                let ba = b.wedge(&a, &s);
                prop_assert_eq!(a.wedge(&b, &s), if sign { ba.neg() } else { ba });
            }

            #[test]
            fn derivations_obey_leibniz(x in word(), y in word(),
                                        imgs in prop::collection::vec(prop::collection::vec(word(), 0..3), 6),
                                        odd in any::<bool>()) {
                let s = mixed_space();
                let images: Vec<P> = imgs
                    .iter()
                    .enumerate()
                    .map(|(i, w)| poly_of_parity(&s, w, s.is_odd(i as u32) != odd))
                    .collect();
                let der = |p: &P| apply_derivation(p, &s, &|i| Some(images[i as usize].clone()), odd, true).unwrap();
                let (a, b) = (P::word(&s, &x.1), P::word(&s, &y.1));
                let lhs = der(&a.wedge(&b, &s));
                let second = a.wedge(&der(&b), &s);
                let second = if odd && odd_word(&s, &x.1) { second.neg() } else { second };
                prop_assert_eq!(lhs, der(&a).wedge(&b, &s).add(&second));
            }

            #[test]
            fn substitution_is_multiplicative(x in word(), y in word(),
                                              imgs in prop::collection::vec(prop::collection::vec(word(), 0..3), 2)) {
                let s = mixed_space();
                let mut map = HashMap::new();
                map.insert(3u32, poly_of_parity(&s, &imgs[0], false));
                map.insert(4u32, poly_of_parity(&s, &imgs[1], false));
                let (a, b) = (P::word(&s, &x.1), P::word(&s, &y.1));
                let lhs = a.wedge(&b, &s).substitute(&map, &s);
                let rhs = a.substitute(&map, &s).wedge(&b.substitute(&map, &s), &s);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
