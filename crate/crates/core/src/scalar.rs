//! Coefficients extended by commuting formal parameters (inverse length, cosmological constant, signs).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::coeff::Coeff;

/// Monomial in formal parameters, sorted by name, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParamMono(SmallVec<[(Arc<str>, u32); 2]>);

impl ParamMono {
    pub fn one() -> Self {
        ParamMono(SmallVec::new())
    }

    pub fn var(name: &str, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let mut v = SmallVec::new();
        v.push((Arc::from(name), exp));
        ParamMono(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.iter().find(|(n, _)| &**n == name).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(n, e)| (&**n, *e))
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out: SmallVec<[(Arc<str>, u32); 2]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.0[i..].iter().cloned());
        out.extend(other.0[j..].iter().cloned());
        ParamMono(out)
    }

    fn without(&self, name: &str) -> (Self, u32) {
        let e = self.exponent(name);
        let v = self.0.iter().filter(|(n, _)| &**n != name).cloned().collect();
        (ParamMono(v), e)
    }
}

impl PartialOrd for ParamMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ParamMono {
    // graded by total degree, then lexicographic
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl fmt::Display for ParamMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (n, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in formal parameters with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoly<C> {
    terms: Vec<(ParamMono, C)>,
}

impl<C: Coeff> ParamPoly<C> {
    pub fn constant(c: C) -> Self {
        if c.is_zero() {
            Self { terms: Vec::new() }
        } else {
            Self { terms: vec![(ParamMono::one(), c)] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::constant(C::from_ratio(n, d))
    }

    pub fn i() -> Self {
        Self::constant(C::imag_unit())
    }

    pub fn param(name: &str) -> Self {
        Self::monomial(C::one(), ParamMono::var(name, 1))
    }

    pub fn monomial(c: C, m: ParamMono) -> Self {
        if c.is_zero() {
            Self { terms: Vec::new() }
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ParamMono, C)>) -> Self {
        let mut v: Vec<(ParamMono, C)> = terms.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(ParamMono, C)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == m => {
                    let s = std::mem::replace(&mut last.1, C::zero());
                    last.1 = s + c;
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(ParamMono, C)] {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Value when the polynomial has no parameter dependence.
    pub fn constant_value(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect() }
    }

    pub fn params(&self) -> Vec<String> {
        let mut v: Vec<String> =
            self.terms.iter().flat_map(|(m, _)| m.factors().map(|(n, _)| n.to_string())).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(name)).max().unwrap_or(0)
    }

    /// Replace a parameter by a polynomial.
    pub fn substitute(&self, name: &str, value: &ParamPoly<C>) -> Self {
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(name);
            let mut t = Self::monomial(c.clone(), rest);
            for _ in 0..e {
                t = &t * value;
            }
            acc += &t;
        }
        acc
    }

    /// Exact division by a parameter; `None` if some term lacks it.
    pub fn divide_by_param(&self, name: &str) -> Option<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let (rest, e) = m.without(name);
            if e == 0 {
                return None;
            }
            out.push((rest.mul(&ParamMono::var(name, e - 1)), c.clone()));
        }
        Some(Self::from_terms(out))
    }

    /// True if `self = k * other` for some nonzero constant k; returns k.
    pub fn ratio_to(&self, other: &Self) -> Option<C> {
        if self.terms.len() != other.terms.len() || self.terms.is_empty() {
            return None;
        }
        let k = self.terms[0].1.clone() / other.terms[0].1.clone();
        for ((m1, c1), (m2, c2)) in self.terms.iter().zip(&other.terms) {
            if m1 != m2 || *c1 != c2.clone() * k.clone() {
                return None;
            }
        }
        Some(k)
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    /// Map coefficients into another ring.
    pub fn map_coeff<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ParamPoly<D> {
        ParamPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.terms.is_empty() {
            return self.clone();
        }
        if self.terms.is_empty() {
            return if negate { -other.clone() } else { other.clone() };
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sgn = |c: &C| if negate { -c.clone() } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((other.terms[j].0.clone(), sgn(&other.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.terms[i].1.clone() + sgn(&other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), sgn(c))));
        Self { terms: out }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.terms.is_empty() || other.terms.is_empty() {
            return Self::zero();
        }
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (m1, c1) = &self.terms[0];
            let (m2, c2) = &other.terms[0];
            return Self::monomial(c1.clone() * c2.clone(), m1.mul(m2));
        }
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                v.push((m1.mul(m2), c1.clone() * c2.clone()));
            }
        }
        Self::from_terms(v)
    }
}

impl<C: Coeff> Zero for ParamPoly<C> {
    fn zero() -> Self {
        Self { terms: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for ParamPoly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Coeff> From<C> for ParamPoly<C> {
    fn from(c: C) -> Self {
        Self::constant(c)
    }
}

impl<C: Coeff> Add for ParamPoly<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_impl(&o, false)
    }
}
impl<C: Coeff> Add<&ParamPoly<C>> for &ParamPoly<C> {
    type Output = ParamPoly<C>;
    fn add(self, o: &ParamPoly<C>) -> ParamPoly<C> {
        self.add_impl(o, false)
    }
}
impl<C: Coeff> Sub for ParamPoly<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.add_impl(&o, true)
    }
}
impl<C: Coeff> Sub<&ParamPoly<C>> for &ParamPoly<C> {
    type Output = ParamPoly<C>;
    fn sub(self, o: &ParamPoly<C>) -> ParamPoly<C> {
        self.add_impl(o, true)
    }
}
impl<C: Coeff> Mul for ParamPoly<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_impl(&o)
    }
}
impl<C: Coeff> Mul<&ParamPoly<C>> for &ParamPoly<C> {
    type Output = ParamPoly<C>;
    fn mul(self, o: &ParamPoly<C>) -> ParamPoly<C> {
        self.mul_impl(o)
    }
}
impl<C: Coeff> Neg for ParamPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}
impl<C: Coeff> AddAssign<&ParamPoly<C>> for ParamPoly<C> {
    fn add_assign(&mut self, o: &ParamPoly<C>) {
        *self = self.add_impl(o, false);
    }
}
impl<C: Coeff> SubAssign<&ParamPoly<C>> for ParamPoly<C> {
    fn sub_assign(&mut self, o: &ParamPoly<C>) {
        *self = self.add_impl(o, true);
    }
}

impl<C: Coeff> fmt::Display for ParamPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_exact_string();
            let needs_paren = cs[1..].contains(['+', '-']);
            let cs = if needs_paren { format!("({cs})") } else { cs };
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{m}")?;
            } else if cs == "-1" {
                write!(f, "-{m}")?;
            } else {
                write!(f, "{cs}*{m}")?;
            }
        }
        Ok(())
    }
}
