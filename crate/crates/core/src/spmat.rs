//! Sparse square matrices over an exact field.


use crate::coeff::Coeff;

#[derive(Clone, Debug, PartialEq)]
pub struct SpMat<C> {
    n: usize,
    rows: Vec<Vec<(usize, C)>>,
}

impl<C: Coeff> SpMat<C> {
    pub fn zeros(n: usize) -> Self {
        Self { n, rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_entries(n, (0..n).map(|i| (i, i, C::one())))
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, C)>) -> Self {
        let mut m = Self::zeros(n);
        for (i, j, v) in entries {
            m.add_at(i, j, v);
        }
        m
    }

    pub fn from_dense(d: &[Vec<C>]) -> Self {
        let n = d.len();
        Self::from_entries(
            n,
            d.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<C>> {
        let mut d = vec![vec![C::zero(); self.n]; self.n];
        for (i, j, v) in self.entries() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: C) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                let s = row[k].1.clone() + v;
                if s.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = s;
                }
            }
            Err(k) => row.insert(k, (j, v)),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => C::zero(),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, C)] {
        &self.rows[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &C)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = Self::zeros(self.n);
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r {
                for (j, b) in &o.rows[*k] {
                    out.add_at(i, *j, a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (i, j, v) in o.entries() {
            out.add_at(i, j, v.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (i, j, v) in o.entries() {
            out.add_at(i, j, -v.clone());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zeros(self.n);
        }
        Self {
            n: self.n,
            rows: self.rows.iter().map(|r| r.iter().map(|(j, v)| (*j, v.clone() * c.clone())).collect()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.n, self.entries().map(|(i, j, v)| (j, i, v.clone())))
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let n = self.n * o.n;
        let mut out = Self::zeros(n);
        for (i, j, a) in self.entries() {
            for (k, l, b) in o.entries() {
                out.add_at(i * o.n + k, j * o.n + l, a.clone() * b.clone());
            }
        }
        out
    }

    /// Embed as the top-left block of a larger matrix.
    pub fn embed(&self, n: usize, offset: usize) -> Self {
        Self::from_entries(n, self.entries().map(|(i, j, v)| (i + offset, j + offset, v.clone())))
    }

    pub fn trace(&self) -> C {
        (0..self.n).fold(C::zero(), |acc, i| acc + self.get(i, i))
    }
}
