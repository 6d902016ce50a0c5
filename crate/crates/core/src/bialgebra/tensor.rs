//! The Lie algebra with basis `e_n`, `n >= 0`, `[e_n, e_m] = (n - m) e_{n+m}`,
//! and its tensor powers truncated at a grade cap.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `[e_n, e_m] = c e_k`, returned as `(c, k)`.
pub fn witt_bracket(n: usize, m: usize) -> (Rational, usize) {
    (rational::int(n as i64 - m as i64), n + m)
}

/// Sparse element `sum c_n e_n` with indices at most the cap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WittElement {
    cap: usize,
    coeffs: BTreeMap<usize, Rational>,
}

impl WittElement {
    pub fn zero(cap: usize) -> Self {
        WittElement {
            cap,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(cap: usize, n: usize) -> Result<Self> {
        let mut e = Self::zero(cap);
        e.add_term(n, rational::one())?;
        Ok(e)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, n: usize, c: Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if n > self.cap {
            return Err(Error::Precondition(format!(
                "e_{n} lies past the grade cap {}",
                self.cap
            )));
        }
        let entry = self.coeffs.entry(n).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&n);
        }
        Ok(())
    }

    /// The bracket; fails if a nonzero term would land past the cap.
    pub fn bracket(&self, other: &WittElement) -> Result<WittElement> {
        let mut out = WittElement::zero(self.cap.max(other.cap));
        for (n, a) in self.terms() {
            for (m, b) in other.terms() {
                let (c, k) = witt_bracket(n, m);
                out.add_term(k, c * a * b)?;
            }
        }
        Ok(out)
    }
}

/// Dense table `t^{ij}`, `0 <= i, j <= cap`, read as `sum t^{ij} e_i (x) e_j`.
/// Reads outside the box return zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2 {
    cap: usize,
    data: Vec<Rational>,
}

/// An r-matrix is an antisymmetric `Tensor2`.
pub type RMatrix = Tensor2;

impl Tensor2 {
    pub fn zero(cap: usize) -> Self {
        Tensor2 {
            cap,
            data: vec![Rational::zero(); (cap + 1) * (cap + 1)],
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&self, i: i64, j: i64) -> Rational {
        let c = self.cap as i64;
        if i < 0 || j < 0 || i > c || j > c {
            return Rational::zero();
        }
        self.data[i as usize * (self.cap + 1) + j as usize].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * (self.cap + 1) + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rational) {
        self.data[i * (self.cap + 1) + j] += v;
    }

    /// `+v` at `(i, j)` and `-v` at `(j, i)`: the components of `v e_i ^ e_j`.
    pub fn add_wedge(&mut self, i: usize, j: usize, v: &Rational) {
        if i <= self.cap && j <= self.cap {
            self.add_at(i, j, v);
            self.add_at(j, i, &-v);
        }
    }

    /// Antisymmetric table from `(i, j, v)` with `i < j`.
    pub fn from_upper<I>(cap: usize, upper: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut t = Tensor2::zero(cap);
        for (i, j, v) in upper {
            if i >= j || j > cap {
                return Err(Error::Precondition(format!(
                    "component ({i}, {j}) outside 0 <= i < j <= {cap}"
                )));
            }
            t.add_wedge(i, j, &v);
        }
        Ok(t)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..=self.cap).all(|i| (0..=self.cap).all(|j| self.get(i as i64, j as i64) == -self.get(j as i64, i as i64)))
    }

    /// Nonzero components in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let w = self.cap + 1;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / w, k % w, v))
    }

    pub fn scale(&self, c: &Rational) -> Tensor2 {
        Tensor2 {
            cap: self.cap,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Tensor2) -> Tensor2 {
        let cap = self.cap.min(other.cap);
        let mut out = Tensor2::zero(cap);
        for i in 0..=cap {
            for j in 0..=cap {
                out.set(i, j, self.get(i as i64, j as i64) + other.get(i as i64, j as i64));
            }
        }
        out
    }

    pub fn sub(&self, other: &Tensor2) -> Tensor2 {
        self.add(&other.scale(&rational::int(-1)))
    }

    /// Copy with cap `m` (components past it are dropped, new ones zero).
    pub fn with_cap(&self, m: usize) -> Tensor2 {
        let mut out = Tensor2::zero(m);
        for (i, j, v) in self.nonzero().filter(|&(i, j, _)| i <= m && j <= m) {
            out.set(i, j, v.clone());
        }
        out
    }

    pub fn to_json(&self) -> Vec<IndexedValue2> {
        self.nonzero()
            .filter(|&(i, j, _)| i < j)
            .map(|(i, j, v)| IndexedValue2 { i, j, value: v.clone() })
            .collect()
    }

    pub fn from_json(cap: usize, entries: &[IndexedValue2]) -> Result<Tensor2> {
        Tensor2::from_upper(cap, entries.iter().map(|e| (e.i, e.j, e.value.clone())))
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

/// One upper-triangle component, 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexedValue2 {
    pub i: usize,
    pub j: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

/// Sparse components `t^{ijk}` of a 3-tensor; zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tensor3 {
    terms: BTreeMap<(usize, usize, usize), Rational>,
}

impl Tensor3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        self.terms.get(&(i, j, k)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_at(&mut self, idx: (usize, usize, usize), v: Rational) {
        if v.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx).or_insert_with(Rational::zero);
        *entry += v;
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops components with any index past `cap`.
    pub fn restrict(&self, cap: usize) -> Tensor3 {
        Tensor3 {
            terms: self
                .terms
                .iter()
                .filter(|((a, b, c), _)| *a <= cap && *b <= cap && *c <= cap)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_at(*k, -v.clone());
        }
        out
    }
}

/// Result of acting on a truncated tensor: the components that fit under
/// the cap, plus the indices of nonzero components that did not.
#[derive(Clone, Debug, PartialEq)]
pub struct Adjoint2 {
    pub table: Tensor2,
    pub overflow: Vec<(usize, usize)>,
}

/// `e_n . t = ([e_n, .] (x) 1 + 1 (x) [e_n, .]) t`, computed term by term from
/// the bracket.
pub fn adjoint_on_tensor2(n: usize, t: &Tensor2) -> Adjoint2 {
    let cap = t.cap();
    let mut table = Tensor2::zero(cap);
    let mut overflow = BTreeMap::new();
    let mut put = |i: usize, j: usize, v: Rational| {
        if v.is_zero() {
            return;
        }
        if i <= cap && j <= cap {
            table.add_at(i, j, &v);
        } else {
            *overflow.entry((i, j)).or_insert_with(Rational::zero) += v;
        }
    };
    for (a, b, v) in t.nonzero() {
        let (c, k) = witt_bracket(n, a);
        put(k, b, c * v);
        let (c, k) = witt_bracket(n, b);
        put(a, k, c * v);
    }
    Adjoint2 {
        table,
        overflow: overflow
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k)
            .collect(),
    }
}

/// `e_n` acting on every slot of a 3-tensor. Components past `cap` are
/// dropped; below `cap` the result is exact.
pub fn adjoint_on_tensor3(n: usize, t: &Tensor3, cap: usize) -> Tensor3 {
    let mut out = Tensor3::zero();
    for (&(a, b, c), v) in t.terms() {
        let (x, k) = witt_bracket(n, a);
        out.add_at((k, b, c), x * v);
        let (x, k) = witt_bracket(n, b);
        out.add_at((a, k, c), x * v);
        let (x, k) = witt_bracket(n, c);
        out.add_at((a, b, k), x * v);
    }
    out.restrict(cap)
}
