//! Truncated formal power series in up to three formal variables `u, v, w`.
//!
//! A series carries one total-degree truncation order `ord`: terms of total
//! degree above `ord` are unknown and never stored. Binary operations take the
//! minimum of the operand orders and differentiation lowers the order by one.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::CoordPoly;
use crate::rational::{self, Rational};

/// Ring operations a series coefficient must support.
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync + Zero + One {
    fn from_rational(r: &Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// Multiplicative inverse when the coefficient is a unit.
    fn try_inverse(&self) -> Option<Self>;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.plus(other);
    }
}

impl Coefficient for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

impl Coefficient for CoordPoly {
    fn from_rational(r: &Rational) -> Self {
        CoordPoly::constant(0, r.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        CoordPoly::scale(self, c)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
    fn add_assign(&mut self, other: &Self) {
        self.add_assign_ref(other);
    }
}

pub const MAX_VARS: usize = 3;

/// Exponents of `(u, v, w)`; unused slots stay 0.
pub type Degrees = [u32; MAX_VARS];

pub const VAR_NAMES: [&str; MAX_VARS] = ["u", "v", "w"];

fn total(d: &Degrees) -> u32 {
    d.iter().sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: Coefficient> {
    nvars: usize,
    ord: u32,
    terms: BTreeMap<Degrees, C>,
}

pub type ScalarSeries = TruncSeries<Rational>;
pub type PolySeries = TruncSeries<CoordPoly>;

impl<C: Coefficient> TruncSeries<C> {
    pub fn zero(nvars: usize, ord: u32) -> Self {
        assert!((1..=MAX_VARS).contains(&nvars), "1 to 3 formal variables");
        TruncSeries {
            nvars,
            ord,
            terms: BTreeMap::new(),
        }
    }

    /// The formal variable `var` (0 = u, 1 = v, 2 = w).
    pub fn variable(nvars: usize, var: usize, ord: u32) -> Self {
        assert!(var < nvars);
        let mut d = [0; MAX_VARS];
        d[var] = 1;
        let mut s = Self::zero(nvars, ord);
        s.insert(d, C::one());
        s
    }

    pub fn constant(nvars: usize, ord: u32, c: C) -> Self {
        let mut s = Self::zero(nvars, ord);
        s.insert([0; MAX_VARS], c);
        s
    }

    /// Builds a series from `(degrees, coefficient)` pairs; terms above `ord`
    /// are dropped and duplicate degrees are summed.
    pub fn from_terms<I>(nvars: usize, ord: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Degrees, C)>,
    {
        let mut s = Self::zero(nvars, ord);
        for (d, c) in terms {
            assert!(
                d[nvars..].iter().all(|&e| e == 0),
                "degree vector uses a variable beyond the series' {nvars}"
            );
            s.insert(d, c);
        }
        s
    }

    /// Univariate series `sum_k coeffs[k] u^k`.
    pub fn univariate(coeffs: Vec<C>, ord: u32) -> Self {
        Self::from_terms(
            1,
            ord,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(k, c)| ([k as u32, 0, 0], c)),
        )
    }

    fn insert(&mut self, d: Degrees, c: C) {
        if total(&d) > self.ord || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ord(&self) -> u32 {
        self.ord
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

    pub fn terms(&self) -> impl Iterator<Item = (&Degrees, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &[u32]) -> C {
        let mut key = [0; MAX_VARS];
        key[..d.len()].copy_from_slice(d);
        self.terms.get(&key).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of `u^k` in a univariate series.
    pub fn coeff1(&self, k: u32) -> C {
        self.coeff(&[k])
    }

    /// Lowest total degree of a stored term (`None` for the zero series).
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(total).min()
    }

    /// Discards terms above the new order (which may only shrink).
    pub fn truncate(&self, ord: u32) -> Self {
        let ord = ord.min(self.ord);
        TruncSeries {
            nvars: self.nvars,
            ord,
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| total(d) <= ord)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Widens the variable count (new variables simply do not occur).
    pub fn with_nvars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        TruncSeries {
            nvars,
            ord: self.ord,
            terms: self.terms.clone(),
        }
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        let mut out = TruncSeries::zero(self.nvars, self.ord);
        for (d, c) in &self.terms {
            out.insert(*d, f(c));
        }
        out
    }

    pub fn try_map_coeffs<D: Coefficient>(
        &self,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<TruncSeries<D>> {
        let mut out = TruncSeries::zero(self.nvars, self.ord);
        for (d, c) in &self.terms {
            out.insert(*d, f(c)?);
        }
        Ok(out)
    }

    fn check_vars(&self, other: &Self) -> usize {
        self.nvars.max(other.nvars)
    }

    pub fn add(&self, other: &Self) -> Self {
        let nvars = self.check_vars(other);
        let ord = self.ord.min(other.ord);
        let mut out = self.truncate(ord);
        out.nvars = nvars;
        for (d, c) in &other.terms {
            out.insert(*d, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.negated())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coeffs(|a| a.scale(c))
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map_coeffs(|a| a.times(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let nvars = self.check_vars(other);
        let ord = self.ord.min(other.ord);
        let mut out = Self::zero(nvars, ord);
        for (da, ca) in &self.terms {
            let ta = total(da);
            if ta > ord {
                continue;
            }
            for (db, cb) in &other.terms {
                if ta + total(db) > ord {
                    continue;
                }
                let d = [da[0] + db[0], da[1] + db[1], da[2] + db[2]];
                out.insert(d, ca.times(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.ord, C::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal derivative in `var`; the order drops by one.
    pub fn partial(&self, var: usize) -> Self {
        let ord = self.ord.saturating_sub(1);
        let mut out = Self::zero(self.nvars, ord);
        if var >= self.nvars {
            return out;
        }
        for (d, c) in &self.terms {
            let e = d[var];
            if e == 0 {
                continue;
            }
            let mut nd = *d;
            nd[var] -= 1;
            out.insert(nd, c.scale(&rational::int(e as i64)));
        }
        out
    }

    /// Renames variables: slot `k` of `self` becomes variable `slots[k]` of
    /// an `nvars`-variable series. Used to evaluate `phi(w, u)` and friends.
    pub fn remap(&self, slots: &[usize], nvars: usize) -> Self {
        assert_eq!(slots.len(), self.nvars);
        let mut out = Self::zero(nvars, self.ord);
        for (d, c) in &self.terms {
            let mut nd = [0; MAX_VARS];
            for (k, &target) in slots.iter().enumerate() {
                nd[target] += d[k];
            }
            out.insert(nd, c.clone());
        }
        out
    }

    /// Substitutes `images[k]` for variable `k`. Every image must have a zero
    /// constant term; the result is exact up to the minimum of all orders.
    pub fn substitute(&self, images: &[TruncSeries<C>]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::Precondition(format!(
                "{} images for a {}-variable series",
                images.len(),
                self.nvars
            )));
        }
        if images.iter().any(|s| !s.coeff(&[0, 0, 0]).is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let nvars = images.iter().map(|s| s.nvars).max().unwrap();
        let ord = images.iter().map(|s| s.ord).fold(self.ord, u32::min);
        let mut max_exp = [0u32; MAX_VARS];
        for d in self.terms.keys() {
            for k in 0..self.nvars {
                max_exp[k] = max_exp[k].max(d[k]);
            }
        }
        let powers: Vec<Vec<Self>> = images
            .iter()
            .enumerate()
            .map(|(k, img)| {
                let img = img.with_nvars(nvars).truncate(ord);
                let mut pows = vec![Self::constant(nvars, ord, C::one())];
                for e in 1..=max_exp[k] {
                    let next = pows[e as usize - 1].mul(&img);
                    pows.push(next);
                }
                pows
            })
            .collect();
        let mut out = Self::zero(nvars, ord);
        for (d, c) in &self.terms {
            let mut term = Self::constant(nvars, ord, c.clone());
            for k in 0..self.nvars {
                if d[k] > 0 {
                    term = term.mul(&powers[k][d[k] as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `outer(inner)` for univariate series.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.nvars != 1 || inner.nvars != 1 {
            return Err(Error::Precondition("compose expects univariate series".into()));
        }
        self.substitute(std::slice::from_ref(inner))
    }

    /// Compositional inverse of a univariate series `a1 u + a2 u^2 + ...`
    /// with `a1` a unit, by triangular back-substitution on
    /// `[u^k] revert(self)(self(u)) = delta_{k,1}`.
    pub fn revert(&self) -> Result<Self> {
        if self.nvars != 1 {
            return Err(Error::Precondition("revert expects a univariate series".into()));
        }
        if !self.coeff1(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.ord;
        let lead_inv = self
            .coeff1(1)
            .try_inverse()
            .ok_or(Error::DivisionByZero)?;
        // powers[m] = self^m
        let mut powers = vec![Self::constant(1, n, C::one())];
        for m in 1..=n as usize {
            let next = powers[m - 1].mul(self);
            powers.push(next);
        }
        let mut inv_coeffs = vec![C::zero(); n as usize + 1];
        // [u^k] self^k = a1^k
        let mut lead_inv_pow = C::one();
        for k in 1..=n as usize {
            lead_inv_pow = lead_inv_pow.times(&lead_inv);
            let mut acc = if k == 1 { C::one() } else { C::zero() };
            for (m, coeff) in inv_coeffs.iter().enumerate().take(k).skip(1) {
                acc = acc.minus(&coeff.times(&powers[m].coeff1(k as u32)));
            }
            inv_coeffs[k] = acc.times(&lead_inv_pow);
        }
        Ok(Self::univariate(inv_coeffs, n))
    }
}

impl TruncSeries<Rational> {
    /// Geometric series `sum_k (a t)^k` in variable `var`.
    pub fn geometric(nvars: usize, var: usize, a: &Rational, ord: u32) -> Self {
        let mut s = Self::zero(nvars, ord);
        let mut c = Rational::one();
        for k in 0..=ord {
            let mut d = [0; MAX_VARS];
            d[var] = k;
            s.insert(d, c.clone());
            c *= a;
        }
        s
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            nvars: self.nvars,
            ord: self.ord,
            terms: self
                .terms
                .iter()
                .map(|(d, c)| SeriesTermJson {
                    deg: d[..self.nvars].to_vec(),
                    coef: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if !(1..=MAX_VARS).contains(&j.nvars) {
            return Err(Error::Parse(format!("series with {} variables", j.nvars)));
        }
        let mut s = Self::zero(j.nvars, j.ord);
        for t in &j.terms {
            if t.deg.len() != j.nvars {
                return Err(Error::Parse("degree vector length mismatch".into()));
            }
            let mut d = [0; MAX_VARS];
            d[..j.nvars].copy_from_slice(&t.deg);
            if total(&d) > j.ord {
                return Err(Error::Parse(format!("term of degree {} above order {}", total(&d), j.ord)));
            }
            s.insert(d, t.coef.clone());
        }
        Ok(s)
    }
}

/// `{"vars": k, "Ord": n, "terms": [{"deg": [..], "coef": "p/q"}]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(rename = "vars")]
    pub nvars: usize,
    #[serde(rename = "Ord")]
    pub ord: u32,
    pub terms: Vec<SeriesTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub deg: Vec<u32>,
    #[serde(with = "rational::serde_str")]
    pub coef: Rational,
}
