//! Sparse multivariate polynomials over the rationals in coordinates
//! `x1, ..., xN`.
//!
//! Negative exponents are representable (Laurent monomials). On the group
//! only `x1` may appear with a negative power, since it is the one coordinate
//! that never vanishes; [`CoordPoly::is_coordinate_laurent`] checks that.
//! Inside the doubled ring used for multiplicativity checks the second copy of
//! `x1` (the `y1` slot) is invertible as well, so the arithmetic itself does
//! not restrict where negative powers live.
//!
//! Monomials are ordered by weighted degree `sum(i * e_i)` with `wt(x_i) = i`,
//! ties broken lexicographically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    weight: i64,
    exps: Box<[i32]>,
}

impl Monomial {
    pub fn new(exps: Vec<i32>) -> Self {
        let weight = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as i64 + 1) * e as i64)
            .sum();
        Monomial {
            weight,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            weight: 0,
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn exps(&self) -> &[i32] {
        &self.exps
    }

    /// Weighted degree with `wt(x_i) = i`.
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: Box<[i32]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            weight: self.weight + other.weight,
            exps,
        }
    }

    fn extended(&self, nvars: usize) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps.resize(nvars, 0);
        Monomial {
            weight: self.weight,
            exps: exps.into_boxed_slice(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `nvars` coordinates. No zero coefficient is ever stored and
/// every exponent vector has length `nvars`.
#[derive(Clone, Debug, Default)]
pub struct CoordPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for CoordPoly {
    fn eq(&self, other: &Self) -> bool {
        match self.nvars.cmp(&other.nvars) {
            Ordering::Equal => self.terms == other.terms,
            Ordering::Less => self.extend(other.nvars).terms == other.terms,
            Ordering::Greater => self.terms == other.extend(self.nvars).terms,
        }
    }
}

impl Eq for CoordPoly {}

impl CoordPoly {
    pub fn zero(nvars: usize) -> Self {
        CoordPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The coordinate function `x_i` (1-based).
    pub fn coord(nvars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= nvars, "coordinate x{i} out of range 1..={nvars}");
        let mut exps = vec![0; nvars];
        exps[i - 1] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::new(exps), Rational::one());
        p
    }

    pub fn monomial(exps: Vec<i32>, c: Rational) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::new(exps), c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::Parse(format!(
                    "exponent vector of length {} in a {nvars}-variable polynomial",
                    exps.len()
                )));
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> Rational {
        let mut e = exps.to_vec();
        e.resize(self.nvars, 0);
        self.terms
            .get(&Monomial::new(e))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Constant term (coefficient of the unit monomial).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Zero-extends to `nvars` variables (no-op when already that wide).
    pub fn extend(&self, nvars: usize) -> CoordPoly {
        if nvars <= self.nvars {
            return self.clone();
        }
        CoordPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extended(nvars), c.clone()))
                .collect(),
        }
    }

    /// Re-homes the polynomial into a `target`-variable ring, sending `x_i`
    /// to `x_{i + offset}`.
    pub fn embed(&self, target: usize, offset: usize) -> CoordPoly {
        assert!(self.nvars + offset <= target);
        let mut out = CoordPoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target];
            exps[offset..offset + self.nvars].copy_from_slice(&m.exps);
            out.terms.insert(Monomial::new(exps), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> CoordPoly {
        if c.is_zero() {
            return CoordPoly::zero(self.nvars);
        }
        CoordPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn add_assign_ref(&mut self, other: &CoordPoly) {
        if other.nvars > self.nvars {
            *self = self.extend(other.nvars);
        }
        if other.nvars < self.nvars {
            let o = other.extend(self.nvars);
            for (m, c) in o.terms {
                self.add_term(m, c);
            }
        } else {
            for (m, c) in &other.terms {
                self.add_term(m.clone(), c.clone());
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &CoordPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        if other.nvars != self.nvars {
            self.add_assign_ref(&other.scale(c));
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    fn aligned<'a>(
        a: &'a CoordPoly,
        b: &'a CoordPoly,
    ) -> (std::borrow::Cow<'a, CoordPoly>, std::borrow::Cow<'a, CoordPoly>) {
        use std::borrow::Cow;
        match a.nvars.cmp(&b.nvars) {
            Ordering::Equal => (Cow::Borrowed(a), Cow::Borrowed(b)),
            Ordering::Less => (Cow::Owned(a.extend(b.nvars)), Cow::Borrowed(b)),
            Ordering::Greater => (Cow::Borrowed(a), Cow::Owned(b.extend(a.nvars))),
        }
    }

    pub fn mul_ref(&self, other: &CoordPoly) -> CoordPoly {
        let (a, b) = Self::aligned(self, other);
        let mut out = CoordPoly::zero(a.nvars);
        if a.is_zero() || b.is_zero() {
            return out;
        }
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Inverse in the Laurent ring, which exists exactly for single-term
    /// polynomials.
    pub fn inverse(&self) -> Option<CoordPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let exps: Vec<i32> = m.exps.iter().map(|e| -e).collect();
        Some(CoordPoly::monomial(exps, c.recip()))
    }

    pub fn pow(&self, e: i32) -> Result<CoordPoly> {
        if e < 0 {
            let inv = self.inverse().ok_or(Error::DivisionByZero)?;
            return inv.pow(-e);
        }
        let mut acc = CoordPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = e as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to `x_i` (1-based).
    pub fn partial(&self, i: usize) -> CoordPoly {
        assert!(i >= 1, "coordinates are 1-based");
        let mut out = CoordPoly::zero(self.nvars);
        if i > self.nvars {
            return out;
        }
        let k = i - 1;
        for (m, c) in &self.terms {
            let e = m.exps[k];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.to_vec();
            exps[k] -= 1;
            out.terms
                .insert(Monomial::new(exps), c * rational::int(e as i64));
        }
        out
    }

    /// Exact value at `point`; `point[k]` is the value of `x_{k+1}`.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() < self.nvars {
            return Err(Error::Precondition(format!(
                "evaluation point has {} coordinates, polynomial needs {}",
                point.len(),
                self.nvars
            )));
        }
        if !self.is_polynomial() {
            let mut total = Rational::zero();
            for (m, c) in &self.terms {
                let mut v = c.clone();
                for (k, &e) in m.exps.iter().enumerate() {
                    if e != 0 {
                        v *= rational::pow(&point[k], e as i64)?;
                    }
                }
                total += v;
            }
            return Ok(total);
        }
        Ok(self.eval_polynomial(point))
    }

    /// Sums over the common denominator `L prod q_k^{M_k}`, where `L` is the
    /// lcm of the coefficient denominators and `M_k` the top exponent of
    /// `x_k`, so that the loop only touches integers.
    fn eval_polynomial(&self, point: &[Rational]) -> Rational {
        let nv = self.nvars;
        let mut top = vec![0usize; nv];
        let mut lcm = BigInt::one();
        for (m, c) in &self.terms {
            for (k, &e) in m.exps.iter().enumerate() {
                top[k] = top[k].max(e as usize);
            }
            lcm = lcm.lcm(c.denom());
        }
        let powers = |b: &BigInt, m: usize| -> Vec<BigInt> {
            let mut v = Vec::with_capacity(m + 1);
            v.push(BigInt::one());
            for i in 0..m {
                let next = &v[i] * b;
                v.push(next);
            }
            v
        };
        let num_pow: Vec<Vec<BigInt>> = (0..nv).map(|k| powers(point[k].numer(), top[k])).collect();
        let den_pow: Vec<Vec<BigInt>> = (0..nv).map(|k| powers(point[k].denom(), top[k])).collect();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut v = c.numer() * (&lcm / c.denom());
            for (k, &e) in m.exps.iter().enumerate() {
                let e = e as usize;
                if top[k] == 0 {
                    continue;
                }
                if e > 0 {
                    v *= &num_pow[k][e];
                }
                if e < top[k] {
                    v *= &den_pow[k][top[k] - e];
                }
            }
            total += v;
        }
        let mut den = lcm;
        for k in 0..nv {
            den *= &den_pow[k][top[k]];
        }
        Rational::new(total, den)
    }

    /// Replaces `x_i` by `images[i-1]`. Every image must live in the same ring.
    pub fn substitute(&self, images: &[CoordPoly]) -> Result<CoordPoly> {
        Substitution::prepare(images, std::slice::from_ref(self))?.apply(self)
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.exps.iter().all(|&e| e >= 0))
    }

    /// True when negative exponents occur in `x1` only.
    pub fn is_coordinate_laurent(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.exps.iter().skip(1).all(|&e| e >= 0))
    }

    /// Largest 1-based coordinate index that actually occurs (0 for constants).
    pub fn max_var(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|m| m.exps.iter().rposition(|&e| e != 0))
            .max()
            .map_or(0, |k| k + 1)
    }

    /// Drops variables beyond `nvars`; fails if any of them occurs.
    pub fn restrict(&self, nvars: usize) -> Result<CoordPoly> {
        if self.max_var() > nvars {
            return Err(Error::Precondition(format!(
                "polynomial uses x{} and cannot be restricted to {nvars} variables",
                self.max_var()
            )));
        }
        if nvars >= self.nvars {
            return Ok(self.extend(nvars));
        }
        Ok(CoordPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.exps[..nvars].to_vec()), c.clone()))
                .collect(),
        })
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exp: m.exps.to_vec(),
                    coef: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<CoordPoly> {
        CoordPoly::from_terms(j.nvars, j.terms.iter().map(|t| (t.exp.clone(), t.coef.clone())))
    }
}

impl Zero for CoordPoly {
    fn zero() -> Self {
        CoordPoly::zero(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for CoordPoly {
    fn one() -> Self {
        CoordPoly::one(0)
    }
}

/// Precomputed powers of substitution images, shared across many
/// polynomials that are pushed through the same map.
pub struct Substitution<'a> {
    images: &'a [CoordPoly],
    target: usize,
    positive: Vec<Vec<CoordPoly>>,
    negative: Vec<Vec<CoordPoly>>,
}

impl<'a> Substitution<'a> {
    /// Builds the power tables needed to substitute into every polynomial of
    /// `sources`.
    pub fn prepare(images: &'a [CoordPoly], sources: &[CoordPoly]) -> Result<Self> {
        let target = images.iter().map(|p| p.nvars).max().unwrap_or(0);
        let nsrc = sources.iter().map(|p| p.nvars).max().unwrap_or(0);
        if images.len() < nsrc {
            return Err(Error::Precondition(format!(
                "{} images supplied for {nsrc} variables",
                images.len()
            )));
        }
        let mut max_pos = vec![0i32; nsrc];
        let mut max_neg = vec![0i32; nsrc];
        for p in sources {
            for m in p.terms.keys() {
                for (k, &e) in m.exps.iter().enumerate() {
                    if e > max_pos[k] {
                        max_pos[k] = e;
                    }
                    if -e > max_neg[k] {
                        max_neg[k] = -e;
                    }
                }
            }
        }
        let mut positive = Vec::with_capacity(nsrc);
        let mut negative = Vec::with_capacity(nsrc);
        for k in 0..nsrc {
            let img = images[k].extend(target);
            let mut pows = vec![CoordPoly::one(target)];
            for e in 1..=max_pos[k] as usize {
                let next = pows[e - 1].mul_ref(&img);
                pows.push(next);
            }
            positive.push(pows);
            let mut negs = vec![CoordPoly::one(target)];
            if max_neg[k] > 0 {
                let inv = img
                    .inverse()
                    .ok_or(Error::NonInvertibleImage { var: k + 1 })?;
                for e in 1..=max_neg[k] as usize {
                    let next = negs[e - 1].mul_ref(&inv);
                    negs.push(next);
                }
            }
            negative.push(negs);
        }
        Ok(Substitution {
            images,
            target,
            positive,
            negative,
        })
    }

    pub fn target_nvars(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[CoordPoly] {
        self.images
    }

    pub fn apply(&self, p: &CoordPoly) -> Result<CoordPoly> {
        let mut out = CoordPoly::zero(self.target);
        for (m, c) in &p.terms {
            let mut term = CoordPoly::constant(self.target, c.clone());
            for (k, &e) in m.exps.iter().enumerate() {
                let factor = match e.cmp(&0) {
                    Ordering::Equal => continue,
                    Ordering::Greater => self.positive[k].get(e as usize),
                    Ordering::Less => self.negative[k].get((-e) as usize),
                };
                let factor = factor.ok_or_else(|| {
                    Error::Precondition("substitution applied to an unprepared polynomial".into())
                })?;
                term = term.mul_ref(factor);
            }
            out.add_assign_ref(&term);
        }
        Ok(out)
    }
}

impl Add for &CoordPoly {
    type Output = CoordPoly;
    fn add(self, rhs: &CoordPoly) -> CoordPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &CoordPoly {
    type Output = CoordPoly;
    fn sub(self, rhs: &CoordPoly) -> CoordPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Mul for &CoordPoly {
    type Output = CoordPoly;
    fn mul(self, rhs: &CoordPoly) -> CoordPoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &CoordPoly {
    type Output = CoordPoly;
    fn neg(self) -> CoordPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for CoordPoly {
    type Output = CoordPoly;
    fn add(self, rhs: CoordPoly) -> CoordPoly {
        &self + &rhs
    }
}

impl Sub for CoordPoly {
    type Output = CoordPoly;
    fn sub(self, rhs: CoordPoly) -> CoordPoly {
        &self - &rhs
    }
}

impl Mul for CoordPoly {
    type Output = CoordPoly;
    fn mul(self, rhs: CoordPoly) -> CoordPoly {
        &self * &rhs
    }
}

impl Neg for CoordPoly {
    type Output = CoordPoly;
    fn neg(self) -> CoordPoly {
        -&self
    }
}

impl fmt::Display for CoordPoly {
    /// Highest weight first, e.g. `6*x1^-1*x2^3 - 5*x2*x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(k, &e)| {
                    if e == 1 {
                        format!("x{}", k + 1)
                    } else {
                        format!("x{}^{}", k + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `{"N": int, "terms": [{"exp": [..], "coef": "p/q"}]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(rename = "N")]
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i32>,
    #[serde(with = "rational::serde_str")]
    pub coef: Rational,
}

impl Serialize for CoordPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoordPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        CoordPoly::from_json(&j).map_err(serde::de::Error::custom)
    }
}
