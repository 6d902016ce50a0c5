//! Bracket tables `omega_ij = {x_i, x_j}` on `G_N` and their constructions.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phi::PhiSeries;
use crate::poly::{CoordPoly, PolyJson};
use crate::rational::{self, Rational};
use crate::series::{PolySeries, TruncSeries};

use super::lambda::LambdaTable;

/// Antisymmetric `N x N` table of coordinate polynomials in `x_1..x_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaTable {
    n: usize,
    entries: Vec<CoordPoly>,
}

impl OmegaTable {
    pub fn zero(n: usize) -> Self {
        OmegaTable {
            n,
            entries: vec![CoordPoly::zero(n); n * n],
        }
    }

    /// Fills the table from its upper triangle; `f(i, j)` is called for
    /// `1 <= i < j <= n`, in parallel.
    pub fn from_upper<F>(n: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> CoordPoly + Sync,
    {
        let pairs: Vec<(usize, usize)> = upper_pairs(n).collect();
        let values: Vec<CoordPoly> = pairs.par_iter().map(|&(i, j)| f(i, j).extend(n)).collect();
        let mut out = OmegaTable::zero(n);
        for ((i, j), p) in pairs.into_iter().zip(values) {
            out.set(i, j, p);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `omega_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &CoordPoly {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Sets `omega_ij = p` and `omega_ji = -p`.
    pub fn set(&mut self, i: usize, j: usize, p: CoordPoly) {
        assert!(i != j, "diagonal of an antisymmetric table");
        let p = p.extend(self.n);
        self.entries[(j - 1) * self.n + (i - 1)] = -&p;
        self.entries[(i - 1) * self.n + (j - 1)] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &CoordPoly)> {
        upper_pairs(self.n).map(move |(i, j)| (i, j, self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn neg(&self) -> OmegaTable {
        OmegaTable {
            n: self.n,
            entries: self.entries.iter().map(|p| -p).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> OmegaTable {
        OmegaTable {
            n: self.n,
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// The table induced on `G_m`. Fails if a kept entry involves `x_k`
    /// with `k > m`.
    pub fn truncate(&self, m: usize) -> Result<OmegaTable> {
        let m = m.min(self.n);
        let mut out = OmegaTable::zero(m);
        for (i, j, p) in self.entries().filter(|&(_, j, _)| j <= m) {
            out.set(i, j, p.restrict(m)?);
        }
        Ok(out)
    }

    /// Every entry is a polynomial (no negative exponents).
    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(|p| p.is_polynomial())
    }

    /// Entries `(i, j)` that do not vanish at `e = (1, 0, ..., 0)`.
    pub fn identity_failures(&self) -> Vec<(usize, usize)> {
        let e = identity_point(self.n);
        self.entries()
            .filter(|(_, _, p)| !p.eval(&e).map(|v| v.is_zero()).unwrap_or(false))
            .map(|(i, j, _)| (i, j))
            .collect()
    }

    /// Entries `(i, j)` that involve some `x_k` with `k > j`.
    pub fn locality_failures(&self) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|&(_, j, p)| p.max_var() > j)
            .map(|(i, j, _)| (i, j))
            .collect()
    }

    pub fn to_json(&self) -> Vec<OmegaEntryJson> {
        self.entries()
            .filter(|(_, _, p)| !p.is_zero())
            .map(|(i, j, p)| OmegaEntryJson {
                i,
                j,
                poly: p.to_json(),
            })
            .collect()
    }

    pub fn from_json(n: usize, entries: &[OmegaEntryJson]) -> Result<OmegaTable> {
        let mut out = OmegaTable::zero(n);
        for e in entries {
            if e.i == 0 || e.i >= e.j || e.j > n {
                return Err(Error::Parse(format!(
                    "omega entry ({}, {}) outside 1 <= i < j <= {n}",
                    e.i, e.j
                )));
            }
            let p = CoordPoly::from_json(&e.poly)?;
            if p.nvars() > n {
                return Err(Error::Parse(format!(
                    "omega entry ({}, {}) uses {} variables on G_{n}",
                    e.i,
                    e.j,
                    p.nvars()
                )));
            }
            out.set(e.i, e.j, p);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaEntryJson {
    pub i: usize,
    pub j: usize,
    pub poly: PolyJson,
}

pub(crate) fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

pub(crate) fn identity_point(n: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    if n > 0 {
        e[0] = rational::one();
    }
    e
}

/// `sums[p][i]` = sum over compositions `r_1 + ... + r_p = i` of
/// `x_{r_1} ... x_{r_p}`, for `p, i <= n` (index 0 unused).
struct CompositionSums {
    sums: Vec<Vec<CoordPoly>>,
}

impl CompositionSums {
    fn new(n: usize) -> Self {
        let mut sums = vec![vec![CoordPoly::zero(n); n + 1]; n + 1];
        for i in 1..=n {
            sums[1][i] = CoordPoly::coord(n, i);
        }
        for p in 2..=n {
            for i in p..=n {
                let mut acc = CoordPoly::zero(n);
                for r in 1..=i + 1 - p {
                    let rest = &sums[p - 1][i - r];
                    if !rest.is_zero() {
                        acc.add_assign_ref(&CoordPoly::coord(n, r).mul_ref(rest));
                    }
                }
                sums[p][i] = acc;
            }
        }
        CompositionSums { sums }
    }

    fn get(&self, p: usize, i: usize) -> &CoordPoly {
        &self.sums[p][i]
    }
}

fn x_or_zero(n: usize, k: i64) -> CoordPoly {
    if k >= 1 && k as usize <= n {
        CoordPoly::coord(n, k as usize)
    } else {
        CoordPoly::zero(n)
    }
}

/// The bracket table of a lambda table:
///
/// ```text
/// omega_ij = sum_{p<=i, q<=j} p q x_p x_q lambda_{i-p+1, j-q+1}
///          - sum_{p<=i, q<=j} lambda_pq C_p(i) C_q(j)
/// ```
///
/// where `C_p(i)` sums `x_{r_1}...x_{r_p}` over compositions of `i`.
pub fn omega_from_lambda(lambda: &LambdaTable) -> OmegaTable {
    let n = lambda.n();
    let comp = CompositionSums::new(n);
    OmegaTable::from_upper(n, |i, j| {
        let mut w = CoordPoly::zero(n);
        for p in 1..=i {
            for q in 1..=j {
                let l = lambda.get((i + 1 - p) as i64, (j + 1 - q) as i64);
                if !l.is_zero() {
                    let c = l * rational::int((p * q) as i64);
                    w.add_scaled(&CoordPoly::coord(n, p).mul_ref(&CoordPoly::coord(n, q)), &c);
                }
                let l = lambda.get(p as i64, q as i64);
                if !l.is_zero() {
                    w.add_scaled(&comp.get(p, i).mul_ref(comp.get(q, j)), &-l);
                }
            }
        }
        w
    })
}

/// The countable family indexed by `d`:
///
/// ```text
/// omega_ij = (i-d) j x_j x_{i-d} - i (j-d) x_i x_{j-d}
///          + x_i C_{d+1}(j) - x_j C_{d+1}(i)
/// ```
///
/// with `x_k = 0` for `k < 1`.
pub fn omega_special(d: usize, n: usize) -> Result<OmegaTable> {
    if d == 0 {
        return Err(Error::Precondition("d must be a positive integer".into()));
    }
    let comp = CompositionSums::new(n);
    let c = |p: usize, i: usize| {
        if p <= n && i >= p {
            comp.get(p, i).clone()
        } else {
            CoordPoly::zero(n)
        }
    };
    Ok(OmegaTable::from_upper(n, |i, j| {
        let (ii, jj, dd) = (i as i64, j as i64, d as i64);
        let mut w = CoordPoly::zero(n);
        w.add_scaled(
            &x_or_zero(n, jj).mul_ref(&x_or_zero(n, ii - dd)),
            &rational::int((ii - dd) * jj),
        );
        w.add_scaled(
            &x_or_zero(n, ii).mul_ref(&x_or_zero(n, jj - dd)),
            &rational::int(-ii * (jj - dd)),
        );
        w.add_assign_ref(&x_or_zero(n, ii).mul_ref(&c(d + 1, j)));
        w.add_scaled(&x_or_zero(n, jj).mul_ref(&c(d + 1, i)), &rational::int(-1));
        w
    }))
}

/// `Omega(u, v; x) = phi(u, v) x'(u) x'(v) - phi(x(u), x(v))` expanded with
/// `x(u) = sum x_i u^i` as a series with polynomial coefficients;
/// `omega_ij` is the coefficient of `u^i v^j`. Needs `phi` to order `2N`.
pub fn omega_from_phi(phi: &PhiSeries, n: usize) -> Result<OmegaTable> {
    let ord = 2 * n as u32;
    if phi.ord() < ord {
        return Err(Error::OrderMismatch(format!(
            "phi of order {} does not determine omega on G_{n} (needs {ord})",
            phi.ord()
        )));
    }
    let phi_p: PolySeries = phi
        .series()
        .truncate(ord)
        .map_coeffs(|c| CoordPoly::constant(n, c.clone()));
    let mut xu_terms = Vec::with_capacity(n);
    let mut xv_terms = Vec::with_capacity(n);
    for i in 1..=n {
        xu_terms.push(([i as u32, 0, 0], CoordPoly::coord(n, i)));
        xv_terms.push(([0, i as u32, 0], CoordPoly::coord(n, i)));
    }
    let xu = TruncSeries::from_terms(2, ord, xu_terms);
    let xv = TruncSeries::from_terms(2, ord, xv_terms);
    let lhs = phi_p.mul(&xu.partial(0)).mul(&xv.partial(1));
    let rhs = phi_p.substitute(&[xu, xv])?;
    let big = lhs.sub(&rhs);
    Ok(OmegaTable::from_upper(n, |i, j| big.coeff(&[i as u32, j as u32])))
}

/// The three-dimensional example with a Laurent entry:
/// `{x1,x2} = x1 x2`, `{x1,x3} = 4 x2^2 - 2 x1 x3`,
/// `{x2,x3} = 6 x2^3 / x1 - 5 x2 x3`.
pub fn g3_example() -> OmegaTable {
    let m = |e: [i32; 3], c: i64| CoordPoly::monomial(e.to_vec(), rational::int(c));
    let mut t = OmegaTable::zero(3);
    t.set(1, 2, m([1, 1, 0], 1));
    t.set(1, 3, m([0, 2, 0], 4) + m([1, 0, 1], -2));
    t.set(2, 3, m([-1, 3, 0], 6) + m([0, 1, 1], -5));
    t
}
