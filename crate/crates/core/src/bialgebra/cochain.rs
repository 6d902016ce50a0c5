//! Cochains `alpha: g -> g (x) g`, coboundaries of r-matrices, and the
//! bialgebra conditions.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phi::PhiSeries;
use crate::poisson::LambdaTable;
use crate::rational::{self, Rational};

use super::tensor::{adjoint_on_tensor2, witt_bracket, RMatrix, Tensor2, Tensor3};

/// `alpha(e_n)` for `0 <= n <= cap`, each a `Tensor2` with the same cap.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTable {
    cap: usize,
    tables: Vec<Tensor2>,
}

impl AlphaTable {
    pub fn zero(cap: usize) -> Self {
        AlphaTable {
            cap,
            tables: vec![Tensor2::zero(cap); cap + 1],
        }
    }

    pub fn from_fn<F>(cap: usize, f: F) -> Self
    where
        F: Fn(usize) -> Tensor2 + Sync,
    {
        let tables = (0..=cap)
            .into_par_iter()
            .map(|n| f(n).with_cap(cap))
            .collect();
        AlphaTable { cap, tables }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&self, n: usize) -> &Tensor2 {
        &self.tables[n]
    }

    pub fn get_mut(&mut self, n: usize) -> &mut Tensor2 {
        &mut self.tables[n]
    }

    /// `alpha_n^{ij}`; zero outside the box.
    pub fn component(&self, n: i64, i: i64, j: i64) -> Rational {
        if n < 0 || n as usize > self.cap {
            return Rational::zero();
        }
        self.tables[n as usize].get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.tables.iter().all(|t| t.is_zero())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.tables.iter().all(|t| t.is_antisymmetric())
    }

    pub fn scale(&self, c: &Rational) -> AlphaTable {
        AlphaTable {
            cap: self.cap,
            tables: self.tables.iter().map(|t| t.scale(c)).collect(),
        }
    }

    pub fn with_cap(&self, m: usize) -> AlphaTable {
        AlphaTable::from_fn(m, |n| {
            if n <= self.cap {
                self.tables[n].with_cap(m)
            } else {
                Tensor2::zero(m)
            }
        })
    }

    /// The common value of `i + j - n` over all nonzero components:
    /// `Some(None)` for the zero table, `None` if the support is not graded.
    pub fn weight(&self) -> Option<Option<i64>> {
        let mut w = None;
        for (n, t) in self.tables.iter().enumerate() {
            for (i, j, _) in t.nonzero() {
                let here = (i + j) as i64 - n as i64;
                match w {
                    None => w = Some(here),
                    Some(prev) if prev != here => return None,
                    _ => {}
                }
            }
        }
        Some(w)
    }

    pub fn to_json(&self) -> Vec<IndexedValue3> {
        self.tables
            .iter()
            .enumerate()
            .flat_map(|(n, t)| {
                t.nonzero()
                    .filter(|&(i, j, _)| i < j)
                    .map(move |(i, j, v)| IndexedValue3 {
                        n,
                        i,
                        j,
                        value: v.clone(),
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn from_json(cap: usize, entries: &[IndexedValue3]) -> Result<AlphaTable> {
        let mut out = AlphaTable::zero(cap);
        for e in entries {
            if e.n > cap || e.i >= e.j || e.j > cap {
                return Err(Error::Parse(format!(
                    "alpha component ({}; {}, {}) outside the cap {cap} upper triangle",
                    e.n, e.i, e.j
                )));
            }
            out.tables[e.n].add_wedge(e.i, e.j, &e.value);
        }
        Ok(out)
    }
}

/// One upper-triangle component `alpha_n^{ij}`, 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexedValue3 {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

/// `(e_n . r)^{ij} = (2n - i) r^{i-n, j} + (2n - j) r^{i, j-n}`, filled
/// component by component.
pub fn coboundary(r: &RMatrix, n: usize) -> Tensor2 {
    let cap = r.cap();
    let nn = n as i64;
    let mut out = Tensor2::zero(cap);
    for i in 0..=cap as i64 {
        for j in 0..=cap as i64 {
            let v = rational::int(2 * nn - i) * r.get(i - nn, j) + rational::int(2 * nn - j) * r.get(i, j - nn);
            out.set(i as usize, j as usize, v);
        }
    }
    out
}

pub fn coboundary_table(r: &RMatrix) -> AlphaTable {
    AlphaTable::from_fn(r.cap(), |n| coboundary(r, n))
}

/// `(n - m) alpha(e_{n+m}) - e_n . alpha(e_m) + e_m . alpha(e_n)` on the
/// components inside the cap, all of which are exact. Needs `n + m <= cap`.
pub fn cocycle_residual(alpha: &AlphaTable, n: usize, m: usize) -> Result<Tensor2> {
    if n + m > alpha.cap() {
        return Err(Error::Precondition(format!(
            "cocycle check at ({n}, {m}) needs alpha(e_{}) but the cap is {}",
            n + m,
            alpha.cap()
        )));
    }
    let lhs = alpha.get(n + m).scale(&rational::int(n as i64 - m as i64));
    let a = adjoint_on_tensor2(n, alpha.get(m)).table;
    let b = adjoint_on_tensor2(m, alpha.get(n)).table;
    Ok(lhs.sub(&a).add(&b))
}

/// Residuals for all `n < m` with `n + m <= cap`.
pub fn cocycle_residuals(alpha: &AlphaTable) -> Vec<((usize, usize), Tensor2)> {
    let cap = alpha.cap();
    let pairs: Vec<(usize, usize)> = (0..=cap)
        .flat_map(|n| (n + 1..=cap).map(move |m| (n, m)))
        .filter(|&(n, m)| n + m <= cap)
        .collect();
    pairs
        .into_par_iter()
        .map(|(n, m)| ((n, m), cocycle_residual(alpha, n, m).expect("pair is inside the cap")))
        .collect()
}

/// `[r12, r13] + [r12, r23] + [r13, r23]` with
/// `[r12, r13] = sum r^{ij} r^{kl} [e_i, e_k] (x) e_j (x) e_l` and so on.
/// Only components with every index inside the cap are kept; those are exact.
pub fn cybe_residual(r: &RMatrix) -> Tensor3 {
    let cap = r.cap();
    let nz: Vec<(usize, usize, Rational)> = r.nonzero().map(|(i, j, v)| (i, j, v.clone())).collect();
    let mut out = Tensor3::zero();
    for (i, j, a) in &nz {
        for (k, l, b) in &nz {
            let ab = a * b;
            let (c, s) = witt_bracket(*i, *k);
            out.add_at((s, *j, *l), &c * &ab);
            let (c, s) = witt_bracket(*j, *k);
            out.add_at((*i, s, *l), &c * &ab);
            let (c, s) = witt_bracket(*j, *l);
            out.add_at((*i, *k, s), c * ab);
        }
    }
    out.restrict(cap)
}

/// The cyclic symmetrization of `(1 (x) alpha) alpha(e_n)`:
/// `T^{ikl} = sum_j alpha_n^{ij} alpha_j^{kl}`, residual
/// `T^{pqr} + T^{qrp} + T^{rpq}`. Exact inside the cap whenever
/// `alpha_j^{kl} = 0` for `j > max(k, l)`, which holds for coboundaries.
pub fn cojacobi_residual(alpha: &AlphaTable, n: usize) -> Tensor3 {
    let mut t = Tensor3::zero();
    for (i, j, a) in alpha.get(n).nonzero() {
        for (k, l, b) in alpha.get(j).nonzero() {
            t.add_at((i, k, l), a * b);
        }
    }
    let mut out = Tensor3::zero();
    for (&(a, b, c), v) in t.terms() {
        out.add_at((a, b, c), v.clone());
        out.add_at((c, a, b), v.clone());
        out.add_at((b, c, a), v.clone());
    }
    out
}

fn require_d(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Precondition("d must be a positive integer".into()));
    }
    Ok(())
}

/// `alpha_d(e_n) = 2n e_d ^ e_n - 2(n - d) e_0 ^ e_{d+n}`, with
/// `e_a ^ e_b` read as `+1` at `(a, b)` and `-1` at `(b, a)`.
pub fn alpha_family_13(d: usize, n: usize, cap: usize) -> Result<Tensor2> {
    require_d(d)?;
    let mut t = Tensor2::zero(cap);
    t.add_wedge(d, n, &rational::int(2 * n as i64));
    t.add_wedge(0, d + n, &rational::int(-2 * (n as i64 - d as i64)));
    Ok(t)
}

pub fn alpha_family_13_table(d: usize, cap: usize) -> Result<AlphaTable> {
    require_d(d)?;
    Ok(AlphaTable::from_fn(cap, |n| alpha_family_13(d, n, cap).expect("d checked")))
}

/// The one-parameter family deforming `alpha_d`, truncated to indices at
/// most `cap`. Each kept component is exact.
pub fn alpha_family_d_lambda(d: usize, lambda: &Rational, n: usize, cap: usize) -> Result<Tensor2> {
    require_d(d)?;
    let dm1 = rational::int(d as i64 - 1);
    let (di, ni) = (d as i64, n as i64);
    let pw = |lam_exp: i64, dm1_exp: i64| -> Result<Rational> {
        Ok(rational::pow(lambda, lam_exp)? * rational::pow(&dm1, dm1_exp)?)
    };
    let mut t = Tensor2::zero(cap);
    for i in d + n..=cap {
        let e = i as i64 - (ni + di);
        let c = rational::int(2 * (2 * ni - i as i64)) * pw(e, e)?;
        t.add_wedge(0, i, &c);
    }
    for i in d..=cap {
        let e = i as i64 - di;
        let c = rational::int(-2 * ni) * pw(e, e)?;
        t.add_wedge(i, n, &c);
    }
    for i in d + n..=cap {
        for j in 1..d {
            let e = (i + j) as i64 - (ni + di);
            let c = rational::int(2 * (2 * ni - i as i64)) * pw(e, e - 1)?;
            t.add_wedge(i, j, &c);
        }
    }
    for i in d..=cap {
        for j in n + 1..(d + n).min(cap + 1) {
            let e = (i + j) as i64 - (ni + di);
            let c = rational::int(2 * (2 * ni - j as i64)) * pw(e, e - 1)?;
            t.add_wedge(i, j, &c);
        }
    }
    Ok(t)
}

pub fn alpha_family_d_lambda_table(d: usize, lambda: &Rational, cap: usize) -> Result<AlphaTable> {
    require_d(d)?;
    let tables: Result<Vec<Tensor2>> = (0..=cap)
        .map(|n| alpha_family_d_lambda(d, lambda, n, cap))
        .collect();
    Ok(AlphaTable {
        cap,
        tables: tables?,
    })
}

/// `r^{ij} = lambda_{i+1, j+1}`, cap `N - 1`.
pub fn r_from_lambda(lambda: &LambdaTable) -> RMatrix {
    let cap = lambda.n().saturating_sub(1);
    let mut r = Tensor2::zero(cap);
    for (m, k, v) in lambda.upper() {
        r.add_wedge(m - 1, k - 1, &v);
    }
    r
}

/// `r^{ij} = [u^{i+1} v^{j+1}] phi`; needs `phi` to order `2 cap + 2`.
pub fn r_from_phi(phi: &PhiSeries, cap: usize) -> Result<RMatrix> {
    if (phi.ord() as usize) < 2 * cap + 2 {
        return Err(Error::OrderMismatch(format!(
            "phi of order {} does not determine an r-matrix with cap {cap}",
            phi.ord()
        )));
    }
    let lambda = LambdaTable::from_phi(phi, cap + 1)?;
    Ok(r_from_lambda(&lambda))
}

/// How two tables compare up to a scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum Proportion {
    BothZero,
    /// `a = c b`.
    Scalar(Rational),
    NotProportional,
}

/// Finds `c` with `a = c b` on the common box.
pub fn proportionality(a: &AlphaTable, b: &AlphaTable) -> Proportion {
    let cap = a.cap().min(b.cap());
    let mut c: Option<Rational> = None;
    for n in 0..=cap as i64 {
        for i in 0..=cap as i64 {
            for j in 0..=cap as i64 {
                let (x, y) = (a.component(n, i, j), b.component(n, i, j));
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => {}
                    (false, true) => return Proportion::NotProportional,
                    (_, false) => {
                        let here = x / y;
                        match &c {
                            None => c = Some(here),
                            Some(prev) if *prev != here => return Proportion::NotProportional,
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    match c {
        None => Proportion::BothZero,
        Some(c) => Proportion::Scalar(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::tensor::adjoint_on_tensor3;
    use crate::rational::{int, ratio};
    use crate::phi::phi_d_lambda;
    use crate::poisson::{lambda_from_mu, MuSeq, RelationMode};

    fn r0d(d: usize, cap: usize) -> RMatrix {
        Tensor2::from_upper(cap, [(0, d, int(1))]).unwrap()
    }

    /// Brute-force expansion of the three brackets over every index tuple.
    fn cybe_oracle(r: &RMatrix) -> Tensor3 {
        let cap = r.cap() as i64;
        let mut out = Tensor3::zero();
        for a in 0..=cap {
            for b in 0..=cap {
                for c in 0..=cap {
                    let mut v = Rational::zero();
                    // [r12, r13]: a = i + k, b = j, c = l
                    for i in 0..=a {
                        v += r.get(i, b) * r.get(a - i, c) * int(2 * i - a);
                    }
                    // [r12, r23]: b = j + k
                    for j in 0..=b {
                        v += r.get(a, j) * r.get(b - j, c) * int(2 * j - b);
                    }
                    // [r13, r23]: c = j + l
                    for j in 0..=c {
                        v += r.get(a, j) * r.get(b, c - j) * int(2 * j - c);
                    }
                    out.add_at((a as usize, b as usize, c as usize), v);
                }
            }
        }
        out
    }

    #[test]
    fn coboundary_examples() {
        let (d, cap) = (2, 10);
        let r = r0d(d, cap);
        for n in 1..=4usize {
            let a = coboundary(&r, n);
            let ni = n as i64;
            if n != d {
                assert_eq!(a.get(ni, d as i64), int(ni));
                assert_eq!(a.get(d as i64, ni), int(-ni));
            }
            assert_eq!(a.get((n + d) as i64, 0), int(-(ni - d as i64)));
            assert_eq!(a.get(0, (n + d) as i64), int(ni - d as i64));
        }
        let r = Tensor2::from_upper(6, [(1, 3, int(2)), (0, 5, ratio(1, 3))]).unwrap();
        let mut expected = Tensor2::zero(6);
        for (i, j, v) in r.nonzero() {
            expected.set(i, j, v * int(-((i + j) as i64)));
        }
        assert_eq!(coboundary(&r, 0), expected);
        assert!(coboundary(&Tensor2::zero(5), 3).is_zero());
    }

    #[test]
    fn closed_formula_matches_adjoint() {
        let r = Tensor2::from_upper(
            9,
            [(0, 1, int(3)), (1, 4, ratio(-2, 5)), (2, 7, int(1)), (3, 9, ratio(7, 2)), (5, 6, int(-4))],
        )
        .unwrap();
        for n in 0..=9 {
            assert_eq!(coboundary(&r, n), adjoint_on_tensor2(n, &r).table, "n={n}");
        }
    }

    #[test]
    fn family_13_is_minus_two_coboundaries() {
        for d in 1..=4 {
            let a = alpha_family_13_table(d, 10).unwrap();
            let b = coboundary_table(&r0d(d, 10));
            assert_eq!(proportionality(&a, &b), Proportion::Scalar(int(-2)), "d={d}");
            assert!(cocycle_residuals(&a).iter().all(|(_, t)| t.is_zero()));
            assert_eq!(a.weight(), Some(Some(d as i64)));
        }
        let a = alpha_family_13(3, 3, 8).unwrap();
        assert_eq!(a.get(3, 3), int(0));
        assert_eq!(a.nonzero().count(), 0);
    }

    #[test]
    fn mutated_cocycle_fails() {
        let mut a = alpha_family_13_table(2, 8).unwrap();
        a.get_mut(1).add_wedge(1, 3, &int(1));
        assert!(cocycle_residuals(&a).iter().any(|(_, t)| !t.is_zero()));
    }

    #[test]
    fn d_lambda_family() {
        let cap = 10;
        for d in 1..=3usize {
            for lam in [int(1), ratio(-1, 2), int(0)] {
                let a = alpha_family_d_lambda_table(d, &lam, cap).unwrap();
                assert!(a.is_antisymmetric());
                assert!(cocycle_residuals(&a).iter().all(|(_, t)| t.is_zero()), "d={d} lam={lam}");
                let phi = phi_d_lambda(d as u32, &lam, 2 * cap as u32 + 2).unwrap();
                let r = r_from_phi(&phi, cap).unwrap();
                assert_eq!(proportionality(&a, &coboundary_table(&r)), Proportion::Scalar(int(2)));
            }
            let a0 = alpha_family_d_lambda_table(d, &int(0), cap).unwrap();
            let a13 = alpha_family_13_table(d, cap).unwrap();
            assert_eq!(proportionality(&a0, &a13), Proportion::Scalar(int(-1)));
        }
        let a = alpha_family_d_lambda_table(1, &int(5), cap).unwrap();
        let b = alpha_family_d_lambda_table(1, &ratio(-3, 7), cap).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cybe_matches_oracle() {
        let samples = [
            r0d(2, 7),
            Tensor2::from_upper(7, [(1, 2, int(1))]).unwrap(),
            Tensor2::from_upper(7, [(0, 1, int(2)), (1, 3, ratio(1, 2)), (2, 5, int(-1))]).unwrap(),
        ];
        for r in &samples {
            assert_eq!(cybe_residual(r), cybe_oracle(r));
        }
        assert!(cybe_residual(&samples[0]).is_zero());
        let e12 = cybe_residual(&samples[1]);
        assert!(!e12.is_zero());
        assert!(cybe_residual(&Tensor2::zero(5)).is_zero());
    }

    #[test]
    fn classified_r_matrices_solve_cybe() {
        let mu = MuSeq::from_tail(2, 9, &[int(1), ratio(2, 3), int(0), int(-1), ratio(1, 2), int(3), int(1), int(2), int(-2)])
            .unwrap()
            .enforce_relation();
        let r = r_from_lambda(&lambda_from_mu(&mu, RelationMode::Strict).unwrap());
        assert_eq!(r.cap(), 8);
        assert!(cybe_residual(&r).is_zero());
        let alpha = coboundary_table(&r);
        for n in 0..=8 {
            assert!(cojacobi_residual(&alpha, n).restrict(8).is_zero());
        }
    }

    #[test]
    fn cojacobi_is_action_on_cybe() {
        let r = Tensor2::from_upper(8, [(0, 1, int(1)), (1, 2, int(1)), (2, 4, ratio(-1, 3))]).unwrap();
        let alpha = coboundary_table(&r);
        let cy = cybe_residual(&r);
        assert!(!cy.is_zero());
        for n in 0..=8 {
            let lhs = cojacobi_residual(&alpha, n).restrict(8);
            let rhs = adjoint_on_tensor3(n, &cy, 8);
            assert_eq!(lhs, rhs, "n={n}");
        }
        assert!(cojacobi_residual(&AlphaTable::zero(4), 2).is_zero());
    }

    #[test]
    fn r_from_lambda_shift() {
        let t = lambda_from_mu(&MuSeq::unit(3, 6), RelationMode::Strict).unwrap();
        let r = r_from_lambda(&t);
        assert_eq!(r.get(0, 3), int(1));
        assert_eq!(r.get(3, 0), int(-1));
        assert_eq!(r.nonzero().count(), 2);
        assert!(r_from_lambda(&LambdaTable::zero(4)).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let a = alpha_family_13_table(2, 5).unwrap();
        let s = serde_json::to_string(&a.to_json()).unwrap();
        let back: Vec<IndexedValue3> = serde_json::from_str(&s).unwrap();
        assert_eq!(AlphaTable::from_json(5, &back).unwrap(), a);
    }
}
