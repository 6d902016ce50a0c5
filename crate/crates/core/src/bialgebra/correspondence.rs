//! Passing between a bracket table on `G_N` and a cochain on the Lie
//! algebra, with basis index `n` matched to the coordinate `x_{n+1}`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::poisson::OmegaTable;
use crate::poly::{CoordPoly, Monomial};
use crate::rational::{self, Rational};

use super::cochain::AlphaTable;
use super::tensor::{IndexedValue2, RMatrix, Tensor2};

/// `alpha_{n-1}^{i-1, j-1} = d omega_ij / d x_n` at `e = (1, 0, ..., 0)`, for
/// `1 <= i, j, n <= N`. The result has cap `N - 1`.
pub fn derive_cocycle_from_omega(omega: &OmegaTable) -> Result<AlphaTable> {
    let n = omega.n();
    if n == 0 {
        return Err(Error::Precondition("empty bracket table".into()));
    }
    let mut e = vec![Rational::zero(); n];
    e[0] = rational::one();
    let mut out = AlphaTable::zero(n - 1);
    for (i, j, w) in omega.entries() {
        for k in 1..=n {
            let v = w.partial(k).eval(&e)?;
            if !v.is_zero() {
                out.get_mut(k - 1).add_wedge(i - 1, j - 1, &v);
            }
        }
    }
    Ok(out)
}

/// Outcome of solving `alpha(e_n) = e_n . r` on one weight `w = i + j - n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightReport {
    pub weight: i64,
    pub kernel_dim: usize,
    pub solved: bool,
    pub r_components: Vec<IndexedValue2>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub r: RMatrix,
    pub weights: Vec<WeightReport>,
}

impl SolveReport {
    pub fn first_inconsistent(&self) -> Option<i64> {
        self.weights.iter().find(|w| !w.solved).map(|w| w.weight)
    }
}

/// Solves each weight separately, recording kernel dimensions and any
/// weight whose equations are inconsistent. The unknowns of weight `w` are
/// `r^{ab}`, `a < b`, `a + b = w`; every component of `alpha` inside the cap
/// contributes one equation.
pub fn analyze_cocycle(alpha: &AlphaTable) -> SolveReport {
    let cap = alpha.cap() as i64;
    let weights: Vec<i64> = (-cap..=2 * cap).collect();
    let reports: Vec<(WeightReport, Vec<(usize, usize, Rational)>)> =
        weights.into_par_iter().filter_map(|w| solve_weight(alpha, w)).collect();
    let mut r = Tensor2::zero(alpha.cap());
    let mut out = Vec::new();
    for (report, comps) in reports {
        for (a, b, v) in comps {
            r.add_wedge(a, b, &v);
        }
        out.push(report);
    }
    SolveReport { r, weights: out }
}

fn solve_weight(alpha: &AlphaTable, w: i64) -> Option<(WeightReport, Vec<(usize, usize, Rational)>)> {
    let cap = alpha.cap() as i64;
    let unknowns: Vec<(usize, usize)> = (0..=cap)
        .filter_map(|a| {
            let b = w - a;
            (a < b && b <= cap).then_some((a as usize, b as usize))
        })
        .collect();
    let col: BTreeMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let nu = unknowns.len();
    let mut hom = Echelon::new(nu);
    let mut aug = Echelon::new(nu + 1);
    let mut any_equation = false;
    for n in 0..=cap {
        for i in 0..=cap {
            let j = w + n - i;
            if j < 0 || j > cap {
                continue;
            }
            let mut row = SparseRow::new();
            let mut add = |a: i64, b: i64, c: i64| {
                if a < 0 || b < 0 || a == b || c == 0 {
                    return;
                }
                let (key, sign) = if a < b { ((a as usize, b as usize), 1) } else { ((b as usize, a as usize), -1) };
                let k = col[&key];
                *row.entry(k).or_insert_with(Rational::zero) += rational::int(sign * c);
            };
            add(i - n, j, 2 * n - i);
            add(i, j - n, 2 * n - j);
            row.retain(|_, v| !v.is_zero());
            let rhs = alpha.component(n, i, j);
            if row.is_empty() && rhs.is_zero() {
                continue;
            }
            any_equation = true;
            hom.insert(row.clone());
            if !rhs.is_zero() {
                row.insert(nu, rhs);
            }
            aug.insert(row);
        }
    }
    if nu == 0 && !any_equation {
        return None;
    }
    let solution = aug.solve_augmented();
    let solved = solution.is_some();
    let comps: Vec<(usize, usize, Rational)> = solution
        .map(|x| {
            unknowns
                .iter()
                .zip(x)
                .filter(|(_, v)| !v.is_zero())
                .map(|(&(a, b), v)| (a, b, v))
                .collect()
        })
        .unwrap_or_default();
    let report = WeightReport {
        weight: w,
        kernel_dim: hom.nullity(),
        solved,
        r_components: comps
            .iter()
            .map(|(i, j, v)| IndexedValue2 {
                i: *i,
                j: *j,
                value: v.clone(),
            })
            .collect(),
    };
    Some((report, comps))
}

/// Finds `r` with `alpha(e_n) = e_n . r` for every `n` inside the cap.
pub fn solve_r_from_cocycle(alpha: &AlphaTable) -> Result<SolveReport> {
    let report = analyze_cocycle(alpha);
    match report.first_inconsistent() {
        Some(weight) => Err(Error::Inconsistent { weight }),
        None => Ok(report),
    }
}

fn coord_or_zero(n: usize, k: i64) -> CoordPoly {
    if k >= 1 && k as usize <= n {
        CoordPoly::coord(n, k as usize)
    } else {
        CoordPoly::zero(n)
    }
}

fn omega_at(omega: &OmegaTable, a: i64, b: i64) -> CoordPoly {
    let n = omega.n() as i64;
    if a < 1 || b < 1 || a > n || b > n {
        return CoordPoly::zero(omega.n());
    }
    omega.get(a as usize, b as usize).clone()
}

/// Residual of the linear system obtained by differentiating
/// multiplicativity in `y` at `y = e`:
///
/// ```text
/// sum_{i=j}^{max(m,n)} (i+1-j) x_{i+1-j} d omega_mn / d x_i
///   - (m+1-j) omega_{m+1-j,n} - (n+1-j) omega_{m,n+1-j}
///   - sum_{k<=m, l<=n} alpha_j^{kl} (m+1-k)(n+1-l) x_{m+1-k} x_{n+1-l}
/// ```
///
/// with `alpha_j^{kl}` read as `alpha_{j-1}^{k-1,l-1}` of the table.
pub fn pde_system_residual(omega: &OmegaTable, alpha: &AlphaTable, j: usize, m: usize, n: usize) -> Result<CoordPoly> {
    let big_n = omega.n();
    if alpha.cap() + 1 < big_n {
        return Err(Error::Precondition(format!(
            "cochain with cap {} cannot cover a table on G_{big_n}",
            alpha.cap()
        )));
    }
    if j == 0 || m == 0 || n == 0 || m > big_n || n > big_n {
        return Err(Error::Precondition(format!("indices ({j}, {m}, {n}) out of range")));
    }
    let (ji, mi, ni) = (j as i64, m as i64, n as i64);
    let w = omega.get(m, n);
    let mut out = CoordPoly::zero(big_n);
    for i in j..=m.max(n) {
        let d = w.partial(i);
        if d.is_zero() {
            continue;
        }
        let c = i as i64 + 1 - ji;
        out.add_scaled(&coord_or_zero(big_n, c).mul_ref(&d), &rational::int(c));
    }
    out.add_scaled(&omega_at(omega, mi + 1 - ji, ni), &rational::int(-(mi + 1 - ji)));
    out.add_scaled(&omega_at(omega, mi, ni + 1 - ji), &rational::int(-(ni + 1 - ji)));
    for k in 1..=mi {
        for l in 1..=ni {
            let a = alpha.component(ji - 1, k - 1, l - 1);
            if a.is_zero() {
                continue;
            }
            let c = a * rational::int((mi + 1 - k) * (ni + 1 - l));
            let mono = coord_or_zero(big_n, mi + 1 - k).mul_ref(&coord_or_zero(big_n, ni + 1 - l));
            out.add_scaled(&mono, &-c);
        }
    }
    Ok(out)
}

/// Residuals for every `m < n <= N` and `1 <= j <= n`.
pub fn pde_system_residuals(omega: &OmegaTable, alpha: &AlphaTable) -> Result<Vec<((usize, usize, usize), CoordPoly)>> {
    let big_n = omega.n();
    let triples: Vec<(usize, usize, usize)> = (1..=big_n)
        .flat_map(|n| (1..n).flat_map(move |m| (1..=n).map(move |j| (j, m, n))))
        .collect();
    triples
        .into_par_iter()
        .map(|(j, m, n)| Ok(((j, m, n), pde_system_residual(omega, alpha, j, m, n)?)))
        .collect()
}

/// Kernel of the homogeneous system (the one above with `alpha = 0`) for
/// unknown brackets `omega_mn`, `m < n`, `m + n <= bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub bound: usize,
    pub unknowns: usize,
    pub kernel_dim: usize,
}

/// Exponent vectors (length `nvars`) of the monomials of weight `w` in
/// `x_1..x_v`.
fn monomials_of_weight(w: usize, v: usize, nvars: usize) -> Vec<Vec<i32>> {
    fn go(w: usize, max_part: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if w == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max_part.min(w)).rev() {
            cur[p - 1] += 1;
            go(w - p, p, cur, out);
            cur[p - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    go(w, v, &mut vec![0; nvars], &mut out);
    out
}

/// Dimension of the solution space of the homogeneous system, for each
/// cumulative bound `3..=max_bound` on `m + n`.
///
/// The `j = 1` equation is the weighted Euler equation, so `omega_mn` is
/// weighted-homogeneous of weight `m + n`; it involves only `x_k` with
/// `k <= n`. Those two facts fix the ansatz. Without the normalization
/// `omega(e) = 0` the system has the obvious extra solutions with an
/// `x_1^{m+n}` term, so that coefficient is pinned to zero.
pub fn homogeneous_kernel(max_bound: usize) -> Vec<KernelReport> {
    let nvars = max_bound.max(2);
    let mut col: BTreeMap<(usize, usize, Monomial), usize> = BTreeMap::new();
    let mut basis: BTreeMap<(usize, usize), Vec<Monomial>> = BTreeMap::new();
    let mut ech = Echelon::new(0);
    let mut reports = Vec::new();
    for bound in 3..=max_bound {
        let new_pairs: Vec<(usize, usize)> = (1..bound).map(|m| (m, bound - m)).filter(|&(m, n)| m < n).collect();
        for &(m, n) in &new_pairs {
            let monos: Vec<Monomial> = monomials_of_weight(m + n, n, nvars)
                .into_iter()
                .map(Monomial::new)
                .collect();
            for mono in &monos {
                let k = col.len();
                col.insert((m, n, mono.clone()), k);
            }
            basis.insert((m, n), monos);
        }
        ech = Echelon::with_ncols(ech, col.len());
        for &(m, n) in &new_pairs {
            let mut pin = vec![0; nvars];
            pin[0] = (m + n) as i32;
            ech.insert(SparseRow::from([(col[&(m, n, Monomial::new(pin))], rational::one())]));
            for j in 1..=n {
                for row in homogeneous_rows(&basis, &col, nvars, j, m, n) {
                    ech.insert(row);
                }
            }
        }
        reports.push(KernelReport {
            bound,
            unknowns: col.len(),
            kernel_dim: ech.nullity(),
        });
    }
    reports
}

/// One row per monomial of the `(j, m, n)` equation, as a linear form in the
/// unknown coefficients.
fn homogeneous_rows(
    basis: &BTreeMap<(usize, usize), Vec<Monomial>>,
    col: &BTreeMap<(usize, usize, Monomial), usize>,
    nvars: usize,
    j: usize,
    m: usize,
    n: usize,
) -> Vec<SparseRow> {
    let mut rows: BTreeMap<Monomial, SparseRow> = BTreeMap::new();
    let mut push = |image: &CoordPoly, k: usize, scale: &Rational| {
        for (mono, c) in image.terms() {
            let e = rows.entry(mono.clone()).or_default().entry(k).or_insert_with(Rational::zero);
            *e += c * scale;
        }
    };
    let one = rational::one();
    for mono in &basis[&(m, n)] {
        let p = CoordPoly::monomial(mono.exps().to_vec(), one.clone());
        let k = col[&(m, n, mono.clone())];
        let mut image = CoordPoly::zero(nvars);
        for i in j..=n {
            let d = p.partial(i);
            if d.is_zero() {
                continue;
            }
            let c = (i + 1 - j) as i64;
            image.add_scaled(&coord_or_zero(nvars, c).mul_ref(&d), &rational::int(c));
        }
        push(&image, k, &one);
    }
    let mut lower = |a: i64, b: i64, coef: i64| {
        if a < 1 || b < 1 || a == b || coef == 0 {
            return;
        }
        let (key, sign) = if a < b { ((a as usize, b as usize), 1) } else { ((b as usize, a as usize), -1) };
        for mono in &basis[&key] {
            let p = CoordPoly::monomial(mono.exps().to_vec(), one.clone());
            push(&p, col[&(key.0, key.1, mono.clone())], &rational::int(-sign * coef));
        }
    };
    let (ji, mi, ni) = (j as i64, m as i64, n as i64);
    lower(mi + 1 - ji, ni, mi + 1 - ji);
    lower(mi, ni + 1 - ji, ni + 1 - ji);
    rows.into_values()
        .map(|mut r| {
            r.retain(|_, v| !v.is_zero());
            r
        })
        .filter(|r| !r.is_empty())
        .collect()
}
