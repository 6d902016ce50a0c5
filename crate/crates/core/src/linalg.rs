//! Exact sparse row reduction over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// A sparse row: column index to nonzero coefficient.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Rows kept in echelon form, one per pivot column, each with leading
/// coefficient 1. Rows are inserted one at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &mut SparseRow, c: &Rational, other: &SparseRow) {
    for (k, v) in other {
        let entry = row.entry(*k).or_insert_with(Rational::zero);
        *entry += c * v;
        if entry.is_zero() {
            row.remove(k);
        }
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    /// Widens the column range; existing rows are unaffected.
    pub fn with_ncols(mut self, ncols: usize) -> Self {
        assert!(ncols >= self.ncols);
        self.ncols = ncols;
        self
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Reduces `row` by the stored pivots. Returns the leading column of the
    /// remainder, or `None` if the row was dependent.
    pub fn insert(&mut self, mut row: SparseRow) -> Option<usize> {
        row.retain(|_, v| !v.is_zero());
        loop {
            let (&lead, lead_val) = row.iter().next()?;
            match self.pivots.get(&lead) {
                Some(p) => {
                    let c = -lead_val.clone();
                    axpy(&mut row, &c, p);
                }
                None => {
                    let inv = Rational::one() / lead_val;
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return Some(lead);
                }
            }
        }
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// For a system whose last column (`ncols - 1`) is the right-hand side:
    /// `None` if some row reduces to `0 = nonzero`, otherwise the solution
    /// with every free variable set to zero.
    pub fn solve_augmented(&self) -> Option<Vec<Rational>> {
        let rhs = self.ncols - 1;
        if self.pivots.contains_key(&rhs) {
            return None;
        }
        let mut x = vec![Rational::zero(); rhs];
        for (&p, row) in self.pivots.iter().rev() {
            let mut v = row.get(&rhs).cloned().unwrap_or_else(Rational::zero);
            for (&c, a) in row.range(p + 1..rhs) {
                v -= a * &x[c];
            }
            x[p] = v;
        }
        Some(x)
    }
}

/// Rank of a dense matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(dense_to_sparse(r));
    }
    e.rank()
}

pub fn dense_to_sparse(r: &[Rational]) -> SparseRow {
    r.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, v.clone()))
        .collect()
}

/// Solves `A x = b` exactly; `None` if inconsistent. Free variables are set
/// to zero. Also returns the nullity of `A`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> (Option<Vec<Rational>>, usize) {
    let mut aug = Echelon::new(ncols + 1);
    let mut hom = Echelon::new(ncols);
    for (row, rhs) in a.iter().zip(b) {
        let s = dense_to_sparse(row);
        hom.insert(s.clone());
        let mut s = s;
        if !rhs.is_zero() {
            s.insert(ncols, rhs.clone());
        }
        aug.insert(s);
    }
    (aug.solve_augmented(), hom.nullity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[0, 1, 1], &[1, 3, 4]])), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&m(&[&[2, 0, 1], &[0, 3, 0], &[1, 1, 1]])), 3);
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let a = m(&[&[2, 1], &[1, -1]]);
        let (x, nul) = solve(&a, &[int(3), int(0)], 2);
        assert_eq!(x.unwrap(), vec![int(1), int(1)]);
        assert_eq!(nul, 0);
        let a = m(&[&[1, 1], &[2, 2]]);
        let (x, nul) = solve(&a, &[int(1), int(3)], 2);
        assert!(x.is_none());
        assert_eq!(nul, 1);
    }

    #[test]
    fn solve_with_free_variables() {
        let a = m(&[&[1, 2, 0], &[0, 0, 3]]);
        let (x, nul) = solve(&a, &[int(5), int(1)], 3);
        let x = x.unwrap();
        assert_eq!(nul, 1);
        assert_eq!(&x[0] + &x[1] * int(2), int(5));
        assert_eq!(x[2], ratio(1, 3));
    }
}
