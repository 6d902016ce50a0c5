//! Classification data: the mu-sequence and the antisymmetric coefficient
//! table `lambda_mn` it determines.
//!
//! Given `d` and `mu_{d+1} != 0`, the entries `lambda_{d+1,n}` follow from
//!
//! ```text
//! lambda_{d+1,n} = -[d mu_{d+1} mu_{n+d}
//!                    - sum_{s<n} (n+d-2s+1) mu_{n+d-s+1} lambda_{s,d+1}]
//!                  / ((d-n+1) mu_{d+1})
//! ```
//!
//! for `n != d+1`, seeded by `lambda_{1,d+1} = mu_{d+1}`. At `n = d+1` the
//! bracket must vanish instead, which is the single relation fixing
//! `mu_{2d+1}`. Every other entry is
//! `lambda_mn = (mu_m lambda_{d+1,n} - mu_n lambda_{d+1,m}) / mu_{d+1}`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phi::{LambdaEntry, PhiSeries};
use crate::rational::{self, Rational};

/// How to treat the relation that pins `mu_{2d+1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationMode {
    /// Reject sequences that violate it.
    #[default]
    Strict,
    /// Overwrite `mu_{2d+1}` with the value it forces.
    Solve,
}

/// `mu_1, mu_2, ...` for a given `d`, long enough to fill an `N x N`
/// lambda table (which needs `mu` up to index `N + d`).
#[derive(Clone, Debug, PartialEq)]
pub struct MuSeq {
    d: usize,
    n: usize,
    mu: Vec<Rational>,
}

impl MuSeq {
    /// `values[k]` is `mu_{k+1}`; missing trailing values are zero.
    pub fn new(d: usize, n: usize, mut values: Vec<Rational>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidMuSeq("d must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidMuSeq("N must be at least 1".into()));
        }
        if values.len() > n + d {
            if values[n + d..].iter().any(|v| !v.is_zero()) {
                return Err(Error::InvalidMuSeq(format!(
                    "{} values supplied but an N={n} table only uses mu_1..mu_{}",
                    values.len(),
                    n + d
                )));
            }
            values.truncate(n + d);
        }
        values.resize(n + d, Rational::zero());
        if let Some(k) = values[..d].iter().position(|v| !v.is_zero()) {
            return Err(Error::InvalidMuSeq(format!(
                "mu_{} must vanish for d={d}",
                k + 1
            )));
        }
        if values[d].is_zero() {
            return Err(Error::InvalidMuSeq(format!("mu_{} must be nonzero", d + 1)));
        }
        Ok(MuSeq { d, n, mu: values })
    }

    /// Sequence given from `mu_{d+1}` onward.
    pub fn from_tail(d: usize, n: usize, tail: &[Rational]) -> Result<Self> {
        let mut values = vec![Rational::zero(); d];
        values.extend_from_slice(tail);
        Self::new(d, n, values)
    }

    /// `mu_{d+1} = 1`, everything else zero.
    pub fn unit(d: usize, n: usize) -> Self {
        Self::from_tail(d, n, &[rational::one()]).expect("unit sequence is admissible")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `mu_k` (1-based); zero outside the stored range.
    pub fn mu(&self, k: usize) -> Rational {
        if k == 0 {
            return Rational::zero();
        }
        self.mu.get(k - 1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn values(&self) -> &[Rational] {
        &self.mu
    }

    /// Index of the constrained entry, when it lies inside the stored range.
    pub fn relation_index(&self) -> Option<usize> {
        let k = 2 * self.d + 1;
        (k <= self.mu.len()).then_some(k)
    }

    /// The value the relation forces on `mu_{2d+1}`.
    pub fn forced_value(&self) -> Rational {
        let d = self.d;
        let head = DPlusOneRow::compute(self, d);
        let mut sum = Rational::zero();
        for s in 2..=d {
            sum += rational::int(2 * (d + 1 - s) as i64) * self.mu(2 * d + 2 - s) * head.lambda_s_d1(s);
        }
        -sum / (rational::int(d as i64) * self.mu(d + 1))
    }

    /// Copy with `mu_{2d+1}` replaced by its forced value.
    pub fn enforce_relation(&self) -> MuSeq {
        let mut out = self.clone();
        if let Some(k) = self.relation_index() {
            out.mu[k - 1] = self.forced_value();
        }
        out
    }

    pub fn check_relation(&self) -> Result<()> {
        if let Some(k) = self.relation_index() {
            let expected = self.forced_value();
            if self.mu(k) != expected {
                return Err(Error::RelationViolated {
                    index: k,
                    expected: rational::format(&expected),
                    found: rational::format(&self.mu(k)),
                });
            }
        }
        Ok(())
    }
}

/// `lambda_{d+1,n}` for `n = 1..=upto`, built by the recursion.
struct DPlusOneRow {
    d: usize,
    row: Vec<Rational>,
}

impl DPlusOneRow {
    fn compute(mu: &MuSeq, upto: usize) -> Self {
        let d = mu.d;
        let mu_d1 = mu.mu(d + 1);
        let mut this = DPlusOneRow {
            d,
            row: vec![Rational::zero(); upto + 1],
        };
        for n in 1..=upto {
            if n == d + 1 {
                continue;
            }
            let mut bracket = rational::int(d as i64) * &mu_d1 * mu.mu(n + d);
            for s in 1..n {
                let coef = (n + d + 1) as i64 - 2 * s as i64;
                bracket -= rational::int(coef) * mu.mu(n + d - s + 1) * this.lambda_s_d1(s);
            }
            let denom = rational::int(d as i64 - n as i64 + 1) * &mu_d1;
            this.row[n] = -bracket / denom;
        }
        this
    }

    /// `lambda_{d+1,n}`
    fn get(&self, n: usize) -> Rational {
        self.row.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    /// `lambda_{s,d+1} = -lambda_{d+1,s}`
    fn lambda_s_d1(&self, s: usize) -> Rational {
        if s == self.d + 1 {
            Rational::zero()
        } else {
            -self.get(s)
        }
    }
}

/// Antisymmetric table `lambda_mn`, `1 <= m, n <= N`; reads outside that
/// range return zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaTable {
    n: usize,
    entries: Vec<Rational>,
}

impl LambdaTable {
    pub fn zero(n: usize) -> Self {
        LambdaTable {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, m: i64, k: i64) -> Rational {
        if m < 1 || k < 1 || m as usize > self.n || k as usize > self.n {
            return Rational::zero();
        }
        self.entries[(m as usize - 1) * self.n + (k as usize - 1)].clone()
    }

    /// Sets `lambda_mk = value` and `lambda_km = -value`.
    pub fn set(&mut self, m: usize, k: usize, value: Rational) {
        assert!(m >= 1 && k >= 1 && m <= self.n && k <= self.n);
        if m == k {
            assert!(value.is_zero(), "diagonal of an antisymmetric table");
            return;
        }
        self.entries[(k - 1) * self.n + (m - 1)] = -value.clone();
        self.entries[(m - 1) * self.n + (k - 1)] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero())
    }

    /// Nonzero `(m, k, lambda_mk)` with `m < k`.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        (1..=self.n).flat_map(move |m| {
            (m + 1..=self.n).filter_map(move |k| {
                let v = self.get(m as i64, k as i64);
                (!v.is_zero()).then_some((m, k, v))
            })
        })
    }

    pub fn truncate(&self, m: usize) -> LambdaTable {
        let m = m.min(self.n);
        let mut out = LambdaTable::zero(m);
        for (a, b, v) in self.upper().filter(|&(a, b, _)| a <= m && b <= m) {
            out.set(a, b, v);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LambdaTable {
        LambdaTable {
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    /// `phi(u, v) = sum lambda_ij u^i v^j`. An `N x N` table determines
    /// `phi` completely up to total degree `N + 1`, which is the order given
    /// to the series.
    pub fn to_phi(&self) -> PhiSeries {
        let ord = self.n as u32 + 1;
        PhiSeries::from_upper(
            ord,
            self.upper()
                .filter(|&(a, b, _)| (a + b) as u32 <= ord)
                .map(|(a, b, v)| (a as u32, b as u32, v)),
        )
        .expect("an antisymmetric table gives an admissible phi")
    }

    /// Reads the `N x N` block of `phi`; needs `phi` known to degree `2N`.
    pub fn from_phi(phi: &PhiSeries, n: usize) -> Result<LambdaTable> {
        if (phi.ord() as usize) < 2 * n {
            return Err(Error::OrderMismatch(format!(
                "phi of order {} does not determine an {n}x{n} table",
                phi.ord()
            )));
        }
        let mut out = LambdaTable::zero(n);
        for m in 1..=n {
            for k in m + 1..=n {
                out.set(m, k, phi.lambda(m as u32, k as u32));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Vec<LambdaEntry> {
        self.upper()
            .map(|(i, j, value)| LambdaEntry { i, j, value })
            .collect()
    }

    pub fn from_json(n: usize, entries: &[LambdaEntry]) -> Result<LambdaTable> {
        let mut out = LambdaTable::zero(n);
        for e in entries {
            if e.i == 0 || e.i >= e.j || e.j > n {
                return Err(Error::Parse(format!(
                    "lambda entry ({}, {}) outside 1 <= i < j <= {n}",
                    e.i, e.j
                )));
            }
            out.set(e.i, e.j, e.value.clone());
        }
        Ok(out)
    }
}

/// Builds the `N x N` lambda table of a mu-sequence.
pub fn lambda_from_mu(mu: &MuSeq, mode: RelationMode) -> Result<LambdaTable> {
    let mu = match mode {
        RelationMode::Strict => {
            mu.check_relation()?;
            mu.clone()
        }
        RelationMode::Solve => mu.enforce_relation(),
    };
    let d = mu.d;
    let n = mu.n;
    let row = DPlusOneRow::compute(&mu, n.max(d + 1));
    let mu_d1 = mu.mu(d + 1);
    let row_at = |k: usize| if k == d + 1 { Rational::zero() } else { row.get(k) };
    let mut table = LambdaTable::zero(n);
    for m in 1..=n {
        for k in m + 1..=n {
            let v = (mu.mu(m) * row_at(k) - mu.mu(k) * row_at(m)) / &mu_d1;
            table.set(m, k, v);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn d1_unit_sequence() {
        let mu = MuSeq::unit(1, 8);
        let t = lambda_from_mu(&mu, RelationMode::Strict).unwrap();
        assert_eq!(t.get(1, 2), int(1));
        assert_eq!(t.get(2, 1), int(-1));
        assert_eq!(t.upper().count(), 1);
        assert_eq!(mu.forced_value(), int(0));
    }

    #[test]
    fn d1_relation_forces_mu3_zero() {
        let mu = MuSeq::from_tail(1, 6, &[int(2), int(5)]).unwrap();
        assert_eq!(mu.relation_index(), Some(3));
        assert!(matches!(
            lambda_from_mu(&mu, RelationMode::Strict),
            Err(Error::RelationViolated { index: 3, .. })
        ));
        let solved = mu.enforce_relation();
        assert_eq!(solved.mu(3), int(0));
        assert!(lambda_from_mu(&mu, RelationMode::Solve).is_ok());
    }

    #[test]
    fn d2_relation_and_first_entries() {
        let (m3, m4) = (ratio(3, 2), ratio(-2, 5));
        let mu = MuSeq::from_tail(2, 6, &[m3.clone(), m4.clone()]).unwrap();
        assert_eq!(mu.forced_value(), &m4 * &m4 / &m3);
        let t = lambda_from_mu(&mu, RelationMode::Solve).unwrap();
        assert_eq!(t.get(3, 2), m4);
        assert_eq!(t.get(2, 3), -m4.clone());
        assert_eq!(t.get(1, 3), m3);
    }

    #[test]
    fn first_row_is_mu() {
        let tail: Vec<Rational> = (0..10).map(|k| ratio(k * 3 - 7, k + 2)).collect();
        for d in 1..=3 {
            let mu = MuSeq::from_tail(d, 8, &tail[..8]).unwrap().enforce_relation();
            let t = lambda_from_mu(&mu, RelationMode::Strict).unwrap();
            for k in 1..=8 {
                assert_eq!(t.get(1, k as i64), mu.mu(k), "d={d} k={k}");
            }
            for a in 1..=d {
                for b in 1..=d {
                    assert!(t.get(a as i64, b as i64).is_zero());
                }
            }
        }
    }

    #[test]
    fn invalid_sequences() {
        assert!(MuSeq::new(2, 5, vec![int(1), int(0), int(1)]).is_err());
        assert!(MuSeq::new(2, 5, vec![int(0), int(0), int(0)]).is_err());
        assert!(MuSeq::new(0, 5, vec![int(1)]).is_err());
    }

    #[test]
    fn phi_conversion() {
        let mu = MuSeq::from_tail(1, 12, &[int(1), int(0), int(2), ratio(1, 2)]).unwrap();
        let big = lambda_from_mu(&mu, RelationMode::Solve).unwrap();
        let phi = big.to_phi();
        assert_eq!(phi.ord(), 13);
        let back = LambdaTable::from_phi(&phi, 6).unwrap();
        assert_eq!(back, big.truncate(6));
        assert!(LambdaTable::from_phi(&phi, 7).is_err());
    }
}
