//! The antisymmetric generating series `phi(u, v) = sum lambda_ij u^i v^j`
//! and the functional PDE every admissible `phi` must satisfy:
//!
//! ```text
//! phi(u,v) [d_u phi(w,u) + d_v phi(w,v)] + cyclic(u -> v -> w) = 0
//! ```
//!
//! `d_u phi(w,u)` is the derivative of `phi` in its second slot, evaluated at
//! `(w, u)`. The cyclic sum permutes the three formal variables through both
//! factors at once.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::series::{ScalarSeries, TruncSeries};

/// An antisymmetric bivariate series divisible by both `u` and `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSeries {
    series: ScalarSeries,
}

impl PhiSeries {
    pub fn new(series: ScalarSeries) -> Result<Self> {
        if series.nvars() != 2 {
            return Err(Error::Precondition("phi is a series in (u, v)".into()));
        }
        for (d, c) in series.terms() {
            if d[0] == 0 || d[1] == 0 {
                return Err(Error::Precondition(format!(
                    "phi has a term u^{} v^{} not divisible by uv",
                    d[0], d[1]
                )));
            }
            if series.coeff(&[d[1], d[0]]) != -c.clone() {
                return Err(Error::Precondition(format!(
                    "phi is not antisymmetric at u^{} v^{}",
                    d[0], d[1]
                )));
            }
        }
        Ok(PhiSeries { series })
    }

    /// Builds `phi` from its `i < j` coefficients.
    pub fn from_upper<I>(ord: u32, upper: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, Rational)>,
    {
        let mut terms = Vec::new();
        for (i, j, c) in upper {
            if i == 0 || i >= j {
                return Err(Error::Precondition(format!(
                    "upper-triangle entry ({i},{j}) needs 1 <= i < j"
                )));
            }
            terms.push(([i, j, 0], c.clone()));
            terms.push(([j, i, 0], -c));
        }
        Self::new(TruncSeries::from_terms(2, ord, terms))
    }

    pub fn zero(ord: u32) -> Self {
        PhiSeries {
            series: TruncSeries::zero(2, ord),
        }
    }

    pub fn series(&self) -> &ScalarSeries {
        &self.series
    }

    pub fn ord(&self) -> u32 {
        self.series.ord()
    }

    /// `lambda_ij`, the coefficient of `u^i v^j`.
    pub fn lambda(&self, i: u32, j: u32) -> Rational {
        self.series.coeff(&[i, j])
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> PhiSeries {
        PhiSeries {
            series: self.series.scale(c),
        }
    }

    pub fn neg(&self) -> PhiSeries {
        self.scale(&-Rational::one())
    }

    pub fn truncate(&self, ord: u32) -> PhiSeries {
        PhiSeries {
            series: self.series.truncate(ord),
        }
    }

    pub fn to_json(&self) -> PhiJson {
        PhiJson {
            ord: self.ord(),
            lambda: self
                .series
                .terms()
                .filter(|(d, _)| d[0] < d[1])
                .map(|(d, c)| LambdaEntry {
                    i: d[0] as usize,
                    j: d[1] as usize,
                    value: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PhiJson) -> Result<Self> {
        Self::from_upper(
            j.ord,
            j.lambda.iter().map(|e| (e.i as u32, e.j as u32, e.value.clone())),
        )
    }
}

/// `{"Ord": int, "lambda": [{"i", "j", "value"}]}` with `i < j` only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiJson {
    #[serde(rename = "Ord")]
    pub ord: u32,
    pub lambda: Vec<LambdaEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub i: usize,
    pub j: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

/// The parameter sets that produce a `phi`.
#[derive(Clone, Debug, PartialEq)]
pub enum PhiFamily {
    /// `uv(u^d - v^d)`.
    Corollary1 { d: u32 },
    /// The one-parameter deformation with parameter `lambda_def`.
    DLambda { d: u32, lambda_def: Rational },
    /// `(f(u) g(v) - f(v) g(u)) / mu` for a pair satisfying the Wronskian
    /// condition.
    Pair {
        d: u32,
        f: ScalarSeries,
        g: ScalarSeries,
        mu: Rational,
    },
}

impl PhiFamily {
    pub fn build(&self, ord: u32) -> Result<PhiSeries> {
        match self {
            PhiFamily::Corollary1 { d } => phi_corollary1(*d, ord),
            PhiFamily::DLambda { d, lambda_def } => phi_d_lambda(*d, lambda_def, ord),
            PhiFamily::Pair { d, f, g, mu } => phi_from_pair(f, g, *d, mu, ord),
        }
    }
}

fn require_d(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::Precondition("d must be a positive integer".into()));
    }
    Ok(())
}

/// `uv(u^d - v^d)`: `lambda_{d+1,1} = 1`, `lambda_{1,d+1} = -1`.
pub fn phi_corollary1(d: u32, ord: u32) -> Result<PhiSeries> {
    require_d(d)?;
    PhiSeries::from_upper(ord, [(1, d + 1, -Rational::one())])
}

/// `[uv(v^d - u^d) + lambda d u^2 v^2 (u^{d-1} - v^{d-1})] / ([1 - a u][1 - a v])`
/// with `a = (d-1) lambda`, expanded by geometric series.
pub fn phi_d_lambda(d: u32, lambda_def: &Rational, ord: u32) -> Result<PhiSeries> {
    require_d(d)?;
    let one = Rational::one();
    let ld = lambda_def * rational::int(d as i64);
    let mut numerator = vec![
        ([1, d + 1, 0], one.clone()),
        ([d + 1, 1, 0], -one.clone()),
    ];
    if d > 1 {
        numerator.push(([d + 1, 2, 0], ld.clone()));
        numerator.push(([2, d + 1, 0], -ld));
    }
    let num = TruncSeries::from_terms(2, ord, numerator);
    let a = rational::int(d as i64 - 1) * lambda_def;
    let gu = TruncSeries::geometric(2, 0, &a, ord);
    let gv = TruncSeries::geometric(2, 1, &a, ord);
    PhiSeries::new(num.mul(&gu).mul(&gv))
}

/// Outcome of the Wronskian-type test `f'g - fg' + d mu f = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCheck {
    pub passed: bool,
    pub residual: ScalarSeries,
}

pub fn pair_condition_check(f: &ScalarSeries, g: &ScalarSeries, d: u32, mu: &Rational) -> PairCheck {
    let fp = f.partial(0);
    let gp = g.partial(0);
    let residual = fp
        .mul(g)
        .sub(&f.mul(&gp))
        .add(&f.scale(&(mu * rational::int(d as i64))));
    PairCheck {
        passed: residual.is_zero(),
        residual,
    }
}

pub fn phi_from_pair(
    f: &ScalarSeries,
    g: &ScalarSeries,
    d: u32,
    mu: &Rational,
    ord: u32,
) -> Result<PhiSeries> {
    require_d(d)?;
    if f.nvars() != 1 || g.nvars() != 1 {
        return Err(Error::Precondition("f and g must be univariate".into()));
    }
    if mu.is_zero() {
        return Err(Error::Precondition("mu_{d+1} must be nonzero".into()));
    }
    if f.valuation() != Some(d + 1) {
        return Err(Error::Precondition(format!(
            "f must vanish to order exactly {} at u = 0, found {:?}",
            d + 1,
            f.valuation()
        )));
    }
    let check = pair_condition_check(f, g, d, mu);
    if !check.passed {
        return Err(Error::Precondition(
            "f'g - fg' = -d mu f does not hold for the supplied pair".into(),
        ));
    }
    let fu = f.remap(&[0], 2);
    let fv = f.remap(&[1], 2);
    let gu = g.remap(&[0], 2);
    let gv = g.remap(&[1], 2);
    let phi = fu.mul(&gv).sub(&fv.mul(&gu)).scale(&mu.recip()).truncate(ord);
    PhiSeries::new(phi)
}

/// The trivariate residual of the functional PDE with the degree up to which
/// truncation cannot affect it.
#[derive(Clone, Debug, PartialEq)]
pub struct Pde10Residual {
    pub series: ScalarSeries,
    pub trusted_degree: u32,
}

impl Pde10Residual {
    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }
}

pub fn pde10_residual(phi: &PhiSeries) -> Pde10Residual {
    let p = phi.series();
    let dp = p.partial(1);
    // slot assignment (first, second) -> variable index; u = 0, v = 1, w = 2
    let at = |s: &ScalarSeries, a: usize, b: usize| s.remap(&[a, b], 3);
    let term = |a: usize, b: usize, c: usize| {
        at(p, a, b).mul(&at(&dp, c, a).add(&at(&dp, c, b)))
    };
    let (u, v, w) = (0, 1, 2);
    let series = term(u, v, w).add(&term(v, w, u)).add(&term(w, u, v));
    let trusted_degree = series.ord();
    Pde10Residual {
        series,
        trusted_degree,
    }
}
