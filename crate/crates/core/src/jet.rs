//! The jet groups `G_N`: truncated series `x(u) = x1 u + ... + xN u^N` with
//! `x1 != 0`, multiplied by substitution `(xy)(u) = x(y(u)) mod u^{N+1}`.

use serde::{Deserialize, Serialize};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::CoordPoly;
use crate::rational::{self, Rational};
use crate::series::{Coefficient, ScalarSeries, TruncSeries};

/// A point of `G_N`; `coords[k]` holds `x_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetElement {
    coords: Vec<Rational>,
}

impl JetElement {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        match coords.first() {
            None => Err(Error::Precondition("a jet needs at least x1".into())),
            Some(x1) if x1.is_zero() => Err(Error::Precondition("x1 must be nonzero".into())),
            Some(_) => Ok(JetElement { coords }),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut coords = vec![Rational::zero(); n];
        coords[0] = rational::one();
        JetElement { coords }
    }

    pub fn from_ints(xs: &[i64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// `x_i`, 1-based; zero beyond the truncation.
    pub fn x(&self, i: usize) -> Rational {
        self.coords.get(i.wrapping_sub(1)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.order())
    }

    /// `x(u)` as a univariate series of order `ord`.
    pub fn to_series(&self, ord: u32) -> ScalarSeries {
        let mut c = vec![Rational::zero()];
        c.extend(self.coords.iter().cloned());
        TruncSeries::univariate(c, ord)
    }

    /// Reads `x_1..x_n` back from a series.
    pub fn from_series(s: &ScalarSeries, n: usize) -> Result<Self> {
        if !s.coeff1(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if (s.ord() as usize) < n {
            return Err(Error::OrderMismatch(format!(
                "series of order {} cannot fill a jet of order {n}",
                s.ord()
            )));
        }
        Self::new((1..=n).map(|k| s.coeff1(k as u32)).collect())
    }

    /// Projection `G_N -> G_M` for `M <= N`.
    pub fn project(&self, m: usize) -> Self {
        assert!(m >= 1 && m <= self.order());
        JetElement {
            coords: self.coords[..m].to_vec(),
        }
    }

    pub fn to_json(&self) -> JetJson {
        JetJson {
            n: self.order(),
            x: self.coords.clone(),
        }
    }

    pub fn from_json(j: &JetJson) -> Result<Self> {
        if j.x.len() != j.n {
            return Err(Error::Parse(format!("jet declares N={} but lists {} coordinates", j.n, j.x.len())));
        }
        Self::new(j.x.clone())
    }
}

/// `{"N": int, "x": ["p/q", ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetJson {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "rational::serde_vec")]
    pub x: Vec<Rational>,
}

/// Coefficients of `x(y(u))` up to `u^n` for coordinate lists `x`, `y`
/// (index 0 holds the `u^1` coefficient), over any coefficient ring:
/// `z_k = sum_{i<=k} x_i [u^k] y(u)^i`.
pub fn compose_coeffs<C: Coefficient>(x: &[C], y: &[C], n: usize) -> Vec<C> {
    let mut ycoeffs = vec![C::zero()];
    ycoeffs.extend(y.iter().take(n).cloned());
    let yser = TruncSeries::univariate(ycoeffs, n as u32);
    let mut z = vec![C::zero(); n];
    let mut power = yser.clone();
    for (i, xi) in x.iter().take(n).enumerate() {
        if i > 0 {
            power = power.mul(&yser);
        }
        if xi.is_zero() {
            continue;
        }
        for (k, zk) in z.iter_mut().enumerate().skip(i) {
            let c = power.coeff1(k as u32 + 1);
            if !c.is_zero() {
                zk.add_assign(&xi.times(&c));
            }
        }
    }
    z
}

pub fn jet_compose(x: &JetElement, y: &JetElement) -> Result<JetElement> {
    if x.order() != y.order() {
        return Err(Error::OrderMismatch(format!(
            "composing jets of orders {} and {}",
            x.order(),
            y.order()
        )));
    }
    JetElement::new(compose_coeffs(&x.coords, &y.coords, x.order()))
}

pub fn jet_invert(x: &JetElement) -> JetElement {
    let n = x.order();
    let inv = x
        .to_series(n as u32)
        .revert()
        .expect("x1 != 0 is a type invariant");
    JetElement::from_series(&inv, n).expect("reverted series has a nonzero linear term")
}

/// The composition coordinates `z_k(x, y)`, `k = 1..n`, as polynomials in the
/// `2n` variables `x1..xn, y1..yn` (`y_k` is variable `n + k`).
pub fn composition_polys(n: usize) -> Vec<CoordPoly> {
    let xs: Vec<CoordPoly> = (1..=n).map(|i| CoordPoly::coord(2 * n, i)).collect();
    let ys: Vec<CoordPoly> = (1..=n).map(|i| CoordPoly::coord(2 * n, n + i)).collect();
    compose_coeffs(&xs, &ys, n)
}

/// The coordinates of `x^{-1}` as Laurent polynomials in `x1..xn`.
pub fn inverse_polys(n: usize) -> Vec<CoordPoly> {
    let mut c = vec![CoordPoly::zero(n)];
    c.extend((1..=n).map(|i| CoordPoly::coord(n, i)));
    let s = TruncSeries::univariate(c, n as u32);
    let inv = s.revert().expect("x1 is a unit in the Laurent ring");
    (1..=n).map(|k| inv.coeff1(k as u32).extend(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn identity_is_neutral() {
        let y = JetElement::from_ints(&[2, -1, 3]).unwrap();
        let e = JetElement::identity(3);
        assert_eq!(jet_compose(&e, &y).unwrap(), y);
        assert_eq!(jet_compose(&y, &e).unwrap(), y);
    }

    #[test]
    fn compose_small_case() {
        let x = JetElement::from_ints(&[1, 1, 0]).unwrap();
        let z = jet_compose(&x, &x).unwrap();
        assert_eq!(z, JetElement::from_ints(&[1, 2, 2]).unwrap());
    }

    #[test]
    fn second_coordinate_formula() {
        let x = JetElement::new(vec![ratio(3, 2), ratio(-2, 5)]).unwrap();
        let y = JetElement::new(vec![ratio(-1, 3), int(7)]).unwrap();
        let z = jet_compose(&x, &y).unwrap();
        let expected = x.x(1) * y.x(2) + x.x(2) * y.x(1) * y.x(1);
        assert_eq!(z.x(2), expected);
    }

    #[test]
    fn order_mismatch_rejected() {
        let a = JetElement::identity(2);
        let b = JetElement::identity(3);
        assert!(matches!(jet_compose(&a, &b), Err(Error::OrderMismatch(_))));
    }

    #[test]
    fn inversion() {
        let e = JetElement::identity(4);
        assert_eq!(jet_invert(&e), e);
        let x = JetElement::from_ints(&[1, 1, 0]).unwrap();
        assert_eq!(jet_invert(&x), JetElement::from_ints(&[1, -1, 2]).unwrap());
        let lin = JetElement::from_ints(&[2, 0, 0]).unwrap();
        assert_eq!(
            jet_invert(&lin),
            JetElement::new(vec![ratio(1, 2), int(0), int(0)]).unwrap()
        );
    }

    #[test]
    fn series_round_trip() {
        let x = JetElement::from_ints(&[1, 2, 2]).unwrap();
        let s = x.to_series(3);
        assert_eq!(
            s,
            TruncSeries::univariate(vec![int(0), int(1), int(2), int(2)], 3)
        );
        assert_eq!(JetElement::from_series(&s, 3).unwrap(), x);
        assert_eq!(JetElement::identity(3).to_series(3), TruncSeries::variable(1, 0, 3));
    }

    #[test]
    fn symbolic_composition_matches_numeric() {
        let n = 4;
        let z = composition_polys(n);
        assert_eq!(z[0], CoordPoly::monomial(vec![1, 0, 0, 0, 1, 0, 0, 0], int(1)));
        let x = JetElement::new(vec![ratio(2, 3), int(-1), ratio(1, 2), int(5)]).unwrap();
        let y = JetElement::new(vec![int(3), ratio(1, 7), int(0), int(-2)]).unwrap();
        let point: Vec<Rational> = x.coords().iter().chain(y.coords()).cloned().collect();
        let zxy = jet_compose(&x, &y).unwrap();
        for k in 0..n {
            assert_eq!(z[k].eval(&point).unwrap(), zxy.coords()[k]);
        }
    }

    #[test]
    fn symbolic_inverse_matches_numeric() {
        let n = 5;
        let inv = inverse_polys(n);
        assert_eq!(inv[0], CoordPoly::monomial(vec![-1, 0, 0, 0, 0], int(1)));
        assert_eq!(inv[1], CoordPoly::monomial(vec![-3, 1, 0, 0, 0], int(-1)));
        let x = JetElement::new(vec![ratio(-3, 2), int(2), ratio(1, 3), int(0), int(1)]).unwrap();
        let xinv = jet_invert(&x);
        for k in 0..n {
            assert_eq!(inv[k].eval(x.coords()).unwrap(), xinv.coords()[k]);
        }
    }

    #[test]
    fn json_round_trip() {
        let x = JetElement::new(vec![ratio(1, 2), int(0), ratio(-7, 3)]).unwrap();
        let s = serde_json::to_string(&x.to_json()).unwrap();
        assert_eq!(s, r#"{"N":3,"x":["1/2","0/1","-7/3"]}"#);
        let back = JetElement::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, x);
    }
}
