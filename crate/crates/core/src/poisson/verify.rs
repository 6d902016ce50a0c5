//! Exact checks that a bracket table is a multiplicative Poisson structure,
//! and the generating-series forms of the same identities.

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jet::{composition_polys, inverse_polys, jet_compose, jet_invert, JetElement};
use crate::phi::PhiSeries;
use crate::poly::{CoordPoly, Substitution};
use crate::rational::{self, Rational};
use crate::series::{ScalarSeries, TruncSeries};

use super::omega::{omega_from_phi, OmegaTable};

/// `sum_i omega_ij d_i omega_kl + omega_ik d_i omega_lj + omega_il d_i omega_jk`.
pub fn jacobi_residual(omega: &OmegaTable, j: usize, k: usize, l: usize) -> CoordPoly {
    let n = omega.n();
    let mut out = CoordPoly::zero(n);
    for i in 1..=n {
        for (a, b, c) in [(j, k, l), (k, l, j), (l, j, k)] {
            let w = omega.get(i, a);
            if w.is_zero() {
                continue;
            }
            let dp = omega.get(b, c).partial(i);
            if !dp.is_zero() {
                out.add_assign_ref(&w.mul_ref(&dp));
            }
        }
    }
    out
}

/// Jacobi residuals for every `j < k < l`, in index order.
pub fn jacobi_all(omega: &OmegaTable) -> Vec<((usize, usize, usize), CoordPoly)> {
    let n = omega.n();
    let triples: Vec<(usize, usize, usize)> = (1..=n)
        .flat_map(|j| (j + 1..=n).flat_map(move |k| (k + 1..=n).map(move |l| (j, k, l))))
        .collect();
    triples
        .into_par_iter()
        .map(|t| (t, jacobi_residual(omega, t.0, t.1, t.2)))
        .collect()
}

/// Checks `omega_ij(xy) = omega_kl(x) dz_i/dx_k dz_j/dx_l
/// + omega_kl(y) dz_i/dy_k dz_j/dy_l` with `z = xy`, either as a polynomial
/// identity in `x_1..x_N, y_1..y_N` or at sample points.
pub struct MultiplicativityChecker<'a> {
    omega: &'a OmegaTable,
    n: usize,
    z: Vec<CoordPoly>,
    dz_dx: Vec<Vec<CoordPoly>>,
    dz_dy: Vec<Vec<CoordPoly>>,
}

impl<'a> MultiplicativityChecker<'a> {
    pub fn new(omega: &'a OmegaTable) -> Self {
        let n = omega.n();
        let z = composition_polys(n);
        let dz_dx = z.iter().map(|zi| (1..=n).map(|k| zi.partial(k)).collect()).collect();
        let dz_dy = z.iter().map(|zi| (1..=n).map(|k| zi.partial(n + k)).collect()).collect();
        MultiplicativityChecker {
            omega,
            n,
            z,
            dz_dx,
            dz_dy,
        }
    }

    fn symbolic_with(&self, sub: &Substitution, i: usize, j: usize) -> Result<CoordPoly> {
        let n = self.n;
        let mut out = sub.apply(self.omega.get(i, j))?.extend(2 * n);
        for k in 1..=i {
            for l in 1..=j {
                let w = self.omega.get(k, l);
                if w.is_zero() {
                    continue;
                }
                let jx = self.dz_dx[i - 1][k - 1].mul_ref(&self.dz_dx[j - 1][l - 1]);
                if !jx.is_zero() {
                    out.add_scaled(&w.embed(2 * n, 0).mul_ref(&jx), &rational::int(-1));
                }
                let jy = self.dz_dy[i - 1][k - 1].mul_ref(&self.dz_dy[j - 1][l - 1]);
                if !jy.is_zero() {
                    out.add_scaled(&w.embed(2 * n, n).mul_ref(&jy), &rational::int(-1));
                }
            }
        }
        Ok(out)
    }

    /// LHS - RHS for one pair, in the `2N`-variable ring.
    pub fn symbolic(&self, i: usize, j: usize) -> Result<CoordPoly> {
        let sub = Substitution::prepare(&self.z, std::slice::from_ref(self.omega.get(i, j)))?;
        self.symbolic_with(&sub, i, j)
    }

    /// Residuals for every `i < j`, in index order.
    pub fn symbolic_all(&self) -> Result<Vec<((usize, usize), CoordPoly)>> {
        let sources: Vec<CoordPoly> = self.omega.entries().map(|(_, _, p)| p.clone()).collect();
        let sub = Substitution::prepare(&self.z, &sources)?;
        let pairs: Vec<(usize, usize)> = self.omega.entries().map(|(i, j, _)| (i, j)).collect();
        pairs
            .into_par_iter()
            .map(|(i, j)| Ok(((i, j), self.symbolic_with(&sub, i, j)?)))
            .collect()
    }

    /// Residuals for every `i < j` at the point `(x, y)`.
    pub fn at_point(&self, x: &JetElement, y: &JetElement) -> Result<Vec<((usize, usize), Rational)>> {
        let n = self.n;
        if x.order() != n || y.order() != n {
            return Err(Error::OrderMismatch(format!(
                "sample points of orders {} and {} for a table on G_{n}",
                x.order(),
                y.order()
            )));
        }
        let z = jet_compose(x, y)?;
        let point: Vec<Rational> = x.coords().iter().chain(y.coords()).cloned().collect();
        let eval_all = |at: &[Rational]| -> Result<Vec<Rational>> {
            (1..=n)
                .flat_map(|a| (1..=n).map(move |b| (a, b)))
                .map(|(a, b)| self.omega.get(a, b).eval(at))
                .collect()
        };
        let wx = eval_all(x.coords())?;
        let wy = eval_all(y.coords())?;
        let wz = eval_all(z.coords())?;
        let jac = |m: &Vec<Vec<CoordPoly>>| -> Result<Vec<Vec<Rational>>> {
            m.iter()
                .map(|row| row.iter().map(|p| p.eval(&point)).collect())
                .collect()
        };
        let jx = jac(&self.dz_dx)?;
        let jy = jac(&self.dz_dy)?;
        let mut out = Vec::new();
        for (i, j, _) in self.omega.entries() {
            let mut r = wz[(i - 1) * n + (j - 1)].clone();
            for k in 1..=i {
                for l in 1..=j {
                    let idx = (k - 1) * n + (l - 1);
                    r -= &wx[idx] * &jx[i - 1][k - 1] * &jx[j - 1][l - 1];
                    r -= &wy[idx] * &jy[i - 1][k - 1] * &jy[j - 1][l - 1];
                }
            }
            out.push(((i, j), r));
        }
        Ok(out)
    }
}

/// A random point of `G_n` with small rational coordinates and `x1 != 0`.
pub fn random_jet<R: Rng>(rng: &mut R, n: usize) -> JetElement {
    let mut coords = Vec::with_capacity(n);
    for k in 0..n {
        let mut p: i64 = rng.gen_range(-6..=6);
        if k == 0 && p == 0 {
            p = 1;
        }
        let q: i64 = rng.gen_range(1..=5);
        coords.push(rational::ratio(p, q));
    }
    JetElement::new(coords).expect("x1 is nonzero by construction")
}

/// `Omega(u, v; g) = phi(u, v) g'(u) g'(v) - phi(g(u), g(v))` for a
/// univariate `g` with zero constant term.
pub fn omega_series(phi: &PhiSeries, g: &ScalarSeries) -> Result<ScalarSeries> {
    let gu = g.remap(&[0], 2);
    let gv = g.remap(&[1], 2);
    let s = phi.series();
    let lhs = s.mul(&gu.partial(0)).mul(&gv.partial(1));
    let rhs = s.substitute(&[gu, gv])?;
    Ok(lhs.sub(&rhs))
}

/// A residual series together with the bound below which it is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesResidual {
    pub series: ScalarSeries,
    /// For total-degree residuals, the series order; for box residuals, the
    /// per-variable bound `N` (entries `u^i v^j` with `i, j <= N`).
    pub trusted_degree: u32,
}

impl SeriesResidual {
    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }
}

/// `Omega(u,v; xy) - Omega(y(u),y(v); x) - Omega(u,v; y) x'(y(u)) x'(y(v))`,
/// with `x`, `y` read as series with zero tails. Exact to the order of `phi`.
pub fn functional_eq8_residual(phi: &PhiSeries, x: &JetElement, y: &JetElement) -> Result<SeriesResidual> {
    if x.order() != y.order() {
        return Err(Error::OrderMismatch(format!(
            "jets of orders {} and {}",
            x.order(),
            y.order()
        )));
    }
    let ord = phi.ord();
    let xs = x.to_series(ord);
    let ys = y.to_series(ord);
    let xy = xs.compose(&ys)?;
    let yu = ys.remap(&[0], 2);
    let yv = ys.remap(&[1], 2);

    let lhs = omega_series(phi, &xy)?;
    let first = omega_series(phi, &xs)?.substitute(&[yu, yv])?;
    let xprime_y = xs.partial(0).compose(&ys)?;
    let second = omega_series(phi, &ys)?
        .mul(&xprime_y.remap(&[0], 2))
        .mul(&xprime_y.remap(&[1], 2));
    Ok(SeriesResidual {
        series: lhs.sub(&first).sub(&second),
        trusted_degree: ord,
    })
}

/// `{Xbar_i, Xbar_j}(x) + omega_ij(xbar)` for `i, j <= N`, where
/// `Xbar_i` are the coordinates of the inverse as functions on `G_N` and the
/// bracket is the one generated by `phi`. Vanishing says inversion is
/// anti-Poisson. Needs `phi` to order `2N`.
pub fn inversion_residual(phi: &PhiSeries, x: &JetElement) -> Result<SeriesResidual> {
    inversion_residual_with(phi, &omega_from_phi(phi, x.order())?, x)
}

/// [`inversion_residual`] with the table of `phi` on `G_N` already built.
pub fn inversion_residual_with(phi: &PhiSeries, omega: &OmegaTable, x: &JetElement) -> Result<SeriesResidual> {
    let n = x.order();
    if omega.n() != n {
        return Err(Error::OrderMismatch(format!("table on G_{} for a point of G_{n}", omega.n())));
    }
    if (phi.ord() as usize) < 2 * n {
        return Err(Error::OrderMismatch(format!("phi of order {} for a point of G_{n}", phi.ord())));
    }
    let xbar = jet_invert(x);
    let inv = inverse_polys(n);
    let jac: Vec<Vec<Rational>> = inv
        .iter()
        .map(|p| (1..=n).map(|k| p.partial(k).eval(x.coords())).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let wx: Vec<Vec<Rational>> = (1..=n)
        .map(|k| (1..=n).map(|l| omega.get(k, l).eval(x.coords())).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let ord = 2 * n as u32;
    let at_inverse = omega_series(&phi.truncate(ord), &xbar.to_series(ord))?;

    let mut terms = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let mut r = at_inverse.coeff(&[i as u32, j as u32]);
            for k in 1..=n {
                for l in 1..=n {
                    if !wx[k - 1][l - 1].is_zero() {
                        r += &wx[k - 1][l - 1] * &jac[i - 1][k - 1] * &jac[j - 1][l - 1];
                    }
                }
            }
            if !r.is_zero() {
                terms.push(([i as u32, j as u32, 0], r));
            }
        }
    }
    Ok(SeriesResidual {
        series: TruncSeries::from_terms(2, ord, terms),
        trusted_degree: n as u32,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::phi_corollary1;
    use crate::poisson::lambda::{lambda_from_mu, MuSeq, RelationMode};
    use crate::poisson::omega::{g3_example, omega_from_lambda, omega_special};
    use crate::rational::{int, ratio};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn special_family_is_jacobi() {
        for d in 1..=3 {
            let w = omega_special(d, 7).unwrap();
            assert!(jacobi_all(&w).iter().all(|(_, r)| r.is_zero()), "d={d}");
        }
    }

    #[test]
    fn g3_is_jacobi_and_multiplicative() {
        let g = g3_example();
        assert!(jacobi_residual(&g, 1, 2, 3).is_zero());
        let checker = MultiplicativityChecker::new(&g);
        for (ij, r) in checker.symbolic_all().unwrap() {
            assert!(r.is_zero(), "{ij:?}: {r}");
        }
    }

    #[test]
    fn perturbation_breaks_jacobi() {
        let mut w = omega_special(1, 4).unwrap();
        let bumped = w.get(1, 3) + &CoordPoly::coord(4, 1);
        w.set(1, 3, bumped);
        assert!(jacobi_all(&w).iter().any(|(_, r)| !r.is_zero()));
    }

    #[test]
    fn multiplicative_symbolic_small() {
        let mu = MuSeq::from_tail(1, 4, &[int(1), int(2), int(0), ratio(-1, 2)]).unwrap().enforce_relation();
        let w = omega_from_lambda(&lambda_from_mu(&mu, RelationMode::Strict).unwrap());
        let checker = MultiplicativityChecker::new(&w);
        for (ij, r) in checker.symbolic_all().unwrap() {
            assert!(r.is_zero(), "{ij:?}");
        }
    }

    #[test]
    fn multiplicative_at_points() {
        let w = omega_special(2, 7).unwrap();
        let checker = MultiplicativityChecker::new(&w);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let x = random_jet(&mut rng, 7);
            let y = random_jet(&mut rng, 7);
            assert!(checker.at_point(&x, &y).unwrap().iter().all(|(_, r)| r.is_zero()));
            let e = JetElement::identity(7);
            assert!(checker.at_point(&x, &e).unwrap().iter().all(|(_, r)| r.is_zero()));
        }
        let mut bad = w.clone();
        bad.set(2, 3, w.get(2, 3) + &CoordPoly::coord(7, 2));
        let x = random_jet(&mut rng, 7);
        let y = random_jet(&mut rng, 7);
        let checker = MultiplicativityChecker::new(&bad);
        assert!(checker.at_point(&x, &y).unwrap().iter().any(|(_, r)| !r.is_zero()));
    }

    #[test]
    fn eq8_holds_for_any_phi() {
        let phi = phi_corollary1(1, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_jet(&mut rng, 8);
        let y = random_jet(&mut rng, 8);
        assert!(functional_eq8_residual(&phi, &x, &y).unwrap().is_zero());
        let e = JetElement::identity(8);
        assert!(functional_eq8_residual(&phi, &x, &e).unwrap().is_zero());
        assert!(functional_eq8_residual(&phi, &e, &y).unwrap().is_zero());
        // the generating construction solves the functional equation for
        // every phi, not only for solutions of the PDE
        let other = PhiSeries::from_upper(16, [(1, 3, int(1)), (2, 3, ratio(-2, 7))]).unwrap();
        assert!(functional_eq8_residual(&other, &x, &y).unwrap().is_zero());
    }

    #[test]
    fn inversion_is_anti_poisson() {
        let phi = phi_corollary1(1, 16).unwrap();
        let mut c = vec![int(0); 8];
        c[0] = int(1);
        c[1] = int(1);
        let x = JetElement::new(c).unwrap();
        assert!(inversion_residual(&phi, &x).unwrap().is_zero());
        assert!(inversion_residual(&phi, &JetElement::identity(8)).unwrap().is_zero());
        let mut lin = vec![int(0); 8];
        lin[0] = ratio(-5, 3);
        assert!(inversion_residual(&phi, &JetElement::new(lin).unwrap()).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phi2 = phi_corollary1(2, 12).unwrap();
        assert!(inversion_residual(&phi2, &random_jet(&mut rng, 6)).unwrap().is_zero());
    }
}
