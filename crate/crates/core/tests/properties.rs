use jetlie::bialgebra::{coboundary_table, cocycle_residuals, solve_r_from_cocycle, Tensor2};
use jetlie::jet::{jet_compose, jet_invert, JetElement};
use jetlie::poisson::{jacobi_all, lambda_from_mu, omega_from_lambda, omega_from_phi, MuSeq, RelationMode};
use jetlie::rational::ratio;
use jetlie::series::ScalarSeries;
use jetlie::structure::StructureFile;
use jetlie::{CoordPoly, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn nonzero_rat() -> impl Strategy<Value = Rational> {
    rat().prop_filter("nonzero", |r| !r.is_zero())
}

const NV: usize = 3;

fn poly() -> impl Strategy<Value = CoordPoly> {
    prop::collection::vec((prop::collection::vec(0i32..=3, NV), rat()), 0..6)
        .prop_map(|terms| CoordPoly::from_terms(NV, terms).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rat(), NV)
}

fn jet(n: usize) -> impl Strategy<Value = JetElement> {
    (nonzero_rat(), prop::collection::vec(rat(), n - 1)).prop_map(|(x1, rest)| {
        let mut c = vec![x1];
        c.extend(rest);
        JetElement::new(c).unwrap()
    })
}

fn r_matrix(cap: usize) -> impl Strategy<Value = Tensor2> {
    prop::collection::vec((0..cap, 1..=cap, nonzero_rat()), 1..5).prop_map(move |entries| {
        let mut r = Tensor2::zero(cap);
        for (i, j, v) in entries {
            if i < j {
                r.add_wedge(i, j, &v);
            }
        }
        r
    })
}

/// Univariate series with zero constant term.
fn series(ord: u32) -> impl Strategy<Value = ScalarSeries> {
    prop::collection::vec(rat(), ord as usize).prop_map(move |c| {
        let mut v = vec![Rational::zero()];
        v.extend(c);
        ScalarSeries::univariate(v, ord)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &CoordPoly::one(NV), p.clone());
    }

    #[test]
    fn derivative_is_a_derivation(p in poly(), q in poly(), i in 1..=NV) {
        let lhs = (&p * &q).partial(i);
        let rhs = &(&p.partial(i) * &q) + &(&p * &q.partial(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(), q in poly(), x in point()) {
        let (a, b) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        prop_assert_eq!((&p * &q).eval(&x).unwrap(), &a * &b);
        prop_assert_eq!((&p + &q).eval(&x).unwrap(), a + b);
    }

    #[test]
    fn jet_group_laws(a in jet(6), b in jet(6), c in jet(6)) {
        let ab_c = jet_compose(&jet_compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = jet_compose(&a, &jet_compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let e = JetElement::identity(6);
        prop_assert_eq!(jet_compose(&a, &jet_invert(&a)).unwrap(), e.clone());
        prop_assert_eq!(jet_compose(&e, &a).unwrap(), a);
    }

    #[test]
    fn series_chain_rule(f in series(7), g in series(7)) {
        let lhs = f.compose(&g).unwrap().partial(0);
        let rhs = f.partial(0).compose(&g).unwrap().mul(&g.partial(0));
        // differentiation lowers the trusted order by one
        prop_assert_eq!(lhs.truncate(5), rhs.truncate(5));
    }

    #[test]
    fn coboundaries_are_cocycles(r in r_matrix(8)) {
        let alpha = coboundary_table(&r);
        prop_assert!(alpha.is_antisymmetric());
        prop_assert!(cocycle_residuals(&alpha).iter().all(|(_, t)| t.is_zero()));
    }

    #[test]
    fn solver_inverts_the_coboundary(r in r_matrix(7)) {
        let rep = solve_r_from_cocycle(&coboundary_table(&r)).unwrap();
        prop_assert_eq!(rep.r, r);
    }

    #[test]
    fn r_files_round_trip(r in r_matrix(6)) {
        let f = StructureFile::from_r(&r);
        let back = StructureFile::from_json_str(&f.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(back.r().unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn classified_tables_are_poisson(d in 1usize..=3, head in nonzero_rat(), tail in prop::collection::vec(rat(), 6)) {
        let n = 4;
        let mut values = vec![head];
        values.extend(tail);
        let mu = MuSeq::from_tail(d, 2 * n - 1, &values).unwrap().enforce_relation();
        let big = lambda_from_mu(&mu, RelationMode::Strict).unwrap();
        let w = omega_from_lambda(&big.truncate(n));
        prop_assert!(jacobi_all(&w).iter().all(|(_, p)| p.is_zero()));
        prop_assert_eq!(omega_from_phi(&big.to_phi(), n).unwrap(), w);
    }
}
