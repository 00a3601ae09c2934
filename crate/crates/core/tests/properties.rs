use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use tutte_theta::codes::{weight_enumerator_enum, weight_enumerator_greene, BinaryCode};
use tutte_theta::f2::{F2Matrix, F2Vec};
use tutte_theta::graphs::{automorphism_count, canonical_form, is_isomorphic, join, subdivide_edge, Multigraph};
use tutte_theta::lattices::{gram_determinant, theta_direct, theta_from_code};
use tutte_theta::matroids::{tutte_deletion_contraction, tutte_subset_expansion, Matroid};
use tutte_theta::poly::{Poly, QSeries, Vars};
use tutte_theta::primes::{admissible_matrix, WeightMatrix};
use tutte_theta::statepoly::{decode_term, z_state_symbolic, z_state_weighted};

fn graph(max_v: usize, max_e: usize, loops: bool) -> impl Strategy<Value = Multigraph> {
    (1..=max_v).prop_flat_map(move |v| {
        prop::collection::vec((0..v, 0..v), 0..=max_e).prop_map(move |pairs| {
            let edges = pairs.into_iter().filter(|(a, b)| loops || a != b);
            Multigraph::new(v, edges).unwrap()
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn graph_and_perm(max_v: usize, max_e: usize) -> impl Strategy<Value = (Multigraph, Vec<usize>)> {
    graph(max_v, max_e, true).prop_flat_map(|g| {
        let n = g.n_vertices();
        (Just(g), permutation(n))
    })
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = F2Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
            F2Matrix::new(c, rows.iter().map(|b| F2Vec::from_bits(b)).collect()).unwrap()
        })
    })
}

fn bivariate(max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u64..4, 0u64..4, -5i64..=5), 0..=max_terms)
        .prop_map(|t| Poly::bivariate(t.into_iter().map(|(a, b, c)| (a, b, BigInt::from(c)))))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in bivariate(5), b in bivariate(5), c in bivariate(5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(Poly::from_json(&a.to_json(), Vars::bivariate()).unwrap(), a);
    }

    #[test]
    fn series_json_round_trip(coeffs in prop::collection::vec(-50i64..50, 1..20)) {
        let s = QSeries::from_terms(coeffs.len() - 1, coeffs.iter().enumerate().map(|(k, &c)| (k, BigInt::from(c))));
        prop_assert_eq!(QSeries::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn state_polys_are_isomorphism_invariant((g, perm) in graph_and_perm(4, 5)) {
        let h = g.relabel(&perm);
        prop_assert_eq!(z_state_symbolic(&g, 3).unwrap(), z_state_symbolic(&h, 3).unwrap());
        let (w, _) = admissible_matrix(5, 3).unwrap();
        prop_assert_eq!(z_state_weighted(&g, &w).unwrap().poly().clone(), z_state_weighted(&h, &w).unwrap().poly().clone());
    }

    #[test]
    fn state_polys_multiply_over_disjoint_union(a in graph(3, 3, true), b in graph(3, 3, true)) {
        let ab = a.disjoint_union(&b);
        let za = z_state_symbolic(&a, 2).unwrap();
        let zb = z_state_symbolic(&b, 2).unwrap();
        prop_assert_eq!(z_state_symbolic(&ab, 2).unwrap().poly().clone(), za.poly() * zb.poly());
        let (w, _) = admissible_matrix(6, 2).unwrap();
        let wa = z_state_weighted(&a, &w).unwrap();
        let wb = z_state_weighted(&b, &w).unwrap();
        prop_assert_eq!(z_state_weighted(&ab, &w).unwrap().poly().clone(), wa.poly() * wb.poly());
    }

    #[test]
    fn decoding_inverts_encoding(
        picks in prop::collection::vec((1usize..=4, 1usize..=4), 0..=4),
        count in 1u64..5000,
    ) {
        let (w, _) = admissible_matrix(4, 4).unwrap();
        let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut c = BigUint::from(count);
        let mut s = BigUint::from(0u32);
        for (i, j) in picks {
            let key = (i.max(j), i.min(j));
            *pairs.entry(key).or_insert(0) += 1;
            c *= w.entry(i, j);
            s += w.entry(i, j);
        }
        let d = decode_term(&c, &s, &w).unwrap();
        prop_assert_eq!(d.pairs, pairs);
        prop_assert_eq!(d.cofactor, BigUint::from(count));
    }

    #[test]
    fn weight_matrix_json_round_trip(m in 1u64..6, n in 1usize..5) {
        let (w, _) = admissible_matrix(m, n).unwrap();
        prop_assert_eq!(WeightMatrix::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn canonical_form_matches_isomorphism((g, perm) in graph_and_perm(6, 7), other in graph(6, 7, true)) {
        let h = g.relabel(&perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        prop_assert!(is_isomorphic(&g, &h).unwrap());
        prop_assert_eq!(canonical_form(&g) == canonical_form(&other), is_isomorphic(&g, &other).unwrap());
    }

    #[test]
    fn automorphisms_divide_factorial(g in graph(6, 8, true)) {
        let a = automorphism_count(&g).unwrap();
        prop_assert_eq!(factorial(g.n_vertices()) % a, 0);
    }

    #[test]
    fn join_is_symmetric(a in graph(3, 3, true), b in graph(3, 3, true)) {
        prop_assert!(is_isomorphic(&join(&a, &b), &join(&b, &a)).unwrap());
    }

    #[test]
    fn subdivision_counts(g in graph(5, 6, true), pick in any::<prop::sample::Index>(), times in 0usize..4) {
        prop_assume!(g.n_edges() > 0);
        let e = g.edges()[pick.index(g.n_edges())];
        let h = subdivide_edge(&g, e, times).unwrap();
        prop_assert_eq!(h.n_edges(), g.n_edges() + times);
        prop_assert_eq!(h.n_vertices(), g.n_vertices() + times);
    }

    #[test]
    fn tutte_algorithms_agree(g in graph(5, 9, true)) {
        let m = Matroid::graphic(g.clone());
        prop_assert_eq!(tutte_subset_expansion(&m).unwrap(), tutte_deletion_contraction(&m));
        let b = Matroid::incidence(&g);
        prop_assert_eq!(tutte_subset_expansion(&b).unwrap(), tutte_subset_expansion(&m).unwrap());
    }

    #[test]
    fn greene_matches_enumeration(a in matrix(5, 10)) {
        let m = Matroid::vector_f2(a.clone());
        let c = BinaryCode::from_matrix(&a);
        prop_assert_eq!(weight_enumerator_greene(&m).unwrap(), weight_enumerator_enum(&c).unwrap());
    }

    #[test]
    fn macwilliams(a in matrix(4, 9)) {
        let c = BinaryCode::from_matrix(&a);
        let d = c.dual();
        prop_assert_eq!(c.dimension() + d.dimension(), c.length());
        let v = Vars::bivariate();
        let x = Poly::var(v.clone(), 0);
        let y = Poly::var(v, 1);
        let wc = weight_enumerator_enum(&c).unwrap();
        let lhs = weight_enumerator_enum(&d).unwrap().scale(&(BigInt::from(1) << c.dimension()));
        let rhs = wc.substitute(&[&x + &y, &x - &y]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn theta_identity(a in matrix(4, 6), prec in 0usize..=16) {
        let c = BinaryCode::from_matrix(&a);
        prop_assert_eq!(theta_from_code(&c, prec).unwrap(), theta_direct(&c, prec).unwrap());
    }

    #[test]
    fn gram_determinant_formula(a in matrix(5, 10)) {
        let c = BinaryCode::from_matrix(&a);
        let e = c.length() as i64 - 2 * c.dimension() as i64;
        let want = if e >= 0 {
            BigRational::from_integer(BigInt::from(1) << e as usize)
        } else {
            BigRational::new(1.into(), BigInt::from(1) << (-e) as usize)
        };
        prop_assert_eq!(gram_determinant(&c), want);
    }
}
