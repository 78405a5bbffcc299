mod common;

use betticat::betti::{betti_table, cross_validate};
use betticat::field::{field_rank, int_matrix, FieldSpec};
use betticat::fincat::{find_isomorphism, lub_objects, members_in_box, FiniteCategory};
use betticat::homology::{reduced_homology, SimplicialComplex};
use betticat::resolution::{bar_complex, io, minimize, minimize_with, verify_resolution, PivotOrder};
use betticat::semigroup::{AffineSemigroup, Degree};
use common::{bareiss_rank, box_points, is_lub_by_definition, members_by_dp, rank_mod_p, semigroup_strategy};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn small_box(q: &AffineSemigroup) -> Vec<i64> {
    vec![common::cube_side(q.rank(), 2_000); q.rank()]
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn membership_matches_dp(q in semigroup_strategy(3, 5, 3)) {
        let bound = small_box(&q);
        let dp = members_by_dp(&q.generator_matrix(), &bound);
        for p in box_points(&bound) {
            prop_assert_eq!(q.is_member(&Degree(p.clone())).unwrap(), dp.contains(&p), "{:?}", p);
        }
        let listed: std::collections::HashSet<Vec<i64>> =
            members_in_box(&q, &Degree(bound.clone())).into_iter().map(|d| d.0).collect();
        prop_assert_eq!(listed, dp);
    }

    #[test]
    fn q_order_is_a_partial_order(q in semigroup_strategy(2, 4, 3), picks in prop::collection::vec(0usize..500, 3)) {
        let members = members_in_box(&q, &Degree(vec![6; q.rank()]));
        let [a, b, c] = [0, 1, 2].map(|i| &members[picks[i] % members.len()]);
        prop_assert!(q.q_le(a, a).unwrap());
        if q.q_le(a, b).unwrap() && q.q_le(b, a).unwrap() {
            prop_assert_eq!(a, b);
        }
        if q.q_le(a, b).unwrap() && q.q_le(b, c).unwrap() {
            prop_assert!(q.q_le(a, c).unwrap());
        }
        // ≤_Q refines the coordinatewise order
        if q.q_le(a, b).unwrap() {
            prop_assert!(a.le_coordinatewise(b));
        }
    }

    #[test]
    fn intervals_are_down_closed(q in semigroup_strategy(2, 4, 3), pick in 0usize..500) {
        let members = members_in_box(&q, &q.total_degree());
        let c = &members[pick % members.len()];
        let interval = q.interval(c).unwrap();
        let dp = members_by_dp(&q.generator_matrix(), c.coords());
        let expected: Vec<Degree> = {
            let mut v: Vec<Degree> = dp
                .iter()
                .filter(|b| dp.contains(&c.sub(&Degree((*b).clone())).0))
                .map(|b| Degree(b.clone()))
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(&interval, &expected);
        for b in &interval {
            for g in q.generators() {
                let lower = b.sub(g);
                if q.is_member(&lower).unwrap() {
                    prop_assert!(interval.contains(&lower));
                }
            }
        }
    }

    #[test]
    fn lub_objects_match_definition(q in semigroup_strategy(2, 4, 3)) {
        let bound = q.total_degree();
        let fast = lub_objects(&q, &bound).unwrap();
        let gens = q.generator_matrix();
        for c in members_in_box(&q, &bound) {
            prop_assert_eq!(fast.contains(&c), is_lub_by_definition(&gens, c.coords()), "{}", c);
        }
    }

    #[test]
    fn categories_are_closed_under_composition(q in semigroup_strategy(3, 4, 2)) {
        let cat = FiniteCategory::lub_category(&q, &q.total_degree()).unwrap();
        prop_assert_eq!(cat.check_invariants(), Ok(()));
        let iso = find_isomorphism(&cat, &cat).unwrap();
        prop_assert!(iso.respects_composition());
    }

    #[test]
    fn cones_are_acyclic(base in prop::collection::vec(prop::collection::vec(0usize..5, 1..4), 1..6)) {
        let facets: Vec<Vec<usize>> = base
            .into_iter()
            .map(|mut f| {
                f.push(5);
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        let k = SimplicialComplex::from_facets(6, &facets);
        prop_assert!(k.is_cone());
        for f in [FieldSpec::Rational, FieldSpec::Prime(2), FieldSpec::Prime(3)] {
            prop_assert!(reduced_homology(&k, f).is_zero());
        }
    }

    #[test]
    fn euler_characteristic_is_field_independent(facets in prop::collection::vec(prop::collection::vec(0usize..6, 1..4), 1..8)) {
        let k = SimplicialComplex::from_facets(6, &facets);
        let q = reduced_homology(&k, FieldSpec::Rational);
        let p = reduced_homology(&k, FieldSpec::Prime(2));
        prop_assert_eq!(q.euler_characteristic(), p.euler_characteristic());
        // universal coefficients: mod-p homology is never smaller
        for i in -1..4 {
            prop_assert!(p.get(i) >= q.get(i));
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ranks_match_oracles(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 6)) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = int_matrix(&refs);
        let q_rank = field_rank(FieldSpec::Rational, &m);
        prop_assert_eq!(q_rank, bareiss_rank(&rows));
        for p in [2u64, 3, 5, 7] {
            let r = field_rank(FieldSpec::Prime(p), &m);
            prop_assert_eq!(r, rank_mod_p(&rows, p));
            prop_assert!(r <= q_rank);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn three_betti_computations_agree(q in semigroup_strategy(2, 4, 3)) {
        let bound = q.total_degree().checked_scale(2).unwrap();
        for f in [FieldSpec::Rational, FieldSpec::Prime(2)] {
            let report = cross_validate(&q, f, Some(&bound)).unwrap();
            prop_assert!(report.agrees(), "{:?}", report.mismatches());
            prop_assert_eq!(report.delta.get(0, &Degree::zero(q.rank())), 1);
            prop_assert!(report.delta.entries().all(|(n, c, _)| n > 0 || c.is_zero()));
        }
    }

    #[test]
    fn minimization_is_order_independent(q in semigroup_strategy(2, 4, 3)) {
        let bound = q.total_degree().checked_scale(2).unwrap();
        let table = betti_table(&q, FieldSpec::Rational, Some(&bound)).unwrap();
        let cat = FiniteCategory::full_subcategory(&q, table.degrees()).unwrap();
        let bar = bar_complex(&cat, FieldSpec::Rational);
        let low = minimize_with(&bar, PivotOrder::Lowest).unwrap();
        let high = minimize_with(&bar, PivotOrder::Highest).unwrap();
        prop_assert_eq!(low.ranks(), high.ranks());
        for n in 0..=low.len() {
            prop_assert_eq!(low.degree_multiset(n), high.degree_multiset(n));
        }
        prop_assert!(low.is_minimal() && high.is_minimal());
        prop_assert!(verify_resolution(&low, &bound).unwrap().is_exact());
        prop_assert!(verify_resolution(&high, &bound).unwrap().is_exact());
        prop_assert_eq!(minimize(&low).unwrap(), low.clone());

        let text = io::to_json(&low);
        let back = io::from_json(&text).unwrap();
        prop_assert_eq!(io::to_json(&back), text);
    }

    #[test]
    fn betti_categories_survive_coordinate_permutation(q in semigroup_strategy(3, 4, 3)) {
        let gens = q.generator_matrix();
        let swapped: Vec<Vec<i64>> = gens.iter().map(|g| g.iter().rev().copied().collect()).collect();
        let p = AffineSemigroup::new(swapped).unwrap();
        let f = FieldSpec::Rational;
        let a = betticat::betti::betti_category(&q, f, None).unwrap();
        let b = betticat::betti::betti_category(&p, f, None).unwrap();
        let iso = find_isomorphism(&a, &b);
        prop_assert!(iso.is_some());
        prop_assert!(iso.unwrap().respects_composition());
    }
}
