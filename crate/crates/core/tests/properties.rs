use std::collections::BTreeSet;

use divgraph_core::classify::classify;
use divgraph_core::graph::{build_graph, cover_edge, interval, sinks};
use divgraph_core::lattice::SubgroupDescriptor;
use divgraph_core::model::{
    precedes, AffineMonoid, DivisibilityModel, Element, PlanarMonoid, PlanarVariant, PolyModel,
    ValueModel, WindowBounds, WindowSpec,
};
use divgraph_core::oracle::factorizations;
use divgraph_core::poly::Poly;
use divgraph_core::topology::{poset_to_space, space_to_poset, window_poset};
use divgraph_core::value::{ratio, CoordKind, GroupOrder, Rational, Value, ValueGroup};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn numerical(gens: &[i64]) -> ValueModel<AffineMonoid> {
    ValueModel::new("n", AffineMonoid::numerical(gens).unwrap())
}

fn window(m: &dyn DivisibilityModel, top: i64) -> Vec<Element> {
    m.enumerate_window(&WindowSpec {
        bounds: WindowBounds {
            max_value: Some(Value::from_ints(&[top])),
            ..Default::default()
        },
        ..Default::default()
    })
    .unwrap()
}

fn gens() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(2i64..12, 1..4)
}

fn planar_value() -> impl Strategy<Value = Value> {
    (-3i64..=3, -6i64..=6, 1i64..=4).prop_map(|(k, p, q)| Value(vec![ratio(k, 1), ratio(p, q)]))
}

/// Lengths of `n` over `gens`, by direct counting.
fn counted_lengths(gens: &[i64], n: i64) -> Vec<usize> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(0usize, n, 0usize)];
    while let Some((i, rest, used)) = stack.pop() {
        if i == gens.len() {
            if rest == 0 {
                out.insert(used);
            }
            continue;
        }
        let mut c = 0;
        while c * gens[i] <= rest {
            stack.push((i + 1, rest - c * gens[i], used + c as usize));
            c += 1;
        }
    }
    out.into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn window_order_is_a_partial_order(g in gens(), top in 12i64..25) {
        let m = numerical(&g);
        let w = window(&m, top);
        let n = w.len();
        let leq = |i: usize, j: usize| i == j || precedes(&m, &w[i], &w[j]).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert!(!(leq(i, j) && leq(j, i)));
                }
                for k in 0..n {
                    if leq(i, j) && leq(j, k) {
                        prop_assert!(leq(i, k));
                    }
                }
            }
        }
        let p = window_poset(&m, &w).unwrap();
        prop_assert_eq!(space_to_poset(&poset_to_space(&p)).unwrap(), p);
    }

    #[test]
    fn planar_arithmetic_is_additive(a in planar_value(), b in planar_value(), d2 in any::<bool>()) {
        let (variant, a, b) = if d2 {
            let round = |v: Value| Value(v.0.iter().map(|x| x.floor()).collect());
            (PlanarVariant::D2, round(a), round(b))
        } else {
            (PlanarVariant::D1, a, b)
        };
        let m = ValueModel::new("p", PlanarMonoid::new(variant));
        let (x, y) = (m.element_from_value(&a).unwrap(), m.element_from_value(&b).unwrap());
        let xy = m.multiply(&x, &y).unwrap();
        prop_assert_eq!(xy.value().unwrap(), &(&a + &b));
        prop_assert_eq!(m.quotient(&xy, &y).unwrap(), x.clone());
        let parsed = m.parse_element(x.label()).unwrap();
        prop_assert_eq!(parsed.value(), Some(&a));
        if m.is_integral(&x) && m.is_integral(&y) {
            prop_assert!(m.is_integral(&xy));
            prop_assert!(m.divides(&y, &xy).unwrap());
        }
    }

    #[test]
    fn polynomial_arithmetic_round_trips(c in 1i64..6, d in 1i64..4, e in 0usize..3, k in 0usize..3) {
        let m = PolyModel::new("z");
        let f = m.parse_element(&format!("{c}/{d}*x^{e}")).unwrap();
        let base = m.parse_element("1+x").unwrap();
        let g = (0..k).fold(m.unit(), |acc, _| m.multiply(&acc, &base).unwrap());
        let fg = m.multiply(&f, &g).unwrap();
        prop_assert_eq!(m.quotient(&fg, &g).unwrap(), f.clone());
        prop_assert_eq!(m.parse_element(fg.label()).unwrap(), fg);
    }

    #[test]
    fn oracle_factorizations_multiply_back(g in gens(), n in 1i64..40) {
        let m = numerical(&g);
        let a = m.element_from_value(&Value::from_ints(&[n])).unwrap();
        let s = factorizations(&m, &a, 40).unwrap();
        for f in &s.factorizations {
            prop_assert!(f.atoms.iter().all(|p| m.is_atom(p)));
            let prod = f.atoms.iter().try_fold(m.unit(), |acc, p| m.multiply(&acc, p)).unwrap();
            prop_assert_eq!(&prod, &a);
        }
        let counted = counted_lengths(&m.atom_values().unwrap().iter().map(|v| v.0[0].to_integer().try_into().unwrap()).collect::<Vec<i64>>(), n);
        prop_assert_eq!(s.lengths(), counted);
    }

    #[test]
    fn subgroup_membership_matches_small_search(
        raw in prop::collection::vec((-3i64..=3, -3i64..=3), 1..3),
        t in (-6i64..=6, -6i64..=6),
    ) {
        let gens: Vec<Value> = raw.iter().map(|&(a, b)| Value::from_ints(&[a, b])).collect();
        let h = SubgroupDescriptor::new(ValueGroup::integers(2), gens.clone()).unwrap();
        let target = Value::from_ints(&[t.0, t.1]);
        let span = |c: &[i64]| -> Value {
            gens.iter().zip(c).fold(Value::from_ints(&[0, 0]), |acc, (g, &k)| &acc + &g.scale(k))
        };
        let mut found = false;
        let mut c = vec![-10i64; gens.len()];
        'outer: loop {
            if span(&c) == target {
                found = true;
                break;
            }
            for x in c.iter_mut() {
                if *x < 10 {
                    *x += 1;
                    continue 'outer;
                }
                *x = -10;
            }
            break;
        }
        match h.membership(&target) {
            Some(coeffs) => {
                let back = gens.iter().zip(&coeffs).fold(Value::from_ints(&[0, 0]), |acc, (g, k)| {
                    &acc + &Value(g.0.iter().map(|x| x * Rational::from_integer(k.clone())).collect())
                });
                prop_assert_eq!(back, target.clone());
                let short = h.short_membership(&target).unwrap();
                if short.iter().all(|x| x.abs() <= BigInt::from(10)) {
                    prop_assert!(found);
                }
            }
            None => prop_assert!(!found),
        }
        let b = h.coset_representative(&target);
        prop_assert!(h.contains(&(&target - &b)));
    }

    #[test]
    fn rational_subgroup_membership(p in -12i64..=12, q in 1i64..=12) {
        let group = ValueGroup::new(vec![CoordKind::Int, CoordKind::Rat], GroupOrder::Lexicographic);
        let h = SubgroupDescriptor::new(group, vec![
            Value(vec![ratio(0, 1), ratio(1, 2)]),
            Value(vec![ratio(1, 1), ratio(1, 3)]),
        ]).unwrap();
        let v = Value(vec![ratio(0, 1), ratio(p, q)]);
        // Second coordinates reachable with first coordinate 0 are the multiples of 1/2.
        prop_assert_eq!(h.contains(&v), (2 * p) % q == 0);
    }

    #[test]
    fn cover_edges_are_covering_pairs(g in gens(), top in 12i64..20) {
        let m = numerical(&g);
        let w = window(&m, top);
        for a in &w {
            for b in &w {
                let tight = precedes(&m, a, b).unwrap() && interval(&m, a, b, &w).unwrap().len() == 2;
                prop_assert_eq!(cover_edge(&m, a, b).unwrap(), tight);
            }
        }
    }

    #[test]
    fn sinks_are_the_atoms(g in gens(), top in 12i64..30) {
        let m = numerical(&g);
        let w = window(&m, top);
        let graph = build_graph(&m, &w).unwrap();
        let atoms: Vec<String> = w.iter().filter(|a| m.is_atom(a)).map(|a| a.label().to_string()).collect();
        let r = sinks(&graph);
        prop_assert_eq!(r.sinks, atoms);
        prop_assert!(r.artifacts.is_empty());
    }

    #[test]
    fn path_lengths_are_factorization_lengths(g in gens(), top in 12i64..30) {
        let m = numerical(&g);
        let w = window(&m, top);
        let graph = build_graph(&m, &w).unwrap();
        let r = classify(&m, &graph, 64).unwrap();
        for a in &w {
            let s = factorizations(&m, a, 64).unwrap();
            prop_assert_eq!(&r.vertices[a.label()].lengths, &s.lengths());
        }
        prop_assert!(r.respects_implications());
    }

    #[test]
    fn declared_polynomials_are_monic_atoms(k in 1usize..4) {
        let m = PolyModel::new("z");
        let f = m.parse_element(&format!("1+x^{k}")).unwrap();
        let reducible = Poly::parse(&format!("1+x^{k}")).unwrap().factor_q().factors.iter().map(|(_, e)| e).sum::<usize>() > 1;
        prop_assert_eq!(m.is_atom(&f), !reducible);
    }
}
