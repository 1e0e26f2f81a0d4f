use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tba_core::logic::formula::random_formula;
use tba_core::logic::{eval, parse_formula, Model};
use tba_core::quantifiers::{pi, sigma, DomainSpec};
use tba_core::topology::{closure_of_relation, derive, relation_of_operator, OperatorRole, Relation};
use tba_core::{check, par, ConditionId, Element, Operator, PointDomain, TransformKind};

fn domain(n: usize) -> PointDomain {
    PointDomain::new(n).unwrap()
}

fn operator(max_points: usize) -> impl Strategy<Value = Operator> {
    (1..=max_points).prop_flat_map(|n| {
        let d = domain(n);
        proptest::collection::vec(0..=d.mask(), d.size())
            .prop_map(move |t| Operator::new(d, t).unwrap())
    })
}

fn element_triple() -> impl Strategy<Value = (Element, Element, Element)> {
    (1usize..=5).prop_flat_map(|n| {
        let d = domain(n);
        let e = move || (0..=d.mask()).prop_map(move |b| d.element(b).unwrap());
        (e(), e(), e())
    })
}

proptest! {
    #[test]
    fn transforms_are_involutions(f in operator(4)) {
        for k in TransformKind::ALL {
            prop_assert_eq!(f.transform(k).transform(k), f.clone());
        }
    }

    #[test]
    fn cube_holds_for_every_operator(f in operator(4)) {
        prop_assert!(f.cube_check());
    }

    #[test]
    fn enumeration_index_round_trips(f in operator(3)) {
        let i = f.index().unwrap();
        prop_assert_eq!(Operator::at_index(f.domain(), i).unwrap(), f);
    }

    #[test]
    fn boolean_laws((a, b, c) in element_triple()) {
        prop_assert_eq!(a & (b | c), (a & b) | (a & c));
        prop_assert_eq!(a | (b & c), (a | b) & (a | c));
        prop_assert_eq!(!(a & b), !a | !b);
        prop_assert_eq!(a | (a & b), a);
        prop_assert_eq!(!!a, a);
        prop_assert_eq!(a.implies(b).unwrap(), !a | b);
        prop_assert_eq!(a.symdiff(b).unwrap(), !a.iff(b).unwrap());
        prop_assert_eq!(a.leq(b).unwrap(), (a & b) == a);
    }

    #[test]
    fn printed_formulas_parse_back(seed: u64, depth in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, depth, &["p", "q", "r"]);
        let printed = f.to_string();
        let back = parse_formula(&printed).unwrap();
        prop_assert_eq!(&back, &f, "printed as {}", printed);
    }

    #[test]
    fn box_and_dia_are_interior_and_closure(c in operator(4), bits: u32) {
        let d = c.domain();
        let p = d.element(bits & d.mask()).unwrap();
        let mut m = Model::with_closure(c.clone());
        m.set("p", p).unwrap();
        let sem = m.semantics().clone();
        prop_assert_eq!(eval(&parse_formula("dia p").unwrap(), &m).unwrap(), c.call(p));
        prop_assert_eq!(eval(&parse_formula("box p").unwrap(), &m).unwrap(), sem.interior().call(p));
        prop_assert_eq!(eval(&parse_formula("box p <-> -dia -p").unwrap(), &m).unwrap(), d.top());
    }

    #[test]
    fn pi_sigma_duality(
        n in 1usize..=4,
        raw in proptest::collection::vec(any::<u32>(), 1..6),
        exist in proptest::collection::vec(any::<u32>(), 6),
    ) {
        let d = domain(n);
        let phi: Vec<Element> = raw.iter().map(|&b| d.element(b & d.mask()).unwrap()).collect();
        let neg: Vec<Element> = phi.iter().map(|&e| !e).collect();
        let specs = [
            DomainSpec::Unrestricted,
            DomainSpec::Constant(exist.iter().take(phi.len()).map(|b| b & 1 == 1).collect()),
            DomainSpec::Varying(exist.iter().take(phi.len()).map(|&b| d.element(b & d.mask()).unwrap()).collect()),
        ];
        for spec in &specs {
            prop_assert_eq!(pi(&phi, spec).unwrap(), !sigma(&neg, spec).unwrap());
        }
        let meet = phi.iter().fold(d.top(), |acc, &e| acc & e);
        prop_assert_eq!(pi(&phi, &DomainSpec::Unrestricted).unwrap(), meet);
    }

    #[test]
    fn relations_round_trip_through_closures(n in 1usize..=4, seed: u64) {
        let d = domain(n);
        let idx = seed % (1u64 << (n * n));
        let r = Relation::at_index(d, idx);
        let c = closure_of_relation(&r);
        prop_assert_eq!(relation_of_operator(&c), r);
        for k in [ConditionId::Norm, ConditionId::Addi] {
            prop_assert!(check(k, &c).holds);
        }
    }

    #[test]
    fn interior_and_exterior_derivations_invert(f in operator(4)) {
        for role in [OperatorRole::Interior, OperatorRole::Exterior] {
            let g = derive(&f, OperatorRole::Closure, role);
            prop_assert_eq!(derive(&g, role, OperatorRole::Closure), f.clone());
        }
    }

    #[test]
    fn parallel_scans_match_sequential(salt: u64, len in 0u64..5000) {
        let p = move |i: u64| (i.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt).count_ones().is_multiple_of(3);
        prop_assert_eq!(par::count(0..len, p), par::count_seq(0..len, p));
        prop_assert_eq!(par::all(0..len, p), par::all_seq(0..len, p));
        prop_assert_eq!(
            par::find_first(0..len, |i| p(i).then_some(i)),
            par::find_first_seq(0..len, |i| p(i).then_some(i))
        );
        prop_assert_eq!(par::map(0..len.min(500), p), par::map_seq(0..len.min(500), p));
    }
}
