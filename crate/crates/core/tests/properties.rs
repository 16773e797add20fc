mod common;

use proptest::prelude::*;

use common::{apply, grow, scramble, Step};
use handlebody::invariants::{
    boundary_data, fixed_set, genus, is_free, orbifold_euler_holds, quotient, riemann_hurwitz_holds,
    PoleComplex,
};
use handlebody::model::{equivariant_isomorphic, IsoOptions};
use handlebody::moves::{contract, legal_contractions, normalize, split, splittable_orbits};
use handlebody::{classify, parse_model, same_class, serialize_model, validate, Model};

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        (0..64usize, 0..64usize).prop_map(|(a, b)| Step::Axial(a, b)),
        (0..64usize, 0..64usize).prop_map(|(a, b)| Step::Moved(a, b)),
        (0..64usize).prop_map(Step::Inverted),
    ]
}

fn model() -> impl Strategy<Value = Model> {
    (0..3usize, prop::collection::vec(step(), 0..7)).prop_map(|(k, steps)| grow(k, &steps))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_then_parse_is_identity(m in model()) {
        let text = serialize_model(&m);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_model(&back), text);
    }

    #[test]
    fn scrambled_text_is_the_same_spine(m in model(), seed in any::<u64>()) {
        let raw = scramble(&m, seed);
        prop_assert!(validate(&raw).is_ok(), "{}", validate(&raw));
        let other = Model::from_raw(&raw).unwrap();
        prop_assert!(equivariant_isomorphic(&m, &other, IsoOptions::default()).unwrap());
        prop_assert!(equivariant_isomorphic(&other, &m, IsoOptions::default()).unwrap());
        prop_assert_eq!(classify(&m).unwrap(), classify(&other).unwrap());
    }

    #[test]
    fn isomorphism_is_transitive_and_refines_class(m in model(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = Model::from_raw(&scramble(&m, s1)).unwrap();
        let b = Model::from_raw(&scramble(&a, s2)).unwrap();
        prop_assert!(equivariant_isomorphic(&m, &b, IsoOptions::default()).unwrap());
        prop_assert!(same_class(&m, &b).unwrap());
    }

    #[test]
    fn isomorphic_models_share_a_class(a in model(), b in model()) {
        if equivariant_isomorphic(&a, &b, IsoOptions::default()).unwrap() {
            prop_assert!(same_class(&a, &b).unwrap());
        }
    }

    #[test]
    fn invariant_identities(m in model()) {
        let g = genus(&m);
        let f = fixed_set(&m);
        let q = quotient(&m).unwrap();
        let expected = if is_free(&m) { (g + 1) / 2 } else { (g + 1 - f.n_arcs) / 2 };
        prop_assert_eq!(q.quotient_genus, expected);
        prop_assert!(orbifold_euler_holds(g, q.quotient_genus, f.n_arcs));
        let b = boundary_data(&m).unwrap();
        prop_assert!(riemann_hurwitz_holds(g, b.boundary_quotient_genus, b.boundary_fixed_points));
        prop_assert!(classify(&m).is_ok());
    }

    #[test]
    fn steps_shift_invariants_as_stated(m in model(), s in step()) {
        let (g, free, n, mc) = common::describe(&m);
        let Some(next) = apply(&m, s) else { return Ok(()) };
        let after = common::describe(&next);
        match s {
            Step::Axial(i, j) => {
                let pc = PoleComplex::new(&m);
                let poles = pc.free_poles();
                let (a, b) = (poles[i % poles.len()], poles[j % poles.len()]);
                if pc.component(a) == pc.component(b) {
                    prop_assert_eq!(after, (g + 1, false, n - 1, mc + 1));
                } else {
                    prop_assert_eq!(after, (g + 1, false, n - 1, mc));
                }
            }
            Step::Moved(..) => prop_assert_eq!(after, (g + 2, free, n, mc)),
            Step::Inverted(_) => prop_assert_eq!(after, (g + 1, false, n + 1, mc)),
        }
    }

    #[test]
    fn contractions_keep_invariants(m in model()) {
        let before = common::describe(&m);
        for orbit in legal_contractions(&m) {
            let c = contract(&m, orbit.representative()).unwrap();
            prop_assert_eq!(common::describe(&c), before);
            prop_assert_eq!(c.edge_count() + orbit.edges().len(), m.edge_count());
        }
        let (normal, trace) = normalize(&m);
        prop_assert!(trace.is_constant());
        prop_assert_eq!(classify(&normal).unwrap(), classify(&m).unwrap());
        prop_assert!(legal_contractions(&normal).is_empty());
    }

    #[test]
    fn split_betti_sums(m in model()) {
        let g = genus(&m);
        for orbit in splittable_orbits(&m) {
            let r = split(&m, orbit.representative()).unwrap();
            prop_assert_eq!(r.betti_sum(), r.expected_betti_sum(g));
            prop_assert_eq!(r.connected_after, r.components.len() == 1);
        }
    }
}
