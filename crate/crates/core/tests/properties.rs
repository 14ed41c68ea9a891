mod common;

use std::collections::BTreeMap;

use common::*;
use heislab::formula::{eval_qf, parse, to_dnf, Formula, GroupEnv, Term};
use heislab::nilform::{hom_on_generators, NilForm};
use heislab::reprs::{parse_config, print_config};
use heislab::rings::RingDesc;
use heislab::zlattice::{hnf, IntVec};
use heislab::{Group, Ring, RingElem, UT3Elem, UT3Group};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ring_strategy() -> impl Strategy<Value = Ring> {
    prop::sample::select(corpus_rings())
}

fn elem_triple() -> impl Strategy<Value = (Ring, u64)> {
    (ring_strategy(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((ring, seed) in elem_triple()) {
        let mut r = rng(seed);
        let [a, b, c] = [0, 1, 2].map(|_| random_elem(&mut r, &ring, 6));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, RingElem::zero(&ring));
        prop_assert_eq!(&a * &RingElem::one(&ring), a.clone());
        // zero divisors are exactly the elements annihilated by an idempotent
        if let Some(s) = a.annihilator() {
            prop_assert!((&a * &s).is_zero() && !s.is_zero());
        }
    }

    #[test]
    fn ut3_matches_matrices(k in 1usize..=3, seed in any::<u64>()) {
        let ring = RingDesc::integers_pow(k);
        let mut r = rng(seed);
        let mut g = || UT3Elem::new(
            random_elem(&mut r, &ring, 9),
            random_elem(&mut r, &ring, 9),
            random_elem(&mut r, &ring, 9),
        ).unwrap();
        let (x, y) = (g(), g());
        for c in 0..k {
            let (mx, my) = (int_matrix(&x, c), int_matrix(&y, c));
            prop_assert_eq!(int_matrix(&x.mul(&y).unwrap(), c), mat_mul(&mx, &my));
            prop_assert_eq!(int_matrix(&x.inv(), c), mat_inv(&mx));
            prop_assert_eq!(int_matrix(&x.commutator(&y).unwrap(), c), mat_comm(&mx, &my));
        }
        // the entry-pair map is additive
        let p = x.mul(&y).unwrap();
        prop_assert_eq!(&p.u12, &(&x.u12 + &y.u12));
        prop_assert_eq!(&p.u23, &(&x.u23 + &y.u23));
    }

    #[test]
    fn ut3_power_is_repeated_product(seed in any::<u64>(), n in -6i64..=6) {
        let ring = RingDesc::polynomial(&["t"]);
        let mut r = rng(seed);
        let g = UT3Elem::new(
            random_elem(&mut r, &ring, 4),
            random_elem(&mut r, &ring, 4),
            random_elem(&mut r, &ring, 4),
        ).unwrap();
        let base = if n < 0 { g.inv() } else { g.clone() };
        let mut acc = UT3Elem::identity(&ring);
        for _ in 0..n.abs() {
            acc = acc.mul(&base).unwrap();
        }
        prop_assert_eq!(g.power(&BigInt::from(n)), acc);
    }
}

/// `F_3(N2) -> UT3(Z[x1,x2,x3,y1,y2,y3])`, `a_k -> (x_k, 0, y_k)`, is injective.
fn faithful_rank3() -> (UT3Group, Vec<UT3Elem>) {
    let names = ["x1", "x2", "x3", "y1", "y2", "y3"];
    let ring = RingDesc::polynomial(&names);
    let zero = RingElem::zero(&ring);
    let images = (1..=3)
        .map(|k| {
            let x = RingElem::indeterminate(&ring, &format!("x{k}")).unwrap();
            let y = RingElem::indeterminate(&ring, &format!("y{k}")).unwrap();
            UT3Elem::new(x, zero.clone(), y).unwrap()
        })
        .collect();
    (UT3Group { ring }, images)
}

fn nilform3() -> impl Strategy<Value = NilForm> {
    (prop::collection::vec(-4i64..=4, 3), prop::collection::vec(-4i64..=4, 3)).prop_map(|(e, f)| {
        NilForm::from_exponents(
            e.into_iter().map(BigInt::from).collect(),
            f.into_iter().map(BigInt::from).collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn collection_against_faithful_matrices(x in nilform3(), y in nilform3()) {
        let (group, images) = faithful_rank3();
        let hom = hom_on_generators(group.clone(), images);
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(hom.apply(&xy).unwrap(), group.mul(&hom.apply(&x).unwrap(), &hom.apply(&y).unwrap()));
        prop_assert_eq!(hom.apply(&x.inv()).unwrap(), group.inv(&hom.apply(&x).unwrap()));
        prop_assert_eq!(hom.apply(&x).unwrap().is_identity(), x.is_identity());
        let c = x.commutator(&y).unwrap();
        prop_assert_eq!(hom.apply(&c).unwrap(), group.commutator(&hom.apply(&x).unwrap(), &hom.apply(&y).unwrap()));
    }

    #[test]
    fn hnf_invariants(dim in 1usize..=4, seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let count = r.gen_range(0..=4);
        let gens: Vec<IntVec> = (0..count)
            .map(|_| (0..dim).map(|_| BigInt::from(r.gen_range(-6..=6))).collect())
            .collect();
        let lat = hnf(dim, &gens).unwrap();
        prop_assert_eq!(hnf(dim, lat.basis()).unwrap(), lat.clone());
        for g in &gens {
            prop_assert!(lat.contains(g).unwrap());
        }
        let coeffs: Vec<i64> = (0..count).map(|_| r.gen_range(-5..=5)).collect();
        let v: IntVec = (0..dim).map(|i| (0..count).map(|j| &gens[j][i] * coeffs[j]).sum()).collect();
        prop_assert!(lat.contains(&v).unwrap());
        let coords = lat.coordinates(&v).unwrap().unwrap();
        prop_assert_eq!(lat.combine(&coords), v.clone());
        let zero_at = vec![0usize];
        let sub = lat.intersect_coordinate_zero(&zero_at).unwrap();
        for b in sub.basis() {
            prop_assert!(b[0] == BigInt::from(0) && lat.contains(b).unwrap());
        }
        if v[0] == BigInt::from(0) {
            prop_assert!(sub.contains(&v).unwrap());
        }
    }

    #[test]
    fn config_round_trip(seed in any::<u64>()) {
        let rings = corpus_rings();
        let mut r = rng(seed);
        let ring = &rings[(seed % rings.len() as u64) as usize];
        let rep = random_rep(&mut r, ring, 5);
        let text = print_config(&rep);
        prop_assert_eq!(parse_config(&text).unwrap(), rep);
    }
}

fn var_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "z", "w1"]).prop_map(str::to_string)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::One),
        var_name().prop_map(|v| Term::var(&v)),
        Just(Term::a1()),
        Just(Term::a2()),
        Just(Term::constant("c")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(b)),
            inner.clone().prop_map(Term::inv),
            (inner.clone(), -3i64..=4).prop_map(|(a, n)| a.pow(n)),
            (inner.clone(), inner).prop_map(|(a, b)| a.comm(b)),
        ]
    })
}

fn matrix() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (term(), term()).prop_map(|(a, b)| a.eq(b)),
        (term(), term()).prop_map(|(a, b)| a.neq(b)),
    ];
    atom.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            inner.prop_map(Formula::not),
        ]
    })
}

fn sentence() -> impl Strategy<Value = Formula> {
    (
        matrix(),
        prop::collection::vec((any::<bool>(), prop::collection::btree_set(var_name(), 1..3)), 0..3),
    )
        .prop_map(|(m, blocks)| {
            blocks.into_iter().rev().fold(m, |body, (forall, vars)| {
                let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
                if forall {
                    Formula::forall(&vars, body)
                } else {
                    Formula::exists(&vars, body)
                }
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip(f in sentence()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dnf_preserves_truth(f in matrix(), picks in prop::collection::vec(0usize..17, 5)) {
        let env = GroupEnv::heisenberg().with_constant("c", UT3Elem::from_ints(&RingDesc::integers(), 0, 1, 0));
        let ball = env.ball(2);
        let d = to_dnf(&f).unwrap();
        let names = ["x", "y", "z", "w1"];
        let assignment: BTreeMap<String, UT3Elem> = names
            .iter()
            .zip(&picks)
            .map(|(n, &i)| (n.to_string(), ball[i % ball.len()].clone()))
            .collect();
        prop_assert_eq!(eval_qf(&f, &env, &assignment).unwrap(), eval_qf(&d, &env, &assignment).unwrap());
    }
}
