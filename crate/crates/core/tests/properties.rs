use multbound::fq::make_field;
use multbound::group::GroupLaw;
use multbound::periodicity::{detect_period, Cyc, CyclotomicField};
use multbound::rational;
use multbound::scenario::{catalog, GroupSpace, Scenario};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

const FIELDS: [(u64, u32); 8] = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)];

fn field_and_elems() -> impl Strategy<Value = ((u64, u32), [u32; 3])> {
    prop::sample::select(FIELDS.to_vec()).prop_flat_map(|(p, k)| {
        let q = p.pow(k) as u32;
        (Just((p, k)), [0..q, 0..q, 0..q])
    })
}

fn random_element(law: &GroupLaw, word: &[usize]) -> Vec<u32> {
    let gens = law.generators();
    word.iter().fold(law.identity(), |acc, &i| law.mul(&acc, &gens[i % gens.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(((p, k), [a, b, c]) in field_and_elems()) {
        let f = make_field(p, k).unwrap();
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.pack(&f.unpack(a)), a);
    }

    #[test]
    fn group_law_axioms(
        idx in 0usize..4,
        x in prop::collection::vec(0usize..16, 0..12),
        y in prop::collection::vec(0usize..16, 0..12),
        z in prop::collection::vec(0usize..16, 0..12),
    ) {
        let s = &catalog()[idx * 2];
        let law = GroupLaw::realize(&s.group, s.q, 1).unwrap();
        let (a, b, c) = (random_element(&law, &x), random_element(&law, &y), random_element(&law, &z));
        prop_assert!(law.contains(&a));
        prop_assert_eq!(law.mul(&a, &law.mul(&b, &c)), law.mul(&law.mul(&a, &b), &c));
        prop_assert!(law.is_identity(&law.mul(&a, &law.inverse(&a))));
    }

    #[test]
    fn borel_elements_lie_in_group(idx in 0usize..9, seed in any::<u64>()) {
        let s = &catalog()[idx];
        let law = GroupLaw::realize(&s.group, s.q, 1).unwrap();
        let mut out = law.identity();
        law.borel_element(seed as u128 % law.borel_order(), &mut out);
        prop_assert!(law.contains(&out));
    }

    #[test]
    fn action_axioms(idx in 0usize..9, x in prop::collection::vec(0usize..16, 0..8), y in prop::collection::vec(0usize..16, 0..8), pt in any::<usize>()) {
        let s = &catalog()[idx];
        let (law, space) = s.instantiate(1).unwrap();
        let (g, h) = (random_element(&law, &x), random_element(&law, &y));
        let p = pt % space.len();
        prop_assert_eq!(space.act(&law.mul(&g, &h), p), space.act(&g, space.act(&h, p)));
        prop_assert_eq!(space.act(&law.identity(), p), p);
    }

    #[test]
    fn detect_period_finds_a_valid_period(
        pre in prop::collection::vec(0u8..4, 0..5),
        cycle in prop::collection::vec(0u8..4, 1..5),
        extra in 0usize..6,
    ) {
        let n = pre.len() + 2 * cycle.len() + extra;
        let values: Vec<u8> = (0..n)
            .map(|i| if i < pre.len() { pre[i] } else { cycle[(i - pre.len()) % cycle.len()] })
            .collect();
        let (p, t) = detect_period(&values);
        let p = p.expect("a period exists within the horizon");
        prop_assert!(p <= cycle.len());
        prop_assert!(t + 2 * p <= n);
        prop_assert!((t..n - p).all(|i| values[i] == values[i + p]));
    }

    #[test]
    fn rational_round_trip(n in any::<i64>(), d in 1i64..i64::MAX) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(rational::parse(&rational::to_string(&r)).unwrap(), r);
    }

    #[test]
    fn cyclotomic_inverse(m in 1u32..13, coeffs in prop::collection::vec(-5i64..6, 1..8)) {
        let f = CyclotomicField::new(m);
        let a = Cyc::new(&f, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), Cyc::rational(&f, BigRational::one()));
        }
    }

    #[test]
    fn scenario_json_round_trip(idx in 0usize..9, q in prop::sample::select(vec![2u64, 3, 4, 5]), seed in any::<Option<u64>>()) {
        let mut s = catalog()[idx].with_q(q);
        s.seed = seed;
        s.tol = seed.map(|x| format!("1/{}", x % 97 + 1));
        prop_assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }
}
