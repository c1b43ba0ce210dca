use proptest::prelude::*;
use readk::audit::geq_within;
use readk::{
    gen_block_tight, gen_random_family, read_k_tail_bound, shearer_and_bound, simplified_tail_bound, sum_pmf,
    BoundQuery, Family, RandomFamilyParams, Tail, TailQuery,
};
use num_rational::Ratio;

const REL: f64 = 1e-9;

fn tail() -> impl Strategy<Value = Tail> {
    prop_oneof![Just(Tail::Upper), Just(Tail::Lower)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn read_k_dominates_simplified(
        r in 1u64..200, k in 1u64..8, p in 0.0f64..=1.0, frac in 0.001f64..1.0, tail in tail()
    ) {
        let room = match tail { Tail::Upper => 1.0 - p, Tail::Lower => p };
        prop_assume!(room > 1e-9);
        let q = BoundQuery::new(r, k, p, frac * room, tail).unwrap();
        let exact = read_k_tail_bound(&q);
        let relaxed = simplified_tail_bound(&q);
        prop_assert!(exact.log_bound <= relaxed.log_bound + 1e-12 * relaxed.log_bound.abs().max(1.0));
        prop_assert!(exact.bound >= 0.0 && exact.bound <= 1.0);
    }

    #[test]
    fn bound_weakens_as_k_grows(
        r in 1u64..200, k in 1u64..8, p in 0.0f64..=1.0, frac in 0.001f64..1.0, tail in tail()
    ) {
        let room = match tail { Tail::Upper => 1.0 - p, Tail::Lower => p };
        prop_assume!(room > 1e-9);
        let eps = frac * room;
        let tight = read_k_tail_bound(&BoundQuery::new(r, k, p, eps, tail).unwrap());
        let loose = read_k_tail_bound(&BoundQuery::new(r, k + 1, p, eps, tail).unwrap());
        prop_assert!(tight.bound <= loose.bound);
        prop_assert!(tight.log_bound <= loose.log_bound);
    }

    #[test]
    fn full_deviation_is_shearer(r in 1u64..200, k in 1u64..8, p in 0.0f64..1.0) {
        let q = BoundQuery::at_threshold(r, k, p, r as f64, Tail::Upper).unwrap();
        prop_assert_eq!(read_k_tail_bound(&q).log_bound, shearer_and_bound(r, k, p).unwrap().log_bound);
    }

    #[test]
    fn sound_on_random_families(
        m in 1usize..=8, r in 1usize..=8, k in 1usize..=4, arity in 1usize..=3,
        seed in any::<u64>(), weighted in any::<bool>()
    ) {
        prop_assume!(r <= m * k);
        let spec: Family = gen_random_family(RandomFamilyParams::new(m, r, k, arity, seed).weighted(weighted)).unwrap();
        check_soundness(&spec)?;
    }
}

fn check_soundness(spec: &Family) -> Result<(), TestCaseError> {
    let pmf = sum_pmf(spec).unwrap();
    let r = spec.num_functions() as u64;
    let k = spec.read_width().max(1) as u64;
    let p = (pmf.mean() / r as f64).clamp(0.0, 1.0);
    for t in 0..=r {
        for tail in [Tail::Upper, Tail::Lower] {
            let Ok(q) = BoundQuery::at_threshold(r, k, p, t as f64, tail) else { continue };
            let exact = pmf.tail_prob(&TailQuery::new(t as f64, tail));
            let bound = read_k_tail_bound(&q).bound;
            prop_assert!(
                geq_within(bound, exact, REL),
                "t={t} {}: exact {exact} > bound {bound}", tail.as_str()
            );
        }
    }
    Ok(())
}

#[test]
fn block_family_meets_both_bounds() {
    for k in [1usize, 2, 4] {
        for blocks in 1..=8 {
            let spec: Family = gen_block_tight(k, blocks, Ratio::new(1, 2)).unwrap();
            let r = (k * blocks) as u64;
            let all_ones = sum_pmf(&spec).unwrap().probs()[r as usize];
            let shearer = shearer_and_bound(r, k as u64, 0.5).unwrap().bound;
            let read_k = read_k_tail_bound(&BoundQuery::new(r, k as u64, 0.5, 0.5, Tail::Upper).unwrap()).bound;
            assert!((all_ones - shearer).abs() <= 1e-12, "k={k} blocks={blocks}");
            assert!((all_ones - read_k).abs() <= 1e-12, "k={k} blocks={blocks}");
        }
    }
}
