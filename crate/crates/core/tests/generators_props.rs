mod common;

use common::binomial_upper_tail;
use num_rational::Ratio;
use proptest::prelude::*;
use readk::{gen_block_tight, gen_random_family, sum_pmf, ExactFamily, Family, RandomFamilyParams, Rational, TailQuery};

proptest! {
    #[test]
    fn json_round_trip_is_bit_exact(
        m in 1usize..=8, r in 1usize..=10, k in 1usize..=4, arity in 1usize..=4,
        seed in any::<u64>(), weighted in any::<bool>()
    ) {
        prop_assume!(r <= m * k);
        let spec: Family = gen_random_family(RandomFamilyParams::new(m, r, k, arity, seed).weighted(weighted)).unwrap();
        prop_assert!(spec.read_width() <= k);
        prop_assert!(spec.functions().iter().all(|f| f.vars().len() <= arity));
        let text = spec.to_json();
        let back = Family::from_json(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.to_json(), text);
        let pretty = Family::from_json(&spec.to_json_pretty()).unwrap();
        prop_assert_eq!(pretty, spec);
    }
}

#[test]
fn block_family_tail_is_binomial() {
    for k in 1..=4usize {
        for blocks in 1..=6u32 {
            for (a, b) in [(1i64, 2i64), (1, 3), (2, 5), (7, 64)] {
                let p = Ratio::new(a, b);
                let spec: ExactFamily = gen_block_tight(k, blocks as usize, p).unwrap();
                let pmf = sum_pmf(&spec).unwrap();
                let p_big = Rational::new(a.into(), b.into());
                for t in 0..=(k as u32 * blocks) {
                    let ones_needed = t.div_ceil(k as u32);
                    let expect = binomial_upper_tail(blocks, &p_big, ones_needed);
                    assert_eq!(pmf.tail_prob(&TailQuery::at_least(t as f64)), expect, "k={k} blocks={blocks} t={t}");
                }
            }
        }
    }
}

#[test]
fn random_family_json_is_stable_across_runs() {
    let params = RandomFamilyParams::new(5, 7, 2, 3, 2024).weighted(true);
    let a: Family = gen_random_family(params).unwrap();
    let b: Family = gen_random_family(params).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}
