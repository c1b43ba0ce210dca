mod common;

use common::{brute_force_pmf, poisson_binomial};
use proptest::prelude::*;
use readk::{
    conditional_function_marginals, function_marginals, gen_random_family, sum_pmf, ExactEngine, Family,
    RandomFamilyParams, Rational, ReadFunction, TailQuery, Variable,
};

fn random_family(seed: u64, weighted: bool) -> Family {
    let m = 2 + (seed % 7) as usize;
    let r = 1 + (seed % 6) as usize;
    let k = 1 + (seed % 4) as usize;
    gen_random_family(RandomFamilyParams::new(m, r.min(m * k), k, 3, seed).weighted(weighted)).unwrap()
}

#[test]
fn component_convolution_matches_full_enumeration() {
    let engine = ExactEngine::default();
    for seed in 0..300 {
        let spec = random_family(seed, seed % 3 == 0);
        assert!(spec.total_assignments() <= 1 << 16);
        let fast = engine.sum_pmf(&spec).unwrap();
        let full = engine.sum_pmf_full(&spec).unwrap();
        let brute = brute_force_pmf(&spec);
        for (s, &b) in brute.iter().enumerate() {
            assert!((fast.probs()[s] - full.probs()[s]).abs() <= 1e-12, "seed {seed}");
            assert!((fast.probs()[s] - b).abs() <= 1e-12, "seed {seed}");
        }
    }
}

#[test]
fn rational_engine_is_exact() {
    for seed in 0..40 {
        let m = 2 + (seed % 7) as usize;
        let k = 1 + (seed % 4) as usize;
        let r = (1 + (seed % 6) as usize).min(m * k);
        let exact: readk::ExactFamily =
            gen_random_family(RandomFamilyParams::new(m, r, k, 3, seed).weighted(true)).unwrap();
        let fast = sum_pmf(&exact).unwrap();
        assert_eq!(fast.probs(), brute_force_pmf(&exact).as_slice(), "seed {seed}");
        assert_eq!(fast.probs().iter().cloned().sum::<Rational>(), Rational::from_integer(1.into()));
    }
}

#[test]
fn mean_is_sum_of_marginals() {
    for seed in 0..200 {
        let spec = random_family(seed, seed % 2 == 0);
        let pmf = sum_pmf(&spec).unwrap();
        let marginals = function_marginals(&spec).unwrap();
        let total: f64 = marginals.per_function.iter().sum();
        assert!((pmf.mean() - total).abs() <= 1e-12, "seed {seed}");
        assert!((marginals.mean * spec.num_functions() as f64 - total).abs() <= 1e-12);
    }
}

#[test]
fn conditional_marginals_exceed_threshold_fraction() {
    for seed in 0..200 {
        let spec = random_family(seed, seed % 2 == 1);
        let r = spec.num_functions();
        let pmf = sum_pmf(&spec).unwrap();
        for t in 0..=r {
            for q in [TailQuery::at_least(t as f64), TailQuery::at_most(t as f64)] {
                if pmf.tail_prob(&q) <= 0.0 {
                    assert!(conditional_function_marginals(&spec, &q).is_err());
                    continue;
                }
                let qs = conditional_function_marginals(&spec, &q).unwrap();
                let avg = qs.iter().sum::<f64>() / r as f64;
                let frac = t as f64 / r as f64;
                match q.tail {
                    readk::Tail::Upper => assert!(avg >= frac - 1e-12, "seed {seed} t {t}"),
                    readk::Tail::Lower => assert!(avg <= frac + 1e-12, "seed {seed} t {t}"),
                }
            }
        }
    }
}

fn disjoint_family(probs: &[(f64, u8)]) -> Family {
    // function j reads its own pair of variables; its table marks one or
    // more rows, so p_j is a sum of products
    let mut vars = Vec::new();
    let mut funcs = Vec::new();
    for (j, &(p, mask)) in probs.iter().enumerate() {
        vars.push(Variable::weighted(format!("a{j}"), vec![1.0 - p, p]).unwrap());
        vars.push(Variable::uniform(format!("b{j}"), 2).unwrap());
        let bits: Vec<bool> = (0..4).map(|row| mask >> row & 1 == 1).collect();
        funcs.push(ReadFunction::new(format!("y{j}"), vec![2 * j, 2 * j + 1], bits));
    }
    Family::new(vars, funcs).unwrap()
}

proptest! {
    #[test]
    fn disjoint_reads_are_poisson_binomial(probs in prop::collection::vec((0.0f64..=1.0, 0u8..16), 1..9)) {
        let spec = disjoint_family(&probs);
        prop_assert_eq!(spec.read_width(), 1);
        let ps = function_marginals(&spec).unwrap().per_function;
        let expect = poisson_binomial(&ps);
        let got = sum_pmf(&spec).unwrap();
        for (a, b) in got.probs().iter().zip(&expect) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn unread_variables_do_not_change_the_law() {
    let copy = |v| ReadFunction::from_bits("y", vec![v], "01").unwrap();
    let base = Family::new(vec![Variable::uniform("x", 2).unwrap()], vec![copy(0), copy(0)]).unwrap();
    let padded = Family::new(
        vec![
            Variable::uniform("x", 2).unwrap(),
            Variable::weighted("z", vec![0.1, 0.2, 0.7]).unwrap(),
        ],
        vec![copy(0), copy(0)],
    )
    .unwrap();
    assert_eq!(sum_pmf(&base).unwrap(), sum_pmf(&padded).unwrap());
    // a tight guard still works: unread variables are never enumerated
    assert!(ExactEngine::with_guard(2).sum_pmf(&padded).is_ok());
}
