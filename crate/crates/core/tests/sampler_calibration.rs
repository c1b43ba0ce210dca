use readk::sampler::hoeffding_half_width;
use readk::{estimate_tail, sum_pmf, Family, ReadFunction, TailQuery, Variable};

fn xor_family() -> Family {
    Family::new(
        vec![Variable::uniform("x1", 2).unwrap(), Variable::uniform("x2", 2).unwrap()],
        vec![
            ReadFunction::from_bits("y1", vec![0], "01").unwrap(),
            ReadFunction::from_bits("y2", vec![0, 1], "0110").unwrap(),
        ],
    )
    .unwrap()
}

#[test]
fn intervals_cover_the_exact_value() {
    let spec = xor_family();
    let q = TailQuery::at_least(2.0);
    let exact = sum_pmf(&spec).unwrap().tail_prob(&q);
    assert_eq!(exact, 0.25);
    let misses = (0..200u64)
        .filter(|&seed| {
            let e = estimate_tail(&spec, &q, 20_000, seed);
            !(e.ci_low <= exact && exact <= e.ci_high)
        })
        .count();
    assert!(misses <= 6, "{misses} of 200 intervals missed");
}

#[test]
fn large_sample_estimate() {
    let spec = xor_family();
    let q = TailQuery::at_least(2.0);
    let e = estimate_tail(&spec, &q, 1_000_000, 1);
    assert!((e.estimate - 0.25).abs() <= hoeffding_half_width(1_000_000));
    assert_eq!(e, estimate_tail(&spec, &q, 1_000_000, 1));
}

#[test]
fn weighted_lower_tail() {
    let spec = Family::new(
        vec![Variable::weighted("x", vec![0.2, 0.3, 0.5]).unwrap(), Variable::uniform("z", 2).unwrap()],
        vec![
            ReadFunction::from_bits("a", vec![0], "011").unwrap(),
            ReadFunction::from_bits("b", vec![0, 1], "100110").unwrap(),
        ],
    )
    .unwrap();
    let q = TailQuery::at_most(0.0);
    let exact = sum_pmf(&spec).unwrap().tail_prob(&q);
    let e = estimate_tail(&spec, &q, 300_000, 9);
    assert!(e.ci_low <= exact && exact <= e.ci_high, "{exact} outside [{}, {}]", e.ci_low, e.ci_high);
}
