//! Independent oracles shared by the integration tests. Nothing here goes
//! through the odometer, the component decomposition or the convolution.
#![allow(dead_code)]

use readk::{FamilySpec, Weight};

/// Every assignment of the given supports, first coordinate slowest.
pub fn assignments(supports: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in supports {
        let mut next = Vec::with_capacity(out.len() * s);
        for prefix in &out {
            for v in 0..s {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Product weight of an assignment.
pub fn weight_of<W: Weight>(spec: &FamilySpec<W>, a: &[usize]) -> W {
    spec.variables()
        .iter()
        .zip(a)
        .fold(W::one(), |acc, (v, &x)| acc * v.prob(x))
}

/// Law of the sum by brute force over all assignments, evaluating each
/// function by direct table lookup.
pub fn brute_force_pmf<W: Weight>(spec: &FamilySpec<W>) -> Vec<W> {
    let mut pmf = vec![W::zero(); spec.num_functions() + 1];
    for a in assignments(&spec.supports()) {
        let s = spec.eval_sum(&a).unwrap();
        pmf[s] = pmf[s].clone() + weight_of(spec, &a);
    }
    pmf
}

/// Poisson-binomial law by the textbook dynamic program.
pub fn poisson_binomial(ps: &[f64]) -> Vec<f64> {
    let mut dp = vec![1.0];
    for &p in ps {
        let mut next = vec![0.0; dp.len() + 1];
        for (s, &x) in dp.iter().enumerate() {
            next[s] += x * (1.0 - p);
            next[s + 1] += x * p;
        }
        dp = next;
    }
    dp
}

/// `sum_{s >= t} C(n, s) p^s (1 - p)^(n - s)`, in exact rationals.
pub fn binomial_upper_tail(n: u32, p: &readk::Rational, t: u32) -> readk::Rational {
    use num_traits::{One, Pow, Zero};
    let q = readk::Rational::one() - p.clone();
    let mut total = readk::Rational::zero();
    for s in t..=n {
        let c = binom(n, s);
        total += readk::Rational::from_integer(c.into()) * Pow::pow(p.clone(), s) * Pow::pow(q.clone(), n - s);
    }
    total
}

fn binom(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}
