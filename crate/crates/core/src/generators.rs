//! Benchmark families.

use num_rational::Ratio;
use rand::seq::index;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{FamilySpec, ReadFunction, Variable};
use crate::scalar::Weight;

/// Largest denominator accepted for preset probabilities.
pub const MAX_DENOMINATOR: i64 = 64;

/// `blocks` independent Bernoulli(p) variables, each copied into `k`
/// identity functions: `Y_1 = ... = Y_k = X_1`, `Y_{k+1} = ... = X_2`, ...
/// The upper tail of this family meets the read-k bound with equality.
pub fn gen_block_tight<W: Weight>(k: usize, blocks: usize, p: Ratio<i64>) -> Result<FamilySpec<W>> {
    if k == 0 || blocks == 0 {
        return Err(Error::domain(format!("k and blocks must be at least 1 (k={k}, blocks={blocks})")));
    }
    let (a, b) = (*p.numer(), *p.denom());
    if b <= 0 || b > MAX_DENOMINATOR || a < 0 || a > b {
        return Err(Error::domain(format!(
            "p = {p} must be a probability with denominator at most {MAX_DENOMINATOR}"
        )));
    }
    let variables = (0..blocks)
        .map(|i| Variable::weighted(format!("x{}", i + 1), vec![W::from_ratio(b - a, b), W::from_ratio(a, b)]))
        .collect::<Result<Vec<_>>>()?;
    let functions = (0..blocks * k)
        .map(|j| ReadFunction::new(format!("y{}", j + 1), vec![j / k], vec![false, true]))
        .collect();
    FamilySpec::new(variables, functions)
}

/// Parameters of [`gen_random_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomFamilyParams {
    /// Number of variables `m`.
    pub variables: usize,
    /// Number of functions `r`.
    pub functions: usize,
    /// Maximum number of functions reading any one variable.
    pub k: usize,
    /// Maximum number of variables read by one function.
    pub max_arity: usize,
    pub seed: u64,
    /// Draw random rational probabilities (denominators up to 8) instead of
    /// uniform variables.
    pub weighted: bool,
}

impl RandomFamilyParams {
    pub fn new(variables: usize, functions: usize, k: usize, max_arity: usize, seed: u64) -> Self {
        Self { variables, functions, k, max_arity, seed, weighted: false }
    }

    pub fn weighted(mut self, weighted: bool) -> Self {
        self.weighted = weighted;
        self
    }
}

/// Seeded random family with read width at most `k`.
///
/// Supports are drawn from `{2, 3}` and truth tables uniformly. Each
/// function reads distinct variables drawn among those still read fewer
/// than `k` times; its arity is drawn from `1..=max_arity`, capped so that
/// every later function still finds a free variable.
pub fn gen_random_family<W: Weight>(params: RandomFamilyParams) -> Result<FamilySpec<W>> {
    let RandomFamilyParams { variables: m, functions: r, k, max_arity, seed, weighted } = params;
    if m == 0 || r == 0 || k == 0 || max_arity == 0 {
        return Err(Error::domain(format!(
            "m, r, k and max_arity must be at least 1 (m={m}, r={r}, k={k}, max_arity={max_arity})"
        )));
    }
    if r > m.saturating_mul(k) {
        return Err(Error::domain(format!(
            "infeasible: {r} functions of arity >= 1 cannot fit in {m} variables read at most {k} times"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut vars = Vec::with_capacity(m);
    for i in 0..m {
        let support = rng.gen_range(2..=3usize);
        let name = format!("x{}", i + 1);
        let var = if weighted {
            let raw: Vec<i64> = (0..support).map(|_| rng.gen_range(1..=8)).collect();
            let total: i64 = raw.iter().sum();
            Variable::weighted(name, raw.iter().map(|&w| W::from_ratio(w, total)).collect())?
        } else {
            Variable::uniform(name, support)?
        };
        vars.push(var);
    }
    let supports: Vec<usize> = vars.iter().map(Variable::support).collect();

    let mut load = vec![0usize; m];
    let mut funcs = Vec::with_capacity(r);
    while funcs.len() < r {
        let open: Vec<usize> = (0..m).filter(|&v| load[v] < k).collect();
        let spare: usize = open.iter().map(|&v| k - load[v]).sum();
        let still_needed = r - funcs.len() - 1;
        // leave at least one free slot for every function still to come
        let cap = max_arity.min(open.len()).min(spare - still_needed);
        let arity = rng.gen_range(1..=cap);
        let mut picked: Vec<usize> = index::sample(&mut rng, open.len(), arity)
            .into_iter()
            .map(|i| open[i])
            .collect();
        picked.sort_unstable();
        for &v in &picked {
            load[v] += 1;
        }
        let rows: usize = picked.iter().map(|&v| supports[v]).product();
        let table = (0..rows).map(|_| rng.gen::<bool>()).collect();
        funcs.push(ReadFunction::new(format!("y{}", funcs.len() + 1), picked, table));
    }
    FamilySpec::new(vars, funcs)
}
