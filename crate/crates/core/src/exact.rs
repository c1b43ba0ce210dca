//! Exact distribution of `Y = Y_1 + ... + Y_r` by weighted enumeration.
//!
//! Functions are grouped into dependency components; each component's
//! variables are enumerated independently and the per-component sum laws
//! are convolved. Variables read by no function are never enumerated.
//!
//! Enumeration walks assignments in mixed-radix order (first variable most
//! significant) with an odometer that updates table rows and prefix
//! products incrementally. Large ranges are cut into fixed-size chunks that
//! run in parallel; partial results are combined in chunk order, so the
//! output is bit-identical regardless of thread count or scheduling.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::info_theory::{Distribution, Tuple};
use crate::scalar::Weight;

/// Default cap on the assignments enumerated per component.
pub const DEFAULT_GUARD: u64 = 1 << 24;

const CHUNK: u64 = 1 << 14;

/// Direction of a tail event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// `Y >= t`
    Upper,
    /// `Y <= t`
    Lower,
}

impl Tail {
    pub fn as_str(self) -> &'static str {
        match self {
            Tail::Upper => "upper",
            Tail::Lower => "lower",
        }
    }
}

impl std::str::FromStr for Tail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" | "ge" | ">=" => Ok(Tail::Upper),
            "lower" | "le" | "<=" => Ok(Tail::Lower),
            other => Err(Error::Parse(format!("unknown tail direction {other:?}"))),
        }
    }
}

/// The event `Y >= t` or `Y <= t` for a real threshold `t`. Inclusive;
/// since `Y` is integral this is `Y >= ceil(t)` resp. `Y <= floor(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailQuery {
    pub threshold: f64,
    pub tail: Tail,
}

impl TailQuery {
    pub fn new(threshold: f64, tail: Tail) -> Self {
        Self { threshold, tail }
    }

    pub fn at_least(threshold: f64) -> Self {
        Self::new(threshold, Tail::Upper)
    }

    pub fn at_most(threshold: f64) -> Self {
        Self::new(threshold, Tail::Lower)
    }

    /// Whether the integer sum `s` lies in the event.
    #[inline]
    pub fn admits(&self, s: usize) -> bool {
        match self.tail {
            Tail::Upper => s as f64 >= self.threshold,
            Tail::Lower => s as f64 <= self.threshold,
        }
    }
}

/// Law of the number of functions equal to one; `probs[s] = Pr[Y = s]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SumPmf<W> {
    probs: Vec<W>,
}

impl<W: Weight> SumPmf<W> {
    /// Validates entries (non-negative, normalized).
    pub fn new(probs: Vec<W>) -> Result<Self> {
        crate::scalar::check_probability_vector(&probs).map_err(Error::Validation)?;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[W] {
        &self.probs
    }

    /// Largest attainable value of the sum.
    pub fn max_value(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn mean(&self) -> W {
        self.probs
            .iter()
            .enumerate()
            .fold(W::zero(), |acc, (s, p)| acc + W::from_ratio(s as i64, 1) * p.clone())
    }

    pub fn tail_prob(&self, q: &TailQuery) -> W {
        self.probs
            .iter()
            .enumerate()
            .filter(|(s, _)| q.admits(*s))
            .fold(W::zero(), |acc, (_, p)| acc + p.clone())
    }

    pub fn into_vec(self) -> Vec<W> {
        self.probs
    }
}

/// Free-function form of [`SumPmf::tail_prob`].
pub fn tail_prob<W: Weight>(pmf: &SumPmf<W>, q: &TailQuery) -> W {
    pmf.tail_prob(q)
}

/// Marginals `p_j = Pr[f_j = 1]` and their average.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginals<W> {
    pub per_function: Vec<W>,
    pub mean: W,
}

/// Exact oracle with a configurable enumeration guard.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactEngine {
    guard: u64,
}

impl Default for ExactEngine {
    fn default() -> Self {
        Self { guard: DEFAULT_GUARD }
    }
}

impl ExactEngine {
    pub fn with_guard(guard: u64) -> Self {
        Self { guard }
    }

    pub fn guard(&self) -> u64 {
        self.guard
    }

    /// Law of `Y` via per-component enumeration and convolution.
    pub fn sum_pmf<W: Weight>(&self, spec: &FamilySpec<W>) -> Result<SumPmf<W>> {
        let mut pmf = vec![W::one()];
        for (c, comp) in spec.dependency_components().iter().enumerate() {
            let block = Block::new(spec, &comp.variables, &comp.functions);
            self.check(c, &block)?;
            let part = block.sum_law();
            pmf = convolve(&pmf, &part);
        }
        Ok(SumPmf { probs: pmf })
    }

    /// Law of `Y` by enumerating every assignment of every variable at once.
    /// Independent of the component decomposition; used to cross-check it.
    pub fn sum_pmf_full<W: Weight>(&self, spec: &FamilySpec<W>) -> Result<SumPmf<W>> {
        let block = Block::whole(spec);
        self.check(0, &block)?;
        Ok(SumPmf { probs: block.sum_law() })
    }

    pub fn function_marginals<W: Weight>(&self, spec: &FamilySpec<W>) -> Result<Marginals<W>> {
        let mut per_function = Vec::with_capacity(spec.num_functions());
        for (j, f) in spec.functions().iter().enumerate() {
            let block = Block::new(spec, f.vars(), &[j]);
            self.check(j, &block)?;
            let law = block.sum_law();
            per_function.push(law.get(1).cloned().unwrap_or_else(W::zero));
        }
        let total = per_function.iter().fold(W::zero(), |acc, p| acc + p.clone());
        let mean = total / W::from_ratio(spec.num_functions() as i64, 1);
        Ok(Marginals { per_function, mean })
    }

    /// `q_j = Pr[f_j = 1 | event]` by full enumeration.
    pub fn conditional_function_marginals<W: Weight>(
        &self,
        spec: &FamilySpec<W>,
        q: &TailQuery,
    ) -> Result<Vec<W>> {
        let block = Block::whole(spec);
        self.check(0, &block)?;
        let r = spec.num_functions();
        let (mass, ones) = block.reduce(
            || (W::zero(), vec![W::zero(); r]),
            |acc, state| {
                if q.admits(state.sum) {
                    acc.0 = acc.0.clone() + state.weight.clone();
                    for (slot, &bit) in acc.1.iter_mut().zip(state.bits) {
                        if bit {
                            *slot = slot.clone() + state.weight.clone();
                        }
                    }
                }
            },
            |acc, part| {
                acc.0 = acc.0.clone() + part.0;
                for (slot, x) in acc.1.iter_mut().zip(part.1) {
                    *slot = slot.clone() + x;
                }
            },
        );
        if !(mass > W::zero()) {
            return Err(Error::domain(format!(
                "conditioning event {q:?} has probability zero"
            )));
        }
        Ok(ones.into_iter().map(|x| x / mass.clone()).collect())
    }

    /// Law of the full assignment (dense, mixed-radix order).
    pub fn joint_law<W: Weight>(&self, spec: &FamilySpec<W>) -> Result<Distribution<Tuple, W>> {
        let (labels, weights, _) = self.enumerate_joint(spec, None)?;
        Distribution::new(labels, weights)
    }

    /// Law of the full assignment conditioned on the event, dense over all
    /// assignments, together with the event's probability.
    pub fn conditional_joint<W: Weight>(
        &self,
        spec: &FamilySpec<W>,
        q: &TailQuery,
    ) -> Result<(Distribution<Tuple, W>, W)> {
        let (labels, weights, mass) = self.enumerate_joint(spec, Some(q))?;
        if !(mass > W::zero()) {
            return Err(Error::domain(format!(
                "conditioning event {q:?} has probability zero"
            )));
        }
        let probs = weights.into_iter().map(|w| w / mass.clone()).collect();
        Ok((Distribution::new(labels, probs)?, mass))
    }

    fn enumerate_joint<W: Weight>(
        &self,
        spec: &FamilySpec<W>,
        q: Option<&TailQuery>,
    ) -> Result<(Vec<Tuple>, Vec<W>, W)> {
        let block = Block::whole(spec);
        self.check(0, &block)?;
        let (labels, weights) = block.reduce(
            || (Vec::new(), Vec::new()),
            |acc: &mut (Vec<Tuple>, Vec<W>), state| {
                acc.0.push(state.digits.to_vec());
                let keep = q.is_none_or(|q| q.admits(state.sum));
                acc.1.push(if keep { state.weight.clone() } else { W::zero() });
            },
            |acc, part| {
                acc.0.extend(part.0);
                acc.1.extend(part.1);
            },
        );
        let mass = weights.iter().fold(W::zero(), |acc, w| acc + w.clone());
        Ok((labels, weights, mass))
    }

    fn check<W: Weight>(&self, component: usize, block: &Block<'_, W>) -> Result<()> {
        let count = block.assignments();
        if count > u128::from(self.guard) {
            return Err(Error::GuardExceeded {
                component,
                variables: block.vars.len(),
                assignments: count,
                guard: self.guard,
            });
        }
        Ok(())
    }
}

/// [`ExactEngine::sum_pmf`] with the default guard.
pub fn sum_pmf<W: Weight>(spec: &FamilySpec<W>) -> Result<SumPmf<W>> {
    ExactEngine::default().sum_pmf(spec)
}

/// [`ExactEngine::function_marginals`] with the default guard.
pub fn function_marginals<W: Weight>(spec: &FamilySpec<W>) -> Result<Marginals<W>> {
    ExactEngine::default().function_marginals(spec)
}

/// [`ExactEngine::conditional_function_marginals`] with the default guard.
pub fn conditional_function_marginals<W: Weight>(spec: &FamilySpec<W>, q: &TailQuery) -> Result<Vec<W>> {
    ExactEngine::default().conditional_function_marginals(spec, q)
}

/// Discrete convolution of two probability vectors.
pub fn convolve<W: Weight>(a: &[W], b: &[W]) -> Vec<W> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![W::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Current odometer position handed to visitors.
struct State<'s, W> {
    digits: &'s [usize],
    weight: &'s W,
    bits: &'s [bool],
    sum: usize,
}

/// A set of variables (enumeration order) and the functions that read only
/// those variables.
struct Block<'a, W> {
    vars: Vec<usize>,
    supports: Vec<usize>,
    weights: Vec<Vec<W>>,
    tables: Vec<&'a [bool]>,
    /// `(function, table stride)` for each local variable.
    readers: Vec<Vec<(usize, usize)>>,
}

impl<'a, W: Weight> Block<'a, W> {
    fn new(spec: &'a FamilySpec<W>, vars: &[usize], funcs: &[usize]) -> Self {
        let mut local = vec![usize::MAX; spec.num_variables()];
        for (l, &v) in vars.iter().enumerate() {
            local[v] = l;
        }
        let supports: Vec<usize> = vars.iter().map(|&v| spec.variables()[v].support()).collect();
        let weights = vars.iter().map(|&v| spec.variables()[v].prob_vector()).collect();
        let mut readers = vec![Vec::new(); vars.len()];
        let mut tables = Vec::with_capacity(funcs.len());
        for (slot, &j) in funcs.iter().enumerate() {
            let f = &spec.functions()[j];
            tables.push(f.table());
            let mut stride = 1;
            for &v in f.vars().iter().rev() {
                let l = local[v];
                debug_assert!(l != usize::MAX, "function reads a variable outside its block");
                readers[l].push((slot, stride));
                stride *= supports[l];
            }
        }
        Self { vars: vars.to_vec(), supports, weights, tables, readers }
    }

    fn whole(spec: &'a FamilySpec<W>) -> Self {
        let vars: Vec<usize> = (0..spec.num_variables()).collect();
        let funcs: Vec<usize> = (0..spec.num_functions()).collect();
        Self::new(spec, &vars, &funcs)
    }

    fn assignments(&self) -> u128 {
        self.supports.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
    }

    /// Law of the number of block functions equal to one.
    fn sum_law(&self) -> Vec<W> {
        let len = self.tables.len() + 1;
        self.reduce(
            || vec![W::zero(); len],
            |acc, state| {
                acc[state.sum] = acc[state.sum].clone() + state.weight.clone();
            },
            |acc, part| {
                for (slot, x) in acc.iter_mut().zip(part) {
                    *slot = slot.clone() + x;
                }
            },
        )
    }

    /// Visits every assignment. Chunks are folded independently (possibly
    /// in parallel) and merged left to right in chunk order.
    fn reduce<A, I, V, M>(&self, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &State<'_, W>) + Sync,
        M: Fn(&mut A, A),
    {
        // Guarded callers keep this within u64.
        let total = u64::try_from(self.assignments()).expect("assignment count fits in u64");
        let chunks = total.div_ceil(CHUNK).max(1);
        let run = |c: u64| {
            let mut acc = init();
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            self.walk(lo, hi, |state| visit(&mut acc, state));
            acc
        };
        if chunks == 1 {
            return run(0);
        }
        let parts: Vec<A> = (0..chunks).into_par_iter().map(run).collect();
        let mut parts = parts.into_iter();
        let mut acc = parts.next().expect("at least one chunk");
        for part in parts {
            merge(&mut acc, part);
        }
        acc
    }

    /// Odometer over linear positions `lo..hi`.
    fn walk(&self, lo: u64, hi: u64, mut visit: impl FnMut(&State<'_, W>)) {
        let n = self.vars.len();
        if lo >= hi {
            return;
        }

        let mut digits = vec![0usize; n];
        let mut rest = lo;
        for l in (0..n).rev() {
            let s = self.supports[l] as u64;
            digits[l] = (rest % s) as usize;
            rest /= s;
        }

        let mut rows = vec![0usize; self.tables.len()];
        for (l, readers) in self.readers.iter().enumerate() {
            for &(f, stride) in readers {
                rows[f] += digits[l] * stride;
            }
        }
        let mut bits: Vec<bool> = rows.iter().zip(&self.tables).map(|(&i, t)| t[i]).collect();
        let mut sum = bits.iter().filter(|&&b| b).count();

        // prefix[l] = product of the weights of digits 0..l
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(W::one());
        for l in 0..n {
            let next = prefix[l].clone() * self.weights[l][digits[l]].clone();
            prefix.push(next);
        }

        let mut pos = lo;
        loop {
            visit(&State { digits: &digits, weight: &prefix[n], bits: &bits, sum });
            pos += 1;
            if pos == hi {
                break;
            }

            let mut l = n;
            loop {
                l -= 1;
                let carry = digits[l] + 1 == self.supports[l];
                if carry {
                    let back = self.supports[l] - 1;
                    digits[l] = 0;
                    for &(f, stride) in &self.readers[l] {
                        rows[f] -= back * stride;
                        flip(&mut bits[f], self.tables[f][rows[f]], &mut sum);
                    }
                } else {
                    digits[l] += 1;
                    for &(f, stride) in &self.readers[l] {
                        rows[f] += stride;
                        flip(&mut bits[f], self.tables[f][rows[f]], &mut sum);
                    }
                    break;
                }
            }
            for i in l..n {
                prefix[i + 1] = prefix[i].clone() * self.weights[i][digits[i]].clone();
            }
        }
    }
}

#[inline]
fn flip(bit: &mut bool, new: bool, sum: &mut usize) {
    if *bit != new {
        if new {
            *sum += 1;
        } else {
            *sum -= 1;
        }
        *bit = new;
    }
}
