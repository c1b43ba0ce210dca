//! Numeric audit of the entropy argument behind the read-k tail bound.
//!
//! For uniform variables and a tail event `E` with conditional law
//! `mu_E`, the bound follows from the chain
//!
//! ```text
//! -ln Pr[E] = D(mu_E || mu)
//!          >= (1/k) sum_j D(mu_E|P_j || mu|P_j)      (Shearer, KL form)
//!          >= (1/k) sum_j KL(q_j || p_j)             (data processing, phi = f_j)
//!          >= (r/k) KL(q || p)                       (convexity)
//!          >= (r/k) KL(t/r || p)                     (monotonicity, q beyond t/r)
//! ```
//!
//! [`proof_trace`] evaluates every term exactly; the per-step slack is the
//! main diagnostic.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{ExactEngine, Tail, TailQuery};
use crate::family::FamilySpec;
use crate::info_theory::{entropy, kl_binary, kl_divergence, Distribution, Nats, Tuple};
use crate::scalar::Real;

/// Default relative slack for chained inequalities.
pub const CHAIN_TOLERANCE: f64 = 1e-9;

/// Absolute floor applied to inequality comparisons so that exact zeros on
/// both sides compare equal after rounding.
pub const ABSOLUTE_FLOOR: f64 = 1e-12;

/// `a >= b` up to relative slack `rel` (plus [`ABSOLUTE_FLOOR`]).
pub fn geq_within<T: Real>(a: T, b: T, rel: f64) -> bool {
    if a.is_infinite() && a > T::zero() {
        return true;
    }
    let scale = a.abs().max(b.abs());
    a >= b - T::of(rel) * scale - T::of(ABSOLUTE_FLOOR)
}

/// Two sides of an entropy inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gap<T> {
    pub lhs: Nats<T>,
    pub rhs: Nats<T>,
}

impl<T: Real> Gap<T> {
    /// `rhs - lhs`.
    pub fn slack(&self) -> T {
        self.rhs.value() - self.lhs.value()
    }
}

fn arity<T: Real>(joint: &Distribution<Tuple, T>) -> Result<usize> {
    let n = joint.outcomes().first().map_or(0, Vec::len);
    if joint.outcomes().iter().any(|o| o.len() != n) {
        return Err(Error::domain("joint outcomes have different lengths"));
    }
    Ok(n)
}

/// Shearer's lemma: if every coordinate lies in at least `k` of the sets,
/// `k H(X) <= sum_j H(X|P_j)`. Returns `(k H(X), sum_j H(X|P_j))`; check
/// with [`Gap::holds_leq`].
pub fn shearer_entropy_gap<T: Real>(
    joint: &Distribution<Tuple, T>,
    cover: &[Vec<usize>],
    k: usize,
) -> Result<Gap<T>> {
    let n = arity(joint)?;
    let mut multiplicity = vec![0usize; n];
    for set in cover {
        for &c in set {
            if c >= n {
                return Err(Error::domain(format!("cover coordinate {c} out of range for arity {n}")));
            }
            multiplicity[c] += 1;
        }
    }
    if let Some((c, &m)) = multiplicity.iter().enumerate().find(|(_, &m)| m < k) {
        return Err(Error::domain(format!("coordinate {c} is covered {m} times, fewer than k = {k}")));
    }
    let lhs = T::of(k as f64) * entropy(joint).value();
    let mut rhs = T::zero();
    for set in cover {
        rhs = rhs + entropy(&joint.project(set)?).value();
    }
    Ok(Gap { lhs: Nats(lhs), rhs: Nats(rhs) })
}

impl<T: Real> Gap<T> {
    /// `lhs <= rhs` within `tol` (relative, with the absolute floor).
    pub fn holds_leq(&self, tol: f64) -> bool {
        geq_within(self.rhs.value(), self.lhs.value(), tol)
    }

    /// `lhs >= rhs` within `tol`.
    pub fn holds_geq(&self, tol: f64) -> bool {
        geq_within(self.lhs.value(), self.rhs.value(), tol)
    }
}

/// Mixed-radix enumeration of `prod_{i in vars} 0..supports[i]`.
fn product_domain(supports: &[usize]) -> Vec<Tuple> {
    let mut out = vec![Vec::new()];
    for &s in supports {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Marginal of `joint` on `coords`, laid out densely over the product of the
/// coordinates' supports, against the uniform law on that product.
fn kl_to_uniform_marginal<T: Real>(
    joint: &Distribution<Tuple, T>,
    coords: &[usize],
    supports: &[usize],
) -> Result<Nats<T>> {
    let marginal = joint.project(coords)?;
    let mass: BTreeMap<&Tuple, T> = marginal.iter().map(|(l, &p)| (l, p)).collect();
    if mass.keys().any(|t| t.iter().zip(coords).any(|(&v, &c)| v >= supports[c])) {
        return Err(Error::domain("joint outcomes fall outside the variables' supports"));
    }
    let domain = product_domain(&coords.iter().map(|&c| supports[c]).collect::<Vec<_>>());
    let dense: Vec<T> = domain.iter().map(|t| mass.get(t).copied().unwrap_or_else(T::zero)).collect();
    let reference = Distribution::uniform(domain.clone())?;
    kl_divergence(&Distribution::new(domain, dense)?, &reference)
}

fn require_uniform<T: Real>(spec: &FamilySpec<T>) -> Result<()> {
    if let Some(v) = spec.variables().iter().find(|v| !v.is_uniform()) {
        return Err(Error::domain(format!(
            "variable {:?} is not uniform; the entropy audit needs uniform variables",
            v.name()
        )));
    }
    Ok(())
}

/// KL form of Shearer's lemma with `k = read_width`:
/// `k D(X || U) >= sum_j D(X|P_j || U|P_j)` where `U` is the uniform
/// product over the variables' supports. Returns `(lhs, rhs)`; check with
/// [`Gap::holds_geq`].
pub fn shearer_kl_gap<T: Real>(spec: &FamilySpec<T>, conditioned: &Distribution<Tuple, T>) -> Result<Gap<T>> {
    require_uniform(spec)?;
    let m = spec.num_variables();
    let n = arity(conditioned)?;
    if n != m {
        return Err(Error::domain(format!("joint outcomes have {n} coordinates for {m} variables")));
    }
    let supports = spec.supports();
    let k = spec.read_width().max(1);
    let all: Vec<usize> = (0..m).collect();
    let lhs = T::of(k as f64) * kl_to_uniform_marginal(conditioned, &all, &supports)?.value();
    let mut rhs = T::zero();
    for f in spec.functions() {
        rhs = rhs + kl_to_uniform_marginal(conditioned, f.vars(), &supports)?.value();
    }
    Ok(Gap { lhs: Nats(lhs), rhs: Nats(rhs) })
}

/// The five terms of the chain, largest first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProofTrace<T> {
    /// `-ln Pr[E]`, computed as `D(mu_E || mu)`.
    pub neg_log_tail: Nats<T>,
    /// `(1/k) sum_j D(mu_E|P_j || mu|P_j)`
    pub shearer_term: Nats<T>,
    /// `(1/k) sum_j KL(q_j || p_j)`
    pub dpi_term: Nats<T>,
    /// `(r/k) KL(q || p)`
    pub convexity_term: Nats<T>,
    /// `(r/k) KL(t/r || p)`, zero when `t/r` is not beyond `p`.
    pub final_term: Nats<T>,
    /// `Pr[E]`
    pub tail_prob: T,
    pub k: usize,
    pub r: usize,
    /// Average unconditional marginal `p`.
    pub p: T,
    /// Average conditional marginal `q`.
    pub q: T,
}

impl<T: Real> ProofTrace<T> {
    pub fn terms(&self) -> [Nats<T>; 5] {
        [self.neg_log_tail, self.shearer_term, self.dpi_term, self.convexity_term, self.final_term]
    }

    /// Differences between consecutive terms.
    pub fn slacks(&self) -> [T; 4] {
        let t = self.terms();
        [0, 1, 2, 3].map(|i| t[i].value() - t[i + 1].value())
    }

    /// Index of the first step violating monotonicity, if any.
    pub fn first_violation(&self, tol: f64) -> Option<usize> {
        let t = self.terms();
        (0..4).find(|&i| !geq_within(t[i].value(), t[i + 1].value(), tol))
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.first_violation(tol).is_none()
    }
}

/// Evaluates the chain for the tail event `q` on a uniform-variable family.
pub fn proof_trace<T: Real>(spec: &FamilySpec<T>, q: &TailQuery) -> Result<ProofTrace<T>> {
    proof_trace_with(&ExactEngine::default(), spec, q)
}

pub fn proof_trace_with<T: Real>(engine: &ExactEngine, spec: &FamilySpec<T>, q: &TailQuery) -> Result<ProofTrace<T>> {
    require_uniform(spec)?;
    let (conditioned, tail_prob) = engine.conditional_joint(spec, q)?;
    let unconditioned = engine.joint_law(spec)?;
    let r = spec.num_functions();
    let k = spec.read_width().max(1);
    let kf = T::of(k as f64);
    let scale = T::of(r as f64) / kf;
    let supports = spec.supports();

    let neg_log_tail = kl_divergence(&conditioned, &unconditioned)?;

    let mut projected = T::zero();
    for f in spec.functions() {
        projected = projected + kl_to_uniform_marginal(&conditioned, f.vars(), &supports)?.value();
    }
    let shearer_term = Nats(projected / kf);

    let p_j = engine.function_marginals(spec)?.per_function;
    let q_j = engine.conditional_function_marginals(spec, q)?;
    let mut dpi = T::zero();
    for (&qj, &pj) in q_j.iter().zip(&p_j) {
        dpi = dpi + kl_binary(clamp_unit(qj), clamp_unit(pj))?.value();
    }
    let dpi_term = Nats(dpi / kf);

    let rf = T::of(r as f64);
    let p = clamp_unit(p_j.iter().fold(T::zero(), |a, &x| a + x) / rf);
    let q_bar = clamp_unit(q_j.iter().fold(T::zero(), |a, &x| a + x) / rf);
    let convexity_term = Nats(scale * kl_binary(q_bar, p)?.value());

    let level = T::of(q.threshold) / rf;
    let beyond = match q.tail {
        Tail::Upper => level > p,
        Tail::Lower => level < p,
    };
    let final_term = if beyond {
        Nats(scale * kl_binary(clamp_unit(level), p)?.value())
    } else {
        Nats::zero()
    };

    Ok(ProofTrace {
        neg_log_tail,
        shearer_term,
        dpi_term,
        convexity_term,
        final_term,
        tail_prob,
        k,
        r,
        p,
        q: q_bar,
    })
}

fn clamp_unit<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}
