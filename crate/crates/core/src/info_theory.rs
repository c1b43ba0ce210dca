//! Entropy and relative entropy of explicit finite distributions.
//!
//! All logarithms are natural. The conventions `0 ln 0 = 0` and
//! `a ln(a / 0) = +inf` for `a > 0` make every divergence total; no
//! function here ever returns NaN for valid inputs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::scalar::{check_probability_vector, Real, Weight};

/// Outcome label for joint distributions: one value per coordinate.
pub type Tuple = Vec<usize>;

/// A quantity measured in nats. May be `+inf` for divergences.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Nats<T>(pub T);

impl<T: Real> Nats<T> {
    pub fn zero() -> Self {
        Nats(T::zero())
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl<T: Real> Add for Nats<T> {
    type Output = Nats<T>;

    fn add(self, rhs: Self) -> Self {
        Nats(self.0 + rhs.0)
    }
}

impl<T: Real> fmt::Display for Nats<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nats", self.0)
    }
}

/// Finitely supported distribution over an ordered list of distinct labels.
///
/// Outcomes with zero probability are kept: two distributions are comparable
/// by [`kl_divergence`] only if they list the same outcome set.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<L, T> {
    outcomes: Vec<L>,
    probs: Vec<T>,
}

impl<L, T> Distribution<L, T>
where
    L: Clone + Eq + Hash + fmt::Debug,
    T: Weight,
{
    pub fn new(outcomes: Vec<L>, probs: Vec<T>) -> Result<Self> {
        if outcomes.len() != probs.len() {
            return Err(Error::validation(format!(
                "{} outcomes but {} probabilities",
                outcomes.len(),
                probs.len()
            )));
        }
        check_probability_vector(&probs).map_err(Error::Validation)?;
        let mut seen = HashMap::with_capacity(outcomes.len());
        for (i, label) in outcomes.iter().enumerate() {
            if let Some(first) = seen.insert(label, i) {
                return Err(Error::validation(format!(
                    "outcome {label:?} listed twice (positions {first} and {i})"
                )));
            }
        }
        Ok(Self { outcomes, probs })
    }

    pub fn uniform(outcomes: Vec<L>) -> Result<Self> {
        let n = i64::try_from(outcomes.len()).map_err(|_| Error::domain("too many outcomes"))?;
        if n == 0 {
            return Err(Error::validation("empty outcome set"));
        }
        let probs = vec![T::from_ratio(1, n); outcomes.len()];
        Self::new(outcomes, probs)
    }

    /// All mass on `outcomes[at]`.
    pub fn point_mass(outcomes: Vec<L>, at: usize) -> Result<Self> {
        if at >= outcomes.len() {
            return Err(Error::domain(format!(
                "point mass index {at} out of range for {} outcomes",
                outcomes.len()
            )));
        }
        let mut probs = vec![T::zero(); outcomes.len()];
        probs[at] = T::one();
        Self::new(outcomes, probs)
    }

    pub fn outcomes(&self) -> &[L] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &T)> {
        self.outcomes.iter().zip(self.probs.iter())
    }

    pub fn prob_of(&self, label: &L) -> Option<&T> {
        self.outcomes.iter().position(|o| o == label).map(|i| &self.probs[i])
    }

    /// Total probability of the outcomes satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(&L) -> bool) -> T {
        self.iter()
            .filter(|(l, _)| pred(l))
            .fold(T::zero(), |acc, (_, p)| acc + p.clone())
    }

    /// Law of `phi(X)` for `X` with this law. The image is ordered by label
    /// and contains exactly the images of the listed outcomes.
    pub fn push_forward<M, F>(&self, mut phi: F) -> Distribution<M, T>
    where
        M: Clone + Ord + Hash + fmt::Debug,
        F: FnMut(&L) -> M,
    {
        let mut acc: BTreeMap<M, T> = BTreeMap::new();
        for (label, p) in self.iter() {
            let slot = acc.entry(phi(label)).or_insert_with(T::zero);
            *slot = slot.clone() + p.clone();
        }
        let (outcomes, probs) = acc.into_iter().unzip();
        Distribution { outcomes, probs }
    }
}

impl<T: Weight> Distribution<Tuple, T> {
    /// Marginal on the coordinates `coords` (in the given order). Colliding
    /// sub-tuples are merged; the result is ordered lexicographically.
    pub fn project(&self, coords: &[usize]) -> Result<Self> {
        for label in &self.outcomes {
            if let Some(&c) = coords.iter().find(|&&c| c >= label.len()) {
                return Err(Error::domain(format!(
                    "coordinate {c} out of range for outcome {label:?}"
                )));
            }
        }
        Ok(self.push_forward(|label| coords.iter().map(|&c| label[c]).collect::<Tuple>()))
    }
}

/// Free-function form of [`Distribution::project`].
pub fn project<T: Weight>(d: &Distribution<Tuple, T>, coords: &[usize]) -> Result<Distribution<Tuple, T>> {
    d.project(coords)
}

fn plogp_neg<T: Real>(p: T) -> T {
    if p > T::zero() {
        -(p * p.ln())
    } else {
        T::zero()
    }
}

/// Shannon entropy `sum_a d(a) ln(1/d(a))`.
pub fn entropy<L, T>(d: &Distribution<L, T>) -> Nats<T>
where
    T: Real,
{
    let h = d.probs.iter().fold(T::zero(), |acc, &p| acc + plogp_neg(p));
    Nats(h.max(T::zero()))
}

/// `p_lhs(a) ln(p_lhs(a) / p_rhs(a))` with the zero conventions.
fn kl_term<T: Real>(a: T, b: T) -> T {
    if a <= T::zero() {
        T::zero()
    } else if b <= T::zero() {
        T::infinity()
    } else if a == T::one() {
        -b.ln()
    } else {
        a * (a / b).ln()
    }
}

/// Relative entropy `D(d1 || d2)`.
///
/// Both arguments must list the same outcome set; the order may differ.
/// Returns `+inf` when `d1` puts mass where `d2` does not.
pub fn kl_divergence<L, T>(d1: &Distribution<L, T>, d2: &Distribution<L, T>) -> Result<Nats<T>>
where
    L: Clone + Eq + Hash + fmt::Debug,
    T: Real,
{
    if d1.len() != d2.len() {
        return Err(Error::domain(format!(
            "outcome sets differ in size ({} vs {})",
            d1.len(),
            d2.len()
        )));
    }
    let mut sum = T::zero();
    if d1.outcomes == d2.outcomes {
        for (&a, &b) in d1.probs.iter().zip(&d2.probs) {
            sum = sum + kl_term(a, b);
        }
    } else {
        let index: HashMap<&L, usize> = d2.outcomes.iter().enumerate().map(|(i, l)| (l, i)).collect();
        for (label, &a) in d1.iter() {
            let Some(&j) = index.get(label) else {
                return Err(Error::domain(format!("outcome {label:?} missing from second distribution")));
            };
            sum = sum + kl_term(a, d2.probs[j]);
        }
    }
    Ok(Nats(sum.max(T::zero())))
}

/// Divergence between Bernoulli(q) and Bernoulli(p).
pub fn kl_binary<T: Real>(q: T, p: T) -> Result<Nats<T>> {
    let unit = |x: T| x >= T::zero() && x <= T::one();
    if !unit(q) || !unit(p) {
        return Err(Error::domain(format!("kl_binary arguments must lie in [0, 1], got q={q}, p={p}")));
    }
    if q == p {
        return Ok(Nats(T::zero()));
    }
    let value = kl_term(q, p) + kl_term(T::one() - q, T::one() - p);
    Ok(Nats(value.max(T::zero())))
}

/// `H(X_target | X_given)` evaluated from the definition: the average over
/// values `g` of the given coordinates of the entropy of the target
/// coordinates conditioned on `X_given = g`.
pub fn conditional_entropy<T: Real>(
    d: &Distribution<Tuple, T>,
    target: &[usize],
    given: &[usize],
) -> Result<Nats<T>> {
    let mut groups: BTreeMap<Tuple, BTreeMap<Tuple, T>> = BTreeMap::new();
    for (label, &p) in d.iter() {
        if let Some(&c) = target.iter().chain(given).find(|&&c| c >= label.len()) {
            return Err(Error::domain(format!("coordinate {c} out of range for outcome {label:?}")));
        }
        let g: Tuple = given.iter().map(|&c| label[c]).collect();
        let x: Tuple = target.iter().map(|&c| label[c]).collect();
        let slot = groups.entry(g).or_default().entry(x).or_insert_with(T::zero);
        *slot = *slot + p;
    }
    let mut h = T::zero();
    for cell in groups.values() {
        let mass = cell.values().fold(T::zero(), |acc, &p| acc + p);
        if mass <= T::zero() {
            continue;
        }
        let inner = cell.values().fold(T::zero(), |acc, &p| acc + plogp_neg(p / mass));
        h = h + mass * inner;
    }
    Ok(Nats(h.max(T::zero())))
}
