//! Closed-form tail bounds for read-k families.
//!
//! For a read-k family of `r` indicators with average marginal `p`,
//!
//! ```text
//! Pr[Y >= (p + eps) r] <= exp(-KL(p + eps || p) * r / k)
//! Pr[Y <= (p - eps) r] <= exp(-KL(p - eps || p) * r / k)
//! ```
//!
//! and `Pr[Y_1 = ... = Y_r = 1] <= p^(r/k)` when every marginal equals `p`.
//! Everything is evaluated in log space; the linear bound is exponentiated
//! last so that large `r / k` underflows only in the linear value.

use crate::error::{Error, Result};
use crate::exact::Tail;
use crate::info_theory::{kl_binary, Nats};
use crate::scalar::Real;

/// Parameters of a tail bound.
///
/// The deviation is stored both as `eps` and as the level `p + eps`
/// (resp. `p - eps`); [`BoundQuery::at_threshold`] sets the level to `t / r`
/// directly so no rounding creeps in through `p + (t / r - p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundQuery<T> {
    r: u64,
    k: u64,
    p: T,
    eps: T,
    level: T,
    tail: Tail,
}

impl<T: Real> BoundQuery<T> {
    pub fn new(r: u64, k: u64, p: T, eps: T, tail: Tail) -> Result<Self> {
        check_counts(r, k)?;
        check_probability(p, "p")?;
        if !(eps > T::zero()) {
            return Err(Error::domain(format!("eps must be positive, got {eps}")));
        }
        let level = match tail {
            Tail::Upper => p + eps,
            Tail::Lower => p - eps,
        };
        let query = Self { r, k, p, eps, level, tail };
        query.check_level()?;
        Ok(query)
    }

    /// Query for the event `Y >= t` (upper) or `Y <= t` (lower), i.e.
    /// `eps = t / r - p` resp. `eps = p - t / r`.
    pub fn at_threshold(r: u64, k: u64, p: T, t: T, tail: Tail) -> Result<Self> {
        check_counts(r, k)?;
        check_probability(p, "p")?;
        let level = t / T::of(r as f64);
        let eps = match tail {
            Tail::Upper => level - p,
            Tail::Lower => p - level,
        };
        if !(eps > T::zero()) {
            return Err(Error::domain(format!(
                "threshold {t} is not beyond the mean {} on the {} side",
                p * T::of(r as f64),
                tail.as_str()
            )));
        }
        let query = Self { r, k, p, eps, level, tail };
        query.check_level()?;
        Ok(query)
    }

    fn check_level(&self) -> Result<()> {
        match self.tail {
            Tail::Upper if self.level > T::one() => Err(Error::domain(format!(
                "p + eps = {} exceeds 1: the upper tail event is empty",
                self.level
            ))),
            Tail::Lower if self.level < T::zero() => Err(Error::domain(format!(
                "p - eps = {} is below 0: the lower tail event is empty",
                self.level
            ))),
            _ => Ok(()),
        }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    /// `p + eps` for the upper tail, `p - eps` for the lower tail.
    pub fn level(&self) -> T {
        self.level
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// The exponent scale `r / k` (real-valued).
    pub fn scale(&self) -> T {
        ratio(self.r, self.k)
    }
}

fn check_counts(r: u64, k: u64) -> Result<()> {
    if r == 0 || k == 0 {
        return Err(Error::domain(format!("r and k must be at least 1 (r={r}, k={k})")));
    }
    Ok(())
}

fn check_probability<T: Real>(p: T, what: &str) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::domain(format!("{what} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn ratio<T: Real>(r: u64, k: u64) -> T {
    T::of(r as f64) / T::of(k as f64)
}

/// A bound on a probability, in log space and linear space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundResult<T> {
    /// Natural log of the bound; `<= 0`, possibly `-inf`.
    pub log_bound: T,
    pub bound: T,
}

impl<T: Real> BoundResult<T> {
    pub fn from_log(log_bound: T) -> Self {
        let log_bound = log_bound.min(T::zero());
        Self { log_bound, bound: log_bound.exp() }
    }

    /// Magnitude of the exponent as nats.
    pub fn exponent(&self) -> Nats<T> {
        Nats(-self.log_bound)
    }
}

/// `exp(-KL(level || p) * r / k)`.
pub fn read_k_tail_bound<T: Real>(q: &BoundQuery<T>) -> BoundResult<T> {
    let kl = kl_binary(q.level, q.p).expect("query levels are validated").value();
    if kl.is_infinite() {
        return BoundResult { log_bound: T::neg_infinity(), bound: T::zero() };
    }
    BoundResult::from_log(-(kl * q.scale()))
}

/// The relaxation `exp(-2 eps^2 r / k)`.
pub fn simplified_tail_bound<T: Real>(q: &BoundQuery<T>) -> BoundResult<T> {
    let two = T::one() + T::one();
    BoundResult::from_log(-(two * q.eps * q.eps * q.scale()))
}

/// `Pr[all Y_j = 1] <= p^(r / k)`.
pub fn shearer_and_bound<T: Real>(r: u64, k: u64, p: T) -> Result<BoundResult<T>> {
    check_counts(r, k)?;
    check_probability(p, "p")?;
    if p == T::zero() {
        return Ok(BoundResult { log_bound: T::neg_infinity(), bound: T::zero() });
    }
    Ok(BoundResult::from_log(ratio::<T>(r, k) * p.ln()))
}

/// Classic Chernoff bound for `r` independent indicators (`k = 1`).
pub fn chernoff_bound<T: Real>(r: u64, p: T, eps: T, tail: Tail) -> Result<BoundResult<T>> {
    Ok(read_k_tail_bound(&BoundQuery::new(r, 1, p, eps, tail)?))
}
