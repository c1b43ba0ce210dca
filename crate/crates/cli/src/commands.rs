use std::fs;
use std::path::Path;

use num_rational::Ratio;
use readk::{
    estimate_tail, gen_block_tight, gen_random_family, read_k_tail_bound, shearer_and_bound,
    shearer_entropy_gap, simplified_tail_bound, BoundQuery, ExactEngine, Family, RandomFamilyParams, Tail,
    TailQuery, DEFAULT_GUARD,
};
use readk::audit::{geq_within, proof_trace_with, shearer_kl_gap};

use crate::args::{BoundArgs, Command, EventArgs, ExactArgs, GenArgs, McArgs, Preset, VerifyArgs};
use crate::output::Record;

pub const GUARD_VAR: &str = "READK_ENUM_GUARD";

/// What a command produced. `passed` is false when an audited inequality
/// failed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub raw: Option<String>,
    pub passed: bool,
}

impl Outcome {
    fn records(records: Vec<Record>, passed: bool) -> Self {
        Self { records, raw: None, passed }
    }
}

type CmdResult = Result<Outcome, String>;

pub fn execute(command: &Command, guard: Option<&str>) -> CmdResult {
    let engine = engine(guard)?;
    match command {
        Command::Bound(a) => bound(a),
        Command::Exact(a) => exact(&engine, a),
        Command::Mc(a) => mc(a),
        Command::Verify(a) => verify(&engine, a),
        Command::Trace(a) => trace(&engine, a),
        Command::Shearer(a) => shearer(&engine, a),
        Command::Gen(a) => generate(a),
    }
}

fn engine(guard: Option<&str>) -> Result<ExactEngine, String> {
    match guard {
        None => Ok(ExactEngine::with_guard(DEFAULT_GUARD)),
        Some(text) => text
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&g| g > 0)
            .map(ExactEngine::with_guard)
            .ok_or_else(|| format!("{GUARD_VAR} must be a positive integer, got {text:?}")),
    }
}

fn fail(e: readk::Error) -> String {
    e.to_string()
}

fn load(path: &Path) -> Result<Family, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Family::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn bound(a: &BoundArgs) -> CmdResult {
    let tail = Tail::from(a.tail);
    let q = match (a.eps, a.t) {
        (Some(eps), _) => BoundQuery::new(a.r, a.k, a.p, eps, tail),
        (None, Some(t)) => BoundQuery::at_threshold(a.r, a.k, a.p, t, tail),
        (None, None) => unreachable!("clap requires one of --eps and --t"),
    }
    .map_err(fail)?;
    let (kind, b) = if a.simplified {
        ("simplified", simplified_tail_bound(&q))
    } else {
        ("read-k", read_k_tail_bound(&q))
    };
    let rec = Record::new()
        .with("kind", kind)
        .with("r", a.r)
        .with("k", a.k)
        .with("p", q.p())
        .with("eps", q.eps())
        .with("tail", tail.as_str())
        .with("log_bound", b.log_bound)
        .with("bound", b.bound);
    Ok(Outcome::records(vec![rec], true))
}

fn exact(engine: &ExactEngine, a: &ExactArgs) -> CmdResult {
    let spec = load(&a.file)?;
    let pmf = engine.sum_pmf(&spec).map_err(fail)?;
    let mut records = vec![Record::new()
        .with("r", spec.num_functions())
        .with("read_width", spec.read_width())
        .with("mean", pmf.mean())
        .with("pmf", pmf.probs().to_vec())];
    if let (Some(t), Some(tail)) = (a.t, a.tail) {
        let q = TailQuery::new(t, tail.into());
        records.push(
            Record::new()
                .with("t", t)
                .with("tail", q.tail.as_str())
                .with("prob", pmf.tail_prob(&q)),
        );
    }
    Ok(Outcome::records(records, true))
}

fn mc(a: &McArgs) -> CmdResult {
    let spec = load(&a.file)?;
    let q = TailQuery::new(a.t, a.tail.into());
    let e = estimate_tail(&spec, &q, a.samples, a.seed);
    let rec = Record::new()
        .with("t", a.t)
        .with("tail", q.tail.as_str())
        .with("estimate", e.estimate)
        .with("ci_low", e.ci_low)
        .with("ci_high", e.ci_high)
        .with("samples", e.samples)
        .with("seed", e.seed);
    Ok(Outcome::records(vec![rec], true))
}

fn check_tol(tol: f64) -> Result<(), String> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(format!("--tol must be a non-negative number, got {tol}"))
    }
}

fn verify(engine: &ExactEngine, a: &VerifyArgs) -> CmdResult {
    check_tol(a.tol)?;
    let spec = load(&a.file)?;
    let pmf = engine.sum_pmf(&spec).map_err(fail)?;
    let r = spec.num_functions();
    let k = spec.read_width().max(1);
    let p = match a.p {
        Some(p) if (0.0..=1.0).contains(&p) => p,
        Some(p) => return Err(format!("--p must lie in [0, 1], got {p}")),
        None => (pmf.mean() / r as f64).clamp(0.0, 1.0),
    };
    let mut records = Vec::new();
    let mut violations = 0usize;
    for t in 0..=r {
        for tail in [Tail::Upper, Tail::Lower] {
            // thresholds not beyond the mean carry no bound
            let Ok(q) = BoundQuery::at_threshold(r as u64, k as u64, p, t as f64, tail) else {
                continue;
            };
            let exact = pmf.tail_prob(&TailQuery::new(t as f64, tail));
            let bound = read_k_tail_bound(&q).bound;
            let pass = geq_within(bound, exact, a.tol);
            violations += usize::from(!pass);
            records.push(
                Record::new()
                    .with("t", t)
                    .with("tail", tail.as_str())
                    .with("exact", exact)
                    .with("bound", bound)
                    .with("slack", bound - exact)
                    .with("pass", pass),
            );
        }
    }
    let checked = records.len();
    let passed = violations == 0;
    records.push(
        Record::new()
            .with("result", verdict(passed))
            .with("checked", checked)
            .with("violations", violations)
            .with("r", r)
            .with("k", k)
            .with("p", p)
            .with("tol", a.tol),
    );
    Ok(Outcome::records(records, passed))
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

const TRACE_TERMS: [&str; 5] = ["neg_log_tail", "shearer_term", "dpi_term", "convexity_term", "final_term"];

fn trace(engine: &ExactEngine, a: &EventArgs) -> CmdResult {
    check_tol(a.tol)?;
    let spec = load(&a.file)?;
    let q = TailQuery::new(a.t, a.tail.into());
    let tr = proof_trace_with(engine, &spec, &q).map_err(fail)?;
    let violation = tr.first_violation(a.tol);
    let mut rec = Record::new().with("t", a.t).with("tail", q.tail.as_str());
    for (name, term) in TRACE_TERMS.iter().zip(tr.terms()) {
        rec = rec.with(name, term.value());
    }
    let broken = match violation {
        Some(i) => format!("{} < {}", TRACE_TERMS[i], TRACE_TERMS[i + 1]),
        None => "none".into(),
    };
    rec = rec
        .with("tail_prob", tr.tail_prob)
        .with("k", tr.k)
        .with("r", tr.r)
        .with("p", tr.p)
        .with("q", tr.q)
        .with("first_violation", broken)
        .with("result", verdict(violation.is_none()));
    Ok(Outcome::records(vec![rec], violation.is_none()))
}

fn shearer(engine: &ExactEngine, a: &EventArgs) -> CmdResult {
    check_tol(a.tol)?;
    let spec = load(&a.file)?;
    let q = TailQuery::new(a.t, a.tail.into());
    let (conditioned, mass) = engine.conditional_joint(&spec, &q).map_err(fail)?;

    // the lemma needs every variable covered at least k times
    let cover: Vec<Vec<usize>> = spec.functions().iter().map(|f| f.vars().to_vec()).collect();
    let lemma_k = spec.multiplicities().into_iter().min().unwrap_or(0);
    let lemma = shearer_entropy_gap(&conditioned, &cover, lemma_k).map_err(fail)?;
    let lemma_ok = lemma.holds_leq(a.tol);
    let corollary = shearer_kl_gap(&spec, &conditioned).map_err(fail)?;
    let corollary_ok = corollary.holds_geq(a.tol);

    let mut records = vec![
        Record::new()
            .with("inequality", "lemma")
            .with("k", lemma_k)
            .with("lhs", lemma.lhs.value())
            .with("rhs", lemma.rhs.value())
            .with("pass", lemma_ok),
        Record::new()
            .with("inequality", "corollary")
            .with("k", spec.read_width().max(1))
            .with("lhs", corollary.lhs.value())
            .with("rhs", corollary.rhs.value())
            .with("pass", corollary_ok),
    ];

    let mut and_ok = true;
    let marginals = engine.function_marginals(&spec).map_err(fail)?.per_function;
    let (lo, hi) = marginals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi - lo <= 1e-12 {
        let r = spec.num_functions();
        let all_ones = engine.sum_pmf(&spec).map_err(fail)?.probs()[r];
        let b = shearer_and_bound(r as u64, spec.read_width().max(1) as u64, marginals[0].clamp(0.0, 1.0))
            .map_err(fail)?;
        and_ok = geq_within(b.bound, all_ones, a.tol);
        records.push(
            Record::new()
                .with("inequality", "and-bound")
                .with("k", spec.read_width().max(1))
                .with("lhs", all_ones)
                .with("rhs", b.bound)
                .with("pass", and_ok),
        );
    }
    let passed = lemma_ok && corollary_ok && and_ok;
    records.push(
        Record::new()
            .with("result", verdict(passed))
            .with("t", a.t)
            .with("tail", q.tail.as_str())
            .with("tail_prob", mass),
    );
    Ok(Outcome::records(records, passed))
}

fn generate(a: &GenArgs) -> CmdResult {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("--preset {} requires {flag}", preset_name(a.preset)));
    let spec: Family = match a.preset {
        Preset::BlockTight => {
            let k = need(a.k, "--k")?;
            let blocks = need(a.blocks, "--blocks")?;
            let p = parse_ratio(a.p.as_deref().unwrap_or("1/2"))?;
            gen_block_tight(k, blocks, p).map_err(fail)?
        }
        Preset::Random => {
            let params = RandomFamilyParams::new(need(a.m, "--m")?, need(a.r, "--r")?, need(a.k, "--k")?, a.max_arity, a.seed)
                .weighted(a.weighted);
            gen_random_family(params).map_err(fail)?
        }
    };
    match &a.out {
        None => Ok(Outcome { records: Vec::new(), raw: Some(spec.to_json() + "\n"), passed: true }),
        Some(path) => {
            fs::write(path, spec.to_json_pretty() + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            let rec = Record::new()
                .with("wrote", path.display().to_string())
                .with("variables", spec.num_variables())
                .with("functions", spec.num_functions())
                .with("read_width", spec.read_width());
            Ok(Outcome::records(vec![rec], true))
        }
    }
}

fn preset_name(p: Preset) -> &'static str {
    match p {
        Preset::BlockTight => "block-tight",
        Preset::Random => "random",
    }
}

/// `a/b`, an integer, or a decimal with at most 18 fractional digits.
pub fn parse_ratio(text: &str) -> Result<Ratio<i64>, String> {
    let bad = || format!("cannot parse probability {text:?}; use a fraction like 1/3 or a decimal like 0.25");
    let text = text.trim();
    if text.contains('/') {
        let (a, b) = text.split_once('/').ok_or_else(bad)?;
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    match text.split_once('.') {
        None => text.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad()),
        Some((int, frac)) => {
            if frac.len() > 18 || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10i64.pow(frac.len() as u32);
            let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            let numer = int.checked_mul(scale).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
            Ok(Ratio::new(numer, scale))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("1/2").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_ratio("2/6").unwrap(), Ratio::new(1, 3));
        assert_eq!(parse_ratio("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_ratio(".5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_ratio("1").unwrap(), Ratio::from_integer(1));
        for bad in ["", "x", "1/0", "0.1e3", "1/2/3", "0.-1"] {
            assert!(parse_ratio(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn guard_parsing() {
        assert_eq!(engine(None).unwrap().guard(), DEFAULT_GUARD);
        assert_eq!(engine(Some("1024")).unwrap().guard(), 1024);
        assert!(engine(Some("0")).is_err());
        assert!(engine(Some("lots")).is_err());
    }
}
