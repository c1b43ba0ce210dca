//! Read-k families: independent finite variables and Boolean functions of
//! subsets of them, each given by a truth table.
//!
//! Truth tables are indexed in mixed radix over the function's variable
//! list, first listed variable most significant. For two binary variables
//! the rows are `00, 01, 10, 11`.

mod components;
mod file;

use std::collections::HashSet;

pub use components::Component;
pub use file::{FamilyFile, FunctionEntry, VariableEntry};

use crate::error::{Error, Result};
use crate::scalar::{check_probability_vector, Weight};

/// Distribution of one variable over `0..support`.
#[derive(Clone, Debug, PartialEq)]
pub enum Probs<W> {
    Uniform(usize),
    Weighted(Vec<W>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable<W> {
    name: String,
    probs: Probs<W>,
}

impl<W: Weight> Variable<W> {
    pub fn uniform(name: impl Into<String>, support: usize) -> Result<Self> {
        if support == 0 {
            return Err(Error::validation("variable support must be at least 1"));
        }
        Ok(Self { name: name.into(), probs: Probs::Uniform(support) })
    }

    pub fn weighted(name: impl Into<String>, probs: Vec<W>) -> Result<Self> {
        let name = name.into();
        check_probability_vector(&probs)
            .map_err(|e| Error::validation(format!("variable {name:?}: {e}")))?;
        Ok(Self { name, probs: Probs::Weighted(probs) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> usize {
        match &self.probs {
            Probs::Uniform(n) => *n,
            Probs::Weighted(p) => p.len(),
        }
    }

    pub fn probs(&self) -> &Probs<W> {
        &self.probs
    }

    /// Probability of value `v`; zero outside the support.
    pub fn prob(&self, v: usize) -> W {
        match &self.probs {
            Probs::Uniform(n) if v < *n => W::from_ratio(1, *n as i64),
            Probs::Weighted(p) if v < p.len() => p[v].clone(),
            _ => W::zero(),
        }
    }

    pub fn prob_vector(&self) -> Vec<W> {
        (0..self.support()).map(|v| self.prob(v)).collect()
    }

    /// True when every value is equally likely, whether or not the
    /// probabilities were given explicitly.
    pub fn is_uniform(&self) -> bool {
        match &self.probs {
            Probs::Uniform(_) => true,
            Probs::Weighted(p) => p.iter().all(|x| *x == p[0]),
        }
    }

    fn map_weights<V: Weight>(&self, f: &mut impl FnMut(&W) -> V) -> Variable<V> {
        let probs = match &self.probs {
            Probs::Uniform(n) => Probs::Uniform(*n),
            Probs::Weighted(p) => Probs::Weighted(p.iter().map(&mut *f).collect()),
        };
        Variable { name: self.name.clone(), probs }
    }
}

/// A Boolean function of the variables listed in `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadFunction {
    name: String,
    vars: Vec<usize>,
    table: Vec<bool>,
}

impl ReadFunction {
    /// Unchecked against the variables; [`FamilySpec::new`] validates.
    pub fn new(name: impl Into<String>, vars: Vec<usize>, table: Vec<bool>) -> Self {
        Self { name: name.into(), vars, table }
    }

    /// Builds the table from a string of `0`/`1` characters.
    pub fn from_bits(name: impl Into<String>, vars: Vec<usize>, bits: &str) -> Result<Self> {
        let name = name.into();
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::validation(format!(
                    "function {name:?}: truth table character {other:?} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { name, vars, table })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The dependency set, in table order.
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn bits(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// A validated read-k family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec<W> {
    variables: Vec<Variable<W>>,
    functions: Vec<ReadFunction>,
}

impl<W: Weight> FamilySpec<W> {
    pub fn new(variables: Vec<Variable<W>>, functions: Vec<ReadFunction>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::validation("a family needs at least one variable"));
        }
        if functions.is_empty() {
            return Err(Error::validation("a family needs at least one function"));
        }
        for f in &functions {
            let mut seen = HashSet::new();
            let mut rows: u128 = 1;
            for &v in &f.vars {
                let Some(var) = variables.get(v) else {
                    return Err(Error::validation(format!(
                        "function {:?} reads variable {v}, but only {} exist",
                        f.name,
                        variables.len()
                    )));
                };
                if !seen.insert(v) {
                    return Err(Error::validation(format!(
                        "function {:?} lists variable {v} twice",
                        f.name
                    )));
                }
                rows = rows.saturating_mul(var.support() as u128);
            }
            if rows != f.table.len() as u128 {
                return Err(Error::validation(format!(
                    "function {:?}: truth table has {} rows, expected {rows}",
                    f.name,
                    f.table.len()
                )));
            }
        }
        Ok(Self { variables, functions })
    }

    pub fn variables(&self) -> &[Variable<W>] {
        &self.variables
    }

    pub fn functions(&self) -> &[ReadFunction] {
        &self.functions
    }

    /// `m`
    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    /// `r`
    pub fn num_functions(&self) -> usize {
        self.functions.len()
    }

    pub fn supports(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::support).collect()
    }

    pub fn all_uniform(&self) -> bool {
        self.variables.iter().all(Variable::is_uniform)
    }

    /// Size of the full assignment space, saturating.
    pub fn total_assignments(&self) -> u128 {
        self.variables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.support() as u128))
    }

    /// Number of functions reading each variable.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut counts = vec![0; self.variables.len()];
        for f in &self.functions {
            for &v in &f.vars {
                counts[v] += 1;
            }
        }
        counts
    }

    /// The smallest `k` for which this is a read-k family.
    pub fn read_width(&self) -> usize {
        self.multiplicities().into_iter().max().unwrap_or(0)
    }

    /// Row of function `j`'s table selected by a full assignment.
    pub fn table_index(&self, j: usize, assignment: &[usize]) -> Result<usize> {
        let f = self
            .functions
            .get(j)
            .ok_or_else(|| Error::domain(format!("no function with index {j}")))?;
        if assignment.len() != self.variables.len() {
            return Err(Error::domain(format!(
                "assignment has {} values for {} variables",
                assignment.len(),
                self.variables.len()
            )));
        }
        for (i, (&value, var)) in assignment.iter().zip(&self.variables).enumerate() {
            if value >= var.support() {
                return Err(Error::domain(format!(
                    "value {value} out of range for variable {i} (support {})",
                    var.support()
                )));
            }
        }
        Ok(f.vars
            .iter()
            .fold(0usize, |idx, &v| idx * self.variables[v].support() + assignment[v]))
    }

    /// `f_j` at a full assignment.
    pub fn eval_function(&self, j: usize, assignment: &[usize]) -> Result<bool> {
        let idx = self.table_index(j, assignment)?;
        Ok(self.functions[j].table[idx])
    }

    /// Number of functions equal to one at a full assignment.
    pub fn eval_sum(&self, assignment: &[usize]) -> Result<usize> {
        let mut sum = 0;
        for j in 0..self.functions.len() {
            sum += usize::from(self.eval_function(j, assignment)?);
        }
        Ok(sum)
    }

    pub fn dependency_components(&self) -> Vec<Component> {
        let reads: Vec<&[usize]> = self.functions.iter().map(|f| f.vars.as_slice()).collect();
        components::components(self.variables.len(), &reads)
    }

    /// Same family with every explicit probability converted by `f`.
    pub fn map_weights<V: Weight>(&self, mut f: impl FnMut(&W) -> V) -> FamilySpec<V> {
        FamilySpec {
            variables: self.variables.iter().map(|v| v.map_weights(&mut f)).collect(),
            functions: self.functions.clone(),
        }
    }
}
