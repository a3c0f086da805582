use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on `sum(pmf) == 1`.
pub const PMF_TOLERANCE: f64 = 1e-12;

/// A finite-domain random variable with values `0..domain`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Variable {
    domain: u32,
    /// `None` means uniform.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pmf: Option<Vec<f64>>,
    #[serde(skip)]
    cdf: Vec<f64>,
}

impl Variable {
    pub fn uniform(domain: u32) -> Result<Self> {
        if domain == 0 {
            return Err(Error::InvalidInput("a variable needs a nonempty domain".into()));
        }
        Ok(Variable { domain, pmf: None, cdf: Vec::new() })
    }

    pub fn with_pmf(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidInput("a variable needs a nonempty domain".into()));
        }
        if pmf.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidInput(format!("pmf entries must be nonnegative: {pmf:?}")));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidInput(format!("pmf sums to {total}, not 1")));
        }
        let domain = u32::try_from(pmf.len()).map_err(|_| Error::InvalidInput("domain too large".into()))?;
        let cdf = pmf
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(Variable { domain, pmf: Some(pmf), cdf })
    }

    pub fn domain(&self) -> u32 {
        self.domain
    }

    /// Probability of `value`.
    pub fn prob(&self, value: u32) -> f64 {
        match &self.pmf {
            _ if value >= self.domain => 0.0,
            None => 1.0 / self.domain as f64,
            Some(p) => p[value as usize],
        }
    }

    pub fn pmf(&self) -> Option<&[f64]> {
        self.pmf.as_deref()
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        if self.pmf.is_none() {
            return rng.gen_range(0..self.domain);
        }
        let u: f64 = rng.gen();
        let idx = self.cdf.partition_point(|&c| c <= u);
        // Rounding can leave the last cumulative sum a hair below 1; skip zero-mass tails.
        let idx = idx.min(self.domain as usize - 1);
        let pmf = self.pmf.as_ref().expect("checked");
        (0..=idx).rev().find(|&i| pmf[i] > 0.0).unwrap_or(idx) as u32
    }
}

/// Independent variables plus the seed their sample streams derive from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariableSpace {
    variables: Vec<Variable>,
    seed: u64,
}

impl VariableSpace {
    pub fn new(variables: Vec<Variable>, seed: u64) -> Self {
        VariableSpace { variables, seed }
    }

    /// `n` uniform variables over `0..domain`.
    pub fn uniform(n: usize, domain: u32, seed: u64) -> Result<Self> {
        Ok(VariableSpace::new(vec![Variable::uniform(domain)?; n], seed))
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        VariableSpace { variables: self.variables.clone(), seed }
    }

    pub fn variable(&self, i: usize) -> &Variable {
        &self.variables[i]
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn domains(&self) -> Vec<u32> {
        self.variables.iter().map(|v| v.domain).collect()
    }
}

/// Each table entry owns `2^ENTRY_SHIFT` words of keystream.
const ENTRY_SHIFT: u32 = 8;

/// The table `X_i^(0), X_i^(1), ...` of independent samples per variable.
///
/// Entry `(i, j)` is drawn from a ChaCha8 keystream keyed by the seed, on
/// stream `i`, at word offset `j << 8`, so any entry can be re-read at any
/// time. Cursors record how many entries of each stream have been consumed.
#[derive(Clone, Debug)]
pub struct ResamplingTable {
    space: VariableSpace,
    base: ChaCha8Rng,
    cursors: Vec<u64>,
}

impl ResamplingTable {
    pub fn new(space: &VariableSpace) -> Self {
        ResamplingTable {
            space: space.clone(),
            base: ChaCha8Rng::seed_from_u64(space.seed),
            cursors: vec![0; space.len()],
        }
    }

    /// Entry `X_var^(j)`; a pure function of `(seed, var, j)`.
    pub fn entry(&self, var: usize, j: u64) -> u32 {
        let mut rng = self.base.clone();
        rng.set_stream(var as u64);
        rng.set_word_pos((j as u128) << ENTRY_SHIFT);
        self.space.variables[var].sample(&mut rng)
    }

    /// Reads the next unread entry of `var` and advances its cursor.
    pub fn next(&mut self, var: usize) -> u32 {
        let v = self.entry(var, self.cursors[var]);
        self.cursors[var] += 1;
        v
    }

    pub fn seed(&self) -> u64 {
        self.space.seed
    }

    pub fn cursor(&self, var: usize) -> u64 {
        self.cursors[var]
    }

    pub fn cursors(&self) -> &[u64] {
        &self.cursors
    }
}
