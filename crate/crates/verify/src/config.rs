use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use siegel_core::{Error, FieldParams};

/// Named verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Symplectic,
    Siegel,
    Series,
    Casselman,
    Duality,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Symplectic => "symplectic",
            Suite::Siegel => "siegel",
            Suite::Series => "series",
            Suite::Casselman => "casselman",
            Suite::Duality => "duality",
            Suite::All => "all",
        }
    }
}

/// Number of seeded samples drawn by each case family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub relations: usize,
    pub u0: usize,
    pub cocycle: usize,
    pub differential: usize,
    pub translation_n1: usize,
    pub translation_n2: usize,
    pub group_law: usize,
    pub partial_fractions: usize,
    pub residues: usize,
    pub duality: usize,
    pub commutative: usize,
    pub equivariance: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Self {
            relations: 200,
            u0: 100,
            cocycle: 200,
            differential: 20,
            translation_n1: 50,
            translation_n2: 10,
            group_law: 200,
            partial_fractions: 30,
            residues: 50,
            duality: 20,
            commutative: 10,
            equivariance: 5,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error(transparent)]
    Field(#[from] Error),
    #[error("n = {n} needs the ramification index to be divisible by {needed}, got e = {e}")]
    Ramification { n: usize, needed: u32, e: u32 },
    #[error("{0}")]
    Invalid(String),
}

/// Everything that determines a suite run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub p: u64,
    pub e: u32,
    pub precision: u32,
    pub seed: u64,
    /// Restricts matrix size; both `1` and `2` when absent.
    pub n: Option<usize>,
    /// Top level `m` for membership scans and the translation check.
    pub m: u32,
    /// Restricts the weight; each family's default weights when absent.
    pub s: Option<i64>,
    #[serde(skip)]
    pub counts: Counts,
}

impl SuiteConfig {
    pub fn new(suite: Suite, p: u64, e: u32, precision: u32, seed: u64) -> Self {
        Self { suite, p, e, precision, seed, n: None, m: 3, s: None, counts: Counts::default() }
    }

    pub fn params(&self) -> Result<FieldParams, ConfigError> {
        Ok(FieldParams::new(self.p, self.e, self.precision)?)
    }
}

/// Resolved configuration shared by the case families.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub params: FieldParams,
    pub seed: u64,
    pub n: Option<usize>,
    pub m: u32,
    pub s: Option<i64>,
    pub counts: Counts,
}

impl Ctx {
    pub fn new(config: &SuiteConfig) -> Result<Self, ConfigError> {
        if config.n.is_some_and(|n| !(1..=2).contains(&n)) {
            return Err(ConfigError::Invalid(format!("n must be 1 or 2, got {}", config.n.unwrap_or(0))));
        }
        Ok(Self {
            params: config.params()?,
            seed: config.seed,
            n: config.n,
            m: config.m,
            s: config.s,
            counts: config.counts,
        })
    }

    /// Independent stream per case family so suites agree with `all`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    pub fn dims(&self) -> Vec<usize> {
        self.n.map_or(vec![1, 2], |n| vec![n])
    }

    pub fn weights(&self, default: &[i64]) -> Vec<i64> {
        self.s.map_or(default.to_vec(), |s| vec![s])
    }

    /// The working field extended so that `needed | e`, keeping the `p`-adic
    /// precision.
    pub fn field_with(&self, needed: u32) -> Result<FieldParams, Error> {
        let e = self.params.e();
        if e.is_multiple_of(needed) {
            return Ok(self.params);
        }
        let l = lcm(e, needed);
        self.params.ramify(l / e)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}
