//! Random N-K Boolean networks.
//!
//! Sampling is reproducible across platforms: the stream is ChaCha8 seeded
//! with `seed_from_u64(seed)`, and variables are processed in index order,
//! each drawing (1) its in-degree `d ~ Poisson(k)` by Knuth's product-of-
//! uniforms method, clamped to `[1, min(degree_cap, n)]`, (2) `d` distinct
//! regulators by a partial Fisher-Yates shuffle of `0..n`, (3) `2^d` fair
//! truth-table bits, row `r` assigning regulator `j` bit `d - 1 - j` of `r`.
//! The function is the disjunctive normal form of the true rows, or a
//! constant for constant tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::space::BooleanNetwork;

pub const DEFAULT_MEAN_DEGREE: f64 = 3.0;
pub const DEFAULT_DEGREE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    /// Mean of the in-degree distribution.
    pub k: f64,
    pub seed: u64,
    pub degree_cap: usize,
}

impl GeneratorConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        GeneratorConfig {
            n,
            k: DEFAULT_MEAN_DEGREE,
            seed,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "invalid mean degree {}",
                self.k
            )));
        }
        if self.degree_cap == 0 || self.degree_cap > 16 {
            return Err(Error::InvalidConfig(format!(
                "degree cap must lie in 1..=16, got {}",
                self.degree_cap
            )));
        }
        Ok(())
    }
}

fn poisson<R: Rng>(rng: &mut R, mean: f64) -> usize {
    let limit = (-mean).exp();
    let mut product = 1.0;
    let mut count = 0;
    loop {
        product *= rng.gen::<f64>();
        if product <= limit {
            return count;
        }
        count += 1;
    }
}

fn dnf(regulators: &[usize], table: &[bool]) -> Expr {
    if table.iter().all(|&b| b == table[0]) {
        return Expr::Const(table[0]);
    }
    let d = regulators.len();
    let terms = (0..table.len())
        .filter(|&r| table[r])
        .map(|r| {
            Expr::and(
                regulators
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        if (r >> (d - 1 - j)) & 1 == 1 {
                            Expr::Var(v)
                        } else {
                            Expr::not(Expr::Var(v))
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    Expr::or(terms)
}

/// Generate a network named `v1..vn`.
pub fn generate(config: &GeneratorConfig) -> Result<BooleanNetwork> {
    config.validate()?;
    let n = config.n;
    let max_degree = config.degree_cap.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut functions = Vec::with_capacity(n);
    for _ in 0..n {
        let d = poisson(&mut rng, config.k).clamp(1, max_degree);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..d {
            let j = rng.gen_range(i..n);
            pool.swap(i, j);
        }
        let mut regulators = pool[..d].to_vec();
        regulators.sort_unstable();
        let table: Vec<bool> = (0..1usize << d).map(|_| rng.gen::<bool>()).collect();
        functions.push(dnf(&regulators, &table));
    }
    let names = (1..=n).map(|i| format!("v{i}")).collect();
    BooleanNetwork::new(names, functions)
}
