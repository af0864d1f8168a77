use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::evaluator::bleu::{check_counts, sentence_stats, BleuConfig, BleuStats};
use crate::error::{Error, Result};
use crate::with_workers;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    /// 0 uses all cores; results do not depend on it.
    pub workers: usize,
}

impl BootstrapConfig {
    pub fn with_seed(seed: u64) -> Self {
        BootstrapConfig {
            replicates: 1000,
            seed,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceReport {
    pub replicates: usize,
    pub seed: u64,
    pub bleu_a: f64,
    pub bleu_b: f64,
    pub wins_a: f64,
    pub wins_b: f64,
    pub ties: f64,
    /// Share of replicates whose difference contradicts or ties the sign of
    /// the full-corpus difference.
    pub p_value: f64,
}

impl fmt::Display for SignificanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BLEU A = {:.2}, BLEU B = {:.2}", 100.0 * self.bleu_a, 100.0 * self.bleu_b)?;
        writeln!(
            f,
            "replicates = {}, seed = {}: A wins {:.4}, B wins {:.4}, ties {:.4}",
            self.replicates, self.seed, self.wins_a, self.wins_b, self.ties
        )?;
        write!(f, "p = {:.4}", self.p_value)
    }
}

/// Sentence indices of replicate `r`: N draws with replacement from a
/// stream fixed by (seed, r).
fn resample(seed: u64, replicate: usize, n: usize) -> impl Iterator<Item = usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate as u64);
    (0..n).map(move |_| rng.gen_range(0..n))
}

/// Paired bootstrap resampling of corpus BLEU for systems A and B.
pub fn paired_bootstrap<T: AsRef<str> + Sync>(
    hyps_a: &[Vec<T>],
    hyps_b: &[Vec<T>],
    references: &[Vec<T>],
    bleu: &BleuConfig,
    config: &BootstrapConfig,
) -> Result<SignificanceReport> {
    check_counts("bootstrap system A", hyps_a.len(), references.len())?;
    check_counts("bootstrap system B", hyps_b.len(), references.len())?;
    if references.is_empty() {
        return Err(Error::InvalidInput("bootstrap needs at least one sentence".into()));
    }
    if config.replicates == 0 {
        return Err(Error::InvalidInput("bootstrap needs at least one replicate".into()));
    }
    let a = sentence_stats(hyps_a, references, bleu)?;
    let b = sentence_stats(hyps_b, references, bleu)?;
    let corpus = |stats: &[BleuStats], idx: &mut dyn Iterator<Item = usize>| {
        let mut total = BleuStats::zero(bleu.max_n);
        for i in idx {
            total.add(&stats[i]);
        }
        total.score(bleu.smoothing).score
    };
    let n = references.len();
    let bleu_a = corpus(&a, &mut (0..n));
    let bleu_b = corpus(&b, &mut (0..n));
    let observed = bleu_a - bleu_b;

    let diffs: Vec<f64> = with_workers(config.workers, || {
        (0..config.replicates)
            .into_par_iter()
            .map(|r| {
                let idx: Vec<usize> = resample(config.seed, r, n).collect();
                corpus(&a, &mut idx.iter().copied()) - corpus(&b, &mut idx.iter().copied())
            })
            .collect()
    })?;

    let count = |pred: &dyn Fn(f64) -> bool| diffs.iter().filter(|&&d| pred(d)).count();
    let wins_a = count(&|d| d > 0.0);
    let wins_b = count(&|d| d < 0.0);
    let ties = diffs.len() - wins_a - wins_b;
    let against = if observed > 0.0 {
        wins_b + ties
    } else if observed < 0.0 {
        wins_a + ties
    } else {
        diffs.len()
    };
    let r = config.replicates as f64;
    Ok(SignificanceReport {
        replicates: config.replicates,
        seed: config.seed,
        bleu_a,
        bleu_b,
        wins_a: wins_a as f64 / r,
        wins_b: wins_b as f64 / r,
        ties: ties as f64 / r,
        p_value: against as f64 / r,
    })
}
