use std::path::Path;

use log::debug;
use rayon::prelude::*;

use crate::aligner::{
    estep, train_model1, Bitext, Direction, Substitution, TranslationTable, NULL_WORD,
};
use crate::corpus::{AlignmentLinks, ParallelCorpus, SentencePair};
use crate::error::{Error, Result};
use crate::text::{read_lines, write_lines};
use crate::with_workers;

use super::RowSubstitution;

/// Probability assigned to unseen (e, f) pairs during Viterbi search only.
pub const VITERBI_FLOOR: f64 = 1e-9;

const TENSION_MIN: f64 = 0.1;
const TENSION_MAX: f64 = 14.0;

const DUMP_MAGIC: &str = "#diagonal-alignment-model";
const DUMP_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalConfig {
    /// Model 1 iterations used to initialize the translation table. Zero
    /// starts the diagonal model from a uniform table.
    pub model1_iterations: usize,
    pub iterations: usize,
    pub initial_tension: f64,
    pub null_prob: f64,
    /// Bisection steps for the tension update after each EM iteration.
    pub tension_steps: usize,
    pub smoothing_alpha: f64,
    /// When false the tension stays at `initial_tension`.
    pub optimize_tension: bool,
    /// Worker threads for the E-step; 0 uses all cores.
    pub workers: usize,
}

impl Default for DiagonalConfig {
    fn default() -> Self {
        DiagonalConfig {
            model1_iterations: 5,
            iterations: 5,
            initial_tension: 4.0,
            null_prob: 0.08,
            tension_steps: 8,
            smoothing_alpha: 0.01,
            optimize_tension: true,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiagonalAlignmentModel {
    pub table: TranslationTable,
    pub tension: f64,
    pub null_prob: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone)]
pub struct DiagonalTraining {
    pub model: DiagonalAlignmentModel,
    /// Model 1 log-likelihood trace (empty when Model 1 was skipped).
    pub model1_log_likelihoods: Vec<f64>,
    /// Log-likelihood of the model entering each diagonal EM iteration.
    pub log_likelihoods: Vec<f64>,
    /// Tension after each iteration.
    pub tensions: Vec<f64>,
}

/// h(i, j, m, n) = -|i/m - j/n| for 1-based output position `i` of `m` and
/// conditioning position `j` of `n`.
fn feature(i: usize, j: usize, m: usize, n: usize) -> f64 {
    -((i as f64 / m as f64) - (j as f64 / n as f64)).abs()
}

/// Unnormalized diagonal weights exp(λ h) for j = 1..=n and their sum.
fn diagonal_weights(i: usize, m: usize, n: usize, tension: f64, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend((1..=n).map(|j| (tension * feature(i, j, m, n)).exp()));
    buf.iter().sum()
}

/// δ(j | i, m, n) for j = 0..=n, where index 0 is NULL. `i` is the 1-based
/// output position.
pub fn diagonal_distortion(i: usize, m: usize, n: usize, tension: f64, null_prob: f64) -> Vec<f64> {
    let mut w = Vec::new();
    let z = diagonal_weights(i, m, n, tension, &mut w);
    std::iter::once(null_prob)
        .chain(w.iter().map(|x| (1.0 - null_prob) * x / z))
        .collect()
}

/// E_λ[h | i, m, n] under the normalized diagonal weights.
fn expected_feature(i: usize, m: usize, n: usize, tension: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 1..=n {
        let h = feature(i, j, m, n);
        let w = (tension * h).exp();
        num += w * h;
        den += w;
    }
    num / den
}

fn validate(config: &DiagonalConfig) -> Result<()> {
    if !(0.0..1.0).contains(&config.null_prob) {
        return Err(Error::InvalidInput(format!(
            "null probability {} outside [0, 1)",
            config.null_prob
        )));
    }
    if !(config.initial_tension >= 0.0 && config.initial_tension.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "tension {} must be finite and non-negative",
            config.initial_tension
        )));
    }
    if config.smoothing_alpha.is_nan() || config.smoothing_alpha < 0.0 {
        return Err(Error::InvalidInput("smoothing alpha must be >= 0".into()));
    }
    Ok(())
}

pub fn train_diagonal(bitext: &Bitext, config: &DiagonalConfig) -> Result<DiagonalTraining> {
    if bitext.is_empty() {
        return Err(Error::InvalidInput("cannot train on an empty corpus".into()));
    }
    validate(config)?;
    with_workers(config.workers, || train_inner(bitext, config))?
}

fn train_inner(bitext: &Bitext, config: &DiagonalConfig) -> Result<DiagonalTraining> {
    let (mut table, model1_log_likelihoods) = if config.model1_iterations > 0 {
        let m1 = train_model1(bitext, config.model1_iterations)?;
        (m1.table, m1.log_likelihoods)
    } else {
        (TranslationTable::uniform(bitext), Vec::new())
    };
    let mut tension = config.initial_tension;
    let mut log_likelihoods = Vec::with_capacity(config.iterations);
    let mut tensions = Vec::with_capacity(config.iterations);

    for iter in 0..config.iterations {
        let totals = estep_diagonal(bitext, &table, tension, config.null_prob);
        log_likelihoods.push(totals.loglik);
        table.normalize_from(&totals.counts, config.smoothing_alpha);
        if config.optimize_tension {
            tension = optimize_tension(&totals, config.tension_steps, tension);
        }
        tensions.push(tension);
        debug!(
            "diagonal iteration {}: log-likelihood {:.6}, tension {:.6}",
            iter + 1,
            totals.loglik,
            tension
        );
    }

    Ok(DiagonalTraining {
        model: DiagonalAlignmentModel {
            table,
            tension,
            null_prob: config.null_prob,
            direction: bitext.direction,
        },
        model1_log_likelihoods,
        log_likelihoods,
        tensions,
    })
}

fn estep_diagonal(bitext: &Bitext, table: &TranslationTable, tension: f64, p0: f64) -> estep::Totals {
    estep::run(&bitext.sentences, table.len(), |cond, out, tally| {
        let (m, n) = (out.len(), cond.len());
        let mut weights = Vec::with_capacity(n);
        let mut probs = Vec::with_capacity(n);
        let mut position_mass = vec![0.0; m];
        for (i, &f) in out.iter().enumerate() {
            let z = diagonal_weights(i + 1, m, n, tension, &mut weights);
            let null_slot = table.slot(0, f);
            let p_null = p0 * null_slot.map_or(0.0, |s| table.probs[s]);
            probs.clear();
            probs.extend(cond.iter().zip(&weights).map(|(&e, w)| {
                let slot = table.slot(e, f);
                (slot, (1.0 - p0) * w / z * slot.map_or(0.0, |s| table.probs[s]))
            }));
            let total = p_null + probs.iter().map(|(_, p)| p).sum::<f64>();
            if total <= 0.0 {
                tally.loglik += f64::NEG_INFINITY;
                continue;
            }
            tally.loglik += total.ln();
            if let Some(s) = null_slot {
                tally.add(s, p_null / total);
            }
            for (j, &(slot, p)) in probs.iter().enumerate() {
                let post = p / total;
                if let Some(s) = slot {
                    tally.add(s, post);
                }
                tally.feature += post * feature(i + 1, j + 1, m, n);
                position_mass[i] += post;
            }
        }
        let acc = tally.weights.entry((m, n)).or_insert_with(|| vec![0.0; m]);
        for (a, w) in acc.iter_mut().zip(&position_mass) {
            *a += w;
        }
    })
}

/// Bisection on the sign of d/dλ of the expected complete-data
/// log-likelihood, which is decreasing in λ.
fn optimize_tension(totals: &estep::Totals, steps: usize, current: f64) -> f64 {
    if steps == 0 {
        return current;
    }
    let derivative = |tension: f64| {
        let mut model = 0.0;
        for (&(m, n), mass) in &totals.weights {
            for (i, w) in mass.iter().enumerate() {
                if *w > 0.0 {
                    model += w * expected_feature(i + 1, m, n, tension);
                }
            }
        }
        totals.feature - model
    };
    let (mut lo, mut hi) = (TENSION_MIN, TENSION_MAX);
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if derivative(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl DiagonalAlignmentModel {
    /// Best conditioning position (0-based) for every output token, or
    /// `None` when NULL wins.
    ///
    /// Output tokens the model never saw always go to NULL. Otherwise unseen
    /// pairs score [`VITERBI_FLOOR`]. Ties prefer NULL, then the position
    /// closest to the diagonal, then the smaller position.
    pub fn viterbi(&self, cond: &[&str], out: &[&str]) -> Vec<Option<usize>> {
        let (m, n) = (out.len(), cond.len());
        let cond_ids: Vec<Option<u32>> = cond.iter().map(|w| self.table.cond_id(w)).collect();
        let mut weights = Vec::with_capacity(n);
        out.iter()
            .enumerate()
            .map(|(i, f)| {
                let f = self.table.out_id(f)?;
                if n == 0 {
                    return None;
                }
                let z = diagonal_weights(i + 1, m, n, self.tension, &mut weights);
                let lookup = |e: Option<u32>| {
                    let p = e.and_then(|e| self.table.slot(e, f)).map_or(0.0, |s| self.table.probs[s]);
                    if p > 0.0 {
                        p
                    } else {
                        VITERBI_FLOOR
                    }
                };
                let mut best: Option<usize> = None;
                let mut best_score = self.null_prob * lookup(Some(0));
                let mut best_dist = f64::INFINITY;
                for j in 0..n {
                    let score = (1.0 - self.null_prob) * weights[j] / z * lookup(cond_ids[j]);
                    let dist = -feature(i + 1, j + 1, m, n);
                    let better = score > best_score
                        || (score == best_score && best.is_some() && dist < best_dist);
                    if better {
                        best = Some(j);
                        best_score = score;
                        best_dist = dist;
                    }
                }
                best
            })
            .collect()
    }

    /// Writes `e<TAB>f<TAB>prob` rows after a header line carrying the
    /// tension, NULL probability and direction.
    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        let header = format!(
            "{DUMP_MAGIC}\t{DUMP_VERSION}\ttension={}\tnull_prob={}\tdirection={}",
            self.tension,
            self.null_prob,
            self.direction.as_str()
        );
        let rows = self
            .table
            .entries()
            .into_iter()
            .map(|(e, f, p)| format!("{e}\t{f}\t{p}"));
        write_lines(path, std::iter::once(header).chain(rows))
    }

    pub fn read_tsv(path: &Path) -> Result<Self> {
        let lines = read_lines(path)?;
        let header = lines
            .first()
            .ok_or_else(|| Error::parse(path, 1, "empty model file"))?;
        let fields: Vec<&str> = header.split('\t').collect();
        if fields.len() != 5 || fields[0] != DUMP_MAGIC || fields[1] != DUMP_VERSION {
            return Err(Error::parse(path, 1, "not a diagonal alignment model dump"));
        }
        let value = |k: usize, key: &str| -> Result<&str> {
            fields[k]
                .strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .ok_or_else(|| Error::parse(path, 1, format!("missing {key}")))
        };
        let tension: f64 = value(2, "tension")?
            .parse()
            .map_err(|_| Error::parse(path, 1, "bad tension"))?;
        let null_prob: f64 = value(3, "null_prob")?
            .parse()
            .map_err(|_| Error::parse(path, 1, "bad null_prob"))?;
        let direction = Direction::parse(value(4, "direction")?)
            .ok_or_else(|| Error::parse(path, 1, "bad direction"))?;

        let mut entries = Vec::with_capacity(lines.len() - 1);
        for (n, line) in lines.iter().enumerate().skip(1) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(path, n + 1, "expected e<TAB>f<TAB>prob"));
            }
            let p: f64 = cols[2]
                .parse()
                .map_err(|_| Error::parse(path, n + 1, "bad probability"))?;
            let e = (cols[0] != NULL_WORD).then_some(cols[0]);
            entries.push((e, cols[1], p));
        }
        Ok(DiagonalAlignmentModel {
            table: TranslationTable::from_entries(entries)?,
            tension,
            null_prob,
            direction,
        })
    }
}

/// Viterbi links for one pair, reported as (source, target) positions.
pub fn viterbi_align(model: &DiagonalAlignmentModel, pair: &SentencePair, subst: RowSubstitution<'_>) -> AlignmentLinks {
    let (cond, out) = subst.view(pair, model.direction);
    model
        .viterbi(&cond, &out)
        .into_iter()
        .enumerate()
        .filter_map(|(i, j)| j.map(|j| (j, i)))
        .map(|(c, o)| match model.direction {
            Direction::SourceToTarget => (c, o),
            Direction::TargetToSource => (o, c),
        })
        .collect()
}

/// Viterbi links for every pair, in corpus order.
pub fn align_corpus(
    model: &DiagonalAlignmentModel,
    corpus: &ParallelCorpus,
    subst: Substitution<'_>,
    workers: usize,
) -> Result<Vec<AlignmentLinks>> {
    with_workers(workers, || {
        corpus
            .pairs()
            .par_iter()
            .enumerate()
            .map(|(k, pair)| viterbi_align(model, pair, subst.row(k)))
            .collect()
    })
}

/// Σ over sentences of log Σ_alignments P(output, alignment | conditioning).
/// Pairs outside the table contribute probability 0.
pub fn corpus_loglikelihood(model: &DiagonalAlignmentModel, bitext: &Bitext) -> f64 {
    let mut ll = 0.0;
    let mut weights = Vec::new();
    for k in 0..bitext.len() {
        let (cond, out) = bitext.sentence(k);
        let (m, n) = (out.len(), cond.len());
        for (i, f) in out.iter().enumerate() {
            let z = diagonal_weights(i + 1, m, n, model.tension, &mut weights);
            let mut total = model.null_prob * model.table.prob(None, f);
            for (e, w) in cond.iter().zip(&weights) {
                total += (1.0 - model.null_prob) * w / z * model.table.prob(Some(e), f);
            }
            ll += total.ln();
        }
    }
    ll
}
