use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::aligner::CHUNK;

/// Expected counts and statistics gathered over a span of sentences.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub counts: HashMap<usize, f64>,
    pub loglik: f64,
    /// Σ posterior(link) · h(link) over non-NULL links.
    pub feature: f64,
    /// Non-NULL posterior mass per output position, keyed by (m, n).
    pub weights: BTreeMap<(usize, usize), Vec<f64>>,
}

impl Tally {
    pub fn add(&mut self, slot: usize, v: f64) {
        *self.counts.entry(slot).or_insert(0.0) += v;
    }
}

/// Merged result of an E-step; `counts` is dense over table slots.
#[derive(Debug)]
pub(crate) struct Totals {
    pub counts: Vec<f64>,
    pub loglik: f64,
    pub feature: f64,
    pub weights: BTreeMap<(usize, usize), Vec<f64>>,
}

/// Runs `visit` over every sentence in parallel and merges the per-chunk
/// tallies in chunk order, so the result is bit-identical for any number of
/// worker threads.
pub(crate) fn run<F>(sentences: &[(Vec<u32>, Vec<u32>)], slots: usize, visit: F) -> Totals
where
    F: Fn(&[u32], &[u32], &mut Tally) + Sync,
{
    let mut totals = Totals {
        counts: vec![0.0; slots],
        loglik: 0.0,
        feature: 0.0,
        weights: BTreeMap::new(),
    };
    // bound memory: at most 64 chunk tallies alive at once
    for batch in sentences.chunks(CHUNK * 64) {
        let parts: Vec<Tally> = batch
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut tally = Tally::default();
                for (cond, out) in chunk {
                    visit(cond, out, &mut tally);
                }
                tally
            })
            .collect();
        for part in parts {
            for (slot, v) in part.counts {
                totals.counts[slot] += v;
            }
            totals.loglik += part.loglik;
            totals.feature += part.feature;
            for (key, w) in part.weights {
                let acc = totals.weights.entry(key).or_insert_with(|| vec![0.0; w.len()]);
                for (a, b) in acc.iter_mut().zip(&w) {
                    *a += b;
                }
            }
        }
    }
    totals
}
