use std::collections::{BTreeSet, HashMap};

use crate::aligner::{Bitext, Vocab};
use crate::error::{Error, Result};

/// Spelling of the NULL word in model dumps.
pub const NULL_WORD: &str = "<NULL>";

/// Interned key of NULL. Contains a space, so no token can collide with it.
pub(crate) const NULL_KEY: &str = " <NULL>";

/// Lexical translation probabilities t(f|e) over co-occurring pairs.
///
/// Storage is a CSR layout: the output ids allowed for conditioning word `e`
/// are `outs[offsets[e]..offsets[e + 1]]`, sorted, with the matching
/// probabilities in `probs`. A pair outside the support has probability 0.
#[derive(Debug, Clone)]
pub struct TranslationTable {
    pub(crate) cond: Vocab,
    pub(crate) out: Vocab,
    pub(crate) offsets: Vec<usize>,
    pub(crate) outs: Vec<u32>,
    pub(crate) probs: Vec<f64>,
}

impl TranslationTable {
    /// Support = every (e, f) pair that co-occurs in some sentence, plus
    /// (NULL, f) for every f. Probabilities start uniform per e.
    pub(crate) fn uniform(bitext: &Bitext) -> Self {
        let mut support: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); bitext.cond.len()];
        for (cond, out) in &bitext.sentences {
            for &f in out {
                support[0].insert(f);
                for &e in cond {
                    support[e as usize].insert(f);
                }
            }
        }
        let mut offsets = Vec::with_capacity(support.len() + 1);
        let mut outs = Vec::new();
        let mut probs = Vec::new();
        offsets.push(0);
        for row in &support {
            let p = if row.is_empty() { 0.0 } else { 1.0 / row.len() as f64 };
            outs.extend(row.iter().copied());
            probs.extend(std::iter::repeat_n(p, row.len()));
            offsets.push(outs.len());
        }
        TranslationTable {
            cond: bitext.cond.clone(),
            out: bitext.out.clone(),
            offsets,
            outs,
            probs,
        }
    }

    /// Builds a table from explicit `(e, f, t(f|e))` entries; `None` stands
    /// for NULL. Entries are taken as given, without renormalization.
    pub fn from_entries<'a, I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Option<&'a str>, &'a str, f64)>,
    {
        let mut cond = Vocab::default();
        cond.intern(NULL_KEY);
        let mut out = Vocab::default();
        let mut rows: HashMap<u32, Vec<(u32, f64)>> = HashMap::new();
        for (e, f, p) in entries {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidInput(format!("invalid probability {p} for {f}")));
            }
            let e = match e {
                Some(w) => cond.intern(w),
                None => 0,
            };
            let f = out.intern(f);
            rows.entry(e).or_default().push((f, p));
        }
        let mut offsets = vec![0];
        let mut outs = Vec::new();
        let mut probs = Vec::new();
        for e in 0..cond.len() as u32 {
            let mut row = rows.remove(&e).unwrap_or_default();
            row.sort_by_key(|&(f, _)| f);
            row.dedup_by_key(|&mut (f, _)| f);
            for (f, p) in row {
                outs.push(f);
                probs.push(p);
            }
            offsets.push(outs.len());
        }
        Ok(TranslationTable {
            cond,
            out,
            offsets,
            outs,
            probs,
        })
    }

    pub(crate) fn slot(&self, e: u32, f: u32) -> Option<usize> {
        let (lo, hi) = (self.offsets[e as usize], self.offsets[e as usize + 1]);
        self.outs[lo..hi].binary_search(&f).ok().map(|k| lo + k)
    }

    pub(crate) fn prob_ids(&self, e: u32, f: u32) -> f64 {
        self.slot(e, f).map_or(0.0, |s| self.probs[s])
    }

    /// t(f|e); `e = None` is NULL. Unseen pairs are 0.
    pub fn prob(&self, e: Option<&str>, f: &str) -> f64 {
        let e = match e {
            None => Some(0),
            Some(w) => self.cond.get(w),
        };
        match (e, self.out.get(f)) {
            (Some(e), Some(f)) => self.prob_ids(e, f),
            _ => 0.0,
        }
    }

    pub(crate) fn cond_id(&self, w: &str) -> Option<u32> {
        self.cond.get(w)
    }

    pub(crate) fn out_id(&self, w: &str) -> Option<u32> {
        self.out.get(w)
    }

    /// Number of stored (e, f) pairs.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Largest deviation of Σ_f t(f|e) from 1 over conditioning words with
    /// a non-empty row.
    pub fn max_normalization_error(&self) -> f64 {
        (0..self.cond.len())
            .filter(|&e| self.offsets[e + 1] > self.offsets[e])
            .map(|e| {
                let s: f64 = self.probs[self.offsets[e]..self.offsets[e + 1]].iter().sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Replaces probabilities with normalized (optionally add-α smoothed)
    /// expected counts laid out like `probs`.
    pub(crate) fn normalize_from(&mut self, counts: &[f64], alpha: f64) {
        for e in 0..self.cond.len() {
            let (lo, hi) = (self.offsets[e], self.offsets[e + 1]);
            if lo == hi {
                continue;
            }
            let total: f64 = counts[lo..hi].iter().sum::<f64>() + alpha * (hi - lo) as f64;
            if total > 0.0 {
                for s in lo..hi {
                    self.probs[s] = (counts[s] + alpha) / total;
                }
            }
            // a row that received no mass at all keeps its previous values
        }
    }

    /// All entries as (e, f, prob) strings, sorted by e then f.
    pub fn entries(&self) -> Vec<(&str, &str, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for e in 0..self.cond.len() {
            for s in self.offsets[e]..self.offsets[e + 1] {
                let e_word = if e == 0 { NULL_WORD } else { self.cond.word(e as u32) };
                out.push((e_word, self.out.word(self.outs[s]), self.probs[s]));
            }
        }
        out.sort_by(|a, b| a.0.cmp(b.0).then_with(|| a.1.cmp(b.1)));
        out
    }
}
