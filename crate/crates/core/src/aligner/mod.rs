//! Statistical word alignment: IBM Model 1 followed by a Model 2 variant
//! whose distortion is a log-linear function of the distance from the
//! sentence diagonal.
//!
//! The model generates every token of an *output* sentence from either a
//! token of the *conditioning* sentence or the NULL word. With the default
//! direction the conditioning side is the source sentence (inflected forms)
//! and the output side is the target sentence, usually replaced by its
//! lemmas, so each target token gets at most one source link.

mod diagonal;
mod estep;
mod model1;
mod symmetrize;
mod table;

use std::collections::HashMap;

use crate::corpus::{MorphLayer, MorphToken, ParallelCorpus, SentencePair, Side};
use crate::error::{Error, Result};

pub use diagonal::{
    align_corpus, corpus_loglikelihood, diagonal_distortion, train_diagonal, viterbi_align,
    DiagonalAlignmentModel, DiagonalConfig, DiagonalTraining,
};
pub use model1::{model1_loglikelihood, train_model1, Model1Training};
pub use symmetrize::{symmetrize, Heuristic};
pub use table::{TranslationTable, NULL_WORD};
use table::NULL_KEY;

/// Which corpus side the model conditions on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// Target tokens are generated from source tokens.
    #[default]
    SourceToTarget,
    /// Source tokens are generated from target tokens.
    TargetToSource,
}

impl Direction {
    pub fn conditioning_side(self) -> Side {
        match self {
            Direction::SourceToTarget => Side::Source,
            Direction::TargetToSource => Side::Target,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::SourceToTarget => "source-target",
            Direction::TargetToSource => "target-source",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "source-target" => Some(Direction::SourceToTarget),
            "target-source" => Some(Direction::TargetToSource),
            _ => None,
        }
    }
}

/// Optional lemma layers that replace a side's surface forms before
/// alignment.
#[derive(Debug, Clone, Copy, Default)]
pub struct Substitution<'a> {
    pub source: Option<&'a MorphLayer>,
    pub target: Option<&'a MorphLayer>,
}

impl<'a> Substitution<'a> {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn target_lemmas(layer: &'a MorphLayer) -> Self {
        Substitution {
            source: None,
            target: Some(layer),
        }
    }

    /// The per-sentence view for the `k`-th pair of the corpus.
    pub fn row(&self, k: usize) -> RowSubstitution<'a> {
        RowSubstitution {
            source: self.source.and_then(|l| l.sentence(k)),
            target: self.target.and_then(|l| l.sentence(k)),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RowSubstitution<'a> {
    pub source: Option<&'a [MorphToken]>,
    pub target: Option<&'a [MorphToken]>,
}

impl<'a> RowSubstitution<'a> {
    /// (conditioning, output) token strings for `pair`.
    pub(crate) fn view<'p>(&self, pair: &'p SentencePair, direction: Direction) -> (Vec<&'p str>, Vec<&'p str>)
    where
        'a: 'p,
    {
        let pick = |tokens: &'p [crate::corpus::Token], lemmas: Option<&'a [MorphToken]>| -> Vec<&'p str> {
            match lemmas {
                Some(row) if row.len() == tokens.len() => row.iter().map(|m| m.lemma.as_str()).collect(),
                _ => tokens.iter().map(|t| t.as_str()).collect(),
            }
        };
        let src = pick(&pair.source, self.source);
        let tgt = pick(&pair.target, self.target);
        match direction {
            Direction::SourceToTarget => (src, tgt),
            Direction::TargetToSource => (tgt, src),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Vocab {
    ids: HashMap<String, u32>,
    words: Vec<String>,
}

impl Vocab {
    pub(crate) fn intern(&mut self, w: &str) -> u32 {
        if let Some(&id) = self.ids.get(w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.ids.insert(w.to_owned(), id);
        self.words.push(w.to_owned());
        id
    }

    pub(crate) fn get(&self, w: &str) -> Option<u32> {
        self.ids.get(w).copied()
    }

    pub(crate) fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub(crate) fn len(&self) -> usize {
        self.words.len()
    }
}

/// Interned sentence pairs in (conditioning, output) orientation.
/// Conditioning ids start at 1; id 0 is reserved for NULL.
#[derive(Debug, Clone)]
pub struct Bitext {
    pub(crate) direction: Direction,
    pub(crate) cond: Vocab,
    pub(crate) out: Vocab,
    pub(crate) sentences: Vec<(Vec<u32>, Vec<u32>)>,
}

impl Bitext {
    pub fn new(corpus: &ParallelCorpus, direction: Direction, subst: Substitution<'_>) -> Result<Self> {
        for (side, layer) in [(Side::Source, subst.source), (Side::Target, subst.target)] {
            if let Some(layer) = layer {
                check_lengths(corpus, layer, side)?;
            }
        }
        let mut cond = Vocab::default();
        cond.intern(NULL_KEY);
        let mut out = Vocab::default();
        let sentences = corpus
            .iter()
            .enumerate()
            .map(|(k, pair)| {
                let (c, o) = subst.row(k).view(pair, direction);
                (
                    c.iter().map(|w| cond.intern(w)).collect(),
                    o.iter().map(|w| out.intern(w)).collect(),
                )
            })
            .collect();
        Ok(Bitext {
            direction,
            cond,
            out,
            sentences,
        })
    }

    /// Builds a bitext directly from (conditioning, output) token lists.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(Vec<S>, Vec<S>)]) -> Self {
        let mut cond = Vocab::default();
        cond.intern(NULL_KEY);
        let mut out = Vocab::default();
        let sentences = pairs
            .iter()
            .map(|(c, o)| {
                (
                    c.iter().map(|w| cond.intern(w.as_ref())).collect(),
                    o.iter().map(|w| out.intern(w.as_ref())).collect(),
                )
            })
            .collect();
        Bitext {
            direction: Direction::SourceToTarget,
            cond,
            out,
            sentences,
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Token strings of sentence `k` as (conditioning, output).
    pub fn sentence(&self, k: usize) -> (Vec<&str>, Vec<&str>) {
        let (c, o) = &self.sentences[k];
        (
            c.iter().map(|&id| self.cond.word(id)).collect(),
            o.iter().map(|&id| self.out.word(id)).collect(),
        )
    }
}

fn check_lengths(corpus: &ParallelCorpus, layer: &MorphLayer, side: Side) -> Result<()> {
    if layer.len() != corpus.len() {
        return Err(Error::SentenceCountMismatch {
            corpus: corpus.len(),
            layer: layer.len(),
        });
    }
    for (pair, row) in corpus.iter().zip(layer.sentences()) {
        let tokens = match side {
            Side::Source => &pair.source,
            Side::Target => &pair.target,
        };
        if tokens.len() != row.len() {
            return Err(Error::Sentence {
                index: pair.index,
                message: format!(
                    "{side} has {} tokens but lemma layer has {}",
                    tokens.len(),
                    row.len()
                ),
            });
        }
    }
    Ok(())
}

/// Sentences per parallel work unit. Fixed so that floating-point sums are
/// grouped identically for any number of workers.
pub(crate) const CHUNK: usize = 256;
