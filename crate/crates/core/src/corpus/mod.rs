//! Parallel corpora, morphological layers, glossaries and alignment files.
//!
//! Input is always pre-tokenized: a sentence is a line of whitespace
//! separated tokens. Nothing in this module tokenizes, normalizes case or
//! filters sentences beyond dropping pairs where one side is empty.

mod glossary;
mod links;
mod morph;

use std::fmt;
use std::ops::Deref;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::text::{read_lines, write_lines};

pub use glossary::{load_glossary, Glossary, GlossaryMatch, MatchOptions, TermEntry};
pub use links::{load_alignments, write_alignments, AlignmentLinks};
pub use morph::{load_conllu_morph, parse_conllu, MorphLayer, MorphToken, Upos};

/// A single whitespace-free, non-empty token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn new(surface: impl Into<String>) -> Result<Self> {
        let surface = surface.into();
        if surface.is_empty() {
            return Err(Error::InvalidInput("empty token".into()));
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(Error::InvalidInput(format!(
                "token {surface:?} contains whitespace"
            )));
        }
        Ok(Token(surface))
    }

    /// Splits a line on whitespace. Every piece is a valid token by
    /// construction.
    pub fn split_line(line: &str) -> Vec<Token> {
        line.split_whitespace()
            .map(|s| Token(s.to_owned()))
            .collect()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for Token {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<&str> for Token {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Token::new(value)
    }
}

/// Joins tokens with single spaces.
pub fn join_tokens(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(t);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    /// 0-based line number in the original files.
    pub index: usize,
    pub source: Vec<Token>,
    pub target: Vec<Token>,
}

/// Sentence pairs in file order. Pairs with an empty side are dropped at
/// load time; the survivors keep their original line index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pairs: Vec<SentencePair>,
    dropped: Vec<usize>,
}

impl ParallelCorpus {
    /// Builds a corpus from in-memory pairs. Pairs with an empty side are
    /// rejected, as are repeated indices.
    pub fn from_pairs(pairs: Vec<SentencePair>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for p in &pairs {
            if p.source.is_empty() || p.target.is_empty() {
                return Err(Error::Sentence {
                    index: p.index,
                    message: "empty side in sentence pair".into(),
                });
            }
            if !seen.insert(p.index) {
                return Err(Error::Sentence {
                    index: p.index,
                    message: "duplicate sentence index".into(),
                });
            }
        }
        Ok(ParallelCorpus {
            pairs,
            dropped: Vec::new(),
        })
    }

    /// Convenience constructor from whitespace-tokenized line pairs. Indices
    /// are assigned in order.
    pub fn from_lines<S: AsRef<str>>(lines: &[(S, S)]) -> Result<Self> {
        let pairs = lines
            .iter()
            .enumerate()
            .map(|(index, (s, t))| SentencePair {
                index,
                source: Token::split_line(s.as_ref()),
                target: Token::split_line(t.as_ref()),
            })
            .collect();
        Self::from_pairs(pairs)
    }

    pub fn pairs(&self) -> &[SentencePair] {
        &self.pairs
    }

    /// Original line indices of pairs dropped because a side was empty.
    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SentencePair> {
        self.pairs.iter()
    }

    pub fn side(&self, side: Side) -> impl Iterator<Item = &[Token]> {
        self.pairs.iter().map(move |p| match side {
            Side::Source => p.source.as_slice(),
            Side::Target => p.target.as_slice(),
        })
    }

    /// Normalized text of one side: tokens joined by single spaces, one
    /// sentence per line.
    pub fn side_lines(&self, side: Side) -> Vec<String> {
        self.side(side).map(join_tokens).collect()
    }

    /// Writes both sides as normalized text files.
    pub fn emit(&self, src_path: &Path, tgt_path: &Path) -> Result<()> {
        write_lines(src_path, self.side_lines(Side::Source))?;
        write_lines(tgt_path, self.side_lines(Side::Target))
    }
}

impl<'a> IntoIterator for &'a ParallelCorpus {
    type Item = &'a SentencePair;
    type IntoIter = std::slice::Iter<'a, SentencePair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

pub fn load_parallel_corpus(src_path: &Path, tgt_path: &Path) -> Result<ParallelCorpus> {
    let src = read_lines(src_path)?;
    let tgt = read_lines(tgt_path)?;
    if src.len() != tgt.len() {
        return Err(Error::LineCountMismatch {
            src_path: src_path.to_path_buf(),
            src_lines: src.len(),
            tgt_path: tgt_path.to_path_buf(),
            tgt_lines: tgt.len(),
        });
    }

    let mut corpus = ParallelCorpus::default();
    for (index, (s, t)) in src.iter().zip(&tgt).enumerate() {
        let source = Token::split_line(s);
        let target = Token::split_line(t);
        if source.is_empty() || target.is_empty() {
            warn!(
                "dropping sentence pair {index} ({}:{}): empty {}",
                src_path.display(),
                index + 1,
                if source.is_empty() { "source" } else { "target" }
            );
            corpus.dropped.push(index);
            continue;
        }
        corpus.pairs.push(SentencePair {
            index,
            source,
            target,
        });
    }
    Ok(corpus)
}

/// A corpus together with optional per-side morphology. Every attached layer
/// has been checked token by token against the corpus.
#[derive(Debug, Clone)]
pub struct AnnotatedCorpus {
    corpus: ParallelCorpus,
    source_morph: Option<MorphLayer>,
    target_morph: Option<MorphLayer>,
}

impl AnnotatedCorpus {
    pub fn new(corpus: ParallelCorpus) -> Self {
        AnnotatedCorpus {
            corpus,
            source_morph: None,
            target_morph: None,
        }
    }

    pub fn attach(mut self, layer: MorphLayer, side: Side) -> Result<Self> {
        check_layer(&self.corpus, &layer, side)?;
        match side {
            Side::Source => self.source_morph = Some(layer),
            Side::Target => self.target_morph = Some(layer),
        }
        Ok(self)
    }

    pub fn corpus(&self) -> &ParallelCorpus {
        &self.corpus
    }

    pub fn morph(&self, side: Side) -> Option<&MorphLayer> {
        match side {
            Side::Source => self.source_morph.as_ref(),
            Side::Target => self.target_morph.as_ref(),
        }
    }
}

pub fn attach_morph(corpus: ParallelCorpus, layer: MorphLayer, side: Side) -> Result<AnnotatedCorpus> {
    AnnotatedCorpus::new(corpus).attach(layer, side)
}

fn check_layer(corpus: &ParallelCorpus, layer: &MorphLayer, side: Side) -> Result<()> {
    if layer.len() != corpus.len() {
        return Err(Error::SentenceCountMismatch {
            corpus: corpus.len(),
            layer: layer.len(),
        });
    }
    for (pair, morph) in corpus.iter().zip(layer.sentences()) {
        let tokens = match side {
            Side::Source => &pair.source,
            Side::Target => &pair.target,
        };
        let same = tokens.len() == morph.len()
            && tokens.iter().zip(morph).all(|(t, m)| t == &m.form);
        if !same {
            return Err(Error::MorphMismatch {
                index: pair.index,
                corpus: join_tokens(tokens),
                layer: morph
                    .iter()
                    .map(|m| m.form.as_str())
                    .collect::<Vec<_>>()
                    .join(" "),
            });
        }
    }
    Ok(())
}
