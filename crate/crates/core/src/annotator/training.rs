use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::annotator::{
    apply_annotations, match_glossary, sample_annotations, select_candidates, AnnotationEvent,
    AnnotationKind, FactoredFormat, FactoredSentence, SamplingPolicy,
};
use crate::corpus::{join_tokens, AlignmentLinks, AnnotatedCorpus, Glossary, MatchOptions, Side, Token};
use crate::error::{Error, Result};
use crate::text::write_lines;
use crate::with_workers;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MixConfig {
    /// Omit annotated copies that received no annotation.
    pub drop_unannotated: bool,
    /// Worker threads; 0 uses all cores. Output order never depends on it.
    pub workers: usize,
}

/// Original corpus (all `W`) followed by its annotated copy.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub source: Vec<FactoredSentence>,
    pub target: Vec<Vec<Token>>,
    /// Original sentence index of each output pair.
    pub indices: Vec<usize>,
    /// Number of original pairs at the head of the stream.
    pub original: usize,
    /// Annotated copies with at least one annotation.
    pub annotated: usize,
    /// Annotated copies left out because they had none.
    pub dropped: usize,
    /// Every selected annotation, in sentence order.
    pub events: Vec<AnnotationEvent>,
}

impl TrainingSet {
    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// Paths written by [`TrainingSet::write`] for `prefix`: source, target
    /// and, for the parallel format, the factor file.
    pub fn output_paths(prefix: &Path, format: FactoredFormat) -> (PathBuf, PathBuf, Option<PathBuf>) {
        let with = |ext: &str| {
            let mut s = prefix.as_os_str().to_owned();
            s.push(ext);
            PathBuf::from(s)
        };
        let factors = matches!(format, FactoredFormat::Parallel).then(|| with(".factors"));
        (with(".src"), with(".tgt"), factors)
    }

    pub fn write(&self, prefix: &Path, format: FactoredFormat) -> Result<()> {
        let (src, tgt, factors) = Self::output_paths(prefix, format);
        match format {
            FactoredFormat::Inline => write_lines(&src, self.source.iter().map(FactoredSentence::to_inline))?,
            FactoredFormat::Parallel => {
                let (tokens, facs): (Vec<String>, Vec<String>) =
                    self.source.iter().map(FactoredSentence::to_parallel).unzip();
                write_lines(&src, tokens)?;
                write_lines(factors.as_ref().expect("parallel has a factor file"), facs)?;
            }
        }
        write_lines(&tgt, self.target.iter().map(|t| join_tokens(t)))
    }
}

/// Builds the mixed stream from alignment-sampled annotations. `Lemma`
/// gives TLA data, `Surface` gives ETA data; both draw the same random
/// numbers, so for a fixed seed they select the same spans.
pub fn build_training_set(
    corpus: &AnnotatedCorpus,
    alignments: &[AlignmentLinks],
    policy: &SamplingPolicy,
    mix: MixConfig,
    kind: AnnotationKind,
) -> Result<TrainingSet> {
    let pairs = corpus.corpus().pairs();
    let morph = corpus
        .morph(Side::Target)
        .ok_or_else(|| Error::InvalidInput("target morphology layer is required".into()))?;
    if alignments.len() != pairs.len() {
        return Err(Error::InvalidInput(format!(
            "{} alignment lines for {} sentence pairs",
            alignments.len(),
            pairs.len()
        )));
    }
    for (pair, links) in pairs.iter().zip(alignments) {
        links
            .validate(pair.source.len(), pair.target.len())
            .map_err(|e| Error::Sentence {
                index: pair.index,
                message: e.to_string(),
            })?;
    }

    let annotated = with_workers(mix.workers, || {
        pairs
            .par_iter()
            .zip(alignments.par_iter())
            .zip(morph.sentences().par_iter())
            .map(|((pair, links), row)| {
                let candidates = select_candidates(pair, links, row, policy, kind);
                let events = sample_annotations(&candidates, pair.index, policy);
                let fs = apply_annotations(&pair.source, &events)?;
                Ok((fs, events))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(assemble(corpus, annotated, mix))
}

pub fn build_tla_training_set(
    corpus: &AnnotatedCorpus,
    alignments: &[AlignmentLinks],
    policy: &SamplingPolicy,
    mix: MixConfig,
) -> Result<TrainingSet> {
    build_training_set(corpus, alignments, policy, mix, AnnotationKind::Lemma)
}

pub fn build_eta_training_set(
    corpus: &AnnotatedCorpus,
    alignments: &[AlignmentLinks],
    policy: &SamplingPolicy,
    mix: MixConfig,
) -> Result<TrainingSet> {
    build_training_set(corpus, alignments, policy, mix, AnnotationKind::Surface)
}

/// ETA data driven by glossary matches: a matched source term is annotated
/// with its glossary translation when that translation occurs verbatim in
/// the target sentence, using the target sentence's own tokens. No sampling.
pub fn build_eta_from_glossary(
    corpus: &AnnotatedCorpus,
    glossary: &Glossary,
    options: MatchOptions,
    mix: MixConfig,
) -> Result<TrainingSet> {
    let pairs = corpus.corpus().pairs();
    let source_morph = corpus.morph(Side::Source);
    let annotated = with_workers(mix.workers, || {
        pairs
            .par_iter()
            .enumerate()
            .map(|(k, pair)| {
                let row = source_morph.and_then(|l| l.sentence(k));
                let events: Vec<AnnotationEvent> = match_glossary(pair.index, &pair.source, glossary, row, options)
                    .into_iter()
                    .filter_map(|mut e| {
                        let found = find_subsequence(&pair.target, &e.annotation, options.case_insensitive)?;
                        e.annotation = pair.target[found..found + e.annotation.len()].to_vec();
                        Some(e)
                    })
                    .collect();
                let fs = apply_annotations(&pair.source, &events)?;
                Ok((fs, events))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(assemble(corpus, annotated, mix))
}

fn find_subsequence(haystack: &[Token], needle: &[Token], case_insensitive: bool) -> Option<usize> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return None;
    }
    haystack.windows(needle.len()).position(|w| {
        w.iter().zip(needle).all(|(a, b)| {
            if case_insensitive {
                a.to_lowercase() == b.to_lowercase()
            } else {
                a == b
            }
        })
    })
}

fn assemble(
    corpus: &AnnotatedCorpus,
    annotated: Vec<(FactoredSentence, Vec<AnnotationEvent>)>,
    mix: MixConfig,
) -> TrainingSet {
    let pairs = corpus.corpus().pairs();
    let mut set = TrainingSet {
        source: pairs.iter().map(|p| FactoredSentence::plain(&p.source)).collect(),
        target: pairs.iter().map(|p| p.target.clone()).collect(),
        indices: pairs.iter().map(|p| p.index).collect(),
        original: pairs.len(),
        annotated: 0,
        dropped: 0,
        events: Vec::new(),
    };
    for (pair, (fs, events)) in pairs.iter().zip(annotated) {
        if events.is_empty() {
            if mix.drop_unannotated {
                set.dropped += 1;
                continue;
            }
        } else {
            set.annotated += 1;
        }
        set.source.push(fs);
        set.target.push(pair.target.clone());
        set.indices.push(pair.index);
        set.events.extend(events);
    }
    set
}
