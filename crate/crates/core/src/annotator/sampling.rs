use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annotator::{AnnotationEvent, Provenance};
use crate::corpus::{AlignmentLinks, MorphToken, SentencePair, Upos};
use crate::error::{Error, Result};

/// Which target string annotates a selected source word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnotationKind {
    /// Target lemma (TLA).
    Lemma,
    /// Exact target surface form (ETA).
    Surface,
}

impl std::str::FromStr for AnnotationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tla" | "lemma" => Ok(AnnotationKind::Lemma),
            "eta" | "surface" => Ok(AnnotationKind::Surface),
            _ => Err(Error::InvalidInput(format!("unknown annotation mode {s:?}"))),
        }
    }
}

/// Sentence threshold τ ~ U[lo, hi); a candidate is annotated when its own
/// draw u ~ U[0, 1) exceeds τ.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPolicy {
    lo: f64,
    hi: f64,
    pub seed: u64,
    eligible: BTreeSet<Upos>,
}

impl SamplingPolicy {
    pub const DEFAULT_LO: f64 = 0.6;
    pub const DEFAULT_HI: f64 = 1.0;

    pub fn new(lo: f64, hi: f64, seed: u64, eligible: impl IntoIterator<Item = Upos>) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidInput(format!(
                "threshold interval [{lo}, {hi}) must satisfy 0 <= lo <= hi <= 1"
            )));
        }
        let eligible: BTreeSet<Upos> = eligible.into_iter().collect();
        if eligible.is_empty() {
            return Err(Error::InvalidInput("eligible POS set is empty".into()));
        }
        Ok(SamplingPolicy {
            lo,
            hi,
            seed,
            eligible,
        })
    }

    /// Interval [0.6, 1.0), nouns and verbs.
    pub fn with_seed(seed: u64) -> Self {
        Self::new(Self::DEFAULT_LO, Self::DEFAULT_HI, seed, [Upos::Noun, Upos::Verb])
            .expect("default policy is valid")
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn eligible(&self) -> &BTreeSet<Upos> {
        &self.eligible
    }

    /// Random stream for one sentence: depends only on the master seed and
    /// the sentence's original index.
    fn stream(&self, sentence: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sentence as u64);
        rng
    }
}

/// Annotation candidates of one sentence pair: each source word linked to
/// exactly one target word that is linked to no other source word and
/// whose UPOS is eligible. Ordered by source position.
pub fn select_candidates(
    pair: &SentencePair,
    links: &AlignmentLinks,
    target_morph: &[MorphToken],
    policy: &SamplingPolicy,
    kind: AnnotationKind,
) -> Vec<AnnotationEvent> {
    let mut src_degree = vec![0usize; pair.source.len()];
    let mut tgt_degree = vec![0usize; pair.target.len()];
    for (i, j) in links.iter() {
        if i < src_degree.len() && j < tgt_degree.len() {
            src_degree[i] += 1;
            tgt_degree[j] += 1;
        }
    }
    links
        .iter()
        .filter(|&(i, j)| i < src_degree.len() && j < tgt_degree.len())
        .filter(|&(i, j)| src_degree[i] == 1 && tgt_degree[j] == 1)
        .filter_map(|(i, j)| {
            let morph = target_morph.get(j)?;
            if !policy.eligible.contains(&morph.upos) {
                return None;
            }
            let annotation = match kind {
                AnnotationKind::Lemma => morph.lemma.clone(),
                AnnotationKind::Surface => pair.target[j].clone(),
            };
            Some(AnnotationEvent {
                sentence: pair.index,
                start: i,
                end: i + 1,
                annotation: vec![annotation],
                provenance: Provenance::AlignmentSampled,
            })
        })
        // links iterate in (source, target) order and each kept source has one link
        .collect()
}

/// Target-lemma candidates.
pub fn select_tla_candidates(
    pair: &SentencePair,
    links: &AlignmentLinks,
    target_morph: &[MorphToken],
    policy: &SamplingPolicy,
) -> Vec<AnnotationEvent> {
    select_candidates(pair, links, target_morph, policy, AnnotationKind::Lemma)
}

/// Draws τ once for the sentence, then one u per candidate in order, and
/// keeps the candidates with u > τ.
pub fn sample_annotations(candidates: &[AnnotationEvent], sentence: usize, policy: &SamplingPolicy) -> Vec<AnnotationEvent> {
    let mut rng = policy.stream(sentence);
    let tau = policy.lo() + (policy.hi() - policy.lo()) * rng.gen::<f64>();
    candidates
        .iter()
        .filter(|_| rng.gen::<f64>() > tau)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    fn mt(form: &str, lemma: &str, upos: Upos) -> MorphToken {
        MorphToken::new(Token::new(form).unwrap(), Some(Token::new(lemma).unwrap()), upos)
    }

    fn pair(src: &str, tgt: &str) -> SentencePair {
        SentencePair {
            index: 0,
            source: Token::split_line(src),
            target: Token::split_line(tgt),
        }
    }

    #[test]
    fn noun_link_becomes_candidate() {
        let p = pair("engine failure", "dzinējā atteice");
        let morph = [mt("dzinējā", "dzinējs", Upos::Noun), mt("atteice", "atteice", Upos::Adj)];
        let links = AlignmentLinks::parse("0-0 1-1").unwrap();
        let policy = SamplingPolicy::with_seed(1);
        let c = select_tla_candidates(&p, &links, &morph, &policy);
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].start, c[0].end), (0, 1));
        assert_eq!(c[0].annotation[0].as_str(), "dzinējs");

        let eta = select_candidates(&p, &links, &morph, &policy, AnnotationKind::Surface);
        assert_eq!(eta[0].annotation[0].as_str(), "dzinējā");
    }

    #[test]
    fn multiply_linked_words_are_skipped() {
        let p = pair("a b", "x y");
        let morph = [mt("x", "x", Upos::Noun), mt("y", "y", Upos::Noun)];
        let policy = SamplingPolicy::with_seed(1);
        // source 0 linked twice
        let links = AlignmentLinks::parse("0-0 0-1").unwrap();
        assert!(select_tla_candidates(&p, &links, &morph, &policy).is_empty());
        // target 0 linked twice
        let links = AlignmentLinks::parse("0-0 1-0").unwrap();
        assert!(select_tla_candidates(&p, &links, &morph, &policy).is_empty());
    }

    #[test]
    fn degenerate_interval_selects_nothing() {
        let policy = SamplingPolicy::new(1.0, 1.0, 3, [Upos::Noun]).unwrap();
        let p = pair("a b c d", "w x y z");
        let morph: Vec<_> = ["w", "x", "y", "z"].iter().map(|w| mt(w, w, Upos::Noun)).collect();
        let links = AlignmentLinks::parse("0-0 1-1 2-2 3-3").unwrap();
        let cands = select_tla_candidates(&p, &links, &morph, &policy);
        for s in 0..1000 {
            assert!(sample_annotations(&cands, s, &policy).is_empty());
        }
    }

    #[test]
    fn sampling_is_deterministic_per_sentence() {
        let policy = SamplingPolicy::with_seed(42);
        let p = pair("a b c d e f", "u v w x y z");
        let morph: Vec<_> = ["u", "v", "w", "x", "y", "z"].iter().map(|w| mt(w, w, Upos::Verb)).collect();
        let links = AlignmentLinks::parse("0-0 1-1 2-2 3-3 4-4 5-5").unwrap();
        let cands = select_tla_candidates(&p, &links, &morph, &policy);
        for s in 0..50 {
            assert_eq!(sample_annotations(&cands, s, &policy), sample_annotations(&cands, s, &policy));
        }
        let other = SamplingPolicy::with_seed(43);
        let differs = (0..50).any(|s| sample_annotations(&cands, s, &policy) != sample_annotations(&cands, s, &other));
        assert!(differs);
    }

    #[test]
    fn invalid_policies() {
        assert!(SamplingPolicy::new(0.7, 0.6, 0, [Upos::Noun]).is_err());
        assert!(SamplingPolicy::new(-0.1, 0.6, 0, [Upos::Noun]).is_err());
        assert!(SamplingPolicy::new(0.6, 1.1, 0, [Upos::Noun]).is_err());
        assert!(SamplingPolicy::new(0.6, 1.0, 0, []).is_err());
    }

    #[test]
    fn selection_rate_near_one_fifth() {
        // E[1 - τ] with τ ~ U[0.6, 1.0) is 0.2
        let policy = SamplingPolicy::with_seed(7);
        let cands: Vec<AnnotationEvent> = (0..10)
            .map(|i| AnnotationEvent {
                sentence: 0,
                start: i,
                end: i + 1,
                annotation: vec![Token::new("x").unwrap()],
                provenance: Provenance::AlignmentSampled,
            })
            .collect();
        let selected: usize = (0..20_000).map(|s| sample_annotations(&cands, s, &policy).len()).sum();
        let rate = selected as f64 / 200_000.0;
        assert!((rate - 0.2).abs() < 0.01, "{rate}");
    }
}
