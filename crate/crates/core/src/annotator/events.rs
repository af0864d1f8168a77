use crate::annotator::{Factor, FactoredSentence, FactoredToken};
use crate::corpus::Token;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    AlignmentSampled,
    GlossaryMatched,
}

/// Annotation of the source span `[start, end)` of sentence `sentence` with
/// `annotation` tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnotationEvent {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
    pub annotation: Vec<Token>,
    pub provenance: Provenance,
}

impl AnnotationEvent {
    pub fn span(&self) -> (usize, usize) {
        (self.start, self.end)
    }
}

/// Marks each event span with `S` and inserts its annotation tokens, marked
/// `T`, right after the span. Everything else is `W`.
pub fn apply_annotations(source: &[Token], events: &[AnnotationEvent]) -> Result<FactoredSentence> {
    let mut ordered: Vec<&AnnotationEvent> = events.iter().collect();
    ordered.sort_by_key(|e| (e.start, e.end));
    let mut prev_end = 0;
    for (k, e) in ordered.iter().enumerate() {
        if e.start >= e.end || e.end > source.len() {
            return Err(Error::Sentence {
                index: e.sentence,
                message: format!(
                    "annotation span [{}, {}) invalid for {} tokens",
                    e.start,
                    e.end,
                    source.len()
                ),
            });
        }
        if e.annotation.is_empty() {
            return Err(Error::Sentence {
                index: e.sentence,
                message: format!("empty annotation for span [{}, {})", e.start, e.end),
            });
        }
        if k > 0 && e.start < prev_end {
            return Err(Error::Sentence {
                index: e.sentence,
                message: format!("overlapping annotation spans at token {}", e.start),
            });
        }
        prev_end = e.end;
    }

    let extra: usize = ordered.iter().map(|e| e.annotation.len()).sum();
    let mut tokens = Vec::with_capacity(source.len() + extra);
    let mut next = ordered.into_iter().peekable();
    let mut pos = 0;
    while pos < source.len() {
        match next.next_if(|e| e.start == pos) {
            Some(e) => {
                tokens.extend(
                    source[e.start..e.end]
                        .iter()
                        .map(|t| FactoredToken::new(t.clone(), Factor::S)),
                );
                tokens.extend(
                    e.annotation
                        .iter()
                        .map(|t| FactoredToken::new(t.clone(), Factor::T)),
                );
                pos = e.end;
            }
            None => {
                tokens.push(FactoredToken::new(source[pos].clone(), Factor::W));
                pos += 1;
            }
        }
    }
    Ok(FactoredSentence::new(tokens))
}
