use std::path::Path;

use crate::annotator::{apply_annotations, AnnotationEvent, FactoredSentence, Provenance};
use crate::corpus::{join_tokens, Glossary, MatchOptions, MorphToken, Token};
use crate::error::{Error, Result};
use crate::text::{read_lines, write_lines};

/// A glossary term the translation of sentence `sentence` should contain,
/// given as its target lemma sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermExpectation {
    pub sentence: usize,
    pub lemmas: Vec<Token>,
    pub source_term: String,
}

/// Left-to-right, longest-first, non-overlapping glossary matches in one
/// sentence. With `lemma_match` and a morphology row, entry sources are
/// compared against the row's lemmas instead of the surface tokens.
pub fn match_glossary(
    sentence_index: usize,
    sentence: &[Token],
    glossary: &Glossary,
    morph: Option<&[MorphToken]>,
    options: MatchOptions,
) -> Vec<AnnotationEvent> {
    let keys: Vec<&str> = match morph {
        Some(row) if options.lemma_match && row.len() == sentence.len() => {
            row.iter().map(|m| m.lemma.as_str()).collect()
        }
        _ => sentence.iter().map(|t| t.as_str()).collect(),
    };
    let mut events = Vec::new();
    let mut next_free = 0;
    // candidates come sorted by start, longest first
    for m in glossary.candidates(&keys, options.case_insensitive) {
        if m.start < next_free {
            continue;
        }
        events.push(AnnotationEvent {
            sentence: sentence_index,
            start: m.start,
            end: m.end,
            annotation: glossary.entry(m.entry).target_lemma.clone(),
            provenance: Provenance::GlossaryMatched,
        });
        next_free = m.end;
    }
    events
}

/// Annotates a sentence to be translated with the dictionary forms of the
/// glossary terms it contains, and lists one expectation per annotation.
pub fn annotate_inference_input(
    sentence_index: usize,
    sentence: &[Token],
    glossary: &Glossary,
    morph: Option<&[MorphToken]>,
    options: MatchOptions,
) -> Result<(FactoredSentence, Vec<TermExpectation>)> {
    let events = match_glossary(sentence_index, sentence, glossary, morph, options);
    let factored = apply_annotations(sentence, &events)?;
    let expectations = events
        .iter()
        .map(|e| TermExpectation {
            sentence: sentence_index,
            lemmas: e.annotation.clone(),
            source_term: join_tokens(&sentence[e.start..e.end]),
        })
        .collect();
    Ok((factored, expectations))
}

/// `sentence_index<TAB>lemmas<TAB>source term` rows.
pub fn write_expectations(path: &Path, expectations: &[TermExpectation]) -> Result<()> {
    write_lines(
        path,
        expectations
            .iter()
            .map(|e| format!("{}\t{}\t{}", e.sentence, join_tokens(&e.lemmas), e.source_term)),
    )
}

pub fn load_expectations(path: &Path) -> Result<Vec<TermExpectation>> {
    let mut out = Vec::new();
    for (n, line) in read_lines(path)?.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 {
            return Err(Error::parse(path, n + 1, "expected sentence<TAB>lemmas[<TAB>term]"));
        }
        let sentence = cols[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, n + 1, format!("bad sentence index {:?}", cols[0])))?;
        let lemmas = Token::split_line(cols[1]);
        if lemmas.is_empty() {
            return Err(Error::parse(path, n + 1, "empty lemma sequence"));
        }
        out.push(TermExpectation {
            sentence,
            lemmas,
            source_term: cols.get(2).map(|s| s.to_string()).unwrap_or_default(),
        });
    }
    Ok(out)
}
