use std::fmt;

use crate::annotator::TermExpectation;
use crate::corpus::Token;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermOptions {
    pub case_insensitive: bool,
}

impl Default for TermOptions {
    fn default() -> Self {
        TermOptions { case_insensitive: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermJudgment {
    pub sentence: usize,
    pub lemmas: Vec<Token>,
    pub source_term: String,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermAccuracyReport {
    pub total: usize,
    pub matched: usize,
    /// Percentage; `None` when there are no expectations.
    pub accuracy: Option<f64>,
    pub details: Vec<TermJudgment>,
}

impl fmt::Display for TermAccuracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.accuracy {
            Some(a) => write!(f, "term accuracy = {a:.2}% ({}/{})", self.matched, self.total),
            None => write!(f, "term accuracy = undefined (0 term occurrences)"),
        }
    }
}

/// True when `needle` occurs as a contiguous run inside `haystack`.
pub fn contains_sequence(haystack: &[Token], needle: &[Token], case_insensitive: bool) -> bool {
    if needle.is_empty() || needle.len() > haystack.len() {
        return false;
    }
    if case_insensitive {
        let h: Vec<String> = haystack.iter().map(|t| t.to_lowercase()).collect();
        let n: Vec<String> = needle.iter().map(|t| t.to_lowercase()).collect();
        h.windows(n.len()).any(|w| w == n.as_slice())
    } else {
        haystack.windows(needle.len()).any(|w| w == needle)
    }
}

/// Share of term occurrences whose lemma sequence appears contiguously in
/// the lemmatized hypothesis of their sentence.
pub fn term_accuracy(
    hypothesis_lemmas: &[Vec<Token>],
    expectations: &[TermExpectation],
    options: TermOptions,
) -> Result<TermAccuracyReport> {
    let mut details = Vec::with_capacity(expectations.len());
    for e in expectations {
        let hyp = hypothesis_lemmas.get(e.sentence).ok_or_else(|| {
            Error::InvalidInput(format!(
                "term expectation for sentence {} but only {} hypotheses",
                e.sentence,
                hypothesis_lemmas.len()
            ))
        })?;
        details.push(TermJudgment {
            sentence: e.sentence,
            lemmas: e.lemmas.clone(),
            source_term: e.source_term.clone(),
            matched: contains_sequence(hyp, &e.lemmas, options.case_insensitive),
        });
    }
    let matched = details.iter().filter(|d| d.matched).count();
    let total = details.len();
    Ok(TermAccuracyReport {
        total,
        matched,
        accuracy: (total > 0).then(|| 100.0 * matched as f64 / total as f64),
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<Token> {
        Token::split_line(s)
    }

    fn exp(sentence: usize, lemmas: &str) -> TermExpectation {
        TermExpectation {
            sentence,
            lemmas: toks(lemmas),
            source_term: String::new(),
        }
    }

    #[test]
    fn lemmatized_engine_target() {
        let hyp = vec![toks("atteice dzinējs vai transmisija")];
        let r = term_accuracy(&hyp, &[exp(0, "dzinējs"), exp(0, "transmisija")], TermOptions::default()).unwrap();
        assert_eq!((r.matched, r.total), (2, 2));
        assert_eq!(r.accuracy, Some(100.0));
    }

    #[test]
    fn seven_of_ten() {
        let hyp: Vec<Vec<Token>> = (0..10).map(|i| toks(&format!("x term{i} y"))).collect();
        let exps: Vec<_> = (0..10).map(|i| exp(i, &format!("term{}", if i < 7 { i } else { 99 }))).collect();
        let r = term_accuracy(&hyp, &exps, TermOptions::default()).unwrap();
        assert_eq!(r.accuracy, Some(70.0));
    }

    #[test]
    fn multiword_needs_contiguity() {
        let hyp = vec![toks("pārnesumu X kārba"), toks("jauna pārnesumu kārba")];
        let r = term_accuracy(&hyp, &[exp(0, "pārnesumu kārba"), exp(1, "pārnesumu kārba")], TermOptions::default()).unwrap();
        assert_eq!(r.details.iter().map(|d| d.matched).collect::<Vec<_>>(), [false, true]);
    }

    #[test]
    fn undefined_when_empty_and_errors_out_of_range() {
        let r = term_accuracy(&[toks("a")], &[], TermOptions::default()).unwrap();
        assert_eq!(r.accuracy, None);
        assert!(term_accuracy(&[toks("a")], &[exp(1, "a")], TermOptions::default()).is_err());
    }

    #[test]
    fn case_folding() {
        let hyp = vec![toks("Dzinējs")];
        assert!(term_accuracy(&hyp, &[exp(0, "dzinējs")], TermOptions::default()).unwrap().matched == 1);
        let strict = TermOptions { case_insensitive: false };
        assert!(term_accuracy(&hyp, &[exp(0, "dzinējs")], strict).unwrap().matched == 0);
    }

    fn brute_force(h: &[Token], n: &[Token]) -> bool {
        (0..h.len()).any(|s| (s..=h.len()).any(|e| h[s..e] == *n))
    }

    proptest! {
        #[test]
        fn contiguity_matches_brute_force(
            h in prop::collection::vec("[abc]", 0..30),
            n in prop::collection::vec("[abc]", 1..4),
        ) {
            let h: Vec<Token> = h.iter().map(|s| Token::new(s.as_str()).unwrap()).collect();
            let n: Vec<Token> = n.iter().map(|s| Token::new(s.as_str()).unwrap()).collect();
            prop_assert_eq!(contains_sequence(&h, &n, false), brute_force(&h, &n));
        }
    }
}
