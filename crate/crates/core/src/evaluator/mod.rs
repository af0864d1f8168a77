//! Scoring of system output: corpus BLEU, paired bootstrap significance,
//! lemmatized term accuracy, free-marginal kappa and novel word forms.

mod bleu;
mod bootstrap;
mod kappa;
mod novelty;
mod report;
mod terms;

pub use bleu::{brevity_penalty, corpus_bleu, sentence_stats, BleuConfig, BleuScore, BleuStats, Smoothing};
pub use bootstrap::{paired_bootstrap, BootstrapConfig, SignificanceReport};
pub use kappa::{free_marginal_kappa, load_judgments, observed_agreement, parse_judgments, JudgmentMatrix};
pub use novelty::{novel_against, novel_wordforms, read_vocabulary, NovelForm, NoveltyOptions, NoveltyReport, MAX_EXAMPLES};
pub use report::{fixed, kappa_json, to_json_string, ToJson};
pub use terms::{contains_sequence, term_accuracy, TermAccuracyReport, TermJudgment, TermOptions};

/// Whitespace tokenization of one line of system output.
pub fn tokenize(line: &str) -> Vec<String> {
    line.split_whitespace().map(String::from).collect()
}
