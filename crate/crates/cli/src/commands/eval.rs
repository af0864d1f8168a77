use std::path::Path;

use serde_json::json;
use tla_core::annotator::load_expectations;
use tla_core::corpus::{load_conllu_morph, Token};
use tla_core::evaluator::{
    corpus_bleu, free_marginal_kappa, kappa_json, load_judgments, novel_wordforms, observed_agreement,
    paired_bootstrap, term_accuracy, tokenize, BleuConfig, BootstrapConfig, NoveltyOptions, Smoothing, TermOptions,
    ToJson,
};
use tla_core::lemma::{LemmaSource, LookupLemmatizer};
use tla_core::text::read_lines;
use tla_core::{Error, Result};

use super::{emit, resolve_seed};
use crate::args::{BleuArgs, EvalCommand, SmoothArg};
use crate::config::Parsed;

fn tokenized(path: &Path) -> Result<Vec<Vec<String>>> {
    Ok(read_lines(path)?.iter().map(|l| tokenize(l)).collect())
}

fn bleu_config(args: &BleuArgs) -> BleuConfig {
    BleuConfig {
        max_n: args.max_n,
        smoothing: match args.smooth {
            SmoothArg::None => Smoothing::None,
            SmoothArg::Epsilon => Smoothing::Epsilon(Smoothing::DEFAULT_EPSILON),
        },
        lowercase: args.lowercase,
    }
}

pub fn run(parsed: &Parsed, metric: &EvalCommand, workers: usize) -> Result<()> {
    match metric {
        EvalCommand::Bleu { hyp, r#ref, bleu, report } => {
            let score = corpus_bleu(&tokenized(hyp)?, &tokenized(r#ref)?, &bleu_config(bleu))?;
            emit(parsed, report, score.to_string(), score.to_json(), &[])
        }
        EvalCommand::Bootstrap {
            hyp_a,
            hyp_b,
            r#ref,
            replicates,
            seed,
            bleu,
            report,
        } => {
            let seed = resolve_seed(*seed, "eval bootstrap")?;
            let config = BootstrapConfig {
                replicates: *replicates,
                seed,
                workers,
            };
            let rep = paired_bootstrap(
                &tokenized(hyp_a)?,
                &tokenized(hyp_b)?,
                &tokenized(r#ref)?,
                &bleu_config(bleu),
                &config,
            )?;
            emit(parsed, report, rep.to_string(), rep.to_json(), &[("seed", json!(seed))])
        }
        EvalCommand::Terms {
            hyp_conllu,
            hyp,
            lemma_table,
            expectations,
            case_sensitive,
            report,
        } => {
            let lemmas: Vec<Vec<Token>> = match (hyp_conllu, hyp) {
                (Some(path), _) => load_conllu_morph(path)?.lemmas(),
                (None, Some(path)) => {
                    let sources: Vec<LemmaSource> = lemma_table.iter().map(LemmaSource::from_path).collect();
                    let lemmatizer = LookupLemmatizer::build(&sources, false)?;
                    read_lines(path)?
                        .iter()
                        .map(|l| {
                            lemmatizer
                                .lemmatize(&Token::split_line(l))
                                .into_iter()
                                .map(|m| m.lemma)
                                .collect()
                        })
                        .collect()
                }
                (None, None) => {
                    return Err(Error::InvalidInput(
                        "term accuracy needs --hyp-conllu or --hyp with --lemma-table".into(),
                    ))
                }
            };
            let options = TermOptions {
                case_insensitive: !case_sensitive,
            };
            let rep = term_accuracy(&lemmas, &load_expectations(expectations)?, options)?;
            emit(parsed, report, rep.to_string(), rep.to_json(), &[])
        }
        EvalCommand::Kappa { judgments, report } => {
            let matrix = load_judgments(judgments)?;
            let kappa = free_marginal_kappa(&matrix)?;
            let observed = observed_agreement(&matrix);
            let text = format!(
                "kappa = {kappa:.6} (observed agreement {observed:.6}, {} categories, {} raters, {} items)",
                matrix.categories().len(),
                matrix.raters(),
                matrix.items()
            );
            let body = kappa_json(kappa, observed, matrix.categories(), matrix.items(), matrix.raters());
            emit(parsed, report, text, body, &[])
        }
        EvalCommand::Novelty {
            hyp,
            train_src,
            train_tgt,
            lowercase,
            report,
        } => {
            let options = NoveltyOptions { lowercase: *lowercase };
            let rep = novel_wordforms(&tokenized(hyp)?, train_src, train_tgt, options)?;
            emit(parsed, report, rep.to_string(), rep.to_json(), &[])
        }
    }
}
