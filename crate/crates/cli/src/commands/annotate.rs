use std::path::PathBuf;

use tla_core::annotator::{
    annotate_inference_input, build_eta_from_glossary, build_training_set, write_expectations, AnnotationKind,
    FactoredFormat, FactoredSentence, MixConfig, SamplingPolicy,
};
use tla_core::corpus::{
    attach_morph, load_alignments, load_conllu_morph, load_glossary, load_parallel_corpus, AnnotatedCorpus,
    MatchOptions, Side, Token, Upos,
};
use tla_core::text::{read_lines, write_lines};
use tla_core::{Error, Result};

use super::{check_layer, resolve_seed};
use crate::args::{AnnotateInputArgs, AnnotateTrainArgs, FormatArg, ModeArg};

fn format(f: FormatArg) -> FactoredFormat {
    match f {
        FormatArg::Inline => FactoredFormat::Inline,
        FormatArg::Parallel => FactoredFormat::Parallel,
    }
}

fn required<'a>(value: &'a Option<PathBuf>, flag: &str, why: &str) -> Result<&'a PathBuf> {
    value
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("{flag} is required {why}")))
}

pub fn train(args: &AnnotateTrainArgs, workers: usize) -> Result<()> {
    let corpus = load_parallel_corpus(&args.src, &args.tgt)?;
    let mix = MixConfig {
        drop_unannotated: args.drop_unannotated,
        workers,
    };
    let set = if let Some(glossary) = &args.glossary {
        if args.mode != ModeArg::Eta {
            return Err(Error::InvalidInput("--glossary applies to --mode eta only".into()));
        }
        let glossary = load_glossary(glossary)?;
        build_eta_from_glossary(&AnnotatedCorpus::new(corpus), &glossary, MatchOptions::default(), mix)?
    } else {
        let seed = resolve_seed(args.seed, "annotate-train")?;
        let conllu = required(&args.tgt_conllu, "--tgt-conllu", "for alignment-based annotation")?;
        let links = required(&args.links, "--links", "for alignment-based annotation")?;
        let annotated = attach_morph(corpus, load_conllu_morph(conllu)?, Side::Target)?;
        let links = load_alignments(links)?;
        let eligible = args.pos.iter().map(|p| p.trim().parse::<Upos>()).collect::<Result<Vec<_>>>()?;
        let policy = SamplingPolicy::new(args.lo, args.hi, seed, eligible)?;
        let kind = match args.mode {
            ModeArg::Tla => AnnotationKind::Lemma,
            ModeArg::Eta => AnnotationKind::Surface,
        };
        build_training_set(&annotated, &links, &policy, mix, kind)?
    };
    log::info!(
        "{} output pairs: {} original, {} annotated, {} unannotated copies dropped, {} annotations",
        set.len(),
        set.original,
        set.annotated,
        set.dropped,
        set.events.len()
    );
    set.write(&args.out_prefix, format(args.format))
}

pub fn input(args: &AnnotateInputArgs) -> Result<()> {
    let sentences: Vec<Vec<Token>> = read_lines(&args.src)?.iter().map(|l| Token::split_line(l)).collect();
    let glossary = load_glossary(&args.glossary)?;
    let layer = match &args.src_conllu {
        Some(path) => {
            let layer = load_conllu_morph(path)?;
            check_layer(&layer, &sentences)?;
            Some(layer)
        }
        None if args.lemma_match => {
            return Err(Error::InvalidInput("--lemma-match needs --src-conllu".into()));
        }
        None => None,
    };
    let options = MatchOptions {
        case_insensitive: !args.case_sensitive,
        lemma_match: args.lemma_match,
    };

    let mut factored: Vec<FactoredSentence> = Vec::with_capacity(sentences.len());
    let mut expectations = Vec::new();
    for (k, sentence) in sentences.iter().enumerate() {
        let row = layer.as_ref().and_then(|l| l.sentence(k));
        let (fs, exp) = annotate_inference_input(k, sentence, &glossary, row, options)?;
        factored.push(fs);
        expectations.extend(exp);
    }
    log::info!("{} sentences, {} term annotations", factored.len(), expectations.len());

    match format(args.format) {
        FactoredFormat::Inline => write_lines(&args.out, factored.iter().map(FactoredSentence::to_inline))?,
        FactoredFormat::Parallel => {
            let (tokens, factors): (Vec<String>, Vec<String>) = factored.iter().map(FactoredSentence::to_parallel).unzip();
            let mut factors_path = args.out.clone().into_os_string();
            factors_path.push(".factors");
            write_lines(&args.out, tokens)?;
            write_lines(&PathBuf::from(factors_path), factors)?;
        }
    }
    if let Some(path) = &args.expectations_out {
        write_expectations(path, &expectations)?;
    }
    Ok(())
}
