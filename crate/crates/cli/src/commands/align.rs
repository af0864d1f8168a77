use std::path::PathBuf;

use tla_core::aligner::{
    align_corpus, symmetrize, train_diagonal, Bitext, DiagonalAlignmentModel, DiagonalConfig, Direction, Heuristic,
    Substitution,
};
use tla_core::corpus::{load_conllu_morph, load_parallel_corpus, write_alignments, AlignmentLinks, AnnotatedCorpus, Side};
use tla_core::{Error, Result};

use crate::args::{AlignArgs, DirectionArg, HeuristicArg};

pub fn run(args: &AlignArgs, workers: usize) -> Result<()> {
    if args.iters_m1 == 0 {
        return Err(Error::InvalidInput("--iters-m1 must be at least 1".into()));
    }
    let corpus = load_parallel_corpus(&args.src, &args.tgt)?;
    if !corpus.dropped().is_empty() {
        log::warn!("dropped {} pairs with an empty side", corpus.dropped().len());
    }
    let mut annotated = AnnotatedCorpus::new(corpus);
    if let Some(path) = &args.src_conllu {
        annotated = annotated.attach(load_conllu_morph(path)?, Side::Source)?;
    }
    if let Some(path) = &args.tgt_conllu {
        annotated = annotated.attach(load_conllu_morph(path)?, Side::Target)?;
    }
    let subst = Substitution {
        source: annotated.morph(Side::Source),
        target: annotated.morph(Side::Target),
    };
    let config = DiagonalConfig {
        model1_iterations: args.iters_m1,
        iterations: args.iters_diag,
        initial_tension: args.tension,
        null_prob: args.null_prob,
        smoothing_alpha: args.alpha,
        optimize_tension: !args.fixed_tension,
        workers,
        ..DiagonalConfig::default()
    };

    let train = |direction: Direction| -> Result<(DiagonalAlignmentModel, Vec<AlignmentLinks>)> {
        let bitext = Bitext::new(annotated.corpus(), direction, subst)?;
        let training = train_diagonal(&bitext, &config)?;
        log::info!(
            "{}: {} pairs, tension {:.4}, log-likelihood {:.4}",
            direction.as_str(),
            bitext.len(),
            training.model.tension,
            training.log_likelihoods.last().copied().unwrap_or(f64::NAN)
        );
        let links = align_corpus(&training.model, annotated.corpus(), subst, workers)?;
        Ok((training.model, links))
    };

    let direction = match args.direction {
        DirectionArg::SourceTarget => Direction::SourceToTarget,
        DirectionArg::TargetSource => Direction::TargetToSource,
    };
    let (model, links) = train(direction)?;
    let links = match args.symmetrize {
        None => links,
        Some(h) => {
            let reverse_dir = match direction {
                Direction::SourceToTarget => Direction::TargetToSource,
                Direction::TargetToSource => Direction::SourceToTarget,
            };
            let (reverse, reverse_links) = train(reverse_dir)?;
            if let Some(path) = &args.out_model {
                let mut rev = path.clone().into_os_string();
                rev.push(".rev");
                reverse.write_tsv(&PathBuf::from(rev))?;
            }
            let heuristic = match h {
                HeuristicArg::Intersection => Heuristic::Intersection,
                HeuristicArg::Union => Heuristic::Union,
                HeuristicArg::GrowDiagFinalAnd => Heuristic::GrowDiagFinalAnd,
            };
            links
                .iter()
                .zip(&reverse_links)
                .map(|(f, r)| symmetrize(f, r, heuristic))
                .collect()
        }
    };
    write_alignments(&args.out_links, &links)?;
    if let Some(path) = &args.out_model {
        model.write_tsv(path)?;
    }
    Ok(())
}
