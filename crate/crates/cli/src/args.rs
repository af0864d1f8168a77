use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tla", version, about = "Terminology annotation, alignment and MT evaluation")]
pub struct Cli {
    /// Worker threads (0 = all cores). Never changes the output.
    #[arg(long, global = true, env = "TLA_WORKERS", default_value_t = 0)]
    pub workers: usize,

    /// key = value file with defaults for the subcommand's flags.
    #[arg(long, global = true, env = "TLA_CONFIG")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train the diagonal aligner and write Viterbi links.
    Align(AlignArgs),
    /// Build a mixed original + annotated training corpus.
    AnnotateTrain(AnnotateTrainArgs),
    /// Annotate sentences to translate from a glossary.
    AnnotateInput(AnnotateInputArgs),
    /// Score system output.
    Eval {
        #[command(subcommand)]
        metric: EvalCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    SourceTarget,
    TargetSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    Intersection,
    Union,
    GrowDiagFinalAnd,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[arg(long, env = "TLA_SRC")]
    pub src: PathBuf,
    #[arg(long, env = "TLA_TGT")]
    pub tgt: PathBuf,
    /// Align target lemmas from this CoNLL-U file instead of target forms.
    #[arg(long, env = "TLA_TGT_CONLLU")]
    pub tgt_conllu: Option<PathBuf>,
    /// Align source lemmas from this CoNLL-U file instead of source forms.
    #[arg(long, env = "TLA_SRC_CONLLU")]
    pub src_conllu: Option<PathBuf>,
    #[arg(long, env = "TLA_ITERS_M1", default_value_t = 5)]
    pub iters_m1: usize,
    #[arg(long, env = "TLA_ITERS_DIAG", default_value_t = 5)]
    pub iters_diag: usize,
    #[arg(long, env = "TLA_TENSION", default_value_t = 4.0)]
    pub tension: f64,
    #[arg(long, env = "TLA_NULL_PROB", default_value_t = 0.08)]
    pub null_prob: f64,
    #[arg(long, env = "TLA_ALPHA", default_value_t = 0.01)]
    pub alpha: f64,
    /// Keep the tension fixed.
    #[arg(long, env = "TLA_FIXED_TENSION")]
    pub fixed_tension: bool,
    #[arg(long, value_enum, env = "TLA_DIRECTION", default_value = "source-target")]
    pub direction: DirectionArg,
    /// Train both directions and combine them.
    #[arg(long, value_enum, env = "TLA_SYMMETRIZE")]
    pub symmetrize: Option<HeuristicArg>,
    #[arg(long, env = "TLA_OUT_LINKS")]
    pub out_links: PathBuf,
    /// Model dump; the reverse model goes to <path>.rev when symmetrizing.
    #[arg(long, env = "TLA_OUT_MODEL")]
    pub out_model: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Tla,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Inline,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Auto,
}

fn parse_seed(s: &str) -> Result<SeedArg, String> {
    if s == "auto" {
        return Ok(SeedArg::Auto);
    }
    s.parse().map(SeedArg::Fixed).map_err(|_| format!("expected a 64-bit unsigned integer or \"auto\", got {s:?}"))
}

#[derive(Debug, Args)]
pub struct AnnotateTrainArgs {
    #[arg(long, value_enum, env = "TLA_MODE", default_value = "tla")]
    pub mode: ModeArg,
    #[arg(long, env = "TLA_SRC")]
    pub src: PathBuf,
    #[arg(long, env = "TLA_TGT")]
    pub tgt: PathBuf,
    /// Pharaoh links, one line per kept sentence pair.
    #[arg(long, env = "TLA_LINKS")]
    pub links: Option<PathBuf>,
    #[arg(long, env = "TLA_TGT_CONLLU")]
    pub tgt_conllu: Option<PathBuf>,
    /// ETA only: annotate glossary matches found on both sides instead of
    /// sampled alignment links.
    #[arg(long, env = "TLA_GLOSSARY")]
    pub glossary: Option<PathBuf>,
    /// Master seed, or "auto" to draw one and log it.
    #[arg(long, env = "TLA_SEED", value_parser = parse_seed)]
    pub seed: Option<SeedArg>,
    #[arg(long, env = "TLA_LO", default_value_t = 0.6)]
    pub lo: f64,
    #[arg(long, env = "TLA_HI", default_value_t = 1.0)]
    pub hi: f64,
    #[arg(long, env = "TLA_POS", value_delimiter = ',', default_value = "NOUN,VERB")]
    pub pos: Vec<String>,
    /// Leave out annotated copies without any annotation.
    #[arg(long, env = "TLA_DROP_UNANNOTATED")]
    pub drop_unannotated: bool,
    #[arg(long, value_enum, env = "TLA_FORMAT", default_value = "inline")]
    pub format: FormatArg,
    /// Writes <prefix>.src, <prefix>.tgt and, for the parallel format, <prefix>.factors.
    #[arg(long, env = "TLA_OUT_PREFIX")]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnnotateInputArgs {
    #[arg(long, env = "TLA_SRC")]
    pub src: PathBuf,
    #[arg(long, env = "TLA_GLOSSARY")]
    pub glossary: PathBuf,
    /// Source morphology for lemma-based matching.
    #[arg(long, env = "TLA_SRC_CONLLU")]
    pub src_conllu: Option<PathBuf>,
    /// Match glossary entries against source lemmas (needs --src-conllu).
    #[arg(long, env = "TLA_LEMMA_MATCH")]
    pub lemma_match: bool,
    #[arg(long, env = "TLA_CASE_SENSITIVE")]
    pub case_sensitive: bool,
    #[arg(long, value_enum, env = "TLA_FORMAT", default_value = "inline")]
    pub format: FormatArg,
    /// Factored output; the parallel format adds <out>.factors.
    #[arg(long, env = "TLA_OUT")]
    pub out: PathBuf,
    #[arg(long, env = "TLA_EXPECTATIONS_OUT")]
    pub expectations_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmoothArg {
    None,
    Epsilon,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Emit JSON instead of text.
    #[arg(long, env = "TLA_JSON")]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, env = "TLA_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BleuArgs {
    #[arg(long, env = "TLA_MAX_N", default_value_t = 4)]
    pub max_n: usize,
    #[arg(long, value_enum, env = "TLA_SMOOTH", default_value = "none")]
    pub smooth: SmoothArg,
    #[arg(long, env = "TLA_LOWERCASE")]
    pub lowercase: bool,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Corpus BLEU against a single reference.
    Bleu {
        #[arg(long, env = "TLA_HYP")]
        hyp: PathBuf,
        #[arg(long, env = "TLA_REF")]
        r#ref: PathBuf,
        #[command(flatten)]
        bleu: BleuArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Paired bootstrap significance of the BLEU difference A - B.
    Bootstrap {
        #[arg(long, env = "TLA_HYP_A")]
        hyp_a: PathBuf,
        #[arg(long, env = "TLA_HYP_B")]
        hyp_b: PathBuf,
        #[arg(long, env = "TLA_REF")]
        r#ref: PathBuf,
        #[arg(long, env = "TLA_REPLICATES", default_value_t = 1000)]
        replicates: usize,
        /// Master seed, or "auto" to draw one and log it.
        #[arg(long, env = "TLA_SEED", value_parser = parse_seed)]
        seed: Option<SeedArg>,
        #[command(flatten)]
        bleu: BleuArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Lemmatized term exact-match accuracy.
    Terms {
        /// Lemmatized hypotheses as CoNLL-U.
        #[arg(long, env = "TLA_HYP_CONLLU", conflicts_with = "hyp")]
        hyp_conllu: Option<PathBuf>,
        /// Plain hypotheses, lemmatized with --lemma-table.
        #[arg(long, env = "TLA_HYP", requires = "lemma_table")]
        hyp: Option<PathBuf>,
        /// CoNLL-U or form<TAB>lemma<TAB>UPOS files for the lookup lemmatizer.
        #[arg(long, env = "TLA_LEMMA_TABLE", value_delimiter = ',')]
        lemma_table: Vec<PathBuf>,
        #[arg(long, env = "TLA_EXPECTATIONS")]
        expectations: PathBuf,
        #[arg(long, env = "TLA_CASE_SENSITIVE")]
        case_sensitive: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Free-marginal kappa of a judgment file.
    Kappa {
        #[arg(long, env = "TLA_JUDGMENTS")]
        judgments: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Hypothesis word forms absent from both training sides.
    Novelty {
        #[arg(long, env = "TLA_HYP")]
        hyp: PathBuf,
        #[arg(long, env = "TLA_TRAIN_SRC")]
        train_src: PathBuf,
        #[arg(long, env = "TLA_TRAIN_TGT")]
        train_tgt: PathBuf,
        #[arg(long, env = "TLA_LOWERCASE")]
        lowercase: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
}
