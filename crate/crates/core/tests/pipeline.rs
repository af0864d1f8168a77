use std::fs;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tla_core::aligner::{align_corpus, symmetrize, train_diagonal, Bitext, DiagonalAlignmentModel, DiagonalConfig, Direction, Heuristic, Substitution};
use tla_core::annotator::{
    annotate_inference_input, build_eta_training_set, build_tla_training_set, parse_factored, serialize_factored,
    Factor, FactoredFormat, FactoredSentence, FactoredToken, MixConfig, SamplingPolicy,
};
use tla_core::corpus::{
    attach_morph, load_alignments, load_conllu_morph, load_glossary, load_parallel_corpus, write_alignments, Side, Token,
};
use tla_core::evaluator::{corpus_bleu, paired_bootstrap, term_accuracy, BleuConfig, BootstrapConfig, TermOptions};
use tla_core::lemma::{LemmaSource, LookupLemmatizer};

const SUFFIXES: [&str; 3] = ["", "u", "am"];

/// Writes a word-for-word corpus with inflected nouns and returns its size.
fn write_corpus(dir: &std::path::Path, n: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut src, mut tgt, mut conllu) = (String::new(), String::new(), String::new());
    for _ in 0..n {
        let len = rng.gen_range(2..8);
        let mut s = Vec::new();
        let mut t = Vec::new();
        for i in 0..len {
            let k = rng.gen_range(0..25);
            let (form, lemma, upos) = if k < 20 {
                let lemma = format!("n{k}");
                (format!("{lemma}{}", SUFFIXES[rng.gen_range(0..3)]), lemma, "NOUN")
            } else {
                (format!("p{k}"), format!("p{k}"), "ADP")
            };
            s.push(format!("e{k}"));
            conllu.push_str(&format!("{}\t{form}\t{lemma}\t{upos}\t_\t_\t_\t_\t_\t_\n", i + 1));
            t.push(form);
        }
        conllu.push('\n');
        src.push_str(&(s.join(" ") + "\n"));
        tgt.push_str(&(t.join(" ") + "\n"));
    }
    fs::write(dir.join("c.src"), src).unwrap();
    fs::write(dir.join("c.tgt"), tgt).unwrap();
    fs::write(dir.join("c.conllu"), conllu).unwrap();
    n
}

#[test]
fn files_to_training_data() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let n = write_corpus(d, 300, 1);
    let corpus = load_parallel_corpus(&d.join("c.src"), &d.join("c.tgt")).unwrap();
    let annotated = attach_morph(corpus, load_conllu_morph(&d.join("c.conllu")).unwrap(), Side::Target).unwrap();
    let subst = Substitution::target_lemmas(annotated.morph(Side::Target).unwrap());

    let fwd = Bitext::new(annotated.corpus(), Direction::SourceToTarget, subst).unwrap();
    let rev = Bitext::new(annotated.corpus(), Direction::TargetToSource, subst).unwrap();
    let mf = train_diagonal(&fwd, &DiagonalConfig::default()).unwrap().model;
    let mr = train_diagonal(&rev, &DiagonalConfig::default()).unwrap().model;
    let lf = align_corpus(&mf, annotated.corpus(), subst, 2).unwrap();
    let lr = align_corpus(&mr, annotated.corpus(), subst, 2).unwrap();
    let links: Vec<_> = lf.iter().zip(&lr).map(|(a, b)| symmetrize(a, b, Heuristic::GrowDiagFinalAnd)).collect();
    let correct: usize = links.iter().map(|l| l.iter().filter(|(i, j)| i == j).count()).sum();
    let total: usize = links.iter().map(|l| l.len()).sum();
    assert!(correct as f64 / total as f64 > 0.97, "{correct}/{total}");

    write_alignments(&d.join("c.links"), &links).unwrap();
    assert_eq!(load_alignments(&d.join("c.links")).unwrap(), links);
    mf.write_tsv(&d.join("m.tsv")).unwrap();
    let back = DiagonalAlignmentModel::read_tsv(&d.join("m.tsv")).unwrap();
    assert_eq!(back.tension, mf.tension);

    let policy = SamplingPolicy::with_seed(17);
    let tla = build_tla_training_set(&annotated, &links, &policy, MixConfig::default()).unwrap();
    let eta = build_eta_training_set(&annotated, &links, &policy, MixConfig::default()).unwrap();
    assert_eq!(tla.len(), 2 * n);
    for (k, (a, b)) in tla.source.iter().zip(&eta.source).enumerate() {
        assert_eq!(a.strip(), annotated.corpus().pairs()[k % n].source);
        assert_eq!(a.factors().collect::<Vec<_>>(), b.factors().collect::<Vec<_>>());
    }
    // every TLA annotation is a lemma, i.e. has no inflection suffix
    for e in &tla.events {
        let s = e.annotation[0].as_str();
        assert!(s.starts_with('n') && s[1..].chars().all(|c| c.is_ascii_digit()), "{s}");
    }
    let rate = tla.events.len() as f64
        / links
            .iter()
            .zip(annotated.morph(Side::Target).unwrap().sentences())
            .map(|(l, row)| l.iter().filter(|&(_, j)| row[j].upos.as_str() == "NOUN").count())
            .sum::<usize>() as f64;
    assert!((0.1..0.3).contains(&rate), "selection rate {rate}");

    tla.write(&d.join("train"), FactoredFormat::Parallel).unwrap();
    let toks = fs::read_to_string(d.join("train.src")).unwrap();
    let facs = fs::read_to_string(d.join("train.factors")).unwrap();
    for ((t, f), fs_) in toks.lines().zip(facs.lines()).zip(&tla.source) {
        assert_eq!(&FactoredSentence::parse_parallel(t, f).unwrap(), fs_);
    }
}

#[test]
fn glossary_to_term_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("g.tsv"), "engine\tdzinējs\ngear box\tpārnesumu kārba\n").unwrap();
    fs::write(
        d.join("lex.tsv"),
        "dzinējā\tdzinējs\tNOUN\ndzinēju\tdzinējs\tNOUN\nkārbā\tkārba\tNOUN\npārnesumu\tpārnesums\tNOUN\n",
    )
    .unwrap();
    let glossary = load_glossary(&d.join("g.tsv")).unwrap();
    let inputs = ["the engine and the gear box", "an engine", "no terms here"];
    let hyps = ["dzinējs un pārnesumu kārbā", "dzinēju", "nav terminu"];

    let mut expectations = Vec::new();
    for (k, line) in inputs.iter().enumerate() {
        let (_, exp) = annotate_inference_input(k, &Token::split_line(line), &glossary, None, Default::default()).unwrap();
        expectations.extend(exp);
    }
    assert_eq!(expectations.len(), 3);

    let lemmatizer = LookupLemmatizer::build(&[LemmaSource::from_path(d.join("lex.tsv"))], false).unwrap();
    let lemmas: Vec<Vec<Token>> = hyps
        .iter()
        .map(|h| lemmatizer.lemmatize(&Token::split_line(h)).into_iter().map(|m| m.lemma).collect())
        .collect();
    let report = term_accuracy(&lemmas, &expectations, TermOptions::default()).unwrap();
    // "pārnesumu" lemmatizes to "pārnesums", so the two-word term is missed
    assert_eq!((report.matched, report.total), (2, 3));
}

#[test]
fn degraded_system_is_significantly_worse() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let refs: Vec<Vec<String>> = (0..200)
        .map(|_| (0..rng.gen_range(6..20)).map(|_| format!("w{}", rng.gen_range(0..50))).collect())
        .collect();
    let b: Vec<Vec<String>> = refs.iter().map(|s| s.iter().filter(|_| !rng.gen_bool(0.3)).cloned().collect()).collect();
    let bleu = BleuConfig::default();
    let rep = paired_bootstrap(&refs, &b, &refs, &bleu, &BootstrapConfig::with_seed(4)).unwrap();
    assert!(rep.p_value <= 0.01, "{rep:?}");
    assert_eq!(rep.bleu_a, corpus_bleu(&refs, &refs, &bleu).unwrap().score);
    let flipped = paired_bootstrap(&b, &refs, &refs, &bleu, &BootstrapConfig::with_seed(4)).unwrap();
    assert_eq!(flipped.p_value, rep.p_value);
    assert_eq!(flipped.wins_a, rep.wins_b);
}

fn factored_sentence() -> impl Strategy<Value = FactoredSentence> {
    let token = ("[a-zā|&;#0-9]{1,5}", prop::sample::select(vec![Factor::W, Factor::S, Factor::T]))
        .prop_map(|(s, f)| FactoredToken::new(Token::new(s).unwrap(), f));
    prop::collection::vec(token, 0..15).prop_map(FactoredSentence::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]
    #[test]
    fn serialize_then_parse_is_identity(fs in factored_sentence()) {
        for format in [FactoredFormat::Inline, FactoredFormat::Parallel] {
            let lines = serialize_factored(&fs, format);
            prop_assert_eq!(parse_factored(&lines, format).unwrap(), fs.clone());
        }
    }
}
