#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUFFIXES: [&str; 4] = ["", "s", "ai", "am"];
pub const CONTENT_WORDS: usize = 40;
pub const FUNCTION_WORDS: usize = 6;

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_tla"))
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// Runs the binary in `dir` with logging silenced and no TLA_* variables
/// inherited from the environment.
pub fn tla(dir: &Path, args: &[&str]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.current_dir(dir).args(args).env("TLA_LOG", "off");
    for (k, _) in std::env::vars() {
        if k.starts_with("TLA_") && k != "TLA_LOG" {
            cmd.env_remove(k);
        }
    }
    cmd.output().expect("binary runs")
}

pub fn ok(dir: &Path, args: &[&str]) -> String {
    let out = tla(dir, args);
    assert!(
        out.status.success(),
        "tla {args:?} failed ({:?}): {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

/// One word of the synthetic language pair.
#[derive(Debug, Clone)]
pub struct Word {
    pub source: String,
    pub lemma: String,
    pub form: String,
    pub upos: &'static str,
}

/// Monotone word-for-word translations. Content words are NOUN/VERB with
/// inflected target forms; function words are ADP and uninflected.
#[derive(Debug, Clone)]
pub struct Synth {
    pub sentences: Vec<Vec<Word>>,
}

fn word(rng: &mut ChaCha8Rng) -> Word {
    if rng.gen_bool(0.75) {
        let k = rng.gen_range(0..CONTENT_WORDS);
        let lemma = format!("lem{k}");
        Word {
            source: format!("src{k}"),
            form: format!("{lemma}{}", SUFFIXES[rng.gen_range(0..SUFFIXES.len())]),
            lemma,
            upos: if k % 2 == 0 { "NOUN" } else { "VERB" },
        }
    } else {
        let k = rng.gen_range(0..FUNCTION_WORDS);
        Word {
            source: format!("fn{k}"),
            lemma: format!("fx{k}"),
            form: format!("fx{k}"),
            upos: "ADP",
        }
    }
}

impl Synth {
    pub fn generate(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sentences = (0..n)
            .map(|_| {
                let len = rng.gen_range(3..=10);
                (0..len).map(|_| word(&mut rng)).collect()
            })
            .collect();
        Synth { sentences }
    }

    pub fn source_lines(&self) -> String {
        lines(self.sentences.iter().map(|s| join(s.iter().map(|w| w.source.as_str()))))
    }

    pub fn target_lines(&self) -> String {
        lines(self.sentences.iter().map(|s| join(s.iter().map(|w| w.form.as_str()))))
    }

    pub fn target_conllu(&self) -> String {
        conllu(&self.sentences)
    }

    pub fn write(&self, dir: &Path, stem: &str) {
        fs::write(dir.join(format!("{stem}.src")), self.source_lines()).unwrap();
        fs::write(dir.join(format!("{stem}.tgt")), self.target_lines()).unwrap();
        fs::write(dir.join(format!("{stem}.tgt.conllu")), self.target_conllu()).unwrap();
    }
}

pub fn conllu(sentences: &[Vec<Word>]) -> String {
    let mut out = String::new();
    for (k, s) in sentences.iter().enumerate() {
        out.push_str(&format!("# sent_id = {k}\n"));
        for (i, w) in s.iter().enumerate() {
            out.push_str(&format!("{}\t{}\t{}\t{}\t_\t_\t_\t_\t_\t_\n", i + 1, w.form, w.lemma, w.upos));
        }
        out.push('\n');
    }
    out
}

pub fn join<'a>(words: impl Iterator<Item = &'a str>) -> String {
    words.collect::<Vec<_>>().join(" ")
}

pub fn lines(lines: impl Iterator<Item = String>) -> String {
    lines.map(|l| l + "\n").collect()
}

/// Glossary for the first `n` content words: source word to target lemma.
pub fn glossary(n: usize) -> String {
    lines((0..n).map(|k| format!("src{k}\tlem{k}")))
}
