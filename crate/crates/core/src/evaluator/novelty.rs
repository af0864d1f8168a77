use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

pub const MAX_EXAMPLES: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NoveltyOptions {
    pub lowercase: bool,
}

/// Token types of a whitespace-tokenized file, read line by line.
pub fn read_vocabulary(path: &Path, lowercase: bool) -> Result<HashSet<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut vocab = HashSet::new();
    let mut buf = Vec::new();
    let mut line = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf).map_err(|e| Error::io(path, e))? == 0 {
            break;
        }
        line += 1;
        let text = std::str::from_utf8(&buf).map_err(|_| Error::Utf8 {
            path: path.to_path_buf(),
            line,
        })?;
        for tok in text.split_whitespace() {
            if lowercase {
                vocab.insert(tok.to_lowercase());
            } else if !vocab.contains(tok) {
                vocab.insert(tok.to_string());
            }
        }
    }
    Ok(vocab)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovelForm {
    pub form: String,
    pub frequency: usize,
    /// First sentence indices (0-based) containing the form.
    pub examples: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NoveltyReport {
    pub hypothesis_tokens: usize,
    pub hypothesis_types: usize,
    /// Sorted by descending frequency, then form.
    pub forms: Vec<NovelForm>,
}

impl fmt::Display for NoveltyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} novel forms among {} types ({} tokens)",
            self.forms.len(),
            self.hypothesis_types,
            self.hypothesis_tokens
        )?;
        for form in &self.forms {
            let ex: Vec<String> = form.examples.iter().map(usize::to_string).collect();
            writeln!(f, "{}\t{}\t{}", form.form, form.frequency, ex.join(","))?;
        }
        Ok(())
    }
}

/// Hypothesis token types absent from every given vocabulary.
pub fn novel_against<T: AsRef<str>>(
    hypotheses: &[Vec<T>],
    vocabularies: &[&HashSet<String>],
    options: NoveltyOptions,
) -> NoveltyReport {
    let mut seen: BTreeMap<String, NovelForm> = BTreeMap::new();
    let mut types = HashSet::new();
    let mut tokens = 0;
    for (s, sentence) in hypotheses.iter().enumerate() {
        for tok in sentence {
            tokens += 1;
            let form = if options.lowercase { tok.as_ref().to_lowercase() } else { tok.as_ref().to_string() };
            types.insert(form.clone());
            if vocabularies.iter().any(|v| v.contains(&form)) {
                continue;
            }
            let entry = seen.entry(form.clone()).or_insert_with(|| NovelForm {
                form,
                frequency: 0,
                examples: Vec::new(),
            });
            entry.frequency += 1;
            if entry.examples.len() < MAX_EXAMPLES && entry.examples.last() != Some(&s) {
                entry.examples.push(s);
            }
        }
    }
    let mut forms: Vec<NovelForm> = seen.into_values().collect();
    forms.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.form.cmp(&b.form)));
    NoveltyReport {
        hypothesis_tokens: tokens,
        hypothesis_types: types.len(),
        forms,
    }
}

/// Hypothesis word forms seen on neither side of the training data.
pub fn novel_wordforms<T: AsRef<str>>(
    hypotheses: &[Vec<T>],
    training_src: &Path,
    training_tgt: &Path,
    options: NoveltyOptions,
) -> Result<NoveltyReport> {
    let src = read_vocabulary(training_src, options.lowercase)?;
    let tgt = read_vocabulary(training_tgt, options.lowercase)?;
    Ok(novel_against(hypotheses, &[&src, &tgt], options))
}
