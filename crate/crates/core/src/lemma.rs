//! Table-driven lemmatizer for when no external tagger output is at hand.
//!
//! Each form maps to its most frequent (lemma, UPOS) analysis in the data the
//! table was built from. Ties go to the lexicographically smaller lemma,
//! then the smaller tag. Unknown forms lemmatize to themselves with tag `X`.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use crate::corpus::{load_conllu_morph, MorphToken, Token, Upos};
use crate::error::{Error, Result};
use crate::text::{read_lines, write_lines};

#[derive(Debug, Clone)]
pub enum LemmaSource {
    Conllu(PathBuf),
    /// `form<TAB>lemma[<TAB>UPOS]` rows.
    Tsv(PathBuf),
}

impl LemmaSource {
    /// Picks the format from the file extension: `.conllu` or `.conll` is
    /// CoNLL-U, anything else TSV.
    pub fn from_path(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        match path.extension().and_then(|e| e.to_str()) {
            Some("conllu") | Some("conll") => LemmaSource::Conllu(path),
            _ => LemmaSource::Tsv(path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupLemmatizer {
    table: BTreeMap<String, (Token, Upos)>,
    lowercase: bool,
}

#[derive(Default)]
struct Counts(HashMap<String, HashMap<(Token, Upos), u64>>);

impl Counts {
    fn add(&mut self, form: &str, lemma: Token, upos: Upos, lowercase: bool) {
        let key = if lowercase {
            form.to_lowercase()
        } else {
            form.to_owned()
        };
        *self.0.entry(key).or_default().entry((lemma, upos)).or_default() += 1;
    }
}

impl LookupLemmatizer {
    pub fn build(sources: &[LemmaSource], lowercase: bool) -> Result<Self> {
        let mut counts = Counts::default();
        for source in sources {
            match source {
                LemmaSource::Conllu(path) => {
                    for tok in load_conllu_morph(path)?.sentences().iter().flatten() {
                        counts.add(&tok.form, tok.lemma.clone(), tok.upos, lowercase);
                    }
                }
                LemmaSource::Tsv(path) => read_tsv(path, &mut counts, lowercase)?,
            }
        }
        if counts.0.is_empty() {
            return Err(Error::InvalidInput(
                "lemmatizer sources contain no usable rows".into(),
            ));
        }
        Ok(Self::from_counts(counts, lowercase))
    }

    /// Builds a table from in-memory (form, lemma, tag) observations.
    pub fn from_rows<'a, I>(rows: I, lowercase: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, Upos)>,
    {
        let mut counts = Counts::default();
        for (form, lemma, upos) in rows {
            counts.add(form, Token::new(lemma)?, upos, lowercase);
        }
        if counts.0.is_empty() {
            return Err(Error::InvalidInput("no lemma rows".into()));
        }
        Ok(Self::from_counts(counts, lowercase))
    }

    fn from_counts(counts: Counts, lowercase: bool) -> Self {
        let table = counts
            .0
            .into_iter()
            .map(|(form, analyses)| {
                let best = analyses
                    .into_iter()
                    .max_by(|(a, ca), (b, cb)| ca.cmp(cb).then_with(|| b.cmp(a)))
                    .map(|(analysis, _)| analysis)
                    .expect("form seen at least once");
                (form, best)
            })
            .collect();
        LookupLemmatizer { table, lowercase }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn lookup(&self, form: &Token) -> MorphToken {
        let hit = if self.lowercase {
            self.table.get(&form.to_lowercase())
        } else {
            self.table.get(form.as_str())
        };
        match hit {
            Some((lemma, upos)) => MorphToken::new(form.clone(), Some(lemma.clone()), *upos),
            None => MorphToken::new(form.clone(), None, Upos::X),
        }
    }

    pub fn lemmatize(&self, tokens: &[Token]) -> Vec<MorphToken> {
        tokens.iter().map(|t| self.lookup(t)).collect()
    }

    /// Writes the table as sorted `form<TAB>lemma<TAB>UPOS` rows, which
    /// `build` reads back into an identical table.
    pub fn write_tsv(&self, path: &Path) -> Result<()> {
        write_lines(
            path,
            self.table
                .iter()
                .map(|(form, (lemma, upos))| format!("{form}\t{lemma}\t{upos}")),
        )
    }
}

fn read_tsv(path: &Path, counts: &mut Counts, lowercase: bool) -> Result<()> {
    for (n, line) in read_lines(path)?.iter().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 {
            return Err(Error::parse(path, n + 1, "expected form<TAB>lemma[<TAB>UPOS]"));
        }
        let form = Token::new(cols[0]).map_err(|e| Error::parse(path, n + 1, e.to_string()))?;
        let lemma = Token::new(cols[1]).map_err(|e| Error::parse(path, n + 1, e.to_string()))?;
        let upos = match cols.get(2) {
            Some(u) if !u.is_empty() && *u != "_" => u
                .parse()
                .map_err(|e: Error| Error::parse(path, n + 1, e.to_string()))?,
            _ => Upos::X,
        };
        counts.add(&form, lemma, upos, lowercase);
    }
    Ok(())
}
