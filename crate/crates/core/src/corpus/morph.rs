use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::corpus::Token;
use crate::error::{Error, Result};
use crate::text::read_lines;

/// Universal Dependencies part-of-speech tags. `X` doubles as "unknown".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }
}

impl FromStr for Upos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Upos::ALL
            .iter()
            .copied()
            .find(|u| u.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown UPOS tag {s:?}")))
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphToken {
    pub form: Token,
    pub lemma: Token,
    pub upos: Upos,
}

impl MorphToken {
    pub fn new(form: Token, lemma: Option<Token>, upos: Upos) -> Self {
        let lemma = lemma.unwrap_or_else(|| form.clone());
        MorphToken { form, lemma, upos }
    }
}

/// Per-sentence morphology for one side of a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MorphLayer {
    sentences: Vec<Vec<MorphToken>>,
}

impl MorphLayer {
    pub fn new(sentences: Vec<Vec<MorphToken>>) -> Self {
        MorphLayer { sentences }
    }

    pub fn sentences(&self) -> &[Vec<MorphToken>] {
        &self.sentences
    }

    pub fn sentence(&self, i: usize) -> Option<&[MorphToken]> {
        self.sentences.get(i).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Lemma sequences, one per sentence.
    pub fn lemmas(&self) -> Vec<Vec<Token>> {
        self.sentences
            .iter()
            .map(|s| s.iter().map(|m| m.lemma.clone()).collect())
            .collect()
    }
}

pub fn load_conllu_morph(path: &Path) -> Result<MorphLayer> {
    let lines = read_lines(path)?;
    parse_lines(&lines, path)
}

/// Parses CoNLL-U text held in memory; `path` is only used in errors.
pub fn parse_conllu(text: &str, path: &Path) -> Result<MorphLayer> {
    let lines: Vec<String> = text.lines().map(str::to_owned).collect();
    parse_lines(&lines, path)
}

fn parse_lines(lines: &[String], path: &Path) -> Result<MorphLayer> {
    let mut sentences = Vec::new();
    let mut current = Vec::new();
    for (n, line) in lines.iter().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let id = cols[0];
        // multiword ranges ("3-4") and empty nodes ("5.1") carry no token of their own
        if id.contains('-') || id.contains('.') {
            continue;
        }
        if id.parse::<u32>().is_err() {
            return Err(Error::parse(path, line_no, format!("non-integer token id {id:?}")));
        }
        let form = cols
            .get(1)
            .and_then(|f| Token::new(*f).ok())
            .ok_or_else(|| Error::parse(path, line_no, "missing or invalid FORM column"))?;
        let lemma = match cols.get(2) {
            Some(&"_") | None => None,
            Some(l) => Some(
                Token::new(*l).map_err(|e| Error::parse(path, line_no, e.to_string()))?,
            ),
        };
        let upos = match cols.get(3) {
            Some(&"_") | None => Upos::X,
            Some(u) => u
                .parse()
                .map_err(|e: Error| Error::parse(path, line_no, e.to_string()))?,
        };
        current.push(MorphToken::new(form, lemma, upos));
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(MorphLayer { sentences })
}
