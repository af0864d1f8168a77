use std::collections::{HashMap, HashSet};
use std::path::Path;

use log::warn;

use crate::corpus::{Token, Upos};
use crate::error::{Error, Result};
use crate::text::read_lines;

/// A bilingual term: source token sequence and the dictionary form of its
/// translation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermEntry {
    pub source: Vec<Token>,
    pub target_lemma: Vec<Token>,
    pub upos: Option<Upos>,
}

impl TermEntry {
    pub fn new(source: Vec<Token>, target_lemma: Vec<Token>) -> Result<Self> {
        if source.is_empty() || target_lemma.is_empty() {
            return Err(Error::InvalidInput("term entry with an empty side".into()));
        }
        Ok(TermEntry {
            source,
            target_lemma,
            upos: None,
        })
    }

    pub fn source_text(&self) -> String {
        super::join_tokens(&self.source)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchOptions {
    pub case_insensitive: bool,
    /// Match entry source sequences against lemmas instead of surface forms
    /// when a morphology row is available.
    pub lemma_match: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            case_insensitive: true,
            lemma_match: false,
        }
    }
}

/// A span `[start, end)` of a sentence that equals the source side of
/// glossary entry `entry`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlossaryMatch {
    pub start: usize,
    pub end: usize,
    pub entry: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Glossary {
    entries: Vec<TermEntry>,
    // lowercased first source token -> entry ids, longest source first
    by_first: HashMap<String, Vec<usize>>,
}

impl Glossary {
    /// Builds a glossary, collapsing repeated (source, target) pairs onto
    /// their first occurrence.
    pub fn new(entries: impl IntoIterator<Item = TermEntry>) -> Self {
        let mut glossary = Glossary::default();
        let mut seen = HashSet::new();
        for entry in entries {
            if !seen.insert((entry.source.clone(), entry.target_lemma.clone())) {
                warn!(
                    "duplicate glossary entry {} -> {} ignored",
                    entry.source_text(),
                    super::join_tokens(&entry.target_lemma)
                );
                continue;
            }
            glossary.push(entry);
        }
        glossary
    }

    fn push(&mut self, entry: TermEntry) {
        let id = self.entries.len();
        let key = entry.source[0].to_lowercase();
        self.entries.push(entry);
        let bucket = self.by_first.entry(key).or_default();
        bucket.push(id);
        let entries = &self.entries;
        // stable: equal lengths stay in file order
        bucket.sort_by_key(|&e| std::cmp::Reverse(entries[e].source.len()));
    }

    pub fn entries(&self) -> &[TermEntry] {
        &self.entries
    }

    pub fn entry(&self, id: usize) -> &TermEntry {
        &self.entries[id]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every span of `keys` that equals some entry's source sequence,
    /// ordered by start, then longest first, then file order.
    pub fn candidates<S: AsRef<str>>(&self, keys: &[S], case_insensitive: bool) -> Vec<GlossaryMatch> {
        let mut out = Vec::new();
        for start in 0..keys.len() {
            let Some(bucket) = self.by_first.get(&keys[start].as_ref().to_lowercase()) else {
                continue;
            };
            for &id in bucket {
                let src = &self.entries[id].source;
                let end = start + src.len();
                if end > keys.len() {
                    continue;
                }
                let hit = src.iter().zip(&keys[start..end]).all(|(a, b)| {
                    let b = b.as_ref();
                    if case_insensitive {
                        a.to_lowercase() == b.to_lowercase()
                    } else {
                        a.as_str() == b
                    }
                });
                if hit {
                    out.push(GlossaryMatch {
                        start,
                        end,
                        entry: id,
                    });
                }
            }
        }
        out
    }
}

/// Loads a `source<TAB>target_lemma[<TAB>UPOS]` file. Blank lines are skipped.
pub fn load_glossary(path: &Path) -> Result<Glossary> {
    let mut entries = Vec::new();
    for (n, line) in read_lines(path)?.iter().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 2 {
            return Err(Error::parse(path, line_no, "expected at least 2 tab-separated columns"));
        }
        let source = Token::split_line(cols[0]);
        let target = Token::split_line(cols[1]);
        let mut entry = TermEntry::new(source, target)
            .map_err(|e| Error::parse(path, line_no, e.to_string()))?;
        if let Some(u) = cols.get(2).map(|u| u.trim()).filter(|u| !u.is_empty()) {
            entry.upos = Some(
                u.parse()
                    .map_err(|e: Error| Error::parse(path, line_no, e.to_string()))?,
            );
        }
        entries.push(entry);
    }
    Ok(Glossary::new(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(body: &str) -> Result<Glossary> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.tsv");
        std::fs::write(&p, body).unwrap();
        load_glossary(&p)
    }

    #[test]
    fn single_and_multiword_entries() {
        let g = load("engine\tdzinējs\ngear box\tpārnesumu kārba\tNOUN\n").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.entry(0).source_text(), "engine");
        assert_eq!(g.entry(0).target_lemma[0].as_str(), "dzinējs");
        assert_eq!(g.entry(1).source.len(), 2);
        assert_eq!(g.entry(1).target_lemma.len(), 2);
        assert_eq!(g.entry(1).upos, Some(Upos::Noun));
    }

    #[test]
    fn empty_file_gives_empty_glossary() {
        let g = load("").unwrap();
        assert!(g.is_empty());
        assert!(g.candidates(&["a", "b"], true).is_empty());
    }

    #[test]
    fn duplicates_collapse() {
        let g = load("engine\tdzinējs\nengine\tdzinējs\nengine\tmotors\n").unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn short_row_is_an_error() {
        let err = load("engine\tdzinējs\nbroken\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn case_handling() {
        let g = load("Engine\tdzinējs\n").unwrap();
        assert_eq!(g.candidates(&["the", "engine"], true).len(), 1);
        assert!(g.candidates(&["the", "engine"], false).is_empty());
        assert_eq!(g.candidates(&["Engine"], false).len(), 1);
    }

    fn brute_force(g: &Glossary, keys: &[String], ci: bool) -> Vec<GlossaryMatch> {
        let norm = |s: &str| if ci { s.to_lowercase() } else { s.to_owned() };
        let mut out = Vec::new();
        for start in 0..keys.len() {
            for end in start + 1..=keys.len() {
                for (id, e) in g.entries().iter().enumerate() {
                    let span: Vec<String> = keys[start..end].iter().map(|k| norm(k)).collect();
                    let src: Vec<String> = e.source.iter().map(|t| norm(t)).collect();
                    if span == src {
                        out.push(GlossaryMatch { start, end, entry: id });
                    }
                }
            }
        }
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn candidates_equal_brute_force(
            sentence in prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "A", "d"]), 0..12),
            terms in prop::collection::vec(
                (prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "B"]), 1..4), "[xy]{1,2}"),
                0..20),
            ci in any::<bool>(),
        ) {
            let entries = terms.iter().map(|(s, t)| {
                TermEntry::new(
                    s.iter().map(|w| Token::new(*w).unwrap()).collect(),
                    vec![Token::new(t.as_str()).unwrap()],
                ).unwrap()
            });
            let g = Glossary::new(entries);
            let keys: Vec<String> = sentence.iter().map(|s| s.to_string()).collect();
            let mut got = g.candidates(&keys, ci);
            got.sort();
            prop_assert_eq!(got, brute_force(&g, &keys, ci));
        }
    }
}
