use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{read_lines, write_lines};

/// Word alignment links for one sentence pair as (source, target) indices.
/// Kept sorted so that emission is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlignmentLinks(BTreeSet<(usize, usize)>);

impl AlignmentLinks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source: usize, target: usize) -> bool {
        self.0.insert((source, target))
    }

    pub fn contains(&self, source: usize, target: usize) -> bool {
        self.0.contains(&(source, target))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks that all indices fall inside the given sentence lengths.
    pub fn validate(&self, source_len: usize, target_len: usize) -> Result<()> {
        match self.iter().find(|&(i, j)| i >= source_len || j >= target_len) {
            Some((i, j)) => Err(Error::InvalidInput(format!(
                "link {i}-{j} out of range for lengths {source_len}/{target_len}"
            ))),
            None => Ok(()),
        }
    }

    /// Parses one Pharaoh line of space-separated `i-j` pairs.
    pub fn parse(line: &str) -> std::result::Result<Self, String> {
        let mut links = AlignmentLinks::new();
        for pair in line.split_whitespace() {
            let (i, j) = pair
                .split_once('-')
                .ok_or_else(|| format!("malformed link {pair:?}"))?;
            let i = i.parse().map_err(|_| format!("malformed link {pair:?}"))?;
            let j = j.parse().map_err(|_| format!("malformed link {pair:?}"))?;
            links.insert(i, j);
        }
        Ok(links)
    }

    pub fn to_pharaoh(&self) -> String {
        self.iter()
            .map(|(i, j)| format!("{i}-{j}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl FromIterator<(usize, usize)> for AlignmentLinks {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        AlignmentLinks(iter.into_iter().collect())
    }
}

pub fn load_alignments(path: &Path) -> Result<Vec<AlignmentLinks>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(n, line)| AlignmentLinks::parse(line).map_err(|m| Error::parse(path, n + 1, m)))
        .collect()
}

pub fn write_alignments(path: &Path, links: &[AlignmentLinks]) -> Result<()> {
    write_lines(path, links.iter().map(AlignmentLinks::to_pharaoh))
}
