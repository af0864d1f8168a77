use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::read_lines;

/// Categorical judgments: one row per item, one column per rater, labels
/// as indices into `categories`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgmentMatrix {
    categories: Vec<String>,
    labels: Vec<Vec<usize>>,
}

impl JudgmentMatrix {
    pub fn new(categories: Vec<String>, labels: Vec<Vec<usize>>) -> Result<Self> {
        let k = categories.len();
        let raters = labels.first().map_or(0, Vec::len);
        for (item, row) in labels.iter().enumerate() {
            if row.len() != raters {
                return Err(Error::InvalidInput(format!(
                    "item {item}: {} labels, expected {raters}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&c| c >= k) {
                return Err(Error::InvalidInput(format!("item {item}: label {bad} outside {k} categories")));
            }
        }
        Ok(JudgmentMatrix { categories, labels })
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn items(&self) -> usize {
        self.labels.len()
    }

    pub fn raters(&self) -> usize {
        self.labels.first().map_or(0, Vec::len)
    }
}

/// Parses a judgment TSV: a `#categories: A,B,C` header, then one row per
/// item with one label per rater.
pub fn parse_judgments(text: &str, path: &Path) -> Result<JudgmentMatrix> {
    let mut categories: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut raters = None;
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(decl) = rest.trim().strip_prefix("categories:") {
                if categories.is_some() {
                    return Err(Error::parse(path, line_no, "duplicate #categories header"));
                }
                let cats: Vec<String> = decl.split(',').map(|c| c.trim().to_string()).collect();
                if cats.iter().any(String::is_empty) {
                    return Err(Error::parse(path, line_no, "empty category name"));
                }
                for (i, c) in cats.iter().enumerate() {
                    if index.insert(c.clone(), i).is_some() {
                        return Err(Error::parse(path, line_no, format!("category {c:?} declared twice")));
                    }
                }
                categories = Some(cats);
            }
            continue;
        }
        if categories.is_none() {
            return Err(Error::parse(path, line_no, "judgment rows before #categories header"));
        }
        let row = line
            .split('\t')
            .map(|cell| {
                let cell = cell.trim();
                index
                    .get(cell)
                    .copied()
                    .ok_or_else(|| Error::parse(path, line_no, format!("undeclared category {cell:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        match raters {
            None => raters = Some(row.len()),
            Some(r) if r != row.len() => {
                return Err(Error::parse(path, line_no, format!("{} labels, expected {r}", row.len())));
            }
            _ => {}
        }
        labels.push(row);
    }
    let categories = categories.ok_or_else(|| Error::parse(path, 1, "missing #categories header"))?;
    JudgmentMatrix::new(categories, labels)
}

pub fn load_judgments(path: &Path) -> Result<JudgmentMatrix> {
    parse_judgments(&read_lines(path)?.join("\n"), path)
}

/// Mean over items of the share of agreeing rater pairs.
pub fn observed_agreement(matrix: &JudgmentMatrix) -> f64 {
    let n = matrix.raters() as f64;
    let k = matrix.categories.len();
    let per_item = matrix.labels.iter().map(|row| {
        let mut counts = vec![0u64; k];
        for &c in row {
            counts[c] += 1;
        }
        let agreeing: u64 = counts.iter().map(|&c| c * c.saturating_sub(1)).sum();
        agreeing as f64 / (n * (n - 1.0))
    });
    per_item.sum::<f64>() / matrix.items() as f64
}

/// Free-marginal multirater kappa: (P̄o − 1/k) / (1 − 1/k).
pub fn free_marginal_kappa(matrix: &JudgmentMatrix) -> Result<f64> {
    let k = matrix.categories.len();
    if k < 2 {
        return Err(Error::InvalidInput(format!("kappa needs at least 2 categories, got {k}")));
    }
    if matrix.raters() < 2 {
        return Err(Error::InvalidInput(format!("kappa needs at least 2 raters, got {}", matrix.raters())));
    }
    if matrix.items() == 0 {
        return Err(Error::InvalidInput("kappa needs at least one item".into()));
    }
    let chance = 1.0 / k as f64;
    Ok((observed_agreement(matrix) - chance) / (1.0 - chance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cats(k: usize) -> Vec<String> {
        (0..k).map(|c| format!("c{c}")).collect()
    }

    #[test]
    fn unanimous_is_one() {
        let m = JudgmentMatrix::new(cats(4), vec![vec![2; 4], vec![0; 4], vec![3; 4]]).unwrap();
        assert_eq!(free_marginal_kappa(&m).unwrap(), 1.0);
    }

    #[test]
    fn seven_of_ten() {
        let rows = (0..10).map(|i| if i < 7 { vec![0, 0] } else { vec![0, 1] }).collect();
        let m = JudgmentMatrix::new(cats(2), rows).unwrap();
        assert!((free_marginal_kappa(&m).unwrap() - 0.4).abs() <= 1e-12);
    }

    #[test]
    fn chance_level_is_zero() {
        let rows = (0..10).map(|i| if i < 5 { vec![1, 1] } else { vec![1, 0] }).collect();
        let m = JudgmentMatrix::new(cats(2), rows).unwrap();
        assert_eq!(free_marginal_kappa(&m).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        assert!(free_marginal_kappa(&JudgmentMatrix::new(cats(1), vec![vec![0, 0]]).unwrap()).is_err());
        assert!(free_marginal_kappa(&JudgmentMatrix::new(cats(2), vec![vec![0]]).unwrap()).is_err());
        assert!(JudgmentMatrix::new(cats(2), vec![vec![0, 0], vec![0]]).is_err());
        assert!(JudgmentMatrix::new(cats(2), vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn parses_tsv() {
        let text = "#categories: Correct,WrongLexeme,WrongInflection,Other\nCorrect\tCorrect\nOther\tWrongLexeme\n\nCorrect\tWrongInflection\n";
        let m = parse_judgments(text, Path::new("j.tsv")).unwrap();
        assert_eq!(m.categories().len(), 4);
        assert_eq!(m.labels(), &[vec![0, 0], vec![3, 1], vec![0, 2]]);

        let err = parse_judgments("#categories: A,B\nA\tC\n", Path::new("j.tsv")).unwrap_err();
        assert!(err.to_string().contains("j.tsv:2"), "{err}");
        assert!(parse_judgments("A\tB\n", Path::new("j.tsv")).is_err());
        assert!(parse_judgments("#categories: A,B\nA\tB\nA\n", Path::new("j.tsv")).is_err());
        assert!(parse_judgments("#categories: A,A\n", Path::new("j.tsv")).is_err());
    }

    /// Agreement counted over explicit rater pairs.
    fn pairwise_oracle(k: usize, rows: &[Vec<usize>]) -> f64 {
        let n = rows[0].len();
        let mut sum = 0.0;
        for row in rows {
            let mut agree = 0;
            let mut pairs = 0;
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        pairs += 1;
                        agree += (row[a] == row[b]) as usize;
                    }
                }
            }
            sum += agree as f64 / pairs as f64;
        }
        let po = sum / rows.len() as f64;
        (po - 1.0 / k as f64) / (1.0 - 1.0 / k as f64)
    }

    #[test]
    fn random_matrices_match_oracle_and_relabeling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let k = rng.gen_range(2..6);
            let n = rng.gen_range(2..7);
            let items = rng.gen_range(1..30);
            let rows: Vec<Vec<usize>> = (0..items).map(|_| (0..n).map(|_| rng.gen_range(0..k)).collect()).collect();
            let m = JudgmentMatrix::new(cats(k), rows.clone()).unwrap();
            let kappa = free_marginal_kappa(&m).unwrap();
            assert!((kappa - pairwise_oracle(k, &rows)).abs() <= 1e-12);
            let unanimous = rows.iter().all(|r| r.iter().all(|&c| c == r[0]));
            assert_eq!(kappa == 1.0, unanimous);

            let perm: Vec<usize> = (0..k).map(|c| (c + 1) % k).collect();
            let relabeled = rows.iter().map(|r| r.iter().map(|&c| perm[c]).collect()).collect();
            let m2 = JudgmentMatrix::new(cats(k), relabeled).unwrap();
            assert!((free_marginal_kappa(&m2).unwrap() - kappa).abs() <= 1e-12);
        }
    }
}
