use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    None,
    /// Zero match counts are replaced by this value.
    Epsilon(f64),
}

impl Smoothing {
    pub const DEFAULT_EPSILON: f64 = 1e-9;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BleuConfig {
    pub max_n: usize,
    pub smoothing: Smoothing,
    pub lowercase: bool,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig {
            max_n: 4,
            smoothing: Smoothing::None,
            lowercase: false,
        }
    }
}

/// Clipped n-gram matches and totals of one or more sentence pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl BleuStats {
    pub fn zero(max_n: usize) -> Self {
        BleuStats {
            matches: vec![0; max_n],
            totals: vec![0; max_n],
            hyp_len: 0,
            ref_len: 0,
        }
    }

    pub fn sentence<T: AsRef<str>>(hyp: &[T], reference: &[T], config: &BleuConfig) -> Self {
        let fold = |s: &[T]| -> Vec<String> {
            s.iter()
                .map(|t| if config.lowercase { t.as_ref().to_lowercase() } else { t.as_ref().to_string() })
                .collect()
        };
        let (hyp, reference) = (fold(hyp), fold(reference));
        let mut stats = BleuStats::zero(config.max_n);
        stats.hyp_len = hyp.len() as u64;
        stats.ref_len = reference.len() as u64;
        for n in 1..=config.max_n {
            if hyp.len() < n {
                continue;
            }
            let mut ref_counts: HashMap<&[String], u64> = HashMap::new();
            for g in reference.windows(n) {
                *ref_counts.entry(g).or_default() += 1;
            }
            let mut hyp_counts: HashMap<&[String], u64> = HashMap::new();
            for g in hyp.windows(n) {
                *hyp_counts.entry(g).or_default() += 1;
            }
            stats.totals[n - 1] = (hyp.len() + 1 - n) as u64;
            stats.matches[n - 1] = hyp_counts
                .iter()
                .map(|(g, &c)| c.min(ref_counts.get(g).copied().unwrap_or(0)))
                .sum();
        }
        stats
    }

    pub fn add(&mut self, other: &BleuStats) {
        for (a, b) in self.matches.iter_mut().zip(&other.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
    }

    pub fn score(&self, smoothing: Smoothing) -> BleuScore {
        let precisions: Vec<f64> = self
            .matches
            .iter()
            .zip(&self.totals)
            .map(|(&m, &t)| {
                let m = m as f64;
                let t = t as f64;
                match smoothing {
                    Smoothing::None if t == 0.0 => 0.0,
                    Smoothing::None => m / t,
                    Smoothing::Epsilon(eps) => (if m == 0.0 { eps } else { m }) / t.max(1.0),
                }
            })
            .collect();
        let brevity_penalty = brevity_penalty(self.hyp_len, self.ref_len);
        let score = if precisions.iter().any(|&p| p <= 0.0) {
            0.0
        } else {
            let mean_log = precisions.iter().map(|p| p.ln()).sum::<f64>() / precisions.len() as f64;
            brevity_penalty * mean_log.exp()
        };
        BleuScore {
            score,
            precisions,
            brevity_penalty,
            hyp_len: self.hyp_len,
            ref_len: self.ref_len,
        }
    }
}

/// exp(1 − r/c) for c < r, else 1. An empty hypothesis side gets 0.
pub fn brevity_penalty(hyp_len: u64, ref_len: u64) -> f64 {
    if hyp_len >= ref_len {
        1.0
    } else if hyp_len == 0 {
        0.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BleuScore {
    /// In [0, 1].
    pub score: f64,
    pub precisions: Vec<f64>,
    pub brevity_penalty: f64,
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl fmt::Display for BleuScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.precisions.iter().map(|p| format!("{:.1}", 100.0 * p)).collect();
        write!(
            f,
            "BLEU = {:.2} {} (BP = {:.3}, ratio = {:.3}, hyp_len = {}, ref_len = {})",
            100.0 * self.score,
            p.join("/"),
            self.brevity_penalty,
            if self.ref_len == 0 { 0.0 } else { self.hyp_len as f64 / self.ref_len as f64 },
            self.hyp_len,
            self.ref_len
        )
    }
}

pub(crate) fn check_counts(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidInput(format!("{what}: {a} hypotheses for {b} references")));
    }
    Ok(())
}

pub fn sentence_stats<T: AsRef<str> + Sync>(
    hypotheses: &[Vec<T>],
    references: &[Vec<T>],
    config: &BleuConfig,
) -> Result<Vec<BleuStats>> {
    check_counts("BLEU", hypotheses.len(), references.len())?;
    if config.max_n == 0 {
        return Err(Error::InvalidInput("BLEU max n must be at least 1".into()));
    }
    if let Smoothing::Epsilon(e) = config.smoothing {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::InvalidInput(format!("smoothing epsilon must be positive, got {e}")));
        }
    }
    Ok(hypotheses
        .iter()
        .zip(references)
        .map(|(h, r)| BleuStats::sentence(h, r, config))
        .collect())
}

/// Corpus BLEU with a single reference per sentence.
pub fn corpus_bleu<T: AsRef<str> + Sync>(
    hypotheses: &[Vec<T>],
    references: &[Vec<T>],
    config: &BleuConfig,
) -> Result<BleuScore> {
    let mut total = BleuStats::zero(config.max_n);
    for s in sentence_stats(hypotheses, references, config)? {
        total.add(&s);
    }
    Ok(total.score(config.smoothing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn split(lines: &[&str]) -> Vec<Vec<String>> {
        lines.iter().map(|l| l.split_whitespace().map(String::from).collect()).collect()
    }

    /// Counts n-grams by string comparison over all windows; no hashing.
    fn naive_bleu(hyps: &[Vec<String>], refs: &[Vec<String>], max_n: usize) -> f64 {
        let mut log_sum = 0.0;
        for n in 1..=max_n {
            let (mut matched, mut total) = (0usize, 0usize);
            for (h, r) in hyps.iter().zip(refs) {
                if h.len() < n {
                    continue;
                }
                let hg: Vec<String> = h.windows(n).map(|w| w.join("\u{1}")).collect();
                let rg: Vec<String> = if r.len() >= n { r.windows(n).map(|w| w.join("\u{1}")).collect() } else { vec![] };
                total += hg.len();
                let mut seen: Vec<&String> = Vec::new();
                for g in &hg {
                    if seen.contains(&g) {
                        continue;
                    }
                    seen.push(g);
                    let ch = hg.iter().filter(|x| *x == g).count();
                    let cr = rg.iter().filter(|x| *x == g).count();
                    matched += ch.min(cr);
                }
            }
            if matched == 0 {
                return 0.0;
            }
            log_sum += (matched as f64 / total as f64).ln();
        }
        let c: usize = hyps.iter().map(Vec::len).sum();
        let r: usize = refs.iter().map(Vec::len).sum();
        let bp = if c >= r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
        bp * (log_sum / max_n as f64).exp()
    }

    #[test]
    fn identity_is_one() {
        let c = split(&["the cat sat on the mat", "a b c d e"]);
        let s = corpus_bleu(&c, &c, &BleuConfig::default()).unwrap();
        assert_eq!(s.score, 1.0);
        assert_eq!(s.brevity_penalty, 1.0);
        assert!(s.precisions.iter().all(|&p| p == 1.0));
    }

    #[test]
    fn clipped_unigram_example() {
        let s = corpus_bleu(&split(&["the the the"]), &split(&["the cat"]), &BleuConfig::default()).unwrap();
        assert!((s.precisions[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(&s.precisions[1..], &[0.0, 0.0, 0.0]);
        assert_eq!(s.score, 0.0);
    }

    #[test]
    fn epsilon_smoothing_gives_positive_score() {
        let cfg = BleuConfig {
            smoothing: Smoothing::Epsilon(Smoothing::DEFAULT_EPSILON),
            ..BleuConfig::default()
        };
        let s = corpus_bleu(&split(&["the the the"]), &split(&["the cat"]), &cfg).unwrap();
        assert!(s.score > 0.0 && s.score < 1e-5);
    }

    #[test]
    fn lowercase_flag() {
        let h = split(&["The Cat sat here"]);
        let r = split(&["the cat sat here"]);
        assert!(corpus_bleu(&h, &r, &BleuConfig::default()).unwrap().score < 1.0);
        let cfg = BleuConfig {
            lowercase: true,
            ..BleuConfig::default()
        };
        assert_eq!(corpus_bleu(&h, &r, &cfg).unwrap().score, 1.0);
    }

    #[test]
    fn brevity_penalty_values() {
        assert_eq!(brevity_penalty(5, 5), 1.0);
        assert_eq!(brevity_penalty(6, 5), 1.0);
        assert!((brevity_penalty(4, 5) - (-0.25f64).exp()).abs() < 1e-15);
        assert_eq!(brevity_penalty(0, 5), 0.0);
        let mut prev = 0.0;
        for c in 1..=10 {
            let bp = brevity_penalty(c, 10);
            assert!(bp > prev);
            prev = bp;
        }
    }

    #[test]
    fn empty_hypothesis_allowed_and_count_mismatch_rejected() {
        let s = corpus_bleu(&split(&["", "a b c d"]), &split(&["x y", "a b c d"]), &BleuConfig::default()).unwrap();
        assert_eq!(s.hyp_len, 4);
        assert!(corpus_bleu(&split(&["a"]), &split(&["a", "b"]), &BleuConfig::default()).is_err());
    }

    fn corpus(max_sent: usize) -> impl Strategy<Value = (Vec<Vec<String>>, Vec<Vec<String>>)> {
        let sent = || prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]).prop_map(String::from), 0..12);
        (1..=max_sent).prop_flat_map(move |n| (prop::collection::vec(sent(), n), prop::collection::vec(sent(), n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn matches_naive_oracle((h, r) in corpus(60)) {
            let got = corpus_bleu(&h, &r, &BleuConfig::default()).unwrap().score;
            let want = naive_bleu(&h, &r, 4);
            prop_assert!((got - want).abs() <= 1e-9, "{} vs {}", got, want);
        }

        #[test]
        fn order_invariant((h, r) in corpus(30), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut idx: Vec<usize> = (0..h.len()).collect();
            idx.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let h2: Vec<_> = idx.iter().map(|&i| h[i].clone()).collect();
            let r2: Vec<_> = idx.iter().map(|&i| r[i].clone()).collect();
            let a = corpus_bleu(&h, &r, &BleuConfig::default()).unwrap();
            let b = corpus_bleu(&h2, &r2, &BleuConfig::default()).unwrap();
            prop_assert!((a.score - b.score).abs() <= 1e-12);
        }
    }
}
