use crate::aligner::{estep, Bitext, TranslationTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Model1Training {
    pub table: TranslationTable,
    /// Corpus log-likelihood before each update and after the last one,
    /// `iterations + 1` values in total.
    pub log_likelihoods: Vec<f64>,
}

/// IBM Model 1 EM from a uniform table. Every output token may be generated
/// by any conditioning token or NULL with equal prior probability.
pub fn train_model1(bitext: &Bitext, iterations: usize) -> Result<Model1Training> {
    if bitext.is_empty() {
        return Err(Error::InvalidInput("cannot train on an empty corpus".into()));
    }
    if iterations == 0 {
        return Err(Error::InvalidInput("Model 1 needs at least one iteration".into()));
    }
    let mut table = TranslationTable::uniform(bitext);
    let mut log_likelihoods = Vec::with_capacity(iterations + 1);
    for _ in 0..iterations {
        let totals = estep_model1(bitext, &table);
        log_likelihoods.push(totals.loglik);
        table.normalize_from(&totals.counts, 0.0);
    }
    log_likelihoods.push(model1_loglikelihood(&table, bitext));
    Ok(Model1Training {
        table,
        log_likelihoods,
    })
}

fn estep_model1(bitext: &Bitext, table: &TranslationTable) -> estep::Totals {
    estep::run(&bitext.sentences, table.len(), |cond, out, tally| {
        let prior = ((cond.len() + 1) as f64).ln();
        let mut slots = Vec::with_capacity(cond.len() + 1);
        for &f in out {
            slots.clear();
            slots.push(table.slot(0, f));
            slots.extend(cond.iter().map(|&e| table.slot(e, f)));
            let z: f64 = slots.iter().flatten().map(|&s| table.probs[s]).sum();
            if z <= 0.0 {
                tally.loglik += f64::NEG_INFINITY;
                continue;
            }
            tally.loglik += z.ln() - prior;
            for &s in slots.iter().flatten() {
                tally.add(s, table.probs[s] / z);
            }
        }
    })
}

/// Σ over sentences of log P(output | conditioning) under Model 1.
pub fn model1_loglikelihood(table: &TranslationTable, bitext: &Bitext) -> f64 {
    let mut ll = 0.0;
    for k in 0..bitext.len() {
        let (cond, out) = bitext.sentence(k);
        let prior = ((cond.len() + 1) as f64).ln();
        for f in &out {
            let z = table.prob(None, f) + cond.iter().map(|e| table.prob(Some(e), f)).sum::<f64>();
            ll += z.ln() - prior;
        }
    }
    ll
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn bitext(pairs: &[(&str, &str)]) -> Bitext {
        let pairs: Vec<(Vec<&str>, Vec<&str>)> = pairs
            .iter()
            .map(|(c, o)| (c.split(' ').collect(), o.split(' ').collect()))
            .collect();
        Bitext::from_pairs(&pairs)
    }

    /// Textbook Model 1 EM over string-keyed maps.
    fn oracle(pairs: &[(&str, &str)], iterations: usize) -> HashMap<(String, String), f64> {
        let mut t: HashMap<(String, String), f64> = HashMap::new();
        let mut support: HashMap<String, Vec<String>> = HashMap::new();
        for (c, o) in pairs {
            for e in std::iter::once("NULL").chain(c.split(' ')) {
                for f in o.split(' ') {
                    let row = support.entry(e.to_owned()).or_default();
                    if !row.contains(&f.to_owned()) {
                        row.push(f.to_owned());
                    }
                }
            }
        }
        for (e, row) in &support {
            for f in row {
                t.insert((f.clone(), e.clone()), 1.0 / row.len() as f64);
            }
        }
        for _ in 0..iterations {
            let mut count: HashMap<(String, String), f64> = HashMap::new();
            let mut total: HashMap<String, f64> = HashMap::new();
            for (c, o) in pairs {
                let es: Vec<&str> = std::iter::once("NULL").chain(c.split(' ')).collect();
                for f in o.split(' ') {
                    let z: f64 = es.iter().map(|e| t[&(f.to_owned(), e.to_string())]).sum();
                    for e in &es {
                        let p = t[&(f.to_owned(), e.to_string())] / z;
                        *count.entry((f.to_owned(), e.to_string())).or_default() += p;
                        *total.entry(e.to_string()).or_default() += p;
                    }
                }
            }
            for (k, v) in count {
                let tot = total[&k.1];
                t.insert(k, v / tot);
            }
        }
        t
    }

    #[test]
    fn single_cooccurrence_is_certain() {
        let b = bitext(&[("a", "x"), ("a", "x"), ("a", "x")]);
        let m = train_model1(&b, 5).unwrap();
        assert_eq!(m.table.prob(Some("a"), "x"), 1.0);
    }

    #[test]
    fn two_sentence_corpus_matches_oracle() {
        let pairs = [("a b", "x y"), ("a", "x")];
        let b = bitext(&pairs);
        for iters in [1, 5, 10] {
            let m = train_model1(&b, iters).unwrap();
            let t = oracle(&pairs, iters);
            for ((f, e), p) in &t {
                let e = if e == "NULL" { None } else { Some(e.as_str()) };
                assert!((m.table.prob(e, f) - p).abs() < 1e-12, "{e:?} {f}");
            }
        }
        // oracle values: t(x|a) = 0.8776 after 5 iterations, 0.9490 after 10
        let t5 = oracle(&pairs, 5)[&("x".to_owned(), "a".to_owned())];
        assert!((t5 - 0.877_597_937).abs() < 1e-8);
        let m = train_model1(&b, 10).unwrap();
        assert!(m.table.prob(Some("a"), "x") > 0.9);
    }

    #[test]
    fn rows_stay_normalized_and_likelihood_rises() {
        let b = bitext(&[
            ("the house", "das haus"),
            ("the book", "das buch"),
            ("a book", "ein buch"),
            ("a small house", "ein kleines haus"),
        ]);
        for iters in 1..8 {
            let m = train_model1(&b, iters).unwrap();
            assert!(m.table.max_normalization_error() < 1e-12);
            for w in m.log_likelihoods.windows(2) {
                assert!(w[1] >= w[0] - 1e-9 * w[0].abs(), "{:?}", m.log_likelihoods);
            }
            let last = *m.log_likelihoods.last().unwrap();
            assert!((last - model1_loglikelihood(&m.table, &b)).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_corpus_and_zero_iterations_fail() {
        assert!(train_model1(&Bitext::from_pairs::<&str>(&[]), 3).is_err());
        assert!(train_model1(&bitext(&[("a", "x")]), 0).is_err());
    }
}
