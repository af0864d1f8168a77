use serde_json::{json, Map, Number, Value};

use crate::corpus::join_tokens;
use crate::evaluator::{BleuScore, NoveltyReport, SignificanceReport, TermAccuracyReport};

/// A float rendered with exactly six decimals. Non-finite values become null.
pub fn fixed(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // -0.000000 would differ between runs that only differ in rounding sign
    let s = format!("{:.6}", x);
    let s = if s == "-0.000000" { "0.000000".to_string() } else { s };
    Value::Number(s.parse::<Number>().expect("formatted float is a JSON number"))
}

/// Renders with sorted keys and two-space indentation.
pub fn to_json_string(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for BleuScore {
    fn to_json(&self) -> Value {
        json!({
            "score": fixed(self.score),
            "precisions": self.precisions.iter().map(|&p| fixed(p)).collect::<Vec<_>>(),
            "brevity_penalty": fixed(self.brevity_penalty),
            "hyp_len": self.hyp_len,
            "ref_len": self.ref_len,
        })
    }
}

impl ToJson for SignificanceReport {
    fn to_json(&self) -> Value {
        json!({
            "replicates": self.replicates,
            "seed": self.seed,
            "bleu_a": fixed(self.bleu_a),
            "bleu_b": fixed(self.bleu_b),
            "wins_a": fixed(self.wins_a),
            "wins_b": fixed(self.wins_b),
            "ties": fixed(self.ties),
            "p_value": fixed(self.p_value),
        })
    }
}

impl ToJson for TermAccuracyReport {
    fn to_json(&self) -> Value {
        let details: Vec<Value> = self
            .details
            .iter()
            .map(|d| {
                json!({
                    "sentence": d.sentence,
                    "lemmas": join_tokens(&d.lemmas),
                    "source_term": d.source_term,
                    "matched": d.matched,
                })
            })
            .collect();
        json!({
            "total": self.total,
            "matched": self.matched,
            "accuracy": self.accuracy.map_or(Value::Null, fixed),
            "details": details,
        })
    }
}

impl ToJson for NoveltyReport {
    fn to_json(&self) -> Value {
        let forms: Vec<Value> = self
            .forms
            .iter()
            .map(|f| json!({ "form": f.form, "frequency": f.frequency, "examples": f.examples }))
            .collect();
        json!({
            "hypothesis_tokens": self.hypothesis_tokens,
            "hypothesis_types": self.hypothesis_types,
            "novel_forms": forms,
        })
    }
}

/// Kappa with the statistics it was computed from.
pub fn kappa_json(kappa: f64, observed: f64, categories: &[String], items: usize, raters: usize) -> Value {
    let mut m = Map::new();
    m.insert("kappa".into(), fixed(kappa));
    m.insert("observed_agreement".into(), fixed(observed));
    m.insert("chance_agreement".into(), fixed(1.0 / categories.len() as f64));
    m.insert("categories".into(), json!(categories));
    m.insert("items".into(), json!(items));
    m.insert("raters".into(), json!(raters));
    Value::Object(m)
}
