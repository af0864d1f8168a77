mod align;
mod annotate;
mod eval;

use std::io::Write;

use serde_json::{json, Value};
use tla_core::corpus::{MorphLayer, Token};
use tla_core::evaluator::to_json_string;
use tla_core::{Error, Result};

use crate::args::{Command, ReportArgs, SeedArg};
use crate::config::{resolved, Parsed};

pub const SCHEMA_VERSION: u32 = 1;

pub fn run(parsed: &Parsed) -> Result<()> {
    let workers = parsed.cli.workers;
    match &parsed.cli.command {
        Command::Align(a) => align::run(a, workers),
        Command::AnnotateTrain(a) => annotate::train(a, workers),
        Command::AnnotateInput(a) => annotate::input(a),
        Command::Eval { metric } => eval::run(parsed, metric, workers),
    }
}

/// Randomized commands need an explicit seed; `auto` draws one and logs it.
pub fn resolve_seed(seed: Option<SeedArg>, command: &str) -> Result<u64> {
    match seed {
        Some(SeedArg::Fixed(s)) => Ok(s),
        Some(SeedArg::Auto) => {
            let s = rand::random::<u64>();
            log::warn!("{command}: --seed auto chose seed {s}");
            Ok(s)
        }
        None => Err(Error::InvalidInput(format!(
            "{command} is randomized: pass --seed <N> or --seed auto"
        ))),
    }
}

/// Checks that a morphology layer describes exactly these sentences.
pub fn check_layer(layer: &MorphLayer, sentences: &[Vec<Token>]) -> Result<()> {
    if layer.len() != sentences.len() {
        return Err(Error::SentenceCountMismatch {
            corpus: sentences.len(),
            layer: layer.len(),
        });
    }
    for (index, (row, sent)) in layer.sentences().iter().zip(sentences).enumerate() {
        if row.len() != sent.len() || row.iter().zip(sent).any(|(m, t)| &m.form != t) {
            let forms: Vec<&str> = row.iter().map(|m| m.form.as_str()).collect();
            let toks: Vec<&str> = sent.iter().map(Token::as_str).collect();
            return Err(Error::MorphMismatch {
                index,
                corpus: toks.join(" "),
                layer: forms.join(" "),
            });
        }
    }
    Ok(())
}

/// Writes a report as text or as versioned JSON with the resolved
/// configuration.
pub fn emit(parsed: &Parsed, report: &ReportArgs, text: String, body: Value, overrides: &[(&str, Value)]) -> Result<()> {
    let rendered = if report.json {
        let (command, config) = resolved(parsed, overrides);
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "report": body,
        });
        to_json_string(&doc) + "\n"
    } else if text.ends_with('\n') {
        text
    } else {
        text + "\n"
    };
    match &report.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(rendered.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Internal(format!("writing to stdout: {e}")))
        }
    }
}
