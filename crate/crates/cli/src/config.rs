use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Command, CommandFactory, FromArgMatches};
use serde_json::Value;
use tla_core::text::read_lines;
use tla_core::{Error, Result};

use crate::args::Cli;

/// Flags left out of the echoed configuration because they cannot change
/// any output.
const NOT_ECHOED: &[&str] = &["workers", "config", "help", "version", "json", "out"];

/// `key = value` lines; `#` starts a comment line.
pub fn load_config_file(path: &Path) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (n, line) in read_lines(path)?.iter().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message: "expected key = value".into(),
        })?;
        out.push((n + 1, key.trim().replace('_', "-"), value.trim().to_string()));
    }
    Ok(out)
}

/// The innermost subcommand's definition and matches.
fn leaf<'a>(cmd: &'a Command, matches: &'a ArgMatches) -> (&'a Command, &'a ArgMatches, Vec<String>) {
    let mut cmd = cmd;
    let mut matches = matches;
    let mut path = Vec::new();
    while let Some((name, sub)) = matches.subcommand() {
        cmd = cmd.find_subcommand(name).expect("matched subcommand exists");
        matches = sub;
        path.push(name.to_string());
    }
    (cmd, matches, path)
}

fn lenient(cmd: Command) -> Command {
    cmd.ignore_errors(true)
        .mut_args(|a| a.required(false))
        .mut_subcommands(lenient)
}

fn explicitly_set(matches: &ArgMatches, id: &str) -> bool {
    matches!(
        matches.try_contains_id(id).ok().and_then(|_| matches.value_source(id)),
        Some(ValueSource::CommandLine) | Some(ValueSource::EnvVariable)
    )
}

pub struct Parsed {
    pub cli: Cli,
    pub command: Command,
    pub matches: ArgMatches,
}

/// Parses the command line, then fills every flag that was neither given
/// nor set through the environment from the config file.
pub fn parse(raw: Vec<OsString>) -> std::result::Result<Result<Parsed>, clap::Error> {
    let mut command = Cli::command();
    command.build();
    // lenient first pass: required flags may still come from the config file
    let first = lenient(command.clone()).try_get_matches_from(&raw)?;
    let entries = match first.get_one::<PathBuf>("config") {
        Some(path) => match load_config_file(path) {
            Ok(e) => e.into_iter().map(|(l, k, v)| (path.clone(), l, k, v)).collect(),
            Err(e) => return Ok(Err(e)),
        },
        None => Vec::new(),
    };

    let (leaf_cmd, leaf_matches, _) = leaf(&command, &first);
    let mut extra: Vec<OsString> = Vec::new();
    for (config_path, line, key, value) in entries {
        let Some(arg) = leaf_cmd.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            return Ok(Err(Error::Parse {
                path: config_path,
                line,
                message: format!("unknown key {key:?} for this subcommand"),
            }));
        };
        if key == "config" || explicitly_set(leaf_matches, arg.get_id().as_str()) {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => extra.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => {
                    return Ok(Err(Error::Parse {
                        path: config_path,
                        line,
                        message: format!("{key} expects true or false, got {value:?}"),
                    }))
                }
            }
        }
    }
    let mut all = raw;
    all.extend(extra);
    let matches = command.clone().try_get_matches_from(&all)?;
    let cli = Cli::from_arg_matches(&matches)?;
    Ok(Ok(Parsed { cli, command, matches }))
}

/// Subcommand path and resolved flag values, for embedding in reports.
pub fn resolved(parsed: &Parsed, overrides: &[(&str, Value)]) -> (String, BTreeMap<String, Value>) {
    let (cmd, matches, path) = leaf(&parsed.command, &parsed.matches);
    let mut out = BTreeMap::new();
    for arg in cmd.get_arguments() {
        let id = arg.get_id().as_str();
        if NOT_ECHOED.contains(&id) {
            continue;
        }
        let Some(raw) = matches.get_raw(id) else {
            continue;
        };
        let values: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
        out.insert(id.replace('_', "-"), Value::String(values.join(",")));
    }
    for (k, v) in overrides {
        out.insert(k.to_string(), v.clone());
    }
    (path.join(" "), out)
}
