//! Line-oriented `key = value` scenario files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::schema::{self, Kind, KeySpec};
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subcommand {
    Kink,
    Evolve,
    Decohere,
    Trajectories,
    Growth,
    Blackhole,
    CollapseTime,
    Tdva,
    Flow,
}

impl Subcommand {
    pub const ALL: [Subcommand; 9] = [
        Subcommand::Kink,
        Subcommand::Evolve,
        Subcommand::Decohere,
        Subcommand::Trajectories,
        Subcommand::Growth,
        Subcommand::Blackhole,
        Subcommand::CollapseTime,
        Subcommand::Tdva,
        Subcommand::Flow,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subcommand::Kink => "kink",
            Subcommand::Evolve => "evolve",
            Subcommand::Decohere => "decohere",
            Subcommand::Trajectories => "trajectories",
            Subcommand::Growth => "growth",
            Subcommand::Blackhole => "blackhole",
            Subcommand::CollapseTime => "collapse-time",
            Subcommand::Tdva => "tdva",
            Subcommand::Flow => "flow",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subcommand {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Subcommand::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Subcommand::ALL.iter().map(|c| c.as_str()).collect();
            format!("unknown subcommand `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Count(u64),
    Bool(bool),
    Text(String),
    Json(serde_json::Value),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub subcommand: Subcommand,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    /// Typed physics parameters, defaults filled in.
    pub params: BTreeMap<String, Value>,
    /// Raw text of every key as written, for the manifest.
    pub inputs: BTreeMap<String, String>,
}

impl Scenario {
    fn missing(&self, key: &str) -> CliError {
        CliError::Invalid(format!("key `{key}` is not set"))
    }

    pub fn has(&self, key: &str) -> bool {
        self.params.contains_key(key)
    }

    pub fn float(&self, key: &str) -> Result<f64> {
        match self.params.get(key) {
            Some(Value::Float(x)) => Ok(*x),
            Some(other) => Err(CliError::Invalid(format!("key `{key}` is not a float: {other:?}"))),
            None => Err(self.missing(key)),
        }
    }

    pub fn opt_float(&self, key: &str) -> Result<Option<f64>> {
        if self.has(key) {
            self.float(key).map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn count(&self, key: &str) -> Result<usize> {
        match self.params.get(key) {
            Some(Value::Count(n)) => usize::try_from(*n).map_err(|_| CliError::Invalid(format!("`{key}` too large"))),
            Some(other) => Err(CliError::Invalid(format!("key `{key}` is not a count: {other:?}"))),
            None => Err(self.missing(key)),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.params.get(key) {
            Some(Value::Bool(b)) => Ok(*b),
            Some(other) => Err(CliError::Invalid(format!("key `{key}` is not a bool: {other:?}"))),
            None => Err(self.missing(key)),
        }
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        match self.params.get(key) {
            Some(Value::Text(s)) => Ok(s),
            Some(other) => Err(CliError::Invalid(format!("key `{key}` is not text: {other:?}"))),
            None => Err(self.missing(key)),
        }
    }

    pub fn json(&self, key: &str) -> Result<&serde_json::Value> {
        match self.params.get(key) {
            Some(Value::Json(v)) => Ok(v),
            Some(other) => Err(CliError::Invalid(format!("key `{key}` is not JSON: {other:?}"))),
            None => Err(self.missing(key)),
        }
    }

    pub fn opt_json(&self, key: &str) -> Result<Option<&serde_json::Value>> {
        if self.has(key) {
            self.json(key).map(Some)
        } else {
            Ok(None)
        }
    }
}

/// Cut a trailing `#` comment that is not inside a double-quoted string.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    let mut escaped = false;
    for (i, ch) in line.char_indices() {
        match ch {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_value(raw: &str, kind: Kind) -> std::result::Result<Value, String> {
    match kind {
        Kind::Float => {
            let x: f64 = raw.parse().map_err(|_| format!("expected a number, got `{raw}`"))?;
            if !x.is_finite() {
                return Err(format!("expected a finite number, got `{raw}`"));
            }
            Ok(Value::Float(x))
        }
        Kind::Count => {
            if let Ok(n) = raw.parse::<u64>() {
                return Ok(Value::Count(n));
            }
            let x: f64 = raw.parse().map_err(|_| format!("expected a non-negative integer, got `{raw}`"))?;
            if x >= 0.0 && x.fract() == 0.0 && x <= 9_007_199_254_740_992.0 {
                Ok(Value::Count(x as u64))
            } else {
                Err(format!("expected a non-negative integer, got `{raw}`"))
            }
        }
        Kind::Bool => match raw {
            "true" => Ok(Value::Bool(true)),
            "false" => Ok(Value::Bool(false)),
            _ => Err(format!("expected true or false, got `{raw}`")),
        },
        Kind::Choice(options) => {
            let s = unquote(raw)?;
            if options.contains(&s.as_str()) {
                Ok(Value::Text(s))
            } else {
                Err(format!("expected one of {}, got `{raw}`", options.join(", ")))
            }
        }
        Kind::Json => serde_json::from_str(raw).map(Value::Json).map_err(|e| format!("invalid JSON: {e}")),
        Kind::Text => unquote(raw).map(Value::Text),
    }
}

fn unquote(raw: &str) -> std::result::Result<String, String> {
    if raw.starts_with('"') {
        serde_json::from_str::<String>(raw).map_err(|e| format!("invalid quoted string: {e}"))
    } else {
        Ok(raw.to_string())
    }
}

struct Entry {
    line: usize,
    raw: String,
}

/// Parse scenario text. `cli_subcommand` supplies the subcommand when the
/// file does not name one; if both are present they must agree.
pub fn parse_scenario(text: &str, cli_subcommand: Option<Subcommand>) -> Result<Scenario> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(full).trim();
        if body.is_empty() {
            continue;
        }
        let (key, raw) = body
            .split_once('=')
            .ok_or_else(|| CliError::Parse { line, msg: format!("expected `key = value`, got `{body}`") })?;
        let key = key.trim();
        let raw = raw.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(CliError::Parse { line, msg: format!("invalid key `{key}`") });
        }
        if raw.is_empty() {
            return Err(CliError::Parse { line, msg: format!("key `{key}` has no value") });
        }
        if let Some(prev) = entries.get(key) {
            return Err(CliError::Parse {
                line,
                msg: format!("duplicate key `{key}` (first set on line {}, again on line {line})", prev.line),
            });
        }
        entries.insert(key.to_string(), Entry { line, raw: raw.to_string() });
    }

    let typed = |key: &str, kind: Kind| -> Result<Option<Value>> {
        match entries.get(key) {
            None => Ok(None),
            Some(e) => parse_value(&e.raw, kind)
                .map(Some)
                .map_err(|msg| CliError::Parse { line: e.line, msg: format!("key `{key}`: {msg}") }),
        }
    };

    let file_sub = match typed("subcommand", Kind::Text)? {
        Some(Value::Text(s)) => {
            let line = entries["subcommand"].line;
            Some(s.parse::<Subcommand>().map_err(|msg| CliError::Parse { line, msg })?)
        }
        _ => None,
    };
    let subcommand = match (file_sub, cli_subcommand) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Parse {
                line: entries["subcommand"].line,
                msg: format!("file declares subcommand `{a}` but `{b}` was requested"),
            })
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(CliError::Invalid("no subcommand given on the command line or in the file".into())),
    };

    let model = match schema::models(subcommand) {
        [] => None,
        options => {
            let v = typed("model", Kind::Choice(options))?
                .ok_or_else(|| CliError::Invalid(format!("`{subcommand}` needs `model` ({})", options.join(" | "))))?;
            match v {
                Value::Text(s) => Some(s),
                _ => unreachable!(),
            }
        }
    };
    let specs: &[KeySpec] = schema::keys(subcommand, model.as_deref()).unwrap_or(&[]);

    // strictness: every key must be known
    for (key, e) in &entries {
        let known = schema::COMMON.iter().chain(specs).any(|s| s.name == key);
        if !known {
            return Err(CliError::Parse { line: e.line, msg: format!("unknown key `{key}` for `{subcommand}`") });
        }
    }

    let mut params = BTreeMap::new();
    for spec in specs {
        match (typed(spec.name, spec.kind)?, spec.default) {
            (Some(v), _) => {
                params.insert(spec.name.to_string(), v);
            }
            (None, None) => {
                return Err(CliError::Invalid(format!("missing required key `{}` for `{subcommand}`", spec.name)))
            }
            (None, Some("")) => {}
            (None, Some(d)) => {
                let v = parse_value(d, spec.kind).expect("schema defaults parse");
                params.insert(spec.name.to_string(), v);
            }
        }
    }

    let text_of = |key: &str| -> Result<Option<String>> {
        Ok(match typed(key, Kind::Text)? {
            Some(Value::Text(s)) => Some(s),
            _ => None,
        })
    };
    let seed = match typed("seed", Kind::Count)? {
        Some(Value::Count(n)) => n,
        _ => 0,
    };
    let seed_exact = entries.get("seed").is_none_or(|e| e.raw.parse::<u64>().is_ok());
    if !seed_exact {
        return Err(CliError::Parse { line: entries["seed"].line, msg: "seed must be an integer literal".into() });
    }
    Ok(Scenario {
        name: text_of("name")?.unwrap_or_else(|| subcommand.as_str().to_string()),
        subcommand,
        seed,
        output_dir: text_of("output_dir")?.map(PathBuf::from),
        params,
        inputs: entries.into_iter().map(|(k, e)| (k, e.raw)).collect(),
    })
}
