use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io::{Read, Write};
use std::time::Instant;

/// Process exit status for a completed command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Positive = 0,
    Negative = 1,
    Inconclusive = 3,
}

pub const EXIT_INVALID: u8 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Output of one subcommand. `deterministic` depends only on argv and the
/// input files; `measured` holds wall-clock figures.
pub struct Report {
    pub deterministic: Value,
    pub measured: Map<String, Value>,
    pub status: Status,
}

impl Report {
    pub fn new(deterministic: impl Serialize, status: Status) -> Result<Self> {
        Ok(Report {
            deterministic: serde_json::to_value(deterministic)?,
            measured: Map::new(),
            status,
        })
    }

    pub fn measure(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.measured.insert(key.to_string(), value.into());
        self
    }

    pub fn render(&self, format: Format, started: Instant) -> String {
        let mut measured = self.measured.clone();
        measured.insert("elapsed_ms".into(), json!(started.elapsed().as_secs_f64() * 1e3));
        match format {
            Format::Json => {
                let v = json!({ "deterministic": self.deterministic, "measured": measured });
                format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
            }
            Format::Text => {
                let mut s = String::new();
                text_lines(&mut s, &self.deterministic);
                s.push_str("-- measured\n");
                text_lines(&mut s, &Value::Object(measured));
                s
            }
        }
    }
}

fn text_lines(s: &mut String, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let shown = match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                s.push_str(&format!("{k}: {shown}\n"));
            }
        }
        other => s.push_str(&format!("{other}\n")),
    }
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &str) -> Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).context("reading standard input")?;
        Ok(buf)
    } else {
        std::fs::read(path).with_context(|| format!("reading {path}"))
    }
}

pub fn read_text(path: &str) -> Result<String> {
    String::from_utf8(read_input(path)?).with_context(|| format!("{path} is not valid UTF-8"))
}

/// Writes a file, or standard output for `-`.
pub fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
        Ok(())
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {path}"))
    }
}

/// A vertex set given as comma or whitespace separated indices, or `@file`
/// holding the same.
pub fn parse_set(arg: &str, order: usize) -> Result<Vec<usize>> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_text(path)?,
        None => arg.to_string(),
    };
    let mut out = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let v: usize = tok.parse().with_context(|| format!("bad vertex index {tok:?}"))?;
        if v >= order {
            bail!("vertex {v} out of range for order {order}");
        }
        out.push(v);
    }
    Ok(out)
}

/// A pair written `x,y`.
pub fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad vertex index {t:?}"));
    Ok((parse(a)?, parse(b)?))
}
