use std::fmt::Write;

use mwsplit::curve::Section;
use mwsplit::qfield::{Field, Rat, RatFunc};
use serde_json::{json, Value};

use crate::{Format, EXIT_OK};

/// Output of one command: a text rendering, a structured rendering and the
/// exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Report {
    pub fn new(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            code: EXIT_OK,
        }
    }

    pub fn with_code(mut self, code: u8) -> Self {
        self.code = self.code.max(code);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Exact rational as "num/den".
pub fn rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn point<K: Field>(p: &Section<K>) -> Value {
    match p {
        Section::Zero => json!("O"),
        Section::Affine { x, y } => json!({ "x": x.to_string(), "y": y.to_string() }),
    }
}

/// Writes `label: value` lines, indented by `indent` spaces.
pub(crate) fn line(out: &mut String, indent: usize, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{:indent$}{label}: {value}", "");
}

pub(crate) fn point_lines<K: Field>(out: &mut String, indent: usize, p: &Section<K>) {
    match p {
        Section::Zero => line(out, indent, "point", "O"),
        Section::Affine { x, y } => {
            line(out, indent, "x", x);
            line(out, indent, "y", y);
        }
    }
}

pub(crate) fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub(crate) fn ratfunc<K: Field>(r: &RatFunc<K>) -> Value {
    json!(r.to_string())
}
