use std::fmt::Write as _;
use std::time::Duration;

use sha2::{Digest, Sha256};

use crate::algebra::TruncSeries;

use super::format::format_scalar;

/// Header, result lines, and a trailing `[timing]` section that is excluded
/// from [`Report::result_section`].
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    lines: Vec<String>,
    pub elapsed: Duration,
}

pub fn digest(input: &str, flags: &str) -> String {
    let mut h = Sha256::new();
    h.update(input.as_bytes());
    h.update([0u8]);
    h.update(flags.as_bytes());
    let mut s = String::from("sha256:");
    for b in h.finalize() {
        write!(s, "{:02x}", b).unwrap();
    }
    s
}

impl Report {
    pub fn new(command: &str, input_digest: String) -> Self {
        Report {
            command: command.to_string(),
            input_digest,
            lines: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn section(&mut self, name: &str) {
        self.lines.push(format!("[{}]", name));
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{} = {}", key, value));
    }

    pub fn line(&mut self, text: String) {
        self.lines.push(text);
    }

    /// `name[d]: (e1,...,en) -> c` for every stored term.
    pub fn series(&mut self, name: &str, s: &TruncSeries) {
        for (d, part) in s.parts().iter().enumerate() {
            for (e, c) in part.terms() {
                self.lines.push(format!("{}[{}]: {} -> {}", name, d, e, format_scalar(c)));
            }
        }
    }

    pub fn result_section(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command = {}", self.command).unwrap();
        writeln!(out, "input_digest = {}", self.input_digest).unwrap();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = self.result_section();
        out.push_str("[timing]\n");
        writeln!(out, "elapsed_ms = {}", self.elapsed.as_millis()).unwrap();
        out
    }
}

/// The part of a rendered report before `[timing]`.
pub fn strip_timing(rendered: &str) -> &str {
    match rendered.find("[timing]\n") {
        Some(i) => &rendered[..i],
        None => rendered,
    }
}
