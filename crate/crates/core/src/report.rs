//! Structured text reports: a versioned header followed by insertion-ordered
//! `key = value` lines.  Rendering is deterministic, so a job rerun with the
//! same inputs and seed produces byte-identical output.

use crate::modular::ExponentSet;
use crate::Rat;
use std::fmt::Display;
use std::fmt::Write as _;

/// Rationals always render reduced as `num/den`, whole values included.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `None` renders as the infinite valuation.
pub fn format_opt_rat(r: &Option<Rat>) -> String {
    match r {
        Some(r) => format_rat(r),
        None => "infinity".into(),
    }
}

pub fn format_vector(v: &[u64]) -> String {
    let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", inner.join(","))
}

pub fn format_set(set: &ExponentSet) -> String {
    let inner: Vec<String> = set.vectors().iter().map(|v| format_vector(v)).collect();
    format!("[{}]", inner.join(","))
}

#[derive(Debug, Clone)]
pub struct Report {
    job: String,
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(job: impl Into<String>) -> Self {
        Report {
            job: job.into(),
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn rat(&mut self, key: impl Into<String>, r: &Rat) -> &mut Self {
        self.line(key, format_rat(r))
    }

    pub fn opt_rat(&mut self, key: impl Into<String>, r: &Option<Rat>) -> &mut Self {
        self.line(key, format_opt_rat(r))
    }

    pub fn vector(&mut self, key: impl Into<String>, v: &[u64]) -> &mut Self {
        self.line(key, format_vector(v))
    }

    pub fn set(&mut self, key: impl Into<String>, set: &ExponentSet) -> &mut Self {
        self.line(key, format_set(set))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# pdensity {}", crate::VERSION).unwrap();
        writeln!(out, "job = {}", self.job).unwrap();
        for (k, v) in &self.lines {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }
}
